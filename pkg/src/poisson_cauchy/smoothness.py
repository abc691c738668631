"""Test functions, finite differences and the Lp modulus of smoothness on ℝ."""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coefficients import alphas, difference_coefficients
from .errors import CapabilityError
from .quad import QuadratureSpec, geometric_edges, integrate_batch


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A function on ℝ with closed-form derivatives and decay metadata.

    ``lp_membership`` holds pairs ``(k, p0)`` meaning ``f^{(k)} ∈ L_p`` for
    every ``p >= p0``.  ``support_radius(eps)`` bounds the region outside
    which any ``|f^{(k)}|^p`` integral (``k <= order``, ``p >= 1``) loses less
    than ``eps``.  ``sup_abs`` bounds ``|f|`` on ℝ.  ``polynomial_degree`` is
    set for polynomial entries, whose high-order differences vanish identically.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    order: int
    deriv_fn: Callable[[int, np.ndarray], np.ndarray]
    lp_membership: tuple
    decay_exponent: float
    support_radius: Callable[[float], float]
    sup_abs: float = 1.0
    notes: str = field(default="")
    polynomial_degree: int | None = None

    def deriv(self, k, x):
        if k > self.order or k < 0:
            raise CapabilityError(f"{self.name}: derivative {k} not available (order {self.order})")
        return self.deriv_fn(k, np.asarray(x, dtype=float))

    def __call__(self, x):
        return self.deriv(0, x)

    def has_lp(self, k, p):
        return any(kk == k and p >= p0 for kk, p0 in self.lp_membership)

    def differences_vanish(self, k, r):
        """True when ``Δ_t^r f^{(k)} ≡ 0`` (polynomial of degree < k + r)."""
        return self.polynomial_degree is not None and self.polynomial_degree < k + r


def _require(f, deriv_order):
    if deriv_order > f.order:
        raise CapabilityError(f"{f.name}: derivative {deriv_order} not available (order {f.order})")


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def forward_difference(f, deriv_order, r, t, x):
    """``Δ_t^r f^{(deriv_order)}(x)``; ``t`` and ``x`` broadcast."""
    _require(f, deriv_order)
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    out = sum(c * f.deriv(deriv_order, x + j * t) for j, c in enumerate(difference_coefficients(r)))
    return _scalar(out)


def central_second_difference(f, deriv_order, y, x):
    """``f^{(k)}(x + y) + f^{(k)}(x - y) - 2 f^{(k)}(x)``."""
    _require(f, deriv_order)
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    g = lambda s: f.deriv(deriv_order, s)
    return _scalar(g(x + y) + g(x - y) - 2.0 * g(x))


def tau(f, r, n, w, x):
    """``Σ_j α_j j^n f^{(n)}(x + j w) - δ_n f^{(n)}(x)`` with the operator coefficients."""
    _require(f, n)
    coeffs = alphas(r, n)
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    out = sum(a * j ** n * f.deriv(n, x + j * w) for j, a in enumerate(coeffs.alphas) if j > 0)
    return _scalar(out - coeffs.delta(n) * f.deriv(n, x))


def norm_spec(spec):
    """Integrals of ``|·|^p`` are positive, so only the relative tolerance is meaningful."""
    return spec.with_(abs_tol=1e-300)


def difference_norms(f, deriv_order, r, steps, p, spec=QuadratureSpec()):
    """``‖Δ_t^r f^{(k)}‖_p`` for every ``t`` in ``steps`` (one batched quadrature)."""
    _require(f, deriv_order)
    steps = np.atleast_1d(np.asarray(steps, dtype=float))
    coeffs = difference_coefficients(r)
    base = f.support_radius(spec.tail_tol / 2.0 ** r)

    def fun(x, owner):
        t = steps[owner]
        acc = np.zeros_like(x)
        for j, c in enumerate(coeffs):
            acc += c * f.deriv(deriv_order, x + j * t)
        return np.abs(acc) ** p

    edges = [geometric_edges(base + r * abs(t), extra=[-j * t for j in range(1, r + 1)]) for t in steps]
    values, _ = integrate_batch(fun, edges, norm_spec(spec))
    return np.maximum(values, 0.0) ** (1.0 / p)


def modulus_of_smoothness(f, deriv_order, r, h, p, spec=QuadratureSpec(), *,
                          rel_change=1e-3, initial_points=8, max_points=4096):
    """``ω_r(f^{(k)}, h)_p``, approximated from below by a refining grid on ``[0, h]``.

    Negative steps are not sampled: translation invariance of the Lp norm on
    ℝ gives ``‖Δ_{-t}^r g‖_p = ‖Δ_t^r g‖_p``.  The grid doubles until the
    maximum moves by less than ``rel_change`` (relative).
    """
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    if f.differences_vanish(deriv_order, r):
        return 0.0
    if not f.has_lp(deriv_order, p):
        raise CapabilityError(f"{f.name}: derivative {deriv_order} not declared in L_{p:g}")
    if h == 0:
        return 0.0
    count = int(initial_points)
    grid = h * np.arange(1, count + 1) / count
    best = float(np.max(difference_norms(f, deriv_order, r, grid, p, spec)))
    while count < max_points:
        fresh = h * (2 * np.arange(count) + 1) / (2 * count)
        count *= 2
        new_best = max(best, float(np.max(difference_norms(f, deriv_order, r, fresh, p, spec))))
        if new_best - best <= rel_change * new_best:
            return new_best
        best = new_best
    return best
