"""The smooth operators ``M_{r,ξ}`` and ``M_ξ``, their corrected errors and remainders.

All evaluators accept a scalar or an array of points ``x`` and integrate
every point as its own problem in one batched quadrature.  Panel layouts put
boundaries at the kernel scale (``{1,2,4,8}·ξ``) and geometrically around
each translate ``t = -x/j`` where ``f(x + jt)`` has its features.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernel as K
from .coefficients import CoefficientSet, alphas, binomial_identity_check
from .errors import DomainError
from .kernel import KernelParams
from .quad import QuadratureSpec, geometric_edges, halfline_edges, integrate_batch
from .smoothness import _require, central_second_difference
from .specfun import gamma_ratio

__all__ = [
    "CoefficientSet", "OperatorParams", "alphas", "binomial_identity_check",
    "apply_M", "apply_M_symmetric", "central_difference_error", "correction_sum",
    "error_Delta", "error_K", "remainder_K", "remainder_Rn", "remainder_Rstar", "symmetric_correction_sum", "taylor_identity_residual",
]


@dataclass(frozen=True)
class OperatorParams:
    r: int
    n: int
    kp: KernelParams
    p: float = 1.0

    def __post_init__(self):
        if int(self.r) != self.r or self.r < 1:
            raise DomainError(f"r must be a positive integer, got {self.r!r}")
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"n must be a non-negative integer, got {self.n!r}")
        if not self.p >= 1.0:
            raise DomainError(f"p must be >= 1, got {self.p!r}")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "n", int(self.n))

    @property
    def alpha(self):
        return self.kp.alpha

    @property
    def beta(self):
        return self.kp.beta

    @property
    def xi(self):
        return self.kp.xi

    def with_xi(self, xi):
        return OperatorParams(self.r, self.n, self.kp.with_xi(xi), self.p)

    def constraints(self):
        """Strict hypotheses of every statement, evaluated for these parameters."""
        a, b, n, r, p = self.alpha, self.beta, self.n, self.r, self.p
        return {
            "moment": b > (2 * (n // 2) + 1) / (2 * a),
            "thm1": p > 1 and n >= 1 and b > (1.0 / p + n + r) / a,
            "thm2": n >= 1 and b > (n + r + 1) / (2 * a),
            "prop1": p > 1 and b > (r + 1.0 / p) / a,
            "prop2": b > (r + 1) / (2 * a),
            "thm3": p > 1 and n >= 2 and n % 2 == 0 and b > (1.0 / p + n + 2) / a,
            "thm4": n >= 2 and n % 2 == 0 and b > (n + 3) / (2 * a),
            "prop3": p > 1 and b > (2 + 1.0 / p) / a,
            "prop4": b > 3 / (2 * a),
        }


def _points(x):
    x = np.asarray(x, dtype=float)
    return x, np.atleast_1d(x).ravel()


def _shape(out, x):
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def _translate_edges(x, steps, radius, *, xi=None, halfline=False):
    """Panel layout for an integral in ``t`` whose integrand involves ``f(x + j·t)``."""
    extra = []
    span = int(math.ceil(math.log2(abs(x) + 2.0))) + 2
    for j in steps:
        for c in (-x / j, x / j) if halfline else (-x / j,):
            extra.append(c)
            for k in range(-3, span):
                d = 2.0 ** k / j
                extra.extend((c - d, c + d))
    make = halfline_edges if halfline else geometric_edges
    return make(radius, xi=xi, extra=extra)


def _operator_radius(f, weights, kp, spec, power=0):
    scale = max(f.sup_abs, 1e-300) * max(sum(abs(w) for w in weights), 1.0)
    return K.tail_radius(kp, spec.tail_tol, scale=scale, power=power)


def apply_M(f, op, x, spec=QuadratureSpec()):
    """``M_{r,ξ}(f; x) = W ∫_ℝ Σ_j α_j f(x + j t) kernel(t) dt``."""
    x, xs = _points(x)
    coeffs = alphas(op.r, op.n).alphas
    kp = op.kp
    radius = _operator_radius(f, coeffs, kp, spec)
    steps = [j for j, a in enumerate(coeffs) if j > 0 and a != 0.0]

    def fun(t, owner):
        xv = xs[owner]
        acc = coeffs[0] * f.deriv(0, xv)
        for j in steps:
            acc = acc + coeffs[j] * f.deriv(0, xv + j * t)
        return acc * K.weight(t, kp)

    edges = [_translate_edges(xv, steps, radius, xi=kp.xi) for xv in xs]
    values, _ = integrate_batch(fun, edges, spec)
    return _shape(values, x)


def apply_M_symmetric(f, kp, x, spec=QuadratureSpec()):
    """``M_ξ(f; x) = W ∫_0^∞ (f(x + y) + f(x - y)) kernel(y) dy``."""
    x, xs = _points(x)
    radius = _operator_radius(f, (1.0, 1.0), kp, spec)

    def fun(y, owner):
        xv = xs[owner]
        return (f.deriv(0, xv + y) + f.deriv(0, xv - y)) * K.weight(y, kp)

    edges = [_translate_edges(xv, [1], radius, xi=kp.xi, halfline=True) for xv in xs]
    values, _ = integrate_batch(fun, edges, spec)
    return _shape(values, x)


def _moment_weight(m, kp):
    """``W·∫ t^{2m} kernel / 2`` expressed as the gamma ratio times ``ξ^{2m}``."""
    a, b = kp.alpha, kp.beta
    s = (2 * m + 1) / (2 * a)
    return gamma_ratio([s, b - s], [1.0 / (2 * a), b - 1.0 / (2 * a)]) * kp.xi ** (2 * m)


def correction_sum(f, op, x):
    """``Σ_{m=1}^{⌊n/2⌋} f^{(2m)}(x) δ_{2m} / (2m)! · Γ-ratio · ξ^{2m}``."""
    coeffs = alphas(op.r, op.n)
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for m in range(1, op.n // 2 + 1):
        out = out + (f.deriv(2 * m, x) * coeffs.delta(2 * m) / math.factorial(2 * m)
                     * _moment_weight(m, op.kp))
    return out


def _check_delta_params(f, op):
    if op.n < 1:
        raise DomainError("the corrected error needs n >= 1")
    _require(f, op.n)
    if not op.constraints()["moment"]:
        raise DomainError(
            f"moment constraint beta > {(2 * (op.n // 2) + 1) / (2 * op.alpha):g} fails (beta = {op.beta:g})"
        )


def error_Delta(f, op, x, spec=QuadratureSpec()):
    """``M_{r,ξ}(f;x) - f(x)`` minus the even-moment Taylor corrections."""
    _check_delta_params(f, op)
    m_val = np.asarray(apply_M(f, op, x, spec))
    out = m_val - f.deriv(0, np.asarray(x, dtype=float)) - correction_sum(f, op, x)
    return float(out) if np.ndim(out) == 0 else out


def _inner_spec(spec):
    return spec.with_(abs_tol=spec.abs_tol / 10.0, rel_tol=spec.rel_tol / 10.0)


def _remainder_batch(f, op, ts, xs, spec):
    """``R_n(0, t, x)`` for paired flat arrays ``ts``, ``xs``."""
    n, r = op.n, op.r
    coeffs = alphas(r, n)
    delta_n = coeffs.delta(n)
    weights = [a * j ** n for j, a in enumerate(coeffs.alphas)]
    fact = math.factorial(n - 1)
    fx = f.deriv(n, xs)

    def fun(w, owner):
        t = ts[owner]
        xv = xs[owner]
        acc = -delta_n * fx[owner]
        for j in range(1, r + 1):
            acc = acc + weights[j] * f.deriv(n, xv + j * w)
        return (t - w) ** (n - 1) / fact * acc

    edges = []
    for t, xv in zip(ts, xs):
        lo, hi = min(0.0, t), max(0.0, t)
        pts = [lo, hi]
        if hi > lo:
            span = hi - lo
            for j in range(1, r + 1):
                c = -xv / j
                for k in range(-3, int(math.ceil(math.log2(span + 1.0))) + 1):
                    for q in (c - 2.0 ** k / j, c, c + 2.0 ** k / j):
                        if lo < q < hi:
                            pts.append(q)
        edges.append(np.unique(pts) if pts[1] > pts[0] else np.array(pts[:2]))
    values, _ = integrate_batch(fun, edges, spec)
    return np.where(ts < 0, -values, values)


def remainder_Rn(f, op, t, x, spec=QuadratureSpec()):
    """``R_n(0,t,x) = ∫_0^t (t-w)^{n-1}/(n-1)! τ(w,x) dw``."""
    if op.n < 1:
        raise DomainError("R_n needs n >= 1")
    _require(f, op.n)
    t, x = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(x, dtype=float))
    out = _remainder_batch(f, op, t.ravel().copy(), x.ravel().copy(), spec)
    return float(out[0]) if t.ndim == 0 else out.reshape(t.shape)


def remainder_Rstar(f, op, x, spec=QuadratureSpec()):
    """``W ∫_ℝ R_n(0,t,x) kernel(t) dt``, a nested quadrature."""
    _check_delta_params(f, op)
    kp = op.kp
    if not kp.decay > op.n + 1:
        raise DomainError("the remainder integral needs 2 alpha beta > n + 1")
    x, xs = _points(x)
    coeffs = alphas(op.r, op.n).alphas
    scale = max(f.sup_abs, 1.0) * sum(abs(a) * j ** op.n for j, a in enumerate(coeffs)) / math.factorial(op.n)
    radius = K.tail_radius(kp, spec.tail_tol, scale=scale, power=op.n)
    inner = _inner_spec(spec)

    def fun(t, owner):
        return _remainder_batch(f, op, t, xs[owner], inner) * K.weight(t, kp)

    edges = [_translate_edges(xv, range(1, op.r + 1), radius, xi=kp.xi) for xv in xs]
    values, _ = integrate_batch(fun, edges, spec)
    return _shape(values, x)


def central_difference_error(f, kp, x, spec=QuadratureSpec()):
    """``W ∫_0^∞ Δ̃_y² f(x) kernel(y) dy``, which equals ``M_ξ(f;x) - f(x)``."""
    x, xs = _points(x)
    radius = _operator_radius(f, (1.0, 1.0, 2.0), kp, spec)

    def fun(y, owner):
        return central_second_difference(f, 0, y, xs[owner]) * K.weight(y, kp)

    edges = [_translate_edges(xv, [1], radius, xi=kp.xi, halfline=True) for xv in xs]
    values, _ = integrate_batch(fun, edges, spec)
    return _shape(values, x)


def _check_K_params(f, kp, n):
    if int(n) != n or n < 2 or n % 2:
        raise DomainError(f"n must be even and >= 2, got {n!r}")
    _require(f, n)
    if not kp.beta > (n + 1) / (2 * kp.alpha):
        raise DomainError(f"need beta > (n+1)/(2 alpha) = {(n + 1) / (2 * kp.alpha):g}")


def symmetric_correction_sum(f, kp, n, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for rho in range(1, n // 2 + 1):
        out = out + f.deriv(2 * rho, x) / math.factorial(2 * rho) * _moment_weight(rho, kp)
    return out


def error_K(f, kp, n, x, spec=QuadratureSpec()):
    """``M_ξ(f;x) - f(x)`` minus ``Σ_{ρ=1}^{n/2} f^{(2ρ)}(x)/(2ρ)! · Γ-ratio · ξ^{2ρ}``."""
    _check_K_params(f, kp, n)
    m_val = np.asarray(apply_M_symmetric(f, kp, x, spec))
    out = m_val - f.deriv(0, np.asarray(x, dtype=float)) - symmetric_correction_sum(f, kp, n, x)
    return float(out) if np.ndim(out) == 0 else out


def _central_remainder_batch(f, n, ys, xs, spec):
    """``∫_0^y Δ̃_t² f^{(n)}(x) (y-t)^{n-1}/(n-1)! dt`` for paired ``ys >= 0``, ``xs``."""
    fact = math.factorial(n - 1)

    def fun(t, owner):
        y = ys[owner]
        return central_second_difference(f, n, t, xs[owner]) * (y - t) ** (n - 1) / fact

    edges = []
    for y, xv in zip(ys, xs):
        pts = [0.0, y]
        for k in range(-3, int(math.ceil(math.log2(y + 1.0))) + 1):
            for q in (abs(xv) - 2.0 ** k, abs(xv), abs(xv) + 2.0 ** k):
                if 0.0 < q < y:
                    pts.append(q)
        edges.append(np.unique(pts) if pts[1] > pts[0] else np.array(pts[:2]))
    values, _ = integrate_batch(fun, edges, spec)
    return values


def remainder_K(f, kp, n, x, spec=QuadratureSpec()):
    """``W ∫_0^∞ [∫_0^y Δ̃_t² f^{(n)}(x) (y-t)^{n-1}/(n-1)! dt] kernel(y) dy``."""
    _check_K_params(f, kp, n)
    if not kp.decay > n + 1:
        raise DomainError("the remainder integral needs 2 alpha beta > n + 1")
    x, xs = _points(x)
    scale = 4.0 * max(f.sup_abs, 1.0) / math.factorial(n)
    radius = K.tail_radius(kp, spec.tail_tol, scale=scale, power=n)
    inner = _inner_spec(spec)

    def fun(y, owner):
        return _central_remainder_batch(f, n, y, xs[owner], inner) * K.weight(y, kp)

    edges = [_translate_edges(xv, [1], radius, xi=kp.xi, halfline=True) for xv in xs]
    values, _ = integrate_batch(fun, edges, spec)
    return _shape(values, x)


def taylor_identity_residual(f, op, t, x, spec=QuadratureSpec()):
    """``Σ_j α_j [f(x+jt) - f(x)] - Σ_k f^{(k)}(x) δ_k t^k / k! - R_n(0,t,x)``."""
    coeffs = alphas(op.r, op.n)
    lhs = sum(a * (f.deriv(0, x + j * t) - f.deriv(0, x)) for j, a in enumerate(coeffs.alphas))
    poly = sum(f.deriv(k, x) * coeffs.delta(k) * t ** k / math.factorial(k) for k in range(1, op.n + 1))
    return float(lhs - poly - remainder_Rn(f, op, t, x, spec))
