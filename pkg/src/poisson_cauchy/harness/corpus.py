"""Built-in test functions with exact derivatives and decay metadata.

Two families cover the corpus:

* rational ``P(x) / (1 + x²)^m``: derivatives stay in the family and are
  evaluated through ``u = 1/(1+x²)`` and ``x·u`` so nothing overflows far out;
* Gaussian-weighted ``(A(x) sin ωx + B(x) cos ωx) e^{-x²}``.

Both carry an explicit support radius derived from coefficient bounds.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial

from ..smoothness import TestFunction

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    f: TestFunction
    notes: str


def _rational_numerators(m, order):
    nums = [Polynomial([1.0])]
    one_plus_x2 = Polynomial([1.0, 0.0, 1.0])
    x = Polynomial([0.0, 1.0])
    for k in range(order):
        p = nums[-1]
        nums.append(p.deriv() * one_plus_x2 - 2.0 * (m + k) * x * p)
    return [np.asarray(p.coef, dtype=float) for p in nums]


def rational_bump(m, order=DEFAULT_ORDER, name=None):
    """``(1 + x²)^{-m}``."""
    nums = _rational_numerators(m, order)

    def deriv(k, x):
        with np.errstate(over="ignore"):
            u = 1.0 / (1.0 + x * x)
        xu = np.where(u > 0.0, x * u, 0.0)
        coef = nums[k]
        acc = np.zeros_like(x)
        for i, c in enumerate(coef):
            if c != 0.0:
                acc = acc + c * xu ** i * u ** (k - i)
        return acc * u ** m

    bounds = [float(np.sum(np.abs(c))) for c in nums]

    def support_radius(eps):
        # |f^{(k)}(x)| <= C_k |x|^{-(2m+k)} for |x| >= 1
        radius = 1.0
        for k, c in enumerate(bounds):
            d = 2 * m + k
            r_tail = (2.0 * c / ((d - 1) * eps)) ** (1.0 / (d - 1))
            r_unit = c ** (1.0 / d)
            radius = max(radius, r_tail, r_unit)
        return radius

    label = name or f"rational_m{m}"
    return TestFunction(
        name=label,
        order=order,
        deriv_fn=deriv,
        lp_membership=tuple((k, 1.0) for k in range(order + 1)),
        decay_exponent=2.0 * m,
        support_radius=support_radius,
        sup_abs=1.0,
        notes=f"(1+x^2)^-{m}; f^(k) ~ |x|^-({2 * m}+k), every derivative in L_p for p >= 1",
    )


def _gaussian_polys(omega, order):
    x = Polynomial([0.0, 1.0])
    a, b = [Polynomial([1.0])], [Polynomial([0.0])]
    for _ in range(order):
        pa, pb = a[-1], b[-1]
        a.append(pa.deriv() - 2.0 * x * pa - omega * pb)
        b.append(pb.deriv() - 2.0 * x * pb + omega * pa)
    return a, b


def modulated_gaussian(omega, order=DEFAULT_ORDER, name=None):
    """``sin(ωx) e^{-x²}``, or plain ``e^{-x²}`` when ``omega == 0``."""
    if omega == 0.0:
        a, b = _gaussian_polys(0.0, order)
        polys = [(pa, None) for pa in a]
    else:
        a, b = _gaussian_polys(omega, order)
        polys = list(zip(a, b))

    def deriv(k, x):
        pa, pb = polys[k]
        inside = np.abs(x) < 40.0
        xs = np.where(inside, x, 0.0)
        env = np.exp(-xs * xs)
        if pb is None:
            val = pa(xs) * env
        else:
            val = (pa(xs) * np.sin(omega * xs) + pb(xs) * np.cos(omega * xs)) * env
        return np.where(inside, val, 0.0)

    consts = []
    for pa, pb in polys:
        c = float(np.sum(np.abs(pa.coef)))
        if pb is not None:
            c += float(np.sum(np.abs(pb.coef)))
        consts.append((c, pa.degree() if pb is None else max(pa.degree(), pb.degree())))

    def support_radius(eps):
        # |f^{(k)}(x)| <= C_k |x|^deg e^{-x²} for |x| >= 1; tail beyond R bounded by 2 C_k R^deg e^{-R²}
        radius = 1.0
        for c, deg in consts:
            r = max(1.0, math.sqrt(deg + 1.0))
            while 2.0 * c * r ** deg * math.exp(-r * r) > eps:
                r += 0.0625
            radius = max(radius, r)
        return radius

    label = name or ("gaussian" if omega == 0.0 else f"modulated_gaussian_w{omega:g}")
    return TestFunction(
        name=label,
        order=order,
        deriv_fn=deriv,
        lp_membership=tuple((k, 1.0) for k in range(order + 1)),
        decay_exponent=math.inf,
        support_radius=support_radius,
        sup_abs=1.0,
        notes="Gaussian envelope; every derivative in every L_p",
    )


def constant(c, order=DEFAULT_ORDER):
    """The constant ``c``.  Only its derivatives (all zero) are in L_p."""

    def deriv(k, x):
        return np.full_like(x, float(c) if k == 0 else 0.0, dtype=float)

    return TestFunction(
        name=f"constant_{c:g}",
        order=order,
        deriv_fn=deriv,
        lp_membership=tuple((k, 1.0) for k in range(1, order + 1)),
        decay_exponent=math.inf,
        support_radius=lambda eps: 10.0,
        sup_abs=abs(float(c)),
        notes="constant; f itself is not in L_p, derivatives vanish",
        polynomial_degree=0,
    )


def builtin_corpus():
    entries = [
        modulated_gaussian(0.0, name="gaussian"),
        rational_bump(1, name="cauchy_bump"),
        modulated_gaussian(3.0, name="modulated_gaussian"),
        rational_bump(3, name="rational"),
    ]
    return [CorpusEntry(f.name, f, f.notes) for f in entries]


def corpus_by_name(name):
    for entry in builtin_corpus():
        if entry.name == name:
            return entry
    if name.startswith("constant"):
        value = float(name.partition("_")[2] or 1.0)
        f = constant(value)
        return CorpusEntry(f.name, f, f.notes)
    known = ", ".join(e.name for e in builtin_corpus())
    raise KeyError(f"unknown corpus function {name!r}; known: {known}, constant_<c>")
