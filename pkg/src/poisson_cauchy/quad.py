"""Adaptive Gauss-Kronrod quadrature on finite intervals, the half line and ℝ.

The workhorse is :func:`integrate_batch`, which advances many independent
integrals at once.  Every integral owns its panels; each refinement round
evaluates the nodes of all freshly split panels in a single vectorized call
of the integrand, so nested integrals (operator values at many points, norms
over those values) cost a handful of numpy calls per round instead of one
Python call per node.

Improper integrals are truncated at a radius where an analytic power-law
tail bound drops below ``tail_tol`` and the remaining finite range is laid
out geometrically, which keeps algebraically decaying integrands cheap.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceFailure, DivergenceError

# 21-point Kronrod rule with its embedded 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600187381181,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[19:10:-2] = _WG

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    tail_tol: float = 1e-12

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "tail_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if int(self.max_subdivisions) < 16:
            raise ValueError("max_subdivisions must be at least 16")

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass(frozen=True)
class Integrand:
    """A vectorized integrand plus the metadata the drivers need.

    ``eval`` maps an array of abscissae to an array of the same shape.
    ``decay_exponent_hint`` is ``d`` in ``|g(t)| <= C |t|^-d`` for large
    ``|t|``; ``math.inf`` means faster than any power.  ``decay_scale`` is
    ``C`` when known; otherwise it is estimated by sampling.  ``radius``
    overrides the truncation radius altogether.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    known_singularities: Sequence[float] = ()
    decay_exponent_hint: float = math.inf
    decay_scale: float | None = None
    radius: float | None = None
    breakpoints: Sequence[float] = field(default=())


def _as_integrand(g):
    if isinstance(g, Integrand):
        return g
    return Integrand(eval=g)


def _panel_rule(fun, a, b, owner):
    """Apply the 21-point rule to every panel; returns (kronrod, error, resabs)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    t = center[:, None] + half[:, None] * NODES[None, :]
    own = np.broadcast_to(owner[:, None], t.shape)
    values = np.asarray(fun(t.ravel(), own.ravel()), dtype=float).reshape(t.shape)
    if not np.all(np.isfinite(values)):
        bad = t[~np.isfinite(values)][:3]
        raise FloatingPointError(f"integrand is not finite at {bad}")
    kron = values @ KRONROD_WEIGHTS
    gauss = values @ GAUSS_WEIGHTS
    mean = kron / 2.0
    resabs = np.abs(values) @ KRONROD_WEIGHTS
    resasc = np.abs(values - mean[:, None]) @ KRONROD_WEIGHTS
    diff = np.abs(kron - gauss)
    err = diff.copy()
    nz = resasc > 0
    err[nz] = resasc[nz] * np.minimum(1.0, (200.0 * diff[nz] / resasc[nz]) ** 1.5)
    floor = 50.0 * _EPS * resabs
    err = np.maximum(err, floor)
    return kron * half, err * half, resabs * half


def integrate_batch(fun, edges_list, spec=QuadratureSpec(), *, raise_on_failure=True):
    """Integrate ``len(edges_list)`` independent integrals.

    ``fun(t, owner)`` receives flat arrays of abscissae and the index of the
    integral each abscissa belongs to.  ``edges_list[k]`` is the increasing
    panel layout of integral ``k``.  Returns ``(values, errors)`` arrays.

    Panels of an integral that misses its target ``max(abs_tol, rel_tol·|I|)``
    are bisected when their error exceeds half the target's per-panel share.
    """
    counts = []
    a_parts, b_parts, o_parts = [], [], []
    for k, edges in enumerate(edges_list):
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) < 0):
            raise ValueError("each edge layout needs >= 2 non-decreasing points")
        edges = edges[np.concatenate([[True], np.diff(edges) > 0])]
        if edges.size < 2:
            edges = np.array([edges[0], edges[0]])
        a_parts.append(edges[:-1])
        b_parts.append(edges[1:])
        o_parts.append(np.full(edges.size - 1, k))
        counts.append(edges.size - 1)
    n = len(edges_list)
    a = np.concatenate(a_parts)
    b = np.concatenate(b_parts)
    owner = np.concatenate(o_parts)
    val, err, rab = _panel_rule(fun, a, b, owner)

    done = np.zeros(n, dtype=bool)
    limit = int(spec.max_subdivisions)
    while True:
        total = np.bincount(owner, weights=val, minlength=n)
        total_err = np.bincount(owner, weights=err, minlength=n)
        total_abs = np.bincount(owner, weights=rab, minlength=n)
        npan = np.bincount(owner, minlength=n)
        target = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(total))
        target = np.maximum(target, 100.0 * _EPS * total_abs)
        done = total_err <= target
        if np.all(done):
            return total, total_err
        share = 0.5 * target / npan
        split = (~done[owner]) & (err > share[owner]) & ((b - a) > 1e-14 * np.maximum(1.0, np.abs(a)))
        if not np.any(split):
            # nothing left that can be bisected meaningfully
            break
        over = (npan + np.bincount(owner[split], minlength=n)) > limit
        if np.any(over & ~done):
            break
        mid = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], mid])
        nb = np.concatenate([mid, b[split]])
        no = np.concatenate([owner[split], owner[split]])
        nval, nerr, nrab = _panel_rule(fun, na, nb, no)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], no])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
        rab = np.concatenate([rab[keep], nrab])
        # fixed summation order regardless of split history
        order = np.lexsort((a, owner))
        a, b, owner, val, err, rab = a[order], b[order], owner[order], val[order], err[order], rab[order]

    if raise_on_failure:
        worst = int(np.argmax(total_err / target))
        raise ConvergenceFailure(
            f"subdivision budget exhausted (integral {worst}: estimate {total[worst]:.6g}, "
            f"error {total_err[worst]:.3g}, target {target[worst]:.3g})",
            total, total_err,
        )
    return total, total_err


def geometric_edges(radius, *, xi=None, inner=0.25, extra=()):
    """Symmetric panel layout on ``[-radius, radius]``.

    Boundaries sit at 0, at powers of two from ``inner`` outwards, at
    ``{1, 2, 4, 8}·xi`` when ``xi`` is given, and at any ``extra`` points.
    """
    radius = float(radius)
    pts = [0.0, radius]
    if radius > inner:
        kmax = int(math.ceil(math.log2(radius / inner)))
        pts.extend(inner * 2.0 ** k for k in range(kmax))
    else:
        pts.append(0.5 * radius)
    if xi is not None:
        pts.extend(m * xi for m in (1.0, 2.0, 4.0, 8.0))
    pos = np.array([p for p in pts if 0.0 <= p <= radius])
    edges = np.concatenate([-pos, pos, [e for e in extra if -radius < e < radius]])
    return np.unique(edges)


def halfline_edges(radius, *, xi=None, inner=0.25, extra=()):
    edges = geometric_edges(radius, xi=xi, inner=inner, extra=extra)
    return edges[edges >= 0.0]


def tail_radius(decay, scale, tail_tol, *, floor=1.0):
    """Smallest ``R >= floor`` with ``∫_R^∞ scale·t^-decay dt <= tail_tol``."""
    if not decay > 1.0:
        raise DivergenceError(f"decay exponent {decay} <= 1: integral does not converge")
    if scale <= 0.0:
        return floor
    log_r = (math.log(scale) - math.log(tail_tol) - math.log(decay - 1.0)) / (decay - 1.0)
    return max(floor, math.exp(min(log_r, 700.0)))


def _estimate_scale(g, decay, lo, sign=1.0):
    t = sign * np.geomspace(max(lo, 1.0), max(lo, 1.0) * 1e4, 41)
    vals = np.abs(np.asarray(g.eval(t), dtype=float))
    return 2.0 * float(np.max(vals * np.abs(t) ** decay))


def _superpolynomial_radius(g, tail_tol, lo, sign=1.0):
    r = max(1.0, lo)
    while r < 1e6:
        t = sign * np.linspace(r, 2.0 * r, 33)
        if float(np.max(np.abs(g.eval(t)))) * r < 1e-3 * tail_tol:
            return r
        r *= 1.5
    raise DivergenceError("integrand does not decay; supply decay_exponent_hint")


def _radius(g, spec, sign, xi):
    if g.radius is not None:
        return float(g.radius)
    lo = 8.0 * xi if xi else 1.0
    lo = max([lo] + [abs(p) for p in g.breakpoints] + [abs(p) for p in g.known_singularities])
    d = g.decay_exponent_hint
    if math.isinf(d):
        return _superpolynomial_radius(g, spec.tail_tol, lo, sign)
    if not d > 1.0:
        raise DivergenceError(f"decay_exponent_hint {d} <= 1: integral does not converge")
    scale = g.decay_scale if g.decay_scale is not None else _estimate_scale(g, d, lo, sign)
    return tail_radius(d, scale, 0.5 * spec.tail_tol, floor=lo)


def _single(g, edges, spec):
    fun = lambda t, owner: g.eval(t)
    try:
        val, _ = integrate_batch(fun, [edges], spec)
    except ConvergenceFailure as exc:
        raise ConvergenceFailure(str(exc), float(exc.estimate[0]), float(exc.error[0])) from None
    return float(val[0])


def integrate_finite(g, a, b, spec=QuadratureSpec(), *, xi=None):
    """``∫_a^b g`` to ``max(abs_tol, rel_tol·|I|)``."""
    g = _as_integrand(g)
    if not a <= b:
        raise ValueError(f"need a <= b, got [{a}, {b}]")
    if a == b:
        return 0.0
    pts = [a, b] + [p for p in list(g.known_singularities) + list(g.breakpoints) if a < p < b]
    if xi is not None:
        pts += [s * m * xi for s in (-1, 1) for m in (0, 1, 2, 4, 8) if a < s * m * xi < b]
    return _single(g, np.unique(pts), spec)


def integrate_halfline(g, spec=QuadratureSpec(), *, xi=None):
    """``∫_0^∞ g`` via analytic tail truncation and finite adaptive quadrature."""
    g = _as_integrand(g)
    radius = _radius(g, spec, 1.0, xi)
    extra = list(g.known_singularities) + list(g.breakpoints)
    return _single(g, halfline_edges(radius, xi=xi, extra=extra), spec)


def integrate_realline(g, spec=QuadratureSpec(), *, xi=None):
    """``∫_ℝ g``; each tail is truncated separately."""
    g = _as_integrand(g)
    r_pos = _radius(g, spec, 1.0, xi)
    r_neg = _radius(g, spec, -1.0, xi)
    extra = list(g.known_singularities) + list(g.breakpoints)
    pos = halfline_edges(r_pos, xi=xi, extra=extra)
    neg = -halfline_edges(r_neg, xi=xi, extra=[-e for e in extra])[::-1]
    return _single(g, np.unique(np.concatenate([neg, pos])), spec)


def lp_norm(g, p, spec=QuadratureSpec(), *, xi=None):
    """``(∫_ℝ |g|^p)^(1/p)`` for ``p >= 1``."""
    g = _as_integrand(g)
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    d = g.decay_exponent_hint
    if not math.isinf(d) and not d * p > 1.0:
        raise DivergenceError(f"|g|^p decays like |t|^-{d * p}: not integrable")
    powered = Integrand(
        eval=lambda t: np.abs(g.eval(t)) ** p,
        known_singularities=g.known_singularities,
        decay_exponent_hint=d * p,
        decay_scale=None if g.decay_scale is None else g.decay_scale ** p,
        radius=g.radius,
        breakpoints=g.breakpoints,
    )
    value = integrate_realline(powered, spec, xi=xi)
    return max(value, 0.0) ** (1.0 / p)
