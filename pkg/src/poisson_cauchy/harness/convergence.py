"""Convergence sweeps over ξ: error norms, moduli, bounds and fitted rates."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .. import kernel as K
from ..bounds import STATEMENTS, bound, modulus_order
from ..errors import CapabilityError, ConvergenceFailure, DomainError
from ..operators import OperatorParams, apply_M, apply_M_symmetric, error_Delta, error_K
from ..quad import QuadratureSpec, geometric_edges, integrate_batch
from ..smoothness import modulus_of_smoothness

PROPS = ("prop1", "prop2", "prop3", "prop4")
SYMMETRIC = ("thm3", "thm4", "prop3", "prop4")


@dataclass(frozen=True)
class HarnessConfig:
    """Tolerances and knobs for sweeps; every field has a working default."""

    inner: QuadratureSpec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-10, max_subdivisions=4000)
    outer: QuadratureSpec = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-7, max_subdivisions=4000)
    modulus: QuadratureSpec = QuadratureSpec(rel_tol=1e-8)
    modulus_rel_change: float = 1e-3
    omega_safety: float = 1.01
    ratio_slack: float = 1.01
    monotone_slack: float = 0.02
    x_tail_eps: float = 1e-13
    accept_rel: float = 1e-5
    workers: int = 1


@dataclass
class ConvergenceReport:
    statement_id: str
    function: str
    params: dict
    xi_values: list
    error_lp: list
    omega: list
    bound: list
    ratio: list
    fitted_slope: float | None
    constants: dict
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    raw_error: list | None = None

    def ratios_ok(self, slack=1.01):
        """Every defined ratio is within ``slack``; vacuous (zero-bound) rows are skipped."""
        return all(r is None or r <= slack for r in self.ratio)

    def non_increasing(self, tol=0.02):
        errs = [e for e in self.error_lp if e is not None]
        return all(b <= (1.0 + tol) * a for a, b in zip(errs, errs[1:]))

    def to_dict(self):
        return {
            "statement": self.statement_id,
            "function": self.function,
            "params": dict(self.params),
            "xi": list(self.xi_values),
            "error_lp": list(self.error_lp),
            "omega": list(self.omega),
            "bound": list(self.bound),
            "ratio": list(self.ratio),
            "raw_error": None if self.raw_error is None else list(self.raw_error),
            "fitted_slope": self.fitted_slope,
            "constants": dict(self.constants),
            "failures": [list(f) for f in self.failures],
            "notes": list(self.notes),
        }


def xi_grid(start=0.4, stop=0.05, ratio=0.5):
    """Geometric, strictly decreasing grid from ``start`` down to ``stop`` (inclusive up to rounding)."""
    if not (start > 0 and stop > 0 and 0 < ratio < 1 and stop <= start):
        raise DomainError(f"invalid xi grid start={start}, stop={stop}, ratio={ratio}")
    count = int(math.floor(math.log(stop / start) / math.log(ratio) + 1e-9)) + 1
    return [start * ratio ** k for k in range(count)]


def fit_slope(xi, err):
    """Least-squares slope of ``ln err`` against ``ln ξ``."""
    xi = np.asarray(xi, dtype=float)
    err = np.asarray(err, dtype=float)
    if xi.size < 3 or xi.size != err.size:
        raise DomainError("fit_slope needs at least three (xi, err) pairs")
    if np.any(xi <= 0) or np.any(err <= 0):
        raise DomainError("fit_slope needs positive xi and err")
    return float(np.polyfit(np.log(xi), np.log(err), 1)[0])


def statement_params(statement_id, op):
    """The parameters a statement actually uses (``n = 0`` for the propositions)."""
    if statement_id not in STATEMENTS:
        raise KeyError(f"unknown statement {statement_id!r}")
    if statement_id in PROPS:
        op = replace(op, n=0)
    if statement_id in ("thm2", "prop2", "thm4", "prop4"):
        op = replace(op, p=1.0)
    if statement_id in SYMMETRIC:
        op = replace(op, r=2)  # these statements use ω_2 and the symmetric operator
    return op


def check_hypotheses(statement_id, f, op):
    """Raise ``DomainError`` with a diagnostic when a statement does not apply; return notes."""
    notes = []
    flags = op.constraints()
    if not flags[statement_id]:
        raise DomainError(f"{statement_id}: parameter constraint fails for {op}")
    r, k, p = modulus_order(statement_id, op)
    if k > f.order:
        raise DomainError(f"{statement_id}: {f.name} lacks derivative {k}")
    if statement_id in PROPS:
        if not f.has_lp(0, p):
            if f.differences_vanish(0, r):
                notes.append(f"{f.name} is not in L_{p:g}; its differences vanish, so ratios are vacuous")
            else:
                raise DomainError(f"{statement_id}: {f.name} is not in L_{p:g}")
    elif not (f.has_lp(k, p) or f.differences_vanish(k, r)):
        raise DomainError(f"{statement_id}: derivative {k} of {f.name} is not in L_{p:g}")
    return notes


def error_function(statement_id, f, op, spec, *, raw=False):
    """The pointwise error whose Lp norm a statement bounds, as ``x -> array``."""
    kp = op.kp
    if statement_id in SYMMETRIC:
        if raw or statement_id in PROPS:
            return lambda x: apply_M_symmetric(f, kp, x, spec) - f(x)
        return lambda x: error_K(f, kp, op.n, x, spec)
    if raw or statement_id in PROPS:
        return lambda x: apply_M(f, op, x, spec) - f(x)
    return lambda x: error_Delta(f, op, x, spec)


def error_norm(statement_id, f, op, config=HarnessConfig(), *, raw=False):
    """``‖error‖_p`` over ℝ with the x-domain truncated where f and the kernel tail are negligible."""
    _, _, p = modulus_order(statement_id, op)
    fun = error_function(statement_id, f, op, config.inner, raw=raw)
    eps = config.x_tail_eps
    outer = config.outer
    if f.polynomial_degree is None:
        scale = 4.0 * max(f.sup_abs, 1e-300) * (1 << op.r)
        radius = max(f.support_radius(eps) + op.r * op.xi, K.tail_radius(op.kp, eps, scale=scale))
    else:
        # Polynomial entries reproduce exactly, so the error is rounding noise of
        # size ~ inner.rel_tol·|f| everywhere; integrate it over the entry's
        # declared window and accept it at that absolute level.
        radius = f.support_radius(eps)
        noise = config.inner.rel_tol * max(f.sup_abs, 1.0) * (1 << op.r)
        outer = outer.with_(abs_tol=2.0 * radius * noise ** p)

    def integrand(x, owner):
        return np.abs(fun(x)) ** p

    edges = [geometric_edges(radius, xi=op.xi)]
    values, errors = integrate_batch(integrand, edges, outer, raise_on_failure=False)
    value, error = float(values[0]), float(errors[0])
    # the outer target can sit below the noise floor the inner tolerance leaves;
    # an estimate within ``accept_rel`` is still far more accurate than any check needs
    if error > config.accept_rel * abs(value) and error > outer.abs_tol:
        raise ConvergenceFailure(
            f"error norm did not converge (estimate {value:.6g}, error {error:.3g})", value, error
        )
    return max(value, 0.0) ** (1.0 / p)


def _one_xi(statement_id, f, op, config, raw):
    r, k, p = modulus_order(statement_id, op)
    err = error_norm(statement_id, f, op, config)
    omega = modulus_of_smoothness(f, k, r, op.xi, p, config.modulus, rel_change=config.modulus_rel_change)
    omega *= config.omega_safety
    rep = bound(statement_id, op, omega)
    raw_err = error_norm(statement_id, f, op, config, raw=True) if raw else None
    return err, omega, rep, raw_err


def run_convergence(statement_id, entry, op, xi_values=None, config=HarnessConfig(), *, raw_error=False):
    """Sweep ``ξ`` (descending) and collect errors, moduli, bounds and rates.

    ``op`` carries every parameter except ``ξ``; its ξ is replaced per grid point.
    Quadrature failures at one ξ are recorded and the sweep continues.
    """
    f = entry.f
    op = statement_params(statement_id, op)
    notes = check_hypotheses(statement_id, f, op)
    xs = sorted(xi_grid() if xi_values is None else [float(v) for v in xi_values], reverse=True)
    if len(set(xs)) != len(xs):
        raise DomainError("xi values must be distinct")

    def task(xi):
        try:
            return _one_xi(statement_id, f, op.with_xi(xi), config, raw_error)
        except (ConvergenceFailure, FloatingPointError, CapabilityError) as exc:
            return exc

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(task, xs))
    else:
        results = [task(xi) for xi in xs]

    errs, omegas, bounds_, ratios, raws, failures = [], [], [], [], [], []
    constants = {}
    for xi, res in zip(xs, results):
        if isinstance(res, Exception):
            failures.append((xi, f"{type(res).__name__}: {res}"))
            errs.append(None), omegas.append(None), bounds_.append(None), ratios.append(None), raws.append(None)
            continue
        err, omega, rep, raw_err = res
        constants = dict(rep.constant_values, prefactor=rep.prefactor, xi_power=rep.xi_power)
        errs.append(err)
        omegas.append(omega)
        bounds_.append(rep.bound_value)
        ratios.append(err / rep.bound_value if rep.bound_value else None)
        raws.append(raw_err)

    good = [(x, e) for x, e in zip(xs, errs) if e is not None and e > 0]
    slope = fit_slope(*zip(*good[-3:])) if len(good) >= 3 else None
    params = {"p": op.p, "n": op.n, "r": op.r, "alpha": op.alpha, "beta": op.beta}
    return ConvergenceReport(
        statement_id, f.name, params, xs, errs, omegas, bounds_, ratios, slope, constants,
        failures, notes, raws if raw_error else None,
    )
