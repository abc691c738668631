"""Numerical audit of the algebraic and integral identities behind the operators."""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernel as K
from ..coefficients import alphas, binomial_identity_check
from ..errors import DivergenceError
from ..kernel import KernelParams
from ..operators import (
    OperatorParams, apply_M, apply_M_symmetric, central_difference_error, error_Delta, error_K,
    remainder_K, remainder_Rstar, taylor_identity_residual,
)
from ..quad import QuadratureSpec
from ..smoothness import central_second_difference, forward_difference, tau
from .corpus import builtin_corpus, constant, corpus_by_name

SUITES = ("coeffs", "kernel", "identities", "all")
SAMPLE_X = (-3.0, -1.7, -0.9, -0.3, 0.0, 0.4, 1.1, 2.2, 4.5)
AUDIT_SEED = 20240601


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def to_dict(self):
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


@dataclass
class AuditReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


# ---------------------------------------------------------------------------
# coefficient checks


def check_alpha_sums(rs=range(1, 7), ns=range(0, 5)):
    worst = max(abs(math.fsum(alphas(r, n).alphas) - 1.0) for r in rs for n in ns)
    return Check("coeffs.sum_alpha", worst, 1e-12, f"r in {list(rs)}, n in {list(ns)}")


def check_binomial_identity(rs=range(1, 11)):
    bad = [r for r in rs if not binomial_identity_check(r)]
    return Check("coeffs.binomial_identity", float(len(bad)), 0.0, f"failing r: {bad}" if bad else "exact")


def check_delta_definition(rs=range(1, 7), ns=range(1, 5)):
    worst = 0.0
    for r, n in itertools.product(rs, ns):
        c = alphas(r, n)
        for k in range(1, n + 1):
            direct = math.fsum(a * j ** k for j, a in enumerate(c.alphas) if j > 0)
            worst = max(worst, abs(direct - float(c.delta(k))) / max(1.0, abs(direct)))
    return Check("coeffs.delta_definition", worst, 1e-12)


# ---------------------------------------------------------------------------
# kernel checks


def check_normalization(spec):
    worst = 0.0
    for a, b, xi in itertools.product((1, 2, 3), (1.0, 2.0, 4.0), (0.1, 1.0, 10.0)):
        if b > 1.0 / (2 * a):
            kp = KernelParams(a, b, xi)
            worst = max(worst, abs(K.normalization_W(kp) * K.moment_quadrature(0, kp, spec) - 1.0))
    return Check("kernel.normalization", worst, 1e-8, "(alpha, beta, xi) in {1,2,3}x{1,2,4}x{0.1,1,10}")


def check_moments(spec):
    even, odd = 0.0, 0.0
    for a, b, xi in itertools.product((1, 2, 3), (1.0, 2.0, 4.0), (0.1, 1.0, 10.0)):
        kp = KernelParams(a, b, xi)
        for k in (0, 2, 4):
            if b > (k + 1) / (2 * a):
                exact = K.moment(k, kp)
                even = max(even, abs(K.moment_quadrature(k, kp, spec) - exact) / exact)
        for k in (1, 3):
            if kp.decay - k > 1.0:
                # measured against the normalized kernel so the scale is ξ-free
                odd = max(odd, abs(K.normalization_W(kp) * K.moment_quadrature(k, kp, spec)))
    return [Check("kernel.even_moments", even, 1e-7), Check("kernel.odd_moments", odd, 1e-9)]


def check_moment_example():
    value = K.moment(2, KernelParams(1, 2.0, 1.0))
    return Check("kernel.moment_example", abs(value - math.pi / 2), 1e-7, "moment(2, alpha=1, beta=2, xi=1) = pi/2")


def check_halfline_moments(spec):
    worst = 0.0
    for m, a, b in itertools.product((1, 2, 3, 4, 5), (1, 2), (1.5, 3.0, 5.0)):
        if b > m / (2 * a):
            exact = K.halfline_moment(m, a, b)
            worst = max(worst, abs(K.halfline_moment_quadrature(m, a, b, spec) - exact) / exact)
    return Check("kernel.halfline_moments", worst, 1e-7)


# ---------------------------------------------------------------------------
# operator identities


def check_constant_reproduction(spec):
    worst = 0.0
    x = np.array(SAMPLE_X)
    for c in (-3.0, 0.0, 1.0, 7.0):
        f = constant(c)
        for r, n, a, b, xi in ((1, 0, 1, 1.0, 0.5), (2, 2, 1, 2.0, 0.3), (3, 1, 2, 1.5, 1.0), (4, 4, 1, 6.0, 0.1)):
            op = OperatorParams(r, n, KernelParams(a, b, xi))
            worst = max(worst, float(np.max(np.abs(apply_M(f, op, x, spec) - c))) / max(1.0, abs(c)))
    return Check("identities.constant_reproduction", worst, 1e-7, "c in {-3, 0, 1, 7}")


def sample_tau_cases(count=100, seed=AUDIT_SEED):
    """Fixed pseudo-random ``(f, r, n, w, x)`` samples over the corpus."""
    rng = np.random.default_rng(seed)
    corpus = builtin_corpus()
    cases = []
    for _ in range(count):
        entry = corpus[int(rng.integers(len(corpus)))]
        r = int(rng.integers(1, 6))
        n = int(rng.integers(1, 5))
        w = float(rng.uniform(-2.0, 2.0))
        x = float(rng.uniform(-4.0, 4.0))
        cases.append((entry.f, r, n, w, x))
    return cases


def check_tau_identity(count=100):
    worst = 0.0
    for f, r, n, w, x in sample_tau_cases(count):
        a = tau(f, r, n, w, x)
        b = forward_difference(f, n, r, w, x)
        worst = max(worst, abs(a - b) / (1.0 + abs(b)))
    return Check("identities.tau_equals_difference", worst, 1e-11, f"{count} samples")


def check_taylor_identity(spec):
    g = corpus_by_name("gaussian").f
    worst = 0.0
    for r, n, t, x in ((2, 2, 0.3, 0.1), (1, 1, -0.7, 0.4), (3, 3, 1.2, -0.5), (2, 4, -0.4, 1.3)):
        op = OperatorParams(r, n, KernelParams(1, 8.0, 0.5))
        worst = max(worst, abs(taylor_identity_residual(g, op, t, x, spec)))
    return Check("identities.taylor_expansion", worst, 1e-9)


def check_dual_representation(spec):
    g = corpus_by_name("gaussian").f
    x = np.array(SAMPLE_X)
    worst = 0.0
    for xi in (0.5, 0.1):
        op = OperatorParams(2, 2, KernelParams(1, 8.0, xi))
        worst = max(worst, float(np.max(np.abs(error_Delta(g, op, x, spec) - remainder_Rstar(g, op, x, spec)))))
    return Check("identities.delta_equals_remainder", worst, 1e-5, "gaussian, r=2, n=2, alpha=1, beta=8")


def check_symmetric_equals_r1(spec):
    x = np.array(SAMPLE_X)
    worst = 0.0
    for kp in (KernelParams(1, 2.0, 0.5), KernelParams(2, 1.5, 0.2)):
        for entry in builtin_corpus():
            op = OperatorParams(1, 0, kp)
            diff = apply_M(entry.f, op, x, spec) - apply_M_symmetric(entry.f, kp, x, spec)
            worst = max(worst, float(np.max(np.abs(diff))))
    return Check("identities.m1_equals_symmetric", worst, 1e-9, "two kernel parameter sets, 9 points")


def check_positivity(spec):
    x = np.array(SAMPLE_X + (25.0, -60.0))
    lowest = math.inf
    for kp in (KernelParams(1, 1.0, 0.5), KernelParams(2, 3.0, 0.1)):
        for name in ("gaussian", "cauchy_bump", "rational"):
            lowest = min(lowest, float(np.min(apply_M_symmetric(corpus_by_name(name).f, kp, x, spec))))
    return Check("identities.symmetric_positivity", max(0.0, -lowest), 0.0, f"min value {lowest:.3g}")


def check_central_shift(count=60):
    rng = np.random.default_rng(AUDIT_SEED + 1)
    worst = 0.0
    for entry in builtin_corpus():
        for _ in range(count // 4):
            k = int(rng.integers(0, 5))
            t, x = float(rng.uniform(0, 2)), float(rng.uniform(-3, 3))
            a = central_second_difference(entry.f, k, t, x)
            b = forward_difference(entry.f, k, 2, t, x - t)
            worst = max(worst, abs(a - b))
    return Check("identities.central_is_shifted_forward", worst, 1e-12)


def check_symmetric_dual(spec):
    x = np.array(SAMPLE_X)
    kp = KernelParams(1, 4.0, 0.5)
    worst = 0.0
    for entry in builtin_corpus():
        direct = apply_M_symmetric(entry.f, kp, x, spec) - entry.f(x)
        worst = max(worst, float(np.max(np.abs(central_difference_error(entry.f, kp, x, spec) - direct))))
    return Check("identities.symmetric_error_dual_form", worst, 1e-8)


def check_K_dual(spec):
    g = corpus_by_name("gaussian").f
    x = np.array(SAMPLE_X)
    worst = 0.0
    for n, beta, xi in ((2, 6.0, 0.5), (2, 6.0, 0.1), (4, 8.0, 0.3)):
        kp = KernelParams(1, beta, xi)
        worst = max(worst, float(np.max(np.abs(error_K(g, kp, n, x, spec) - remainder_K(g, kp, n, x, spec)))))
    return Check("identities.K_equals_remainder", worst, 1e-6)


def audit_identities(spec=QuadratureSpec(), suite="all"):
    """Run one suite (or all) and return an :class:`AuditReport`; failures are content, not exceptions."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    report = AuditReport(suite)
    plan = []
    if suite in ("coeffs", "all"):
        plan += [check_alpha_sums, check_binomial_identity, check_delta_definition]
    if suite in ("kernel", "all"):
        plan += [lambda: check_normalization(spec), lambda: check_moments(spec), check_moment_example,
                 lambda: check_halfline_moments(spec)]
    if suite in ("identities", "all"):
        plan += [lambda: check_constant_reproduction(spec), check_tau_identity,
                 lambda: check_taylor_identity(spec), lambda: check_dual_representation(spec),
                 lambda: check_symmetric_equals_r1(spec), lambda: check_positivity(spec), check_central_shift,
                 lambda: check_symmetric_dual(spec), lambda: check_K_dual(spec)]
    for step in plan:
        try:
            out = step()
        except (ArithmeticError, DivergenceError, ValueError) as exc:
            out = Check(getattr(step, "__name__", "check"), math.inf, 0.0, f"{type(exc).__name__}: {exc}")
        report.checks.extend(out if isinstance(out, list) else [out])
    return report
