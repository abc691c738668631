"""Acceptance criteria, each at its stated tolerance; one pass/fail line per criterion."""

import itertools
import math

import numpy as np
import pytest

from conftest import record_acceptance
from poisson_cauchy import bounds as B
from poisson_cauchy import kernel as K
from poisson_cauchy.coefficients import alphas, binomial_identity_check
from poisson_cauchy.harness.audit import sample_tau_cases
from poisson_cauchy.harness.convergence import run_convergence
from poisson_cauchy.harness.corpus import builtin_corpus, constant, corpus_by_name
from poisson_cauchy.kernel import KernelParams
from poisson_cauchy.operators import OperatorParams, apply_M, apply_M_symmetric, error_Delta, remainder_Rstar
from poisson_cauchy.smoothness import forward_difference, tau

XS = np.array([-3.0, -1.7, -0.9, -0.3, 0.0, 0.4, 1.1, 2.2, 4.5])
XI_GRID = [0.4, 0.2, 0.1, 0.05]

# (p, n, r, alpha, beta): at least three valid configurations per statement
JACKSON_GRID = {
    "thm1": [(2.0, 1, 1, 1, 4.0), (2.0, 2, 2, 1, 8.0), (1.5, 1, 2, 2, 2.5), (3.0, 2, 1, 1, 5.0)],
    "thm2": [(1.0, 1, 1, 1, 2.0), (1.0, 2, 2, 1, 3.0), (1.0, 1, 2, 2, 1.5)],
    "prop1": [(2.0, 0, 1, 1, 2.0), (1.5, 0, 2, 1, 3.0), (3.0, 0, 1, 2, 1.0)],
    "prop2": [(1.0, 0, 1, 1, 1.5), (1.0, 0, 2, 1, 2.0), (1.0, 0, 1, 2, 1.0)],
    "thm3": [(2.0, 2, 2, 1, 5.0), (1.5, 2, 2, 2, 3.0), (3.0, 2, 2, 1, 5.0)],
    "thm4": [(1.0, 2, 2, 1, 3.0), (1.0, 2, 2, 2, 1.5), (1.0, 4, 2, 1, 4.0)],
    "prop3": [(2.0, 0, 2, 1, 3.0), (1.5, 0, 2, 2, 1.5), (3.0, 0, 2, 1, 2.5)],
    "prop4": [(1.0, 0, 2, 1, 2.0), (1.0, 0, 2, 2, 1.0), (1.0, 0, 2, 1, 3.0)],
}


def test_criterion_01_kernel_normalization():
    worst = 0.0
    for a, b, xi in itertools.product((1, 2, 3), (1.0, 2.0, 4.0), (0.1, 1.0, 10.0)):
        if b > 1.0 / (2 * a):
            kp = KernelParams(a, b, xi)
            worst = max(worst, abs(K.normalization_W(kp) * K.moment_quadrature(0, kp) - 1.0))
    ok = record_acceptance(1, "kernel normalization", worst <= 1e-8, f"max |W*int - 1| = {worst:.3g} (tol 1e-8)")
    assert ok


def test_criterion_02_moments():
    even, odd = 0.0, 0.0
    for a, b, xi in itertools.product((1, 2, 3), (1.0, 2.0, 4.0), (0.1, 1.0, 10.0)):
        kp = KernelParams(a, b, xi)
        for k in (0, 2, 4):
            if b > (k + 1) / (2 * a):
                exact = K.moment(k, kp)
                even = max(even, abs(K.moment_quadrature(k, kp) - exact) / exact)
        for k in (1, 3):
            if kp.decay - k > 1:
                # measured on the normalized kernel W·kernel, whose scale does not depend on ξ
                odd = max(odd, abs(K.normalization_W(kp) * K.moment_quadrature(k, kp)))
    ok = even <= 1e-7 and odd <= 1e-9
    record_acceptance(2, "moment formula", ok, f"even rel err {even:.3g} (tol 1e-7), odd |quad| {odd:.3g} (tol 1e-9)")
    assert ok


def test_criterion_03_coefficients():
    worst = max(abs(math.fsum(alphas(r, n).alphas) - 1.0) for r in range(1, 7) for n in range(0, 5))
    identity = all(binomial_identity_check(r) for r in range(1, 11))
    ok = worst <= 1e-12 and identity
    record_acceptance(3, "coefficient sums and binomial identity", ok,
                      f"max |sum alpha - 1| = {worst:.3g} (tol 1e-12), identity exact for r=1..10: {identity}")
    assert ok


def test_criterion_04_constant_reproduction():
    worst = 0.0
    configs = [(1, 0, 1, 1.0, 0.5), (2, 2, 1, 2.0, 0.3), (3, 1, 2, 1.5, 1.0), (4, 4, 1, 6.0, 0.1), (6, 3, 3, 1.0, 2.0)]
    for c in (-3.0, 0.0, 1.0, 7.0):
        for r, n, a, b, xi in configs:
            op = OperatorParams(r, n, KernelParams(a, b, xi))
            err = np.max(np.abs(apply_M(constant(c), op, XS) - c)) / max(1.0, abs(c))
            worst = max(worst, float(err))
    ok = record_acceptance(4, "constant reproduction", worst <= 1e-7, f"max scaled error {worst:.3g} (tol 1e-7)")
    assert ok


def test_criterion_05_tau_identity():
    worst = 0.0
    cases = sample_tau_cases(100)
    for f, r, n, w, x in cases:
        b = forward_difference(f, n, r, w, x)
        worst = max(worst, abs(tau(f, r, n, w, x) - b) / (1.0 + abs(b)))
    ok = record_acceptance(5, "tau equals r-th difference", worst <= 1e-11,
                           f"{len(cases)} samples, max scaled residual {worst:.3g} (tol 1e-11)")
    assert ok


def test_criterion_06_dual_representation():
    g = corpus_by_name("gaussian").f
    worst = 0.0
    for xi in (0.5, 0.1):
        op = OperatorParams(2, 2, KernelParams(1, 8.0, xi))
        worst = max(worst, float(np.max(np.abs(error_Delta(g, op, XS) - remainder_Rstar(g, op, XS)))))
    ok = record_acceptance(6, "error equals remainder integral", worst <= 1e-5,
                           f"9 points x 2 xi, max |Delta - R*| = {worst:.3g} (tol 1e-5)")
    assert ok


@pytest.fixture(scope="module")
def jackson_reports():
    reports = []
    for sid, configs in JACKSON_GRID.items():
        for p, n, r, a, b in configs:
            op = OperatorParams(r, n, KernelParams(a, b, XI_GRID[0]), p)
            for entry in builtin_corpus():
                reports.append(run_convergence(sid, entry, op, XI_GRID))
    return reports


def test_criterion_07_jackson_inequalities(jackson_reports):
    worst, where, gaps = 0.0, None, []
    for rep in jackson_reports:
        gaps += [(rep.statement_id, rep.function, xi) for xi, _ in rep.failures]
        for xi, ratio in zip(rep.xi_values, rep.ratio):
            if ratio is not None and ratio > worst:
                worst, where = ratio, (rep.statement_id, rep.function, rep.params, xi)
    ok = worst <= 1.01 and not gaps
    detail = (f"{len(jackson_reports)} sweeps x {len(XI_GRID)} xi, max error/bound = {worst:.4g} (tol 1.01) "
              f"at {where}; missing points: {gaps or 'none'}")
    record_acceptance(7, "Jackson-type inequalities", ok, detail)
    assert ok


def test_criterion_08_convergence(jackson_reports):
    g = corpus_by_name("gaussian")
    thm1 = run_convergence("thm1", g, OperatorParams(2, 2, KernelParams(1, 8.0, 0.4), 2.0), XI_GRID)
    thm3 = run_convergence("thm3", g, OperatorParams(2, 2, KernelParams(1, 7.0, 0.4), 2.0), XI_GRID)
    props = [rep for rep in jackson_reports if rep.statement_id.startswith("prop")]
    monotone = [rep.non_increasing(0.02) for rep in props]
    ok = thm1.fitted_slope >= 1.7 and thm3.fitted_slope >= 1.7 and all(monotone)
    record_acceptance(8, "convergence rates", ok,
                      f"thm1 slope {thm1.fitted_slope:.3f}, thm3 slope {thm3.fitted_slope:.3f} (floor 1.7); "
                      f"{sum(monotone)}/{len(props)} prop sweeps non-increasing within 2%")
    assert ok


def test_criterion_09_constant_oracles():
    k_worst = 0.0
    for n, r, a, b in ((1, 1, 1, 3.0), (2, 2, 1, 4.0), (1, 2, 2, 2.5), (2, 1, 3, 1.5)):
        for k in range(1, r + 2):
            exact = K.halfline_moment(n + k, a, b)
            k_worst = max(k_worst, abs(K.halfline_moment_quadrature(n + k, a, b) - exact) / exact)
    bracket = B.prop4_bound(1, 2.0, 1.0).bound_value
    bracket_err = abs(bracket - (1 + 2 / math.pi))
    pairs = [
        (B.theta(2.0, 1, 1, 4.0), B.expansion_value(2, 1, 1, 4.0, False)),
        (B.theta(3.0, 2, 1, 3.0), B.expansion_value(6, 1, 1, 4.5, False)),
        (B.rho(2.0, 1, 5.0), B.expansion_value(4, 1, 1, 5.0, False)),
        (B.rho(3.0, 2, 2.0), B.expansion_value(6, 1, 2, 3.0, False)),
        (B.tau_constant(2.0, 1, 1, 1, 4.0), B.expansion_value(3, 2, 1, 4.0, True)),
        (B.tau_constant(2.0, 2, 2, 1, 8.0), B.expansion_value(5, 4, 1, 8.0, True)),
        (B.tau_tilde(2.0, 2, 1, 6.0), B.expansion_value(5, 4, 1, 6.0, True)),
        (B.tau_tilde(3.0, 2, 1, 5.0), B.expansion_value(7, 6, 1, 7.5, True)),
    ]
    exp_worst = max(abs(q - e) / e for q, e in pairs)
    ok = k_worst <= 1e-7 and bracket_err <= 1e-6 and exp_worst <= 1e-8
    record_acceptance(9, "constant oracles", ok,
                      f"K_m rel err {k_worst:.3g} (tol 1e-7); prop4 bracket err {bracket_err:.3g} (tol 1e-6); "
                      f"expansion vs quadrature {exp_worst:.3g} (tol 1e-8)")
    assert ok


def test_criterion_10_symmetric_operator():
    worst = 0.0
    for kp in (KernelParams(1, 2.0, 0.5), KernelParams(2, 1.5, 0.2)):
        for entry in builtin_corpus():
            diff = apply_M(entry.f, OperatorParams(1, 0, kp), XS) - apply_M_symmetric(entry.f, kp, XS)
            worst = max(worst, float(np.max(np.abs(diff))))
    lowest = math.inf
    for kp in (KernelParams(1, 2.0, 0.5), KernelParams(2, 1.5, 0.2), KernelParams(1, 1.0, 0.05)):
        for name in ("gaussian", "cauchy_bump", "rational"):  # the non-negative corpus entries
            lowest = min(lowest, float(np.min(apply_M_symmetric(corpus_by_name(name).f, kp, XS))))
    ok = worst <= 1e-9 and lowest >= 0.0
    record_acceptance(10, "M_1 equals symmetric operator; positivity", ok,
                      f"max |M_1 - M_sym| = {worst:.3g} (tol 1e-9); min M_sym f on non-negative f = {lowest:.3g}")
    assert ok
