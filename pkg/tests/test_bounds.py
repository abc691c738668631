import math
import threading

import mpmath
import pytest
from scipy import integrate

from poisson_cauchy import bounds as B
from poisson_cauchy.errors import DomainError
from poisson_cauchy.kernel import KernelParams, halfline_moment
from poisson_cauchy.operators import OperatorParams


def op_(p, n, r, a, b, xi=0.5):
    return OperatorParams(r, n, KernelParams(a, b, xi), p)


def _scipy_halfline(fn):
    return integrate.quad(fn, 0, 1, epsabs=0, epsrel=1e-13, limit=200)[0] + \
        integrate.quad(fn, 1, math.inf, epsabs=0, epsrel=1e-13, limit=200)[0]


def test_tau_constant_oracles():
    value = B.tau_constant(2.0, 1, 1, 1, 4.0)
    ref = _scipy_halfline(lambda u: ((1 + u) ** 3 - 1) * u / (u * u + 1) ** 4)
    assert value == pytest.approx(ref, rel=1e-9)
    assert value == pytest.approx(B.expansion_value(3, 2, 1, 4.0, True), rel=1e-8)
    assert B.tau_constant(1.5, 1, 2, 2, 2.5) > 0


def test_tau_tilde_theta_rho_expansions():
    assert B.tau_tilde(2.0, 2, 1, 6.0) == pytest.approx(B.expansion_value(5, 4, 1, 6.0, True), rel=1e-8)
    assert B.theta(2.0, 1, 1, 4.0) == pytest.approx(B.expansion_value(2, 1, 1, 4.0, False), rel=1e-8)
    assert B.rho(2.0, 1, 5.0) == pytest.approx(B.expansion_value(4, 1, 1, 5.0, False), rel=1e-8)
    # non-integer exponents against an independent quadrature
    ref = _scipy_halfline(lambda y: (1 + y) ** 3 / (y ** 4 + 1) ** (1.5 * 2.5 / 2))
    assert B.rho(1.5, 2, 2.5) == pytest.approx(ref, rel=1e-9)


def test_constants_refuse_outside_hypotheses():
    with pytest.raises(DomainError):
        B.tau_constant(2.0, 1, 1, 1, 2.5 - 0.1)
    with pytest.raises(DomainError):
        B.theta(2.0, 1, 1, 1.5 - 0.1)
    with pytest.raises(DomainError):
        B.rho(2.0, 1, 2.5 - 0.1)
    with pytest.raises(DomainError):
        B.tau_tilde(2.0, 2, 1, 4.5 - 0.1)
    # the integral itself diverges once the decay is too slow
    with pytest.raises(DomainError):
        B._powered_kernel_integral(3.0, 2.0, 1, 2.0, True)


def test_halfline_expansion_sums():
    assert B.prop2_integral(3, 1, 3.0) == pytest.approx(B.prop2_integral_quadrature(3, 1, 3.0), rel=1e-8)
    assert B.prop2_integral(1, 1, 2.0) == pytest.approx((math.pi / 2 + 1) / 2, rel=1e-14)
    for n, r, a, b in ((1, 1, 1, 3.0), (2, 2, 1, 4.0), (1, 3, 2, 2.5)):
        assert B.lambda_quadrature(n, r, a, b, 0.3) == pytest.approx(B.lambda_expansion(n, r, a, b, 0.3), rel=1e-8)


def test_thm1_prefactor_factor_by_factor():
    op = op_(2.0, 1, 1, 1, 4.0)
    rep = B.thm1_bound(op, 1.0)
    g = lambda x: mpmath.gamma(x)
    p = q = 2.0
    tau = B.tau_constant(2.0, 1, 1, 1, 4.0)
    ref = (2 ** (1 / p) * g(4) * g(q * 4 / 2 - 0.5) ** (1 / q) * tau ** (1 / p)
           / (g(q * 4 / 2) ** (1 / q) * g(0.5) ** (1 / p) * g(3.5) * 3 ** (1 / p) * 1 * 1))
    assert rep.prefactor == pytest.approx(float(ref), rel=1e-12)
    assert rep.bound_value == pytest.approx(float(ref) * 0.5, rel=1e-12)
    assert rep.constant_values["tau"] == tau


@pytest.mark.parametrize("sid,op", [
    ("thm1", op_(2.0, 2, 2, 1, 8.0)), ("thm2", op_(1.0, 1, 1, 1, 3.0)), ("thm3", op_(2.0, 2, 2, 1, 6.0)),
    ("thm4", op_(1.0, 2, 2, 1, 4.0)),
])
def test_xi_scaling_and_zero_omega(sid, op):
    a = B.bound(sid, op, 0.7).bound_value
    b = B.bound(sid, op.with_xi(2 * op.xi), 0.7).bound_value
    assert b / a == pytest.approx(2 ** op.n, rel=1e-13)
    assert B.bound(sid, op, 0.0).bound_value == 0.0


def test_thm2_bracket():
    rep = B.thm2_bound(op_(1.0, 1, 1, 1, 3.0, xi=1.0), 1.0)
    bracket = rep.prefactor * 2 * math.gamma(0.5) * math.gamma(2.5)
    assert bracket == pytest.approx(2 + math.pi / 4, rel=1e-12)
    assert rep.constant_values["lambda_check"] <= 1e-7


def test_thm4_bracket():
    rep = B.thm4_bound(op_(1.0, 2, 2, 1, 4.0, xi=1.0), 1.0)
    bracket = rep.prefactor * 6 * math.gamma(0.5) * math.gamma(3.5)
    assert bracket == pytest.approx(3 + 1.5 * math.pi, rel=1e-12)


def test_prop2_and_prop4_values():
    rep = B.prop2_bound(op_(1.0, 0, 1, 1, 2.0), 1.0)
    assert rep.bound_value == pytest.approx(1 + 2 / math.pi, rel=1e-12)
    rep = B.prop4_bound(1, 2.0, 1.0)
    assert rep.bound_value == pytest.approx(1 + 2 / math.pi, abs=1e-6)
    # cross-check against the integral form of the bracket
    integral = _scipy_halfline(lambda x: (1 + x) ** 2 / (x * x + 1) ** 2)
    assert rep.bound_value == pytest.approx(2 / math.pi * integral, rel=1e-10)
    for xi in (0.01, 0.3, 5.0):
        assert B.prop4_bound(1, 2.0, 1.0, xi=xi).bound_value == rep.bound_value


def test_prop1_and_prop3_reports():
    rep = B.prop1_bound(op_(2.0, 0, 1, 1, 4.0), 2.0)
    assert rep.constraint_ok and rep.constant_values["theta"] > 0 and rep.bound_value > 0
    assert rep.xi_power == 0
    rep = B.prop3_bound(op_(2.0, 0, 2, 1, 5.0), 1.0)
    assert rep.constant_values["rho"] == pytest.approx(B.expansion_value(4, 1, 1, 5.0, False), rel=1e-8)


def test_failed_constraint_gives_no_bound():
    rep = B.thm1_bound(op_(2.0, 1, 1, 1, 2.5), 1.0)
    assert not rep.constraint_ok and rep.bound_value is None
    rep = B.thm3_bound(op_(2.0, 1, 2, 1, 9.0), 1.0)  # n must be even
    assert not rep.constraint_ok
    with pytest.raises(DomainError):
        B.thm2_bound(op_(1.0, 1, 1, 1, 3.0), -1.0)
    with pytest.raises(KeyError):
        B.bound("thm9", op_(1.0, 1, 1, 1, 3.0), 1.0)


@pytest.mark.parametrize("sid", ["thm1", "prop1", "thm3", "prop3", "thm2", "prop2", "thm4", "prop4"])
def test_bound_continuous_in_beta(sid):
    base = {"thm1": (2.0, 2, 1, 1, 5.0), "prop1": (2.0, 0, 1, 1, 3.0), "thm3": (2.0, 2, 2, 1, 6.0),
            "prop3": (2.0, 0, 2, 1, 4.0), "thm2": (1.0, 1, 1, 1, 3.0), "prop2": (1.0, 0, 1, 1, 2.0),
            "thm4": (1.0, 2, 2, 1, 4.0), "prop4": (1.0, 0, 2, 1, 2.0)}[sid]
    p, n, r, a, b = base
    values = [B.bound(sid, op_(p, n, r, a, b + d), 1.0).bound_value for d in (0.0, 1e-6, 2e-6)]
    assert all(v > 0 for v in values)
    assert abs(values[1] - values[0]) <= 1e-3 * values[0]
    assert abs(values[2] - values[1]) <= 1e-3 * values[0]


def test_cache_is_thread_safe_and_stable():
    op = op_(2.0, 2, 1, 1, 5.0)
    first = B.thm1_bound(op, 1.0).prefactor
    out = []
    threads = [threading.Thread(target=lambda: out.append(B.thm1_bound(op, 1.0).prefactor)) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert out == [first] * 8


def test_halfline_moment_closed_forms_used_by_thm2():
    for n, r, a, b in ((1, 1, 1, 3.0), (2, 2, 2, 3.0)):
        for k in range(1, r + 2):
            ref = _scipy_halfline(lambda T: T ** (n + k - 1) / (T ** (2 * a) + 1) ** b)
            assert halfline_moment(n + k, a, b) == pytest.approx(ref, rel=1e-7)
