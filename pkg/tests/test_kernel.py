import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from poisson_cauchy.errors import DivergenceError, DomainError
from poisson_cauchy.kernel import (
    KernelParams, halfline_moment, halfline_moment_quadrature, kernel_value, log_kernel, moment,
    moment_quadrature, normalization_W, tail_radius, weight,
)

GRID = [KernelParams(a, b, xi) for a, b, xi in itertools.product((1, 2, 3), (1.0, 2.0, 4.0), (0.1, 1.0, 10.0))]


def test_params_validation():
    with pytest.raises(DomainError):
        KernelParams(0, 2.0, 1.0)
    with pytest.raises(DomainError):
        KernelParams(1.5, 2.0, 1.0)
    with pytest.raises(DomainError):
        KernelParams(1, 0.5, 1.0)  # beta must exceed 1/(2 alpha)
    with pytest.raises(DomainError):
        KernelParams(1, 2.0, 0.0)
    assert KernelParams(2, 0.3, 1.0).decay == pytest.approx(1.2)


def test_kernel_values():
    assert kernel_value(0.0, KernelParams(1, 1.0, 1.0)) == 1.0
    assert kernel_value(1.0, KernelParams(1, 2.0, 1.0)) == pytest.approx(0.25, rel=1e-15)
    assert kernel_value(2.0, KernelParams(2, 1.5, 1.0)) == pytest.approx(17 ** -1.5, rel=1e-14)


def test_log_kernel_is_stable_for_tiny_xi():
    kp = KernelParams(3, 40.0, 1e-6)
    assert np.isfinite(log_kernel(0.0, kp))
    assert log_kernel(0.0, kp) == pytest.approx(-40.0 * 6 * math.log(1e-6), rel=1e-14)
    assert np.all(np.isfinite(weight(np.array([0.0, 1e-6, 1.0]), kp)))


def test_normalization_examples():
    assert normalization_W(KernelParams(1, 1.0, 1.0)) == pytest.approx(1 / math.pi, rel=1e-14)
    assert normalization_W(KernelParams(1, 1.0, 2.0)) == pytest.approx(2 / math.pi, rel=1e-14)
    assert normalization_W(KernelParams(1, 2.0, 1.0)) == pytest.approx(2 / math.pi, rel=1e-14)


@pytest.mark.parametrize("kp", GRID, ids=str)
def test_normalization_integrates_to_one(kp):
    assert abs(normalization_W(kp) * moment_quadrature(0, kp) - 1.0) <= 1e-8


def test_normalization_against_scipy():
    kp = KernelParams(2, 1.5, 0.7)
    val = integrate.quad(lambda t: kernel_value(t, kp), -np.inf, np.inf, epsabs=0, epsrel=1e-12)[0]
    assert normalization_W(kp) * val == pytest.approx(1.0, abs=1e-10)


def test_moment_examples():
    kp = KernelParams(1, 2.0, 1.0)
    assert moment(1, kp) == 0.0
    assert moment(2, kp) == pytest.approx(math.pi / 2, rel=1e-14)
    assert moment(0, KernelParams(1, 1.0, 1.0)) == pytest.approx(math.pi, rel=1e-14)
    with pytest.raises(DivergenceError):
        moment(2, KernelParams(1, 1.5, 1.0))
    with pytest.raises(DomainError):
        moment(-1, kp)


@pytest.mark.parametrize("kp", GRID, ids=str)
def test_moments_match_quadrature(kp):
    for k in (0, 2, 4):
        if kp.beta > (k + 1) / (2 * kp.alpha):
            assert moment_quadrature(k, kp) == pytest.approx(moment(k, kp), rel=1e-7)
    for k in (1, 3):
        if kp.decay - k > 1:
            assert abs(normalization_W(kp) * moment_quadrature(k, kp)) <= 1e-9


@pytest.mark.parametrize("k", [0, 2, 4])
def test_moment_scaling_law(k):
    for a, b in ((1, 4.0), (2, 3.0), (3, 2.5)):
        for xi in (0.05, 0.3, 7.0):
            lhs = moment(k, KernelParams(a, b, xi))
            rhs = xi ** (k + 1 - 2 * a * b) * moment(k, KernelParams(a, b, 1.0))
            assert lhs == pytest.approx(rhs, rel=1e-10)


def test_halfline_moment_examples():
    assert halfline_moment(1, 1, 1.0) == pytest.approx(math.pi / 2, rel=1e-14)
    assert halfline_moment(2, 1, 2.0) == pytest.approx(0.5, rel=1e-14)
    assert halfline_moment(3, 1, 2.0) == pytest.approx(math.pi / 4, rel=1e-14)
    with pytest.raises(DomainError):
        halfline_moment(4, 1, 2.0)


@pytest.mark.parametrize("m,a,b", [(1, 1, 1.5), (2, 2, 1.0), (3, 1, 4.0), (5, 3, 2.0), (4, 2, 3.5)])
def test_halfline_moment_quadrature(m, a, b):
    assert halfline_moment_quadrature(m, a, b) == pytest.approx(halfline_moment(m, a, b), rel=1e-7)


def test_tail_radius_bounds_the_tail():
    kp = KernelParams(1, 2.0, 0.3)
    R = tail_radius(kp, 1e-9)
    tail = 2 * integrate.quad(lambda t: weight(t, kp), R, np.inf, epsabs=0, epsrel=1e-10)[0]
    assert tail < 1e-9 and R >= 8 * kp.xi
    with pytest.raises(DivergenceError):
        tail_radius(KernelParams(1, 1.0, 1.0), 1e-9, power=1)
