"""The Poisson-Cauchy kernel ``1 / (t^{2α} + ξ^{2α})^β``, its normalizer and moments."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError
from .specfun import log_gamma_ratio


@dataclass(frozen=True)
class KernelParams:
    alpha: int
    beta: float
    xi: float

    def __post_init__(self):
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise DomainError(f"alpha must be a positive integer, got {self.alpha!r}")
        object.__setattr__(self, "alpha", int(self.alpha))
        if not (self.xi > 0 and math.isfinite(self.xi)):
            raise DomainError(f"xi must be finite and > 0, got {self.xi!r}")
        if not self.beta > 1.0 / (2 * self.alpha):
            raise DomainError(
                f"beta must exceed 1/(2 alpha) = {1.0 / (2 * self.alpha):g}, got {self.beta!r}"
            )

    @property
    def decay(self):
        """Power-law decay exponent ``2αβ`` of the kernel."""
        return 2.0 * self.alpha * self.beta

    def with_xi(self, xi):
        return KernelParams(self.alpha, self.beta, xi)


def log_kernel(t, kp):
    """``-β·ln(t^{2α} + ξ^{2α})`` without forming the powers directly."""
    t = np.abs(np.asarray(t, dtype=float))
    big = np.maximum(t, kp.xi)
    small = np.minimum(t, kp.xi)
    ratio = small / big
    return -kp.beta * (2 * kp.alpha * np.log(big) + np.log1p(ratio ** (2 * kp.alpha)))


def kernel_value(t, kp):
    out = np.exp(log_kernel(t, kp))
    return float(out) if np.ndim(out) == 0 else out


def log_normalization_W(kp):
    a = kp.alpha
    return (
        log_gamma_ratio([kp.beta], [1.0 / (2 * a), kp.beta - 1.0 / (2 * a)])
        + math.log(a)
        + (2 * a * kp.beta - 1.0) * math.log(kp.xi)
    )


def normalization_W(kp):
    """The constant making ``W·∫_ℝ kernel = 1``."""
    return math.exp(log_normalization_W(kp))


def weight(t, kp):
    """``W·kernel(t)``, formed in log space so tiny ξ and large β do not underflow."""
    out = np.exp(log_normalization_W(kp) + log_kernel(t, kp))
    return float(out) if np.ndim(out) == 0 else out


def moment(k, kp):
    """``∫_ℝ t^k kernel(t) dt``: exactly zero for odd ``k``, a gamma ratio for even ``k``."""
    if int(k) != k or k < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {k!r}")
    k = int(k)
    if k % 2 == 1:
        return 0.0
    a, b = kp.alpha, kp.beta
    s = (k + 1) / (2 * a)
    if not b > s:
        raise DivergenceError(f"moment {k} needs beta > {s:g}, got {b:g}")
    log_value = log_gamma_ratio([s, b - s], [b]) - math.log(a) - (2 * a * b - k - 1) * math.log(kp.xi)
    return math.exp(log_value)


def halfline_moment(m, alpha, beta):
    """``∫_0^∞ T^{m-1} / (T^{2α} + 1)^β dT = Γ(m/2α) Γ(β - m/2α) / (2α Γ(β))``.

    ``m`` may be any positive real; integer ``m`` is the usual case.
    """
    if not m > 0:
        raise DomainError(f"m must be positive, got {m!r}")
    s = m / (2 * alpha)
    if not beta > s:
        raise DomainError(f"halfline moment {m} needs beta > {s:g}, got {beta:g}")
    return math.exp(log_gamma_ratio([s, beta - s], [beta]) - math.log(2 * alpha))


def tail_radius(kp, eps, scale=1.0, power=0):
    """Radius ``R >= 8ξ`` beyond which ``scale·W·∫_{|t|>R} |t|^power·kernel < eps``."""
    d = kp.decay - power - 1.0
    if d <= 0:
        raise DivergenceError(f"|t|^{power}·kernel is not integrable (2 alpha beta = {kp.decay:g})")
    log_r = (math.log(2.0 * scale) + log_normalization_W(kp) - math.log(d) - math.log(eps)) / d
    return max(8.0 * kp.xi, math.exp(min(log_r, 700.0)))


def moment_quadrature(k, kp, spec=None):
    """``∫_ℝ t^k kernel(t) dt`` by adaptive quadrature, the oracle for :func:`moment`.

    The integrand is scaled by ``W`` during integration so its size stays
    near ``1/ξ`` whatever ``β`` and ``ξ`` are; only the relative tolerance
    applies.
    """
    from .quad import Integrand, QuadratureSpec, integrate_realline

    spec = (spec or QuadratureSpec()).with_(abs_tol=1e-300)
    d = kp.decay - k
    if not d > 1.0:
        raise DivergenceError(f"t^{k}·kernel is not integrable (2 alpha beta = {kp.decay:g})")
    radius = tail_radius(kp, spec.tail_tol * 1e-2, scale=1.0, power=k)
    g = Integrand(eval=lambda t: t ** k * weight(t, kp), decay_exponent_hint=d, radius=radius)
    return integrate_realline(g, spec, xi=kp.xi) / normalization_W(kp)


def halfline_moment_quadrature(m, alpha, beta, spec=None):
    """``K_m`` by adaptive quadrature, the oracle for :func:`halfline_moment`."""
    from .quad import Integrand, QuadratureSpec, integrate_halfline

    spec = (spec or QuadratureSpec()).with_(abs_tol=1e-300)
    kp = KernelParams(alpha, beta, 1.0)
    radius = tail_radius(kp, spec.tail_tol * 1e-2, scale=1.0, power=m - 1)
    inner = [2.0 ** -j for j in range(1, 30)]
    g = Integrand(eval=lambda t: t ** (m - 1) * kernel_value(t, kp), radius=radius, breakpoints=inner)
    return integrate_halfline(g, spec, xi=1.0)
