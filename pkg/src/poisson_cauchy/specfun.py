"""Log-gamma, gamma ratios and exact binomials.

All bound constants in this package are products and quotients of gamma
values, so everything is routed through :func:`log_gamma` and combined in
log space.
"""

import math

from .errors import DomainError

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Stirling series coefficients B_{2k} / (2k (2k-1)).
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)


def _check_positive(x):
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma argument must be finite and > 0, got {x!r}")
    return x


def _lanczos_log_gamma(x):
    # valid for x >= 0.5
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def _stirling_log_gamma(x):
    # valid for x >= 10
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series


def log_gamma(x):
    """Return ``ln Γ(x)`` for finite ``x > 0``.

    Uses a Stirling series for ``x >= 10`` and a Lanczos sum below, with
    the recurrence ``Γ(x) = Γ(x + 1) / x`` for ``x < 0.5``.
    """
    x = _check_positive(x)
    if x >= 10.0:
        return _stirling_log_gamma(x)
    if x < 0.5:
        return _lanczos_log_gamma(x + 1.0) - math.log(x)
    return _lanczos_log_gamma(x)


def gamma(x):
    return math.exp(log_gamma(x))


def log_gamma_ratio(numers, denoms):
    """Sum of ``ln Γ`` over ``numers`` minus the sum over ``denoms``."""
    return math.fsum(log_gamma(a) for a in numers) - math.fsum(log_gamma(b) for b in denoms)


def gamma_ratio(numers, denoms):
    """Return ``Π Γ(numers) / Π Γ(denoms)`` evaluated in log space."""
    return math.exp(log_gamma_ratio(numers, denoms))


def binomial(r, j):
    """Exact binomial coefficient ``C(r, j)`` for ``0 <= j <= r <= 62``."""
    if int(r) != r or int(j) != j:
        raise DomainError("binomial arguments must be integers")
    r, j = int(r), int(j)
    if r < 0 or j < 0 or j > r:
        raise DomainError(f"binomial needs 0 <= j <= r, got r={r}, j={j}")
    if r > 62:
        raise OverflowError(f"binomial({r}, {j}) is outside the supported range r <= 62")
    return math.comb(r, j)


def log_factorial(n):
    """``ln n!``, exact to rounding for the factorials that fit a double."""
    if int(n) != n or n < 0:
        raise DomainError(f"log_factorial needs a non-negative integer, got {n!r}")
    n = int(n)
    return math.log(math.factorial(n)) if n <= 170 else log_gamma(n + 1.0)
