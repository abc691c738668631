"""Coefficient scheme of the smooth operators and the induced δ_k sums."""

from dataclasses import dataclass
from fractions import Fraction

from .specfun import binomial


@dataclass(frozen=True)
class CoefficientSet:
    r: int
    n: int
    exact: tuple  # α_0..α_r as Fractions

    @property
    def alphas(self):
        return tuple(float(a) for a in self.exact)

    def delta(self, k):
        """``δ_k = Σ_{j=1}^r α_j j^k`` (exact, returned as float)."""
        return float(sum(a * j ** k for j, a in enumerate(self.exact) if j > 0))

    @property
    def deltas(self):
        return tuple(self.delta(k) for k in range(1, max(self.n, 1) + 1))


def alphas(r, n):
    """α_j = (-1)^{r-j} C(r, j) j^{-n} for j >= 1, and α_0 = 1 - Σ_{j>=1} α_j."""
    if int(r) != r or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    r, n = int(r), int(n)
    tail = [Fraction((-1) ** (r - j) * binomial(r, j), j ** n) for j in range(1, r + 1)]
    return CoefficientSet(r, n, tuple([1 - sum(tail)] + tail))


def difference_coefficients(r):
    """Weights of ``Δ_t^r g(x) = Σ_j (-1)^{r-j} C(r, j) g(x + j t)``."""
    return tuple((-1) ** (r - j) * binomial(r, j) for j in range(r + 1))


def binomial_identity_check(r):
    """Exact integer check of ``-Σ_{j=1}^r (-1)^{r-j} C(r, j) = (-1)^r C(r, 0)``."""
    lhs = -sum((-1) ** (r - j) * binomial(r, j) for j in range(1, r + 1))
    return lhs == (-1) ** r * binomial(r, 0)
