"""Right-hand sides of the Jackson-type inequalities and their constants.

Every statement's bound is ``prefactor · ξ^{xi_power} · ω`` where ``ω`` is the
modulus of smoothness supplied by the caller.  Prefactors are ξ-free apart
from the explicit power, so the ξ-free part is cached per parameter tuple.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .kernel import KernelParams, halfline_moment
from .operators import OperatorParams
from .quad import QuadratureSpec, halfline_edges, integrate_batch
from .specfun import binomial, log_gamma, log_gamma_ratio

STATEMENTS = ("thm1", "thm2", "prop1", "prop2", "thm3", "thm4", "prop3", "prop4")

#: (ω order r, derivative order used in ω, p-family) for each statement
MODULUS_SPEC = {
    "thm1": ("r", "n", "p"),
    "thm2": ("r", "n", 1),
    "prop1": ("r", 0, "p"),
    "prop2": ("r", 0, 1),
    "thm3": (2, "n", "p"),
    "thm4": (2, "n", 1),
    "prop3": (2, 0, "p"),
    "prop4": (2, 0, 1),
}

_CONST_SPEC = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-11, max_subdivisions=4000, tail_tol=1e-14)


@dataclass(frozen=True)
class BoundReport:
    statement_id: str
    params: OperatorParams
    constraint_ok: bool
    constant_values: dict = field(default_factory=dict)
    prefactor: float | None = None
    xi_power: int = 0
    bound_value: float | None = None
    modulus_value: float = 0.0

    def to_dict(self):
        op = self.params
        return {
            "statement": self.statement_id,
            "params": {"p": op.p, "n": op.n, "r": op.r, "alpha": op.alpha, "beta": op.beta, "xi": op.xi},
            "constraint_ok": self.constraint_ok,
            "constants": dict(self.constant_values),
            "prefactor": self.prefactor,
            "xi_power": self.xi_power,
            "bound": self.bound_value,
            "omega": self.modulus_value,
        }


def modulus_order(statement_id, op):
    """``(r, k, p)`` such that the statement's ω is ``ω_r(f^{(k)}, ξ)_p``."""
    r, k, p = MODULUS_SPEC[statement_id]
    return (op.r if r == "r" else r, op.n if k == "n" else k, op.p if p == "p" else float(p))


def conjugate(p):
    if not p > 1.0:
        raise DomainError(f"the Hölder conjugate needs p > 1, got {p}")
    return p / (p - 1.0)


# ---------------------------------------------------------------------------
# quadrature-defined constants


def _powered_kernel_integral(exponent, power, alpha, beta_eff, subtract_one):
    """``∫_0^∞ [(1+u)^a (-1)] u^{power-1} / (u^{2α}+1)^{β'} du`` by adaptive quadrature.

    ``(1+u)^a - 1`` is formed as ``expm1(a·log1p(u))`` so small ``u`` keeps
    full relative accuracy.
    """
    decay = 2 * alpha * beta_eff - exponent - power + 1.0
    if not decay > 1.0:
        raise DomainError(
            f"integral diverges: integrand decays like u^-{decay:g} (needs > 1)"
        )

    def integrand(u, owner=None):
        lg = exponent * np.log1p(u)
        head = np.expm1(lg) if subtract_one else np.exp(lg)
        with np.errstate(divide="ignore"):
            logu = np.log(u)
        big = np.maximum(u, 1.0)
        small = np.minimum(u, 1.0)
        log_den = beta_eff * (2 * alpha * np.log(big) + np.log1p((small / big) ** (2 * alpha)))
        body = np.exp((power - 1.0) * logu - log_den) if power != 1 else np.exp(-log_den)
        return head * body

    # tail beyond R: integrand <= 2^a · u^{a + power - 1 - 2αβ'} for u >= 1
    log_r = (exponent * math.log(2.0) - math.log(decay - 1.0) - math.log(_CONST_SPEC.tail_tol * 1e-3)) / (decay - 1.0)
    radius = max(16.0, math.exp(min(log_r, 700.0)))
    extra = [2.0 ** -k for k in range(1, 40)]  # resolve the u^{power-1} behaviour near 0
    edges = halfline_edges(radius, extra=extra)
    values, _ = integrate_batch(integrand, [edges], _CONST_SPEC)
    return float(values[0])


@lru_cache(maxsize=None)
def tau_constant(p, n, r, alpha, beta):
    """``∫_0^∞ ((1+u)^{rp+1} - 1) u^{np-1} / (u^{2α}+1)^{pβ/2} du``."""
    _need(p > 1 and n >= 1 and r >= 1 and beta > (1.0 / p + n + r) / alpha, "thm1", p, n, r, alpha, beta)
    return _powered_kernel_integral(r * p + 1.0, n * p, alpha, p * beta / 2.0, True)


@lru_cache(maxsize=None)
def tau_tilde(p, n, alpha, beta):
    """``∫_0^∞ ((1+u)^{2p+1} - 1) u^{pn-1} / (1+u^{2α})^{pβ/2} du``."""
    _need(p > 1 and n >= 2 and n % 2 == 0 and beta > (1.0 / p + n + 2) / alpha, "thm3", p, n, 2, alpha, beta)
    return _powered_kernel_integral(2 * p + 1.0, n * p, alpha, p * beta / 2.0, True)


@lru_cache(maxsize=None)
def theta(p, r, alpha, beta):
    """``∫_0^∞ (1+t)^{rp} / (t^{2α}+1)^{pβ/2} dt``."""
    _need(p > 1 and r >= 1 and beta > (r + 1.0 / p) / alpha, "prop1", p, 0, r, alpha, beta)
    return _powered_kernel_integral(r * p, 1.0, alpha, p * beta / 2.0, False)


@lru_cache(maxsize=None)
def rho(p, alpha, beta):
    """``∫_0^∞ (1+y)^{2p} / (y^{2α}+1)^{βp/2} dy``."""
    _need(p > 1 and beta > (2 + 1.0 / p) / alpha, "prop3", p, 0, 2, alpha, beta)
    return _powered_kernel_integral(2 * p, 1.0, alpha, p * beta / 2.0, False)


@lru_cache(maxsize=None)
def prop2_integral(r, alpha, beta):
    """``∫_0^∞ (1+t)^r / (t^{2α}+1)^β dt`` as a finite sum of half-line moments."""
    _need(beta > (r + 1) / (2 * alpha), "prop2", 1.0, 0, r, alpha, beta)
    return math.fsum(binomial(r, k) * halfline_moment(k + 1, alpha, beta) for k in range(r + 1))


def prop2_integral_quadrature(r, alpha, beta):
    _need(beta > (r + 1) / (2 * alpha), "prop2", 1.0, 0, r, alpha, beta)
    return _powered_kernel_integral(float(r), 1.0, alpha, beta, False)


def expansion_value(exponent, power, alpha, beta_eff, subtract_one):
    """The same integrals for integer ``exponent``: binomial sums of half-line moments."""
    if int(exponent) != exponent:
        raise DomainError("the binomial expansion needs an integer exponent")
    a = int(exponent)
    start = 1 if subtract_one else 0
    return math.fsum(binomial(a, k) * halfline_moment(k + power, alpha, beta_eff) for k in range(start, a + 1))


def lambda_expansion(n, r, alpha, beta, xi):
    """``λ = ξ^{n-2αβ} Σ_{k=1}^{r+1} C(r+1,k) K_{n+k}``."""
    s = math.fsum(binomial(r + 1, k) * halfline_moment(n + k, alpha, beta) for k in range(1, r + 2))
    return xi ** (n - 2 * alpha * beta) * s


def lambda_quadrature(n, r, alpha, beta, xi):
    """``∫_0^∞ ((1+t/ξ)^{r+1} - 1) t^{n-1} / (t^{2α}+ξ^{2α})^β dt`` after ``t = ξu``."""
    val = _powered_kernel_integral(r + 1.0, float(n), alpha, beta, True)
    return xi ** (n - 2 * alpha * beta) * val


# ---------------------------------------------------------------------------
# bounds


def _need(ok, sid, p, n, r, alpha, beta):
    if not ok:
        raise DomainError(
            f"{sid} hypothesis fails for p={p:g}, n={n}, r={r}, alpha={alpha}, beta={beta:g}"
        )


def _lg(x):
    return log_gamma(x)


@lru_cache(maxsize=None)
def _prefactor(sid, p, n, r, alpha, beta):
    """ξ-free prefactor and named constants; assumes the constraint holds."""
    a, b = alpha, beta
    consts = {}
    g_half = _lg(1.0 / (2 * a))
    g_shift = _lg(b - 1.0 / (2 * a))
    if sid in ("thm1", "prop1", "thm3", "prop3"):
        q = conjugate(p)
        g_q = _lg(q * b / 2.0 - 1.0 / (2 * a)) / q - _lg(q * b / 2.0) / q
        consts["q"] = q
        if sid == "thm1":
            t = tau_constant(p, n, r, a, b)
            consts["tau"] = t
            log_pref = (math.log(2 * a) / p + _lg(b) + g_q + math.log(t) / p - g_half / p - g_shift
                        - math.log(r * p + 1.0) / p - math.lgamma(n) - math.log(q * (n - 1) + 1.0) / q)
        elif sid == "prop1":
            t = theta(p, r, a, b)
            consts["theta"] = t
            log_pref = math.log(2 * a) / p + _lg(b) + g_q + math.log(t) / p - g_half / p - g_shift
        elif sid == "thm3":
            t = tau_tilde(p, n, a, b)
            consts["tau_tilde"] = t
            log_pref = (math.log(t) / p + math.log(a) / p + g_q + _lg(b) - math.log(2.0) / q - g_half / p
                        - g_shift - math.log(q * (n - 1) + 1.0) / q - math.log(2 * p + 1.0) / p - math.lgamma(n))
        else:
            t = rho(p, a, b)
            consts["rho"] = t
            log_pref = math.log(t) / p + _lg(b) + math.log(a) / p + g_q - math.log(2.0) / q - g_half / p - g_shift
        return math.exp(log_pref), consts
    if sid == "thm2":
        terms = [binomial(r + 1, k) * math.exp(log_gamma_ratio([(n + k) / (2 * a), b - (n + k) / (2 * a)],
                                                                [1.0 / (2 * a), b - 1.0 / (2 * a)]))
                 for k in range(1, r + 2)]
        consts["bracket_ratio"] = math.fsum(terms)
        lam_exact = lambda_expansion(n, r, a, b, 1.0)
        consts["lambda_check"] = abs(lambda_quadrature(n, r, a, b, 1.0) - lam_exact) / lam_exact
        return consts["bracket_ratio"] / ((r + 1) * math.factorial(n - 1)), consts
    if sid == "prop2":
        integral = prop2_integral(r, a, b)
        consts["integral"] = integral
        return 2 * a * math.exp(log_gamma_ratio([b], [1.0 / (2 * a), b - 1.0 / (2 * a)])) * integral, consts
    if sid == "thm4":
        coef = (3, 3, 1)
        terms = [c * math.exp(log_gamma_ratio([(n + k) / (2 * a), b - (n + k) / (2 * a)],
                                              [1.0 / (2 * a), b - 1.0 / (2 * a)]))
                 for k, c in zip((1, 2, 3), coef)]
        consts["bracket_ratio"] = math.fsum(terms)
        return consts["bracket_ratio"] / (6.0 * math.factorial(n - 1)), consts
    if sid == "prop4":
        ratio = lambda s: math.exp(log_gamma_ratio([s, b - s], [1.0 / (2 * a), b - 1.0 / (2 * a)]))
        return 0.5 + ratio(1.0 / a) + 0.5 * ratio(3.0 / (2 * a)), consts
    raise KeyError(sid)


_XI_POWER = {"thm1": "n", "thm2": "n", "thm3": "n", "thm4": "n"}


def bound(statement_id, op, omega):
    """Evaluate one statement's right-hand side; a failed hypothesis yields no bound."""
    if statement_id not in STATEMENTS:
        raise KeyError(f"unknown statement {statement_id!r}; choose from {', '.join(STATEMENTS)}")
    if omega < 0:
        raise DomainError(f"omega must be >= 0, got {omega}")
    ok = op.constraints()[statement_id]
    xi_power = op.n if statement_id in _XI_POWER else 0
    if not ok:
        return BoundReport(statement_id, op, False, {}, None, xi_power, None, float(omega))
    p = op.p if statement_id in ("thm1", "prop1", "thm3", "prop3") else 1.0
    n = op.n if statement_id in _XI_POWER else 0
    r = op.r if statement_id in ("thm1", "thm2", "prop1", "prop2") else 2
    pref, consts = _prefactor(statement_id, float(p), n, r, op.alpha, float(op.beta))
    value = pref * op.xi ** xi_power * omega
    return BoundReport(statement_id, op, True, dict(consts), pref, xi_power, value, float(omega))


def thm1_bound(op, omega):
    return bound("thm1", op, omega)


def thm2_bound(op, omega):
    return bound("thm2", op, omega)


def prop1_bound(op, omega):
    return bound("prop1", op, omega)


def prop2_bound(op, omega):
    return bound("prop2", op, omega)


def thm3_bound(op, omega):
    return bound("thm3", op, omega)


def thm4_bound(op, omega):
    return bound("thm4", op, omega)


def prop3_bound(op, omega):
    return bound("prop3", op, omega)


def prop4_bound(alpha, beta, omega, xi=1.0):
    """Prop 4 depends only on ``(α, β)``; ``xi`` is carried for the report."""
    return bound("prop4", OperatorParams(2, 0, KernelParams(alpha, beta, xi), 1.0), omega)
