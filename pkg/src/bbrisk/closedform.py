"""Exact and asymptotic ruin formulas.

One-dimensional closed forms for the classical Brownian risk model, the
tail approximant for the tax-reflected process, and the two branches of the
bivariate large-barrier approximation with its closed-form constant for
a <= 0.  Tail products are assembled in log space so the approximants stay
usable far into the regime where the Gaussian density underflows.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy.special import log_ndtr, ndtr

from .errors import (DivergentCaseError, InvalidHorizonError, InvalidInputError,
                     InvalidTaxError, OutOfRegimeError, WrongBranchError)
from .model import CanonicalProblem

LOG_2PI = math.log(2.0 * math.pi)
SQRT_2PI = math.sqrt(2.0 * math.pi)


class Branch(enum.Enum):
    A_POSITIVE = "a_positive"
    A_ZERO = "a_zero"
    A_NEGATIVE = "a_negative"


def branch_of(a: float) -> Branch:
    # exact sign comparison: no tolerance band around a=0, the a=0 convention
    # (Phi* = Phi) applies only when a is exactly zero
    if a > 0:
        return Branch.A_POSITIVE
    if a == 0:
        return Branch.A_ZERO
    return Branch.A_NEGATIVE


@dataclass(frozen=True)
class AsymptoticApprox:
    """Large-barrier approximation of the simultaneous ruin probability."""

    value: float
    branch: Branch
    constant_used: float


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function (abs err <= 1e-12)."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_sf(x: float) -> float:
    """Upper tail 1 - Phi(x), accurate deep in the tail."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / SQRT_2PI


def gauss_tail_approx(x: float) -> float:
    """Mill's-ratio style tail approximant phi(x)/x (requires x > 0)."""
    if not x > 0:
        raise OutOfRegimeError(f"tail approximant needs a positive argument, got {x}")
    return normal_pdf(x) / x


def ruin_1d_finite(u: float, c: float, T: float) -> float:
    """Exact finite-horizon ruin probability of the classical 1D model.

    P(sup_{[0,T]} (B(t) - ct) > u) = Phi(-u/sqrt(T) - c sqrt(T))
                                     + exp(-2cu) Phi(-u/sqrt(T) + c sqrt(T)).
    """
    if not T > 0:
        raise InvalidHorizonError(f"T must be positive, got {T}")
    sT = math.sqrt(T)
    first = ndtr(-u / sT - c * sT)
    second = math.exp(-2.0 * c * u + log_ndtr(-u / sT + c * sT))
    return min(float(first + second), 1.0)


def ruin_1d_infinite(u: float, c: float) -> float:
    """Infinite-horizon ruin probability exp(-2cu); requires c > 0."""
    if c <= 0:
        raise DivergentCaseError("infinite-horizon ruin probability is 1 for c <= 0")
    if u < 0:
        raise InvalidInputError(f"u must be nonnegative, got {u}")
    return math.exp(-2.0 * c * u)


def ruin_1d_reflected_asym(u: float, c: float, gamma: float, T: float) -> float:
    """Large-u approximant 4/(2-gamma) * psi((u+cT)/sqrt(T)) for the taxed 1D model."""
    if not 0.0 <= gamma < 2.0:
        raise InvalidTaxError(f"gamma must lie in [0, 2), got {gamma}")
    if not T > 0:
        raise InvalidHorizonError(f"T must be positive, got {T}")
    x = (u + c * T) / math.sqrt(T)
    if not x > 0:
        raise OutOfRegimeError(f"approximation requires u + cT > 0, got {u + c * T}")
    return 4.0 / (2.0 - gamma) * gauss_tail_approx(x)


def bivariate_tail(u: float, a: float, c1: float, c2: float) -> float:
    """P(B_1(1) > u + c1, B_2(1) > a*u + c2) for independent components."""
    return normal_sf(u + c1) * normal_sf(a * u + c2)


def constant_nonpositive_a(a: float, gamma1: float, c2: float) -> float:
    """Closed-form asymptotic constant for the a <= 0 branch.

    C(a) = 4/(2-gamma1) * sqrt(2 pi) * exp(c2^2/2) * Phi*(-c2), where Phi* is
    identically 1 for a < 0 and the normal CDF for a = 0.
    """
    if a > 0:
        raise WrongBranchError(f"closed-form constant requires a <= 0, got a={a}")
    if not 0.0 <= gamma1 < 2.0:
        raise InvalidTaxError(f"gamma1 must lie in [0, 2), got {gamma1}")
    phi_star = normal_cdf(-c2) if a == 0 else 1.0
    return 4.0 / (2.0 - gamma1) * SQRT_2PI * math.exp(0.5 * c2 * c2) * phi_star


def constant_upper_bound(a: float, gamma1: float, gamma2: float) -> float:
    """Upper bound 16 / (a (2-gamma1) (2-gamma2)) on the a > 0 constant."""
    if a <= 0:
        raise WrongBranchError(f"bound applies to a > 0 only, got a={a}")
    if not (0.0 <= gamma1 < 2.0 and 0.0 <= gamma2 < 2.0):
        raise InvalidTaxError("tax rates must lie in [0, 2)")
    return 16.0 / (a * (2.0 - gamma1) * (2.0 - gamma2))


def log_bivariate_density(x1: float, x2: float) -> float:
    """Log of the standard bivariate normal density at (x1, x2)."""
    return -0.5 * (x1 * x1 + x2 * x2) - LOG_2PI


def asymptotic_psi(prob: CanonicalProblem, C_a: float | None = None) -> AsymptoticApprox:
    """Branch-correct large-barrier approximation of the simultaneous ruin probability.

    a > 0:  C(a) * u^{-2} * phi(u + c1, a*u + c2), C(a) supplied by the caller
            (numerically estimated, see the `constant` module).
    a <= 0: C(a) * u^{-1} * phi(u + c1, c2) with the closed-form constant; a
            caller-supplied C_a is cross-checked against it.
    """
    a, u = prob.a, prob.u
    if not u > 0:
        raise OutOfRegimeError(f"asymptotic approximation requires u > 0, got {u}")
    br = branch_of(a)
    if br is Branch.A_POSITIVE:
        if C_a is None:
            raise InvalidInputError("a > 0 requires a numerically estimated constant")
        if not C_a > 0:
            raise WrongBranchError(f"constant must be positive, got {C_a}")
        log_val = (math.log(C_a) - 2.0 * math.log(u)
                   + log_bivariate_density(u + prob.c1, a * u + prob.c2))
        return AsymptoticApprox(value=math.exp(log_val), branch=br, constant_used=C_a)

    c_closed = constant_nonpositive_a(a, prob.gamma1, prob.c2)
    if C_a is not None and not math.isclose(C_a, c_closed, rel_tol=1e-9):
        raise WrongBranchError(
            f"supplied constant {C_a} disagrees with closed form {c_closed} for a <= 0")
    log_val = (math.log(c_closed) - math.log(u)
               + log_bivariate_density(u + prob.c1, prob.c2))
    return AsymptoticApprox(value=math.exp(log_val), branch=br, constant_used=c_closed)
