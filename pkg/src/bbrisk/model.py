"""Problem parameterization and normalization.

Every downstream estimator works on the canonical form: horizon 1, first
barrier u > 0, second barrier a*u with a <= 1.  The two transformations here
(horizon rescaling and coordinate relabeling) preserve the simultaneous ruin
probability exactly, so all branch selection happens in one place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidBarrierError, InvalidHorizonError, InvalidTaxError


def _check_tax(gamma: float, name: str) -> None:
    if not 0.0 <= gamma < 2.0:
        raise InvalidTaxError(f"{name} must lie in [0, 2), got {gamma}")


@dataclass(frozen=True)
class ModelParams:
    """Full problem instance: premium rates, tax rates, horizon and barriers.

    The risk processes are X_i(t) = B_i(t) - c_i t - gamma_i * inf_{s<=t}(B_i(s) - c_i s)
    and ruin means X_1(t) > u1 and X_2(t) > u2 at the same t in [0, T].
    """

    c1: float
    c2: float
    gamma1: float
    gamma2: float
    T: float
    u1: float
    u2: float

    def __post_init__(self) -> None:
        _check_tax(self.gamma1, "gamma1")
        _check_tax(self.gamma2, "gamma2")
        if not self.T > 0:
            raise InvalidHorizonError(f"T must be positive, got {self.T}")
        if not self.u1 > 0:
            raise InvalidBarrierError(f"u1 must be positive, got {self.u1}")


@dataclass(frozen=True)
class CanonicalProblem:
    """Horizon-1 instance with barriers (u, a*u) and a <= 1.

    canonicalize always produces u > 0; a nonpositive u is tolerated here so
    estimators can exercise the degenerate always-ruined case (both barriers
    negative), but the asymptotic formulas reject it.
    """

    u: float
    a: float
    c1: float
    c2: float
    gamma1: float
    gamma2: float

    def __post_init__(self) -> None:
        _check_tax(self.gamma1, "gamma1")
        _check_tax(self.gamma2, "gamma2")
        if not self.a <= 1:
            raise InvalidBarrierError(f"barrier ratio a must be <= 1, got {self.a}")


def normalize_horizon(p: ModelParams) -> ModelParams:
    """Rescale to horizon 1; the ruin probability is exactly preserved.

    B(Tt) has the law of sqrt(T) B(t), so crossing u with drift c on [0, T]
    is the same event as crossing u/sqrt(T) with drift c*sqrt(T) on [0, 1].
    Tax rates are dimensionless and unchanged.
    """
    if p.T == 1.0:
        return p
    s = math.sqrt(p.T)
    return replace(p, T=1.0, u1=p.u1 / s, u2=p.u2 / s, c1=p.c1 * s, c2=p.c2 * s)


def canonicalize(p: ModelParams) -> CanonicalProblem:
    """Reduce a horizon-1 instance to barriers (u, a*u) with a <= 1.

    If u2 > u1 the coordinates are relabeled (the model is symmetric in its
    components), so the larger barrier always sits in the first coordinate.
    The sign of a is preserved exactly: it selects the asymptotic branch.
    """
    if p.T != 1.0:
        raise InvalidHorizonError("canonicalize requires T=1; call normalize_horizon first")
    if p.u2 > p.u1:
        # swap guaranteed safe: u2 > u1 > 0
        return CanonicalProblem(u=p.u2, a=p.u1 / p.u2, c1=p.c2, c2=p.c1,
                                gamma1=p.gamma2, gamma2=p.gamma1)
    return CanonicalProblem(u=p.u1, a=p.u2 / p.u1, c1=p.c1, c2=p.c2,
                            gamma1=p.gamma1, gamma2=p.gamma2)


def canonical_from_params(p: ModelParams) -> CanonicalProblem:
    """normalize_horizon followed by canonicalize."""
    return canonicalize(normalize_horizon(p))
