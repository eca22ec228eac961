"""System parameters and the closed-form energy supply probability family.

The link under study splits each frame into m harvest channel uses followed
by n transmit channel uses.  The harvested budget is m*Z with Z exponential
(mean P_E, arrivals fully correlated within a frame); the intended codeword
spends sum(X_i^2) with X_i IID Normal(0, P_t).  The probability that the
budget covers the codeword has the closed form

    P_es(m, n, a) = (1 + 2a/m)^(-n/2),      a = P_t / P_E,  m > 2a.

For m <= 2a the underlying moment generating function diverges and the
closed form is invalid; the Monte Carlo estimator in `wplink.montecarlo`
remains the only truth source there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of a wireless-powered link.

    p_e: average harvested power (energy per channel use, > 0)
    p_t: transmit power (> 0)
    sigma2: receiver noise variance (> 0)
    epsilon: target decoding error probability, in [0, 1)
    """

    p_e: float
    p_t: float
    sigma2: float
    epsilon: float

    def __post_init__(self) -> None:
        if not self.p_e > 0:
            raise DomainError(f"p_e must be > 0, got {self.p_e!r}")
        if not self.p_t > 0:
            raise DomainError(f"p_t must be > 0, got {self.p_t!r}")
        if not self.sigma2 > 0:
            raise DomainError(f"sigma2 must be > 0, got {self.sigma2!r}")
        if not 0.0 <= self.epsilon < 1.0:
            raise DomainError(f"epsilon must lie in [0, 1), got {self.epsilon!r}")

    @property
    def a(self) -> float:
        """Power ratio a = P_t / P_E."""
        return self.p_t / self.p_e

    @property
    def gamma(self) -> float:
        """Channel SNR gamma = P_t / sigma^2."""
        return self.p_t / self.sigma2


@dataclass(frozen=True)
class Blocklengths:
    """Harvest blocklength m and transmit blocklength n, in channel uses.

    A frame on the air uses whole channel uses, so n is an integer and m is
    normally one too.  m is stored as a real because the constraint algebra
    (proportional-scaling limits, feasibility boundary inversions) is smooth
    in m and evaluating it at real-valued m avoids spurious rounding
    artifacts; integer rounding is applied where a concrete frame is built.
    """

    m: float
    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if not self.m >= 1:
            raise DomainError(f"m must be >= 1, got {self.m!r}")

    @property
    def total(self) -> float:
        return self.m + self.n


def _clamp01(p: float) -> float:
    # absorb float roundoff; callers rely on valid probabilities
    return 0.0 if p < 0.0 else 1.0 if p > 1.0 else p


def energy_supply_probability(m: float, n: float, a: float) -> float:
    """Probability (1 + 2a/m)^(-n/2) that the harvested budget covers the codeword.

    Valid for m > 2a; outside that the closed form does not exist and a
    DomainError is raised.  Strictly decreasing in n and a, strictly
    increasing in m.  Evaluated as exp(-(n/2)*log1p(2a/m)) so that tiny
    ratios 2a/m lose no precision.
    """
    if not m > 0 or n < 0 or a < 0:
        raise DomainError(f"need m > 0, n >= 0, a >= 0, got m={m!r} n={n!r} a={a!r}")
    if not m > 2.0 * a:
        raise DomainError(
            f"m <= 2a: closed form invalid (requires m > 2a), got m={m!r} a={a!r}"
        )
    return _clamp01(math.exp(-0.5 * n * math.log1p(2.0 * a / m)))


def energy_outage_probability(m: float, n: float, a: float) -> float:
    """Complement 1 - energy_supply_probability(m, n, a)."""
    return _clamp01(1.0 - energy_supply_probability(m, n, a))


def min_power_ratio_for_supply(m: float, n: float, rho: float) -> float:
    """Largest power ratio a that still sustains supply probability rho.

    Inverts the closed form: a = (m/2) * (rho^(-2/n) - 1).  Plugging the
    result back into energy_supply_probability returns rho up to roundoff
    (the pairing expm1/log1p keeps the round trip at the 1e-12 level even
    for rho near 1).  Linear in m for fixed (n, rho): doubling the harvest
    phase doubles the affordable transmit power.
    """
    if not m >= 1 or not n >= 1:
        raise DomainError(f"need m >= 1 and n >= 1, got m={m!r} n={n!r}")
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho!r}")
    return 0.5 * m * math.expm1((-2.0 / n) * math.log(rho))


def asymptotic_supply_limit(a: float, c: float) -> float:
    """Limit of the supply probability when m grows proportionally to n.

    Along m = c*n the supply probability converges to exp(-a/c) as n grows,
    so outage never vanishes under (at best) linear blocklength scaling.
    Note the approach direction: since log1p(x) < x for x > 0, every finite-n
    value (1 + 2a/(c n))^(-n/2) exceeds exp(-a/c) and the sequence decreases
    toward the limit, which is therefore a lower bound at finite n.
    """
    if not a > 0 or not c > 0:
        raise DomainError(f"need a > 0 and c > 0, got a={a!r} c={c!r}")
    return math.exp(-a / c)
