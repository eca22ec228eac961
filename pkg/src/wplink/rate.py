"""Finite-blocklength achievable rate, feasibility region, and power control.

The achievable rate of the save-then-transmit link at error target epsilon,
harvest blocklength m, transmit blocklength n, power ratio a = P_t/P_E and
SNR gamma = P_t/sigma^2 is

    R(eps, m, n, a, gamma)
        = [ (n/2) ln(1 + gamma)
            - sqrt( ((2+eps)/eps) * (gamma/(gamma+1)) * n )
            - n^(1/4) - 1 ] / (n + m)        (nats per channel use)

subject to an energy-feasibility region that couples m, n, a and eps:

    m >= m_min(eps, a) = 2a / (exp(2 L / N) - 1),   L = ln(1 + eps/2),
    n <= n_max(m)      = 2 L / ln(1 + 2a/m),        N = (ln((2+eps)/eps^2))^4,
    n >= N,

where N is the minimum transmit blocklength.  All logarithms are natural;
rates are carried in nats with a bits field derived by dividing by ln 2.

For a fixed gamma the rate evaluated along the n_max boundary converges to
the asymptotic value L_cap(a, eps) * (1/2) ln(1 + gamma), where
L_cap(a, eps) = 1 / (1 + a / ln(1 + eps/2)) is the fraction of AWGN capacity
that survives the harvesting constraint.  The transmit power maximizing that
asymptotic rate has the closed form implemented by optimal_power_asymptotic;
the finite-blocklength optimum has no closed form and is searched for
numerically by optimal_power_finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, OptimizationError
from .model import Blocklengths, SystemParams
from .numerics import lambert_w0, maximize_scalar

_LN2 = math.log(2.0)

# Bracket and tolerance for the finite-regime power search (log-power axis).
_POWER_BRACKET_FLOOR = 1e-6
_POWER_SEARCH_TOL = 1e-6


@dataclass(frozen=True)
class RateResult:
    """Achievable-rate evaluation at one (params, blocklengths) point.

    feasible requires the energy-feasibility region checks (m >= m_min,
    n <= n_max(m), n >= floor(n_min)) to hold and the raw rate expression to
    be non-negative; a negative raw value means the bound is vacuous at
    these blocklengths.  rate_nats is zero whenever the point is outside the
    constraint region or the raw value is negative, so infeasible rows never
    carry a misleading positive number.
    """

    rate_nats: float
    rate_bits: float
    blocklengths: Blocklengths
    feasible: bool


@dataclass(frozen=True)
class FeasibleRegion:
    """Admissible blocklength region at fixed (epsilon, a).

    m_min: smallest harvest blocklength for which some admissible n exists.
    n_min: smallest admissible transmit blocklength (real-valued).
    n_max: callable giving the largest admissible n at harvest length m.
    By construction n_max(m_min) == n_min up to roundoff, and n_max is
    increasing in m.
    """

    m_min: float
    n_min: float
    n_max: Callable[[float], float]


def _lam(epsilon: float) -> float:
    # ln(1 + eps/2), the log-margin the energy constraint must cover
    return math.log1p(0.5 * epsilon)


def _n_min(epsilon: float) -> float:
    return math.log((2.0 + epsilon) / (epsilon * epsilon)) ** 4


def _check_epsilon_open(epsilon: float) -> None:
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon!r}")


def feasible_region(epsilon: float, a: float) -> FeasibleRegion:
    """Blocklength constraints at error target epsilon and power ratio a."""
    _check_epsilon_open(epsilon)
    if not a > 0:
        raise DomainError(f"a must be > 0, got {a!r}")
    lam = _lam(epsilon)
    n_min = _n_min(epsilon)
    m_min = 2.0 * a / math.expm1(2.0 * lam / n_min)

    def n_max(m: float) -> float:
        if not m > 0:
            raise DomainError(f"m must be > 0, got {m!r}")
        return 2.0 * lam / math.log1p(2.0 * a / m)

    return FeasibleRegion(m_min=m_min, n_min=n_min, n_max=n_max)


def achievable_rate(params: SystemParams, bl: Blocklengths) -> RateResult:
    """Finite-blocklength achievable rate at the given frame split.

    Requires epsilon > 0 (the backoff term divides by it) and m > 2a (the
    energy supply probability must exist in closed form).  A raw value below
    zero, or a frame split outside the constraint region, is reported as
    rate 0 and feasible=False.  The minimum-n check uses
    floor(n_min): the smallest whole blocklength satisfying the real-valued
    bound is its ceiling, but the minimum-latency convention selects
    floor(n_min) and is, by construction, admissible here.
    """
    if params.epsilon == 0.0:
        raise DomainError("epsilon = 0 is outside the rate formula's domain")
    a = params.a
    if not bl.m > 2.0 * a:
        raise DomainError(f"m <= 2a: rate undefined, got m={bl.m!r} a={a!r}")

    eps = params.epsilon
    gamma = params.gamma
    n = bl.n
    raw = (
        0.5 * n * math.log1p(gamma)
        - math.sqrt(((2.0 + eps) / eps) * (gamma / (gamma + 1.0)) * n)
        - n**0.25
        - 1.0
    ) / (n + bl.m)

    # Relative slack on the region boundaries: evaluating exactly on the
    # n_max curve round-trips expm1/log1p and can miss by an ulp, which must
    # not flip a boundary point to infeasible.
    slack = 1e-12
    region = feasible_region(eps, a)
    constraints_ok = (
        bl.m >= region.m_min * (1.0 - slack)
        and n <= region.n_max(bl.m) * (1.0 + slack)
        and n >= math.floor(region.n_min)
    )
    rate = max(0.0, raw) if constraints_ok else 0.0
    return RateResult(
        rate_nats=rate,
        rate_bits=rate / _LN2,
        blocklengths=bl,
        feasible=constraints_ok and raw >= 0.0,
    )


def min_latency_blocklengths(epsilon: float, a: float) -> Blocklengths:
    """Smallest admissible frame: n = floor(n_min), m the matching ceiling.

    The harvest length is the larger of the m_min bound and the inversion of
    the n_max constraint at the chosen n, rounded up to a whole channel use.
    Because n is floored below the real n_min, the m_min branch is the one
    that binds; both are computed anyway so the selection stays correct under
    any rounding convention for n.
    """
    region = feasible_region(epsilon, a)
    n = math.floor(region.n_min)
    m_for_n = 2.0 * a / math.expm1((2.0 / n) * _lam(epsilon))
    m = float(math.ceil(max(region.m_min, m_for_n)))
    return Blocklengths(m=m, n=n)


def capacity_awgn(gamma: float) -> float:
    """AWGN channel capacity (1/2) ln(1 + gamma), nats per channel use."""
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma!r}")
    return 0.5 * math.log1p(gamma)


def capacity_loss_factor(a: float, epsilon: float) -> float:
    """Fraction of AWGN capacity surviving the harvesting constraint.

    Equals 1 / (1 + a / ln(1 + eps/2)), in (0, 1]; decreasing in a (more
    transmit power per harvested unit leaves less airtime for data) and
    increasing in epsilon (a laxer error target relaxes the energy margin).
    """
    if a < 0:
        raise DomainError(f"a must be >= 0, got {a!r}")
    _check_epsilon_open(epsilon)
    return 1.0 / (1.0 + a / _lam(epsilon))


def asymptotic_rate(params: SystemParams) -> float:
    """Large-blocklength rate: capacity_loss_factor * capacity_awgn, nats."""
    if params.epsilon == 0.0:
        raise DomainError("epsilon = 0 is outside the asymptotic rate's domain")
    return capacity_loss_factor(params.a, params.epsilon) * capacity_awgn(params.gamma)


def optimal_power_asymptotic(epsilon: float, p_e: float, sigma2: float) -> float:
    """Transmit power maximizing the asymptotic rate, in closed form.

    With x = (p_e / sigma2) * ln(1 + eps/2):

        P_t* = sigma2 * ( (x - 1) / W0((x - 1) * e^(-1)) - 1 )

    The Lambert argument (x-1)/e is always inside W0's domain: x > 0, so
    x - 1 > -1 and (x - 1)/e > -1/e.  At x = 1 the ratio tends to its limit
    sigma2 * (e - 1) because W0(y) ~ y near 0; we switch to that limit inside
    |x - 1| < 1e-9 where the direct quotient would lose all precision.
    """
    _check_epsilon_open(epsilon)
    if not p_e > 0 or not sigma2 > 0:
        raise DomainError(f"need p_e > 0 and sigma2 > 0, got p_e={p_e!r} sigma2={sigma2!r}")
    x = (p_e / sigma2) * _lam(epsilon)
    if abs(x - 1.0) < 1e-9:
        return sigma2 * (math.e - 1.0)
    return sigma2 * ((x - 1.0) / lambert_w0((x - 1.0) * math.exp(-1.0)) - 1.0)


def _min_latency_rate(epsilon: float, p_e: float, p_t: float, sigma2: float) -> RateResult:
    bl = min_latency_blocklengths(epsilon, p_t / p_e)
    return achievable_rate(SystemParams(p_e=p_e, p_t=p_t, sigma2=sigma2, epsilon=epsilon), bl)


def optimal_power_finite(
    epsilon: float, p_e: float, sigma2: float
) -> tuple[float, RateResult]:
    """Numerically optimal transmit power in the finite-blocklength regime.

    Maximizes the minimum-latency achievable rate over P_t, re-deriving the
    blocklengths for every candidate power since the power ratio reshapes
    the feasible region.  The search runs over log(P_t) in the bracket
    [1e-6 * sigma2, p_e * max(1, 10 ln(1 + eps/2))] (pre-scan plus
    golden-section, relative tolerance 1e-6).  The closed-form asymptotic
    optimum is always evaluated as an extra candidate, so the returned rate
    is never below the rate at the asymptotic power.  Raises
    OptimizationError when no power in the bracket yields a positive rate.
    """
    _check_epsilon_open(epsilon)
    if not p_e > 0 or not sigma2 > 0:
        raise DomainError(f"need p_e > 0 and sigma2 > 0, got p_e={p_e!r} sigma2={sigma2!r}")

    lo = math.log(_POWER_BRACKET_FLOOR * sigma2)
    hi = math.log(p_e * max(1.0, 10.0 * _lam(epsilon)))
    if not lo < hi:
        raise OptimizationError("degenerate power bracket")

    def rate_at_log_power(u: float) -> float:
        return _min_latency_rate(epsilon, p_e, math.exp(u), sigma2).rate_nats

    u_star, _ = maximize_scalar(rate_at_log_power, lo, hi, tol=_POWER_SEARCH_TOL)
    candidates = [math.exp(u_star)]
    p_asym = optimal_power_asymptotic(epsilon, p_e, sigma2)
    if lo <= math.log(p_asym) <= hi:
        candidates.append(p_asym)

    best_p, best = None, None
    for p_t in candidates:
        res = _min_latency_rate(epsilon, p_e, p_t, sigma2)
        if best is None or res.rate_nats > best.rate_nats:
            best_p, best = p_t, res
    assert best_p is not None and best is not None
    if best.rate_nats <= 0.0:
        raise OptimizationError(
            f"no transmit power in the bracket achieves a positive rate "
            f"(epsilon={epsilon!r}, p_e={p_e!r}, sigma2={sigma2!r})"
        )
    return best_p, best
