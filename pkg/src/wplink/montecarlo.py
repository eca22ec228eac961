"""Stochastic oracle for the energy supply probability.

Simulates the frame directly from its definition: one exponential energy
draw Z (mean p_e, fully correlated across the m harvest uses, so the budget
is m*Z) against the energy of n IID Normal(0, p_t) intended symbols.  No
closed-form knowledge enters the sampling path, which is what makes the
estimate usable as an independent check of the analytic expression; it is
also the only truth source in the divergent regime m <= 2a where the closed
form does not exist (the simulator only needs m >= 1).

Streams are counter-based for reproducibility: trial chunk k draws from a
Philox generator keyed by (seed, k), so any execution order, including
parallel, produces the same estimate.  Philox has a period above 2^128 per
key and passes the standard statistical batteries.  Exponentials come from
the inverse CDF, -mean * ln(U) with U uniform on (0, 1] (formed as
log1p(-random()) so the open endpoint is exact); normals use the generator's
exact ziggurat method.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_DEFAULT_CHUNK = 1 << 16
# Normals are drawn in row blocks of this many trials to bound slab memory;
# splitting a (trials x n) draw by rows leaves the stream values unchanged.
_ROW_BLOCK = 8192


@dataclass(frozen=True)
class McConfig:
    """Sampling plan: trial count, stream seed, trials per chunk.

    The estimate is a deterministic function of (samples, seed, chunk_size)
    no matter how chunks are scheduled.
    """

    samples: int
    seed: int
    chunk_size: int = _DEFAULT_CHUNK

    def __post_init__(self) -> None:
        if not (isinstance(self.samples, int) and self.samples >= 1):
            raise DomainError(f"samples must be an integer >= 1, got {self.samples!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 1 << 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if not (isinstance(self.chunk_size, int) and self.chunk_size >= 1):
            raise DomainError(f"chunk_size must be an integer >= 1, got {self.chunk_size!r}")


@dataclass(frozen=True)
class McEstimate:
    """Estimated probability with its binomial standard error."""

    p_hat: float
    std_err: float
    samples: int


def _validate(m: float, n: int, p_e: float, p_t: float) -> None:
    if not m >= 1:
        raise DomainError(f"m must be >= 1, got {m!r}")
    if not (isinstance(n, int) and n >= 1):
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    if not p_e > 0:
        raise DomainError(f"p_e must be > 0, got {p_e!r}")
    if not p_t >= 0:
        raise DomainError(f"p_t must be >= 0, got {p_t!r}")


def _chunk_plan(cfg: McConfig) -> list[tuple[int, int]]:
    """(chunk index, trials in chunk) pairs covering cfg.samples."""
    plan = []
    k, left = 0, cfg.samples
    while left > 0:
        t = min(cfg.chunk_size, left)
        plan.append((k, t))
        left -= t
        k += 1
    return plan


def _chunk_success_count(
    m: float,
    n: int,
    p_e: float,
    p_t: float,
    seed: int,
    chunk_index: int,
    trials: int,
    prefix: bool = False,
) -> int:
    """Successes in one deterministic chunk of trials.

    prefix=False compares the total codeword energy against the budget;
    prefix=True requires every partial sum of symbol energies to fit, which
    for non-negative terms is decided by the largest prefix, hence by the
    running maximum of the cumulative sums.
    """
    rng = np.random.Generator(
        np.random.Philox(key=np.array([seed, chunk_index], dtype=np.uint64))
    )
    budget = m * (-p_e * np.log1p(-rng.random(trials)))
    successes = 0
    for lo in range(0, trials, _ROW_BLOCK):
        hi = min(lo + _ROW_BLOCK, trials)
        x = rng.standard_normal((hi - lo, n))
        if prefix:
            np.square(x, out=x)
            peak = np.max(np.cumsum(x, axis=1), axis=1)
            successes += int(np.count_nonzero(p_t * peak <= budget[lo:hi]))
        else:
            energy = np.einsum("ij,ij->i", x, x)
            successes += int(np.count_nonzero(p_t * energy <= budget[lo:hi]))
    return successes


def _estimate(successes: int, samples: int) -> McEstimate:
    p = successes / samples
    return McEstimate(p_hat=p, std_err=math.sqrt(p * (1.0 - p) / samples), samples=samples)


def simulate_supply_probability(
    m: float, n: int, p_e: float, p_t: float, cfg: McConfig
) -> McEstimate:
    """Estimate Pr[sum of n symbol energies <= m*Z] by direct simulation."""
    _validate(m, n, p_e, p_t)
    total = sum(
        _chunk_success_count(m, n, p_e, p_t, cfg.seed, k, t) for k, t in _chunk_plan(cfg)
    )
    return _estimate(total, cfg.samples)


def simulate_prefix_constraints(
    m: float, n: int, p_e: float, p_t: float, cfg: McConfig
) -> McEstimate:
    """Estimate the probability that every energy prefix fits the budget.

    Checks all n partial-sum constraints against the same m*Z budget.  The
    partial sums of non-negative terms peak at the full sum, so under a
    shared cfg this must reproduce simulate_supply_probability success for
    success; the pair of estimators exists to validate exactly that
    simplification.
    """
    _validate(m, n, p_e, p_t)
    total = sum(
        _chunk_success_count(m, n, p_e, p_t, cfg.seed, k, t, prefix=True)
        for k, t in _chunk_plan(cfg)
    )
    return _estimate(total, cfg.samples)
