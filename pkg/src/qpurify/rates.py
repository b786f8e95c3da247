"""Analytic rates: repeaterless capacity, heralded-state entanglement, and the
single-shot / iterative purification rates with their optimality diagnostics.

All rates are in ebits per channel use, where one use of the protocol
transmits ``m`` rails at once (hence the 1/m normalisations).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .combinatorics import (
    CodeParams,
    SqueezingSpec,
    herald_prob_bob,
    log2_comb,
    log2_multiset_dim,
    log_herald_prob_bob,
    multiset_dim,
    tmsv_entropy,
)

DEFAULT_SEQUENCE_CAP = 10_000_000


class SequenceCapError(ValueError):
    """The constrained outcome enumeration grew past the configured cap."""


class ConvergenceError(RuntimeError):
    """A truncated series failed to reach the requested tolerance."""


@dataclass(frozen=True)
class LinkSpec:
    """A fiber link: total distance and loss coefficient (dB/km)."""

    distance_km: float
    loss_db_per_km: float = 0.2

    def __post_init__(self) -> None:
        if self.distance_km < 0:
            raise ValueError(f"distance must be nonnegative, got {self.distance_km}")
        if self.loss_db_per_km <= 0:
            raise ValueError(f"loss must be positive, got {self.loss_db_per_km}")

    @property
    def eta(self) -> float:
        """Transmissivity of the link, 10^(-loss*distance/10)."""
        return 10.0 ** (-self.loss_db_per_km * self.distance_km / 10.0)


@dataclass(frozen=True)
class RateResult:
    """A rate figure together with its context.

    ``capacity`` may be ``math.inf`` (zero-distance link); in that case
    ``ratio`` is reported as 0.0 rather than propagating infinities.
    """

    rate: float
    probability: float
    entanglement: float
    capacity: float
    ratio: float = field(init=False)

    def __post_init__(self) -> None:
        ratio = 0.0 if math.isinf(self.capacity) else (
            self.rate / self.capacity if self.capacity > 0 else 0.0
        )
        object.__setattr__(self, "ratio", ratio)


@dataclass(frozen=True)
class IterativeRateResult(RateResult):
    """Iterative-protocol rate with per-round breakdown.

    ``per_round[n-1]`` holds (success probability mass, rate contribution) of
    round ``n``; ``residual_failure_prob`` is the outcome mass still unpurified
    after the last round (reported, never silently folded into the rate).
    """

    per_round: tuple[tuple[float, float], ...] = ()
    residual_failure_prob: float = 0.0


@dataclass(frozen=True)
class RoundOutcome:
    """A constrained record of (k_n, j_n) photon counts across rounds."""

    rounds: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        ks = [k for k, _ in self.rounds]
        js = [j for _, j in self.rounds]
        if any(k < 0 or j < 0 for k, j in self.rounds):
            raise ValueError("photon counts must be nonnegative")
        if any(j > k for k, j in self.rounds):
            raise ValueError("a round cannot detect more photons than were sent")
        for s in range(len(self.rounds) - 1):
            if ks[s] < ks[s + 1] or js[s] < js[s + 1]:
                raise ValueError("photon counts cannot grow between rounds")
            if ks[s] - ks[s + 1] < js[s] - js[s + 1]:
                raise ValueError("discarded rail cannot gain photons in transit")
            if ks[s] == js[s]:
                raise ValueError("only the terminal round may have k == j")

    @property
    def is_success(self) -> bool:
        k, j = self.rounds[-1]
        return k == j


def plob_capacity(eta: float) -> float:
    """Two-way assisted capacity of the pure-loss channel, -log2(1-eta).

    Returns ``math.inf`` at eta=1; callers must treat that as a signal value
    and keep it out of arithmetic.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    if eta == 1.0:
        return math.inf
    return -math.log2(1.0 - eta)


def rci_heralded(k: int, j: int, m: int) -> float:
    """Distillable-entanglement lower bound of the (k, j) heralded state.

    log2[C(k+m-1, k) / C(k-j+m-1, k-j)].  Takes no transmissivity or
    squeezing argument: the heralded state does not depend on either.
    """
    if not 0 <= j <= k:
        raise ValueError(f"need 0 <= j <= k, got j={j}, k={k}")
    if m < 1:
        raise ValueError(f"need at least one rail, got m={m}")
    return log2_comb(k + m - 1, k) - log2_comb(k - j + m - 1, k - j)


def single_shot_rate(p: CodeParams, eta: float) -> RateResult:
    """Rate of one-round purification post-selected on no photons lost."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    entanglement = log2_multiset_dim(p)
    probability = eta**p.k
    return RateResult(
        rate=probability * entanglement / p.m,
        probability=probability,
        entanglement=entanglement,
        capacity=plob_capacity(eta),
    )


def optimize_single_shot(
    eta: float, k_max: int, m_max: int
) -> tuple[CodeParams, RateResult]:
    """Exhaustive argmax of the single-shot rate over 1<=k<=k_max, 2<=m<=m_max.

    Ties go to the smaller k, then the smaller m (scanning order guarantees
    this: a later candidate must be strictly better to win).
    """
    if k_max < 1 or m_max < 2:
        raise ValueError("need k_max >= 1 and m_max >= 2")
    best: tuple[CodeParams, RateResult] | None = None
    for k in range(1, k_max + 1):
        for m in range(2, m_max + 1):
            p = CodeParams(k, m)
            r = single_shot_rate(p, eta)
            if best is None or r.rate > best[1].rate:
                best = (p, r)
    assert best is not None
    return best


def _outcome_weight(seq: list[tuple[int, int]], m: int, eta: float) -> float:
    """Probability of one full outcome sequence, Alice's round prepared offline."""
    k1, j1 = seq[0]
    n = len(seq)
    kn, jn = seq[-1]
    weight = multiset_dim(CodeParams(kn, m - n + 1)) * math.comb(kn, jn)
    for s in range(n - 1):
        ks, js = seq[s]
        kt, jt = seq[s + 1]
        weight *= math.comb(ks - kt, js - jt)
    prob = (1.0 - eta) ** (k1 - j1) * eta**j1
    return prob * weight / multiset_dim(CodeParams(k1, m))


def iterative_rate(
    k1: int,
    m: int,
    eta: float,
    sequence_cap: int = DEFAULT_SEQUENCE_CAP,
) -> IterativeRateResult:
    """Exact finite-m rate of the iterative protocol, summed over outcomes.

    Depth-first enumeration of every admissible outcome sequence up to round
    m-1, accumulating probability * entanglement for the terminal successes.
    Alice's first measurement is treated as offline (unit probability).
    """
    if k1 < 1 or m < 2:
        raise ValueError("need k1 >= 1 and m >= 2")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")

    per_round_prob = [0.0] * (m - 1)
    per_round_rate = [0.0] * (m - 1)
    visited = 0

    def _account(seq: list[tuple[int, int]]) -> None:
        nonlocal visited
        visited += 1
        if visited > sequence_cap:
            raise SequenceCapError(
                f"more than {sequence_cap} outcome sequences for "
                f"(k1={k1}, m={m}); raise sequence_cap to proceed"
            )
        n = len(seq)
        kn, _ = seq[-1]
        prob = _outcome_weight(seq, m, eta)
        ent = log2_multiset_dim(CodeParams(kn, m - n + 1))
        per_round_prob[n - 1] += prob
        per_round_rate[n - 1] += prob * ent

    def _extend(seq: list[tuple[int, int]]) -> None:
        n = len(seq) + 1
        if n > m - 1:
            return
        k_prev, j_prev = seq[-1]
        for k_next in range(k_prev, -1, -1):
            j_lo = max(0, j_prev - (k_prev - k_next))
            j_hi = min(k_next, j_prev)
            for j_next in range(j_lo, j_hi + 1):
                if j_next == k_next:
                    _account(seq + [(k_next, j_next)])
                elif n < m - 1:
                    _extend(seq + [(k_next, j_next)])

    residual = 0.0
    for j1 in range(k1 + 1):
        if j1 == k1:
            _account([(k1, j1)])
        elif m - 1 >= 2:
            _extend([(k1, j1)])

    success_prob = math.fsum(per_round_prob)
    rate = math.fsum(per_round_rate) / m
    residual = max(0.0, 1.0 - success_prob)
    mean_ent = (math.fsum(per_round_rate) / success_prob) if success_prob > 0 else 0.0
    return IterativeRateResult(
        rate=rate,
        probability=success_prob,
        entanglement=mean_ent,
        capacity=plob_capacity(eta),
        per_round=tuple(
            (per_round_prob[i], per_round_rate[i] / m) for i in range(m - 1)
        ),
        residual_failure_prob=residual,
    )


def avg_rci_round1(k1: int, m: int, eta: float) -> tuple[float, float]:
    """Per-use entanglement split of round one, Alice's outcome fixed offline.

    Returns (pure-success term, failure-RCI term): the first is the weighted
    entropy of the heralded pure states, the second the weighted distillable
    bound of the failures.  Uses log-binomials so k1 in the thousands is fine.
    """
    if k1 < 0 or m < 1:
        raise ValueError("need k1 >= 0 and m >= 1")
    if k1 == 0:
        return 0.0, 0.0
    success = math.exp(log_herald_prob_bob(k1, k1, eta)) * log2_multiset_dim(
        CodeParams(k1, m)
    )
    failure_terms = []
    for j1 in range(k1):
        log_p = log_herald_prob_bob(k1, j1, eta)
        if log_p == -math.inf:
            continue
        failure_terms.append(math.exp(log_p) * rci_heralded(k1, j1, m))
    return success / m, math.fsum(failure_terms) / m


def entanglement_ratio_round1(
    s: SqueezingSpec,
    m: int,
    rel_tol: float = 1e-12,
    max_terms: int = 2_000_000,
) -> float:
    """Fraction of the initial entanglement heralded by the first counting step.

    Sums P(k) * log2(dim) over Alice's outcomes against the m*E_chi budget,
    truncating when a geometric bound on the tail drops below ``rel_tol`` of
    the partial sum.
    """
    if not 0.0 < s.chi < 1.0:
        raise ValueError("squeezing must be strictly inside (0, 1)")
    if m < 1:
        raise ValueError(f"need at least one rail, got m={m}")
    chi_sq = s.chi**2
    log_prefactor = m * math.log(1.0 - chi_sq)
    total = 0.0
    k = 1  # k = 0 contributes nothing (log2 of a 1-dim space)
    while True:
        log_dim = log2_comb(k + m - 1, k)
        log_p = log_prefactor + k * math.log(chi_sq) + _log_multiset(k, m)
        term = math.exp(log_p) * log_dim
        total += term
        # Successive-term ratio: chi^2 * d_{k+1}/d_k * log d_{k+1}/log d_k.
        # Every factor is non-increasing in k, so once it drops below 1 the
        # tail is dominated by a geometric series.
        dim_growth = (k + m) / (k + 1)
        growth = chi_sq * dim_growth * (1.0 + math.log2(dim_growth) / log_dim)
        if growth < 1.0 and term > 0.0:
            tail_bound = term * growth / (1.0 - growth)
            if tail_bound <= rel_tol * total:
                break
        if term == 0.0 and k > 10 * m:
            break
        k += 1
        if k > max_terms:
            raise ConvergenceError(
                f"entanglement ratio did not converge after {max_terms} terms"
            )
    return total / (m * tmsv_entropy(s))


def _log_multiset(k: int, m: int) -> float:
    return math.lgamma(k + m) - math.lgamma(k + 1) - math.lgamma(m)


def entanglement_ratio_round_n(k_prev: int, m: int, n: int) -> float:
    """Entanglement retained by the round-n counting step, no channel in between.

    Ratio of the weighted entanglement over all round-n outcomes to the
    entanglement heralded by outcome ``k_prev`` at round n-1.
    """
    if n < 2:
        raise ValueError(f"round index must be >= 2, got n={n}")
    if k_prev < 0:
        raise ValueError(f"need k_prev >= 0, got {k_prev}")
    if k_prev == 0:
        warnings.warn(
            "k_prev=0 heralds a one-dimensional state; ratio is degenerate",
            stacklevel=2,
        )
        return 0.0
    numer = 0.0
    for k_n in range(1, k_prev + 1):
        d_n = multiset_dim(CodeParams(k_n, m - n + 1))
        numer += d_n * math.log2(d_n)
    d_prev = multiset_dim(CodeParams(k_prev, m - n + 2))
    return numer / (d_prev * math.log2(d_prev))


def round_balance_check(
    k_prev: int, j_prev: int, n: int, m: int
) -> tuple[float, float]:
    """Entanglement bookkeeping across one iteration round.

    Left side: the constrained sum over round-n outcomes of probability-weight
    times heralded-state RCI.  Right side: the same quantity for the round-n-1
    state they descend from.  Their ratio approaches (m-1)/m for large m.
    """
    if not 1 <= j_prev < k_prev:
        raise ValueError("need 1 <= j_prev < k_prev")
    if n < 2:
        raise ValueError(f"round index must be >= 2, got n={n}")
    lhs = 0.0
    for k_n in range(1, k_prev + 1):
        j_lo = max(1, j_prev - k_prev + k_n)
        j_hi = min(k_n, j_prev)
        for j_n in range(j_lo, j_hi + 1):
            lhs += (
                multiset_dim(CodeParams(k_n, m - n + 1))
                * math.comb(k_n, j_n)
                * math.comb(k_prev - k_n, j_prev - j_n)
                * rci_heralded(k_n, j_n, m - n + 1)
            )
    rhs = (
        multiset_dim(CodeParams(k_prev, m - n + 2))
        * math.comb(k_prev, j_prev)
        * rci_heralded(k_prev, j_prev, m - n + 2)
    )
    return lhs, rhs


def repeater_chain_rate(total: LinkSpec, links: int, p: CodeParams) -> RateResult:
    """Single-shot purification on each link of an equidistant chain.

    Swapping pure, equal-dimension states is deterministic, so the end-to-end
    rate equals the per-link rate; the capacity field is the end-to-end bound.
    """
    if links < 1:
        raise ValueError(f"need at least one link, got {links}")
    link = LinkSpec(total.distance_km / links, total.loss_db_per_km)
    per_link = single_shot_rate(p, link.eta)
    return RateResult(
        rate=per_link.rate,
        probability=per_link.probability,
        entanglement=per_link.entanglement,
        capacity=plob_capacity(total.eta),
    )


def iteration_capacity_series(
    m: int,
    eta: float,
    rounds: int | None = None,
    success_fraction: float = 0.5,
) -> list[tuple[float, float]]:
    """Model sequence of per-round (success, failure) entanglement budgets.

    Only the sums are pinned down analytically: round one carries
    (m-1)/m * capacity, and each later round retains (m-1)/m of the previous
    failure budget.  ``success_fraction`` sets how much of each round's budget
    is banked as success; any fixed fraction makes the banked total approach
    the capacity as m grows.
    """
    if m < 2:
        raise ValueError(f"need at least two rails, got m={m}")
    if not 0.0 < success_fraction <= 1.0:
        raise ValueError("success fraction must be in (0, 1]")
    capacity = plob_capacity(eta)
    if math.isinf(capacity):
        raise ValueError("capacity series is undefined at eta = 1")
    q = (m - 1) / m
    n_rounds = m if rounds is None else rounds
    series: list[tuple[float, float]] = []
    budget = q * capacity
    for _ in range(n_rounds):
        s_n = success_fraction * budget
        f_n = budget - s_n
        series.append((s_n, f_n))
        budget = q * f_n
    return series
