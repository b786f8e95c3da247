"""Exact combinatorics for photon-number codes and two-mode squeezed sources.

Everything here is a pure function of its arguments.  Binomials are evaluated
with arbitrary-precision integers; callers that sweep into the thousands of
photons should use the ``log2_*`` variants, which switch to log-gamma
evaluation above :data:`LOG2_SWITCH`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Above this the exact integer path becomes pointlessly slow for float
# consumers; log-gamma is accurate to ~1e-14 relative there.
LOG2_SWITCH = 1000

DEFAULT_ENUMERATION_CAP = 100_000

_LN2 = math.log(2.0)


class EnumerationCapError(ValueError):
    """A code space is too large to enumerate explicitly."""


@dataclass(frozen=True)
class CodeParams:
    """A photon-number error-detecting code: ``k`` photons on ``m`` rails.

    The code space is spanned by every arrangement of ``k`` indistinguishable
    photons over the ``m`` rails; its dimension is ``C(k+m-1, k)``.
    """

    k: int
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"need at least one rail, got m={self.m}")
        if self.k < 0:
            raise ValueError(f"photon number must be nonnegative, got k={self.k}")

    @property
    def dim(self) -> int:
        return multiset_dim(self)


@dataclass(frozen=True)
class SqueezingSpec:
    """Two-mode squeezing strength ``chi`` in [0, 1) and derived quantities."""

    chi: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.chi < 1.0:
            raise ValueError(f"squeezing parameter must be in [0, 1), got {self.chi}")

    @property
    def r(self) -> float:
        """Squeezing magnitude, atanh(chi)."""
        return math.atanh(self.chi)

    @property
    def mean_photons(self) -> float:
        """Mean photon number per arm, sinh(r)^2."""
        return math.sinh(self.r) ** 2

    @property
    def nu(self) -> float:
        """Quadrature variance of either arm, cosh(2r); equals 2*mean_photons + 1."""
        return math.cosh(2.0 * self.r)


def multiset_dim(p: CodeParams) -> int:
    """Number of ways to arrange ``p.k`` photons on ``p.m`` rails, exactly."""
    return math.comb(p.k + p.m - 1, p.k)


def log2_comb(n: int, k: int) -> float:
    """log2 of C(n, k); exact integers below LOG2_SWITCH, log-gamma above."""
    if k < 0 or k > n:
        raise ValueError(f"binomial C({n}, {k}) is outside the valid domain")
    if n <= LOG2_SWITCH:
        return math.log2(math.comb(n, k))
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / _LN2


def log2_multiset_dim(p: CodeParams) -> float:
    """log2 of the code dimension, safe for very large ``k + m``."""
    return log2_comb(p.k + p.m - 1, p.k)


def enumerate_codewords(
    p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[tuple[int, ...]]:
    """All occupation vectors of the code, in reverse-lexicographic order.

    The order is stable across runs and is the indexing convention used for
    logical labels everywhere in this package: label ``mu`` means the
    ``mu``-th vector returned here.

    Raises:
        EnumerationCapError: if the code dimension exceeds ``cap``.
    """
    d = multiset_dim(p)
    if d > cap:
        raise EnumerationCapError(
            f"code (k={p.k}, m={p.m}) has dimension {d} > cap {cap}"
        )
    words: list[tuple[int, ...]] = []

    def _fill(prefix: tuple[int, ...], remaining: int, rails: int) -> None:
        if rails == 1:
            words.append(prefix + (remaining,))
            return
        for n in range(remaining, -1, -1):
            _fill(prefix + (n,), remaining - n, rails - 1)

    _fill((), p.k, p.m)
    return words


def herald_prob_alice(p: CodeParams, s: SqueezingSpec) -> float:
    """Probability that counting photons on m TMSV arms yields total ``p.k``."""
    return (1.0 - s.chi**2) ** p.m * s.chi ** (2 * p.k) * multiset_dim(p)


def herald_prob_bob(k: int, j: int, eta: float) -> float:
    """Probability that ``j`` of ``k`` transmitted photons survive loss ``eta``."""
    if not 0 <= j <= k:
        raise ValueError(f"surviving photons j={j} must lie in [0, k={k}]")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    # 0**0 = 1 handles the eta in {0, 1} edge cases correctly.
    return (1.0 - eta) ** (k - j) * eta**j * math.comb(k, j)


def log_herald_prob_bob(k: int, j: int, eta: float) -> float:
    """Natural log of ``herald_prob_bob``, safe for thousands of photons."""
    if not 0 <= j <= k:
        raise ValueError(f"surviving photons j={j} must lie in [0, k={k}]")
    if eta <= 0.0:
        return 0.0 if j == 0 else -math.inf
    if eta >= 1.0:
        return 0.0 if j == k else -math.inf
    return (
        (k - j) * math.log1p(-eta)
        + j * math.log(eta)
        + math.lgamma(k + 1)
        - math.lgamma(j + 1)
        - math.lgamma(k - j + 1)
    )


def resource_norm(p: CodeParams, cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """Sum of squared resource-state coefficients, brute force over code words.

    Each code word ``(n_1, ..., n_m)`` contributes ``1 / prod_i C(k, n_i)``.
    Exact rational arithmetic so the closed forms can be checked exactly.
    """
    total = Fraction(0)
    for word in enumerate_codewords(p, cap=cap):
        denom = 1
        for n in word:
            denom *= math.comb(p.k, n)
        total += Fraction(1, denom)
    return total


def resource_norm_closed_form(p: CodeParams) -> Fraction:
    """Closed-form resource norm, available for k in {1, 2, 3, 4}."""
    m = Fraction(p.m)
    if p.k == 1:
        return m
    if p.k == 2:
        return (7 * m + m**2) / 8
    if p.k == 3:
        return (146 * m + 15 * m**2 + m**3) / 162
    if p.k == 4:
        return (17198 * m + 1153 * m**2 + 78 * m**3 + 3 * m**4) / 18432
    raise ValueError(f"no closed form for k={p.k}; use resource_norm()")


def binom_ratio(k: int, j: int, m: int) -> Fraction | float:
    """C(k+m-1, j) / C(k, j), exact below LOG2_SWITCH, float above."""
    if not 0 <= j <= k:
        raise ValueError(f"need 0 <= j <= k, got j={j}, k={k}")
    if k + m - 1 <= LOG2_SWITCH:
        return Fraction(math.comb(k + m - 1, j), math.comb(k, j))
    return 2.0 ** (log2_comb(k + m - 1, j) - log2_comb(k, j))


def asymptotic_binom_ratio(k: int, j: int, m: int) -> float:
    """Large-k limit of ``binom_ratio``: (1 - j/k)^-(m-1)."""
    if not 0 <= j <= k:
        raise ValueError(f"need 0 <= j <= k, got j={j}, k={k}")
    if j == k:
        return 1.0 if m == 1 else math.inf
    return (1.0 - j / k) ** (-(m - 1))


def mean_photon_entropy(nbar: float) -> float:
    """Entropy in bits of a thermal state with mean photon number ``nbar``.

    g(x) = (x+1) log2(x+1) - x log2 x, extended by continuity with g(0) = 0.
    """
    if nbar < 0.0:
        raise ValueError(f"mean photon number must be nonnegative, got {nbar}")
    if nbar == 0.0:
        return 0.0
    return (nbar + 1.0) * math.log2(nbar + 1.0) - nbar * math.log2(nbar)


def tmsv_entropy(s: SqueezingSpec) -> float:
    """Entanglement (ebits) of one two-mode squeezed vacuum pair."""
    return mean_photon_entropy(s.mean_photons)
