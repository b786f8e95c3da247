"""Single- and two-mode operator coefficients in the photon-number basis.

Pure functions shared by the sparse state layer and the dense operator layer.
"""

from __future__ import annotations

import math
from functools import lru_cache


@lru_cache(maxsize=None)
def beamsplitter_pair_coeffs(
    n_u: int, n_v: int, transmissivity: float
) -> tuple[tuple[int, int, float], ...]:
    """Expansion of |n_u, n_v> under a two-mode beamsplitter.

    Convention: a_u -> sqrt(T) a_u + sqrt(1-T) a_v,
                a_v -> -sqrt(1-T) a_u + sqrt(T) a_v.
    Returns tuples (m_u, m_v, coeff) with m_u + m_v = n_u + n_v.  The map is
    exactly unitary; no truncation happens here.
    """
    t = math.sqrt(transmissivity)
    r = math.sqrt(1.0 - transmissivity)
    total = n_u + n_v
    out = []
    for m_u in range(total + 1):
        m_v = total - m_u
        acc = 0.0
        for q in range(max(0, m_u - n_u), min(n_v, m_u) + 1):
            p = m_u - q
            acc += (
                math.comb(n_u, p)
                * math.comb(n_v, q)
                * (-1.0) ** q
                * t ** (p + n_v - q)
                * r ** (n_u - p + q)
            )
        if acc == 0.0:
            continue
        norm = math.sqrt(
            math.factorial(m_u)
            * math.factorial(m_v)
            / (math.factorial(n_u) * math.factorial(n_v))
        )
        out.append((m_u, m_v, acc * norm))
    return tuple(out)


def pure_loss_kraus_entry(n: int, loss: int, eta: float) -> float:
    """<n-loss| A_loss |n> for the pure-loss channel with transmissivity eta."""
    if loss > n:
        return 0.0
    return math.sqrt(math.comb(n, loss) * (1.0 - eta) ** loss * eta ** (n - loss))


def thermal_weights(nbar: float, dim: int) -> list[float]:
    """First ``dim`` occupation probabilities of a thermal state, unclipped."""
    if nbar == 0.0:
        return [1.0] + [0.0] * (dim - 1)
    ratio = nbar / (1.0 + nbar)
    return [ratio**n / (1.0 + nbar) for n in range(dim)]


def thermal_dim_for_tol(nbar: float, tol: float, max_dim: int = 12) -> int:
    """Smallest occupation-space dimension whose thermal tail is below ``tol``."""
    if nbar <= 0.0:
        return 1
    ratio = nbar / (1.0 + nbar)
    dim = 1
    while ratio**dim > tol and dim < max_dim:
        dim += 1
    return dim
