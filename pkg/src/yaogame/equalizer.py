"""Equalizing strategies: make the opponent indifferent, then read off the value.

For the algorithm side we look for ``f >= 0``, ``sum(f) = 1`` and a constant
``C`` with ``V_f(p) = C`` for every input ``p``; the adversary side is the
transpose. With more inputs than strategies the system is overdetermined and
is accepted only when it is consistent (as in ski rental, where every input
beyond the buy price produces the same column).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import nnls

from .core import Label, MixedStrategy, RatioMatrix
from .errors import EnumerationRefused, NoFeasibleEqualizer, NoSupportFound, SingularSystem
from .verify import certify_saddle

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
NEGATIVE_MASS_TOL = 1e-12
CONSTANT_MATCH_TOL = 1e-8
SADDLE_TOL = 1e-6
MAX_CANDIDATES = 1_000_000


@dataclass(frozen=True)
class EqualizerSolution:
    strategy: MixedStrategy
    constant: float
    residual: float
    support: tuple[Label, ...]
    # other support pairs of the same size that also certified, (rows, cols)
    alternates: tuple[tuple[tuple[Label, ...], tuple[Label, ...]], ...] = field(
        default_factory=tuple, compare=False
    )


def _system(a: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Rows of ``a`` are the mixing player's pure strategies, columns the opponent's.

    Unknowns are ``(w_1..w_k, C)``; one equation per opponent column forces
    ``sum_i w_i a[i, j] - C = 0`` and a last equation normalizes ``w``.
    """
    k, n = a.shape
    A = np.zeros((n + 1, k + 1))
    A[:n, :k] = a.T
    A[:n, k] = -1.0
    A[n, :k] = 1.0
    b = np.zeros(n + 1)
    b[n] = 1.0
    return A, b


def _solve_equalizer(a: NDArray[np.float64]) -> tuple[NDArray[np.float64], float]:
    """Return nonnegative weights and the constant, or raise."""
    k = a.shape[0]
    A, b = _system(a)
    x, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.abs(A @ x - b).max())
    if residual > RESIDUAL_TOL:
        if rank < min(A.shape):
            raise SingularSystem(
                f"equalization system is singular (rank {rank}) and inconsistent "
                f"(residual {residual:.3g})"
            )
        raise NoFeasibleEqualizer(f"equalization system is inconsistent (residual {residual:.3g})")
    w, c = x[:k], float(x[k])
    if w.min() >= -NEGATIVE_MASS_TOL:
        return w, c
    if rank < k + 1:
        # Many exact solutions: look for a nonnegative one, with C split into
        # two nonnegative parts since its sign is free.
        A2 = np.hstack([A, -A[:, k:]])
        z, _ = nnls(A2, b)
        if float(np.abs(A2 @ z - b).max()) <= RESIDUAL_TOL:
            return z[:k], float(z[k] - z[k + 1])
    raise NoFeasibleEqualizer(
        f"equalizing weights need negative mass (minimum {w.min():.6g})"
    )


def _finish(
    a: NDArray[np.float64], w: NDArray[np.float64], labels: tuple[Label, ...]
) -> tuple[MixedStrategy, float, float]:
    strategy = MixedStrategy.from_weights(labels, w, clamp=NEGATIVE_MASS_TOL)
    payoff = strategy.weights @ a
    constant = math.fsum(payoff) / payoff.size
    return strategy, constant, float(np.abs(payoff - constant).max())


def full_support_equalizer_f(r: RatioMatrix) -> EqualizerSolution:
    """Algorithm distribution making every input equally bad: ``V_f(p) = C``."""
    w, _ = _solve_equalizer(r.r)
    strategy, constant, residual = _finish(r.r, w, r.row_labels)
    return EqualizerSolution(strategy, constant, residual, r.row_labels)


def full_support_equalizer_g(r: RatioMatrix) -> EqualizerSolution:
    """Input distribution making every algorithm equally good: ``U_g(s) = C``."""
    w, _ = _solve_equalizer(r.r.T)
    strategy, constant, residual = _finish(r.r.T, w, r.col_labels)
    return EqualizerSolution(strategy, constant, residual, r.col_labels)


def count_support_pairs(m: int, n: int, max_support: int) -> int:
    return sum(math.comb(m, k) * math.comb(n, k) for k in range(1, max_support + 1))


def _try_pair(r: RatioMatrix, rows: tuple[int, ...], cols: tuple[int, ...]):
    sub = r.r[np.ix_(rows, cols)]
    try:
        wf, cf = _solve_equalizer(sub)
        wg, cg = _solve_equalizer(sub.T)
    except NoFeasibleEqualizer:
        return None
    if abs(cf - cg) > CONSTANT_MATCH_TOL:
        return None
    m, n = r.shape
    f_full = np.zeros(m)
    g_full = np.zeros(n)
    f_full[list(rows)] = np.maximum(wf, 0.0)
    g_full[list(cols)] = np.maximum(wg, 0.0)
    if f_full.sum() <= 0 or g_full.sum() <= 0:
        return None
    f = MixedStrategy(r.row_labels, f_full / f_full.sum())
    g = MixedStrategy(r.col_labels, g_full / g_full.sum())
    if not certify_saddle(r, f, g, SADDLE_TOL).passed:
        return None
    return f, g


def support_search(
    r: RatioMatrix, max_support: int | None = None
) -> tuple[EqualizerSolution, EqualizerSolution]:
    """Find an equilibrium by equalizing on square support pairs.

    Pairs are tried by ascending size, then lexicographically by row subset
    and column subset. The first pair whose restricted systems are
    nonnegative, agree on the constant and certify as a saddle point on the
    full matrix is returned; remaining pairs of the same size that also
    certify are listed in ``alternates``.
    """
    m, n = r.shape
    limit = min(m, n) if max_support is None else min(max_support, m, n)
    count = count_support_pairs(m, n, limit)
    if count > MAX_CANDIDATES:
        raise EnumerationRefused(count, MAX_CANDIDATES)

    for k in range(1, limit + 1):
        found = None
        alternates = []
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                hit = _try_pair(r, rows, cols)
                if hit is None:
                    continue
                if found is None:
                    found = (rows, cols, *hit)
                else:
                    alternates.append(
                        (
                            tuple(r.row_labels[i] for i in rows),
                            tuple(r.col_labels[j] for j in cols),
                        )
                    )
        if found is None:
            continue
        rows, cols, f, g = found
        sub = r.r[np.ix_(rows, cols)]
        fw, gw = f.weights[list(rows)], g.weights[list(cols)]
        vf, ug = fw @ sub, sub @ gw
        cf, cg = math.fsum(vf) / k, math.fsum(ug) / k
        alt = tuple(alternates)
        if alt:
            logger.info("support_search: %d alternate supports of size %d", len(alt), k)
        return (
            EqualizerSolution(
                f, cf, float(np.abs(vf - cf).max()), tuple(r.row_labels[i] for i in rows), alt
            ),
            EqualizerSolution(
                g, cg, float(np.abs(ug - cg).max()), tuple(r.col_labels[j] for j in cols), alt
            ),
        )
    raise NoSupportFound(f"no certified support pair of size <= {limit}")
