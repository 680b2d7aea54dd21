"""Exact and iterative solvers for finite zero-sum ratio games.

The row player (algorithm) minimizes, the column player (adversary) maximizes.
``solve`` with ``method="simplex_lp"`` runs a dense tableau simplex on the
standard matrix-game LP; ``fictitious_play`` is an independent iterative
oracle that never touches the LP code.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .core import (
    Label,
    MixedStrategy,
    RatioMatrix,
    u_vector,
    v_vector,
)
from .errors import NonFiniteEntry, PivotLimitExceeded, ValidationError

logger = logging.getLogger(__name__)

Method = Literal["simplex_lp", "fictitious_play"]


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-9
    max_pivots: int = 100_000
    method: Method = "simplex_lp"
    fp_iterations: int = 100_000
    # Fictitious play breaks ties by lowest index, so the seed is carried for
    # report provenance only.
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.max_pivots <= 0:
            raise ValidationError("max_pivots must be positive")
        if self.fp_iterations <= 0:
            raise ValidationError("fp_iterations must be positive")
        if self.method not in ("simplex_lp", "fictitious_play"):
            raise ValidationError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class SolveResult:
    value: float
    f_star: MixedStrategy
    g_star: MixedStrategy
    upper: float
    lower: float
    gap: float
    pivots_or_iters: int
    method: Method
    diagnostics: dict = field(default_factory=dict, compare=False)


def best_response_row(r: RatioMatrix, g: MixedStrategy) -> tuple[Label, float]:
    """Cheapest deterministic algorithm against ``g``; lowest index wins ties."""
    u = u_vector(r, g)
    i = int(np.argmin(u))
    return r.row_labels[i], float(u[i])


def best_response_col(r: RatioMatrix, f: MixedStrategy) -> tuple[Label, float]:
    """Worst input for ``f``; lowest index wins ties."""
    v = v_vector(r, f)
    j = int(np.argmax(v))
    return r.col_labels[j], float(v[j])


def _result(
    r: RatioMatrix,
    value: float | None,
    f: NDArray[np.float64],
    g: NDArray[np.float64],
    steps: int,
    method: Method,
    diagnostics: dict,
) -> SolveResult:
    f_star = MixedStrategy(r.row_labels, f)
    g_star = MixedStrategy(r.col_labels, g)
    upper = float(v_vector(r, f_star).max())
    lower = float(u_vector(r, g_star).min())
    return SolveResult(
        value=0.5 * (upper + lower) if value is None else value,
        f_star=f_star,
        g_star=g_star,
        upper=upper,
        lower=lower,
        gap=upper - lower,
        pivots_or_iters=steps,
        method=method,
        diagnostics=diagnostics,
    )


def _normalize(w: NDArray[np.float64], tol: float) -> NDArray[np.float64]:
    w = np.where(w < 0, np.where(w >= -tol, 0.0, w), w)
    if np.any(w < 0):
        raise ArithmeticError(f"simplex produced negative weight {w.min()!r}")
    return w / w.sum() + 0.0  # drop signed zeros


def _simplex(a: NDArray[np.float64], tol: float, max_pivots: int):
    """Maximize ``sum(x)`` subject to ``a.T @ x <= 1``, ``x >= 0`` with Bland's rule.

    ``a`` must be strictly positive, which makes the origin feasible and the
    LP bounded. Returns the primal ``x``, the dual ``y`` (one per column of
    ``a``), the pivot count and basis diagnostics.
    """
    m, n = a.shape
    # rows 0..n-1 are constraints, row n the reduced costs; columns are
    # x_0..x_{m-1}, slack_0..slack_{n-1}, rhs.
    t = np.zeros((n + 1, m + n + 1))
    t[:n, :m] = a.T
    t[:n, m : m + n] = np.eye(n)
    t[:n, -1] = 1.0
    t[n, :m] = 1.0
    basis = list(range(m, m + n))

    pivots = 0
    while True:
        entering = np.flatnonzero(t[n, :-1] > tol)
        if entering.size == 0:
            break
        if pivots >= max_pivots:
            raise PivotLimitExceeded(f"no optimum after {max_pivots} pivots")
        j = int(entering[0])
        col = t[:n, j]
        rows = np.flatnonzero(col > tol)
        # bounded by construction: every column of a.T is positive
        ratios = t[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + tol * max(1.0, abs(best))]
        i = int(min(ties, key=lambda k: basis[k]))

        t[i] /= t[i, j]
        others = np.arange(n + 1) != i
        t[others] -= np.outer(t[others, j], t[i])
        t[:, j] = 0.0
        t[i, j] = 1.0
        basis[i] = j
        pivots += 1

    x = np.zeros(m + n)
    for i, b in enumerate(basis):
        x[b] = t[i, -1]
    y = -t[n, m : m + n]
    reduced = t[n, :-1]
    nonbasic = np.setdiff1d(np.arange(m + n), basis)
    info = {
        "degenerate_basis": bool(np.any(np.abs(t[:n, -1]) <= tol)),
        "alternate_optima_possible": bool(np.any(np.abs(reduced[nonbasic]) <= tol)),
    }
    return x[:m], y, pivots, info


def _solve_lp(r: RatioMatrix, config: SolverConfig) -> SolveResult:
    raw = r.r
    lo, hi = float(raw.min()), float(raw.max())
    span = hi - lo
    # Affine map onto [1, 2]: keeps the LP bounded with a feasible origin and
    # makes the pivot path independent of shifting or scaling the game.
    a = (raw - lo) / span + 1.0 if span > 0 else np.ones_like(raw)
    x, y, pivots, info = _simplex(a, config.tolerance, config.max_pivots)
    z = x.sum()
    value = float((1.0 / z - 1.0) * span + lo)
    f = _normalize(x, config.tolerance)
    g = _normalize(y, config.tolerance)
    info["objective"] = float(z)
    logger.debug("simplex finished after %d pivots, value %.12g", pivots, value)
    return _result(r, value, f, g, pivots, "simplex_lp", info)


def fictitious_play(r: RatioMatrix, config: SolverConfig = SolverConfig()) -> SolveResult:
    """Alternating fictitious play; both players open with index 0.

    Each round the algorithm best-responds to the adversary's empirical
    history, then the adversary best-responds to the updated algorithm
    history. The reported gap is the exact gap of the averaged strategies and
    the value is the midpoint of the resulting bounds.
    """
    a = r.r
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("ratio matrix contains non-finite entries")
    m, n = a.shape
    cols = np.ascontiguousarray(a.T)
    row_counts = np.zeros(m)
    col_counts = np.zeros(n)
    row_counts[0] = 1
    col_counts[0] = 1
    u_cum = a[:, 0].copy()  # payoff of each row against the adversary history
    v_cum = a[0].copy()  # payoff of each column against the algorithm history
    for _ in range(config.fp_iterations - 1):
        i = u_cum.argmin()
        row_counts[i] += 1
        v_cum += a[i]
        j = v_cum.argmax()
        col_counts[j] += 1
        u_cum += cols[j]
    steps = config.fp_iterations
    return _result(r, None, row_counts / steps, col_counts / steps, steps, "fictitious_play", {})


def solve(r: RatioMatrix, config: SolverConfig = SolverConfig()) -> SolveResult:
    if not np.all(np.isfinite(r.r)):
        raise NonFiniteEntry("ratio matrix contains non-finite entries")
    if config.method == "fictitious_play":
        return fictitious_play(r, config)
    return _solve_lp(r, config)
