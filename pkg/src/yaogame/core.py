"""Cost and ratio model for finite online-algorithm games.

A deterministic online algorithm ``s`` and an input ``p`` are finite labels.
The competitive ratio of ``s`` on ``p`` is ``R(s, p) = cost_on(s, p) / cost_off(p)``;
rows of the ratio matrix are algorithms (the minimizing player), columns are
inputs (the maximizing adversary).

The three expectation functionals are

* ``U_g(s) = sum_p R(s, p) g(p)``  -- algorithm ``s`` against a random input ``g``
* ``V_f(p) = sum_s R(s, p) f(s)``  -- random algorithm ``f`` against input ``p``
* ``H(f, g) = sum_s sum_p f(s) R(s, p) g(p)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import (
    DimensionMismatch,
    InvalidDistribution,
    LabelMismatch,
    NonFiniteEntry,
    SubUnitRatio,
    ZeroOfflineCost,
)

Label = Hashable

SUPPORT_THRESHOLD = 1e-9
SUM_TOLERANCE = 1e-9
RATIO_FLOOR_SLACK = 1e-12


def _frozen(a: ArrayLike, ndim: int, name: str) -> NDArray[np.float64]:
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != ndim:
        raise DimensionMismatch(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def _check_labels(labels: Sequence[Label], n: int, what: str) -> tuple[Label, ...]:
    labels = tuple(labels)
    if len(labels) != n:
        raise DimensionMismatch(f"{what}: {len(labels)} labels for {n} entries")
    if len(set(labels)) != n:
        raise DimensionMismatch(f"{what}: labels must be unique")
    return labels


@dataclass(frozen=True)
class CostModel:
    """Online cost table over (algorithm, input) pairs and offline cost per input."""

    row_labels: tuple[Label, ...]
    col_labels: tuple[Label, ...]
    cost_on: NDArray[np.float64]
    cost_off: NDArray[np.float64]
    raw_game: bool = False

    def __post_init__(self) -> None:
        cost_on = _frozen(self.cost_on, 2, "cost_on")
        cost_off = _frozen(self.cost_off, 1, "cost_off")
        object.__setattr__(self, "cost_on", cost_on)
        object.__setattr__(self, "cost_off", cost_off)
        m, n = cost_on.shape
        if m == 0 or n == 0:
            raise DimensionMismatch("cost model needs at least one strategy and one input")
        if cost_off.shape != (n,):
            raise DimensionMismatch(
                f"cost_off has length {cost_off.shape[0]} but cost_on has {n} columns"
            )
        object.__setattr__(self, "row_labels", _check_labels(self.row_labels, m, "row_labels"))
        object.__setattr__(self, "col_labels", _check_labels(self.col_labels, n, "col_labels"))
        if not (np.all(np.isfinite(cost_on)) and np.all(np.isfinite(cost_off))):
            raise NonFiniteEntry("costs must be finite")
        if np.any(cost_off <= 0):
            bad = [self.col_labels[j] for j in np.flatnonzero(cost_off <= 0)]
            raise ZeroOfflineCost(f"offline cost must be positive; offending inputs: {bad}")
        if not self.raw_game:
            if np.any(cost_on < 0):
                raise SubUnitRatio("online costs must be nonnegative")
            slack = RATIO_FLOOR_SLACK * np.maximum(cost_off, 1.0)
            if np.any(cost_on < cost_off[None, :] - slack[None, :]):
                raise SubUnitRatio("online cost below offline cost; set raw_game to allow it")

    @classmethod
    def from_arrays(
        cls,
        cost_on: ArrayLike,
        cost_off: ArrayLike,
        row_labels: Sequence[Label] | None = None,
        col_labels: Sequence[Label] | None = None,
        raw_game: bool = False,
    ) -> "CostModel":
        on = np.asarray(cost_on, dtype=np.float64)
        if on.ndim != 2:
            raise DimensionMismatch(f"cost_on must be 2-dimensional, got shape {on.shape}")
        m, n = on.shape
        return cls(
            row_labels=tuple(row_labels) if row_labels is not None else default_labels("s", m),
            col_labels=tuple(col_labels) if col_labels is not None else default_labels("p", n),
            cost_on=on,
            cost_off=cost_off,
            raw_game=raw_game,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.cost_on.shape


@dataclass(frozen=True)
class RatioMatrix:
    row_labels: tuple[Label, ...]
    col_labels: tuple[Label, ...]
    r: NDArray[np.float64]
    raw_game: bool = False

    def __post_init__(self) -> None:
        r = _frozen(self.r, 2, "ratio matrix")
        object.__setattr__(self, "r", r)
        m, n = r.shape
        if m == 0 or n == 0:
            raise DimensionMismatch("ratio matrix needs at least one row and one column")
        object.__setattr__(self, "row_labels", _check_labels(self.row_labels, m, "row_labels"))
        object.__setattr__(self, "col_labels", _check_labels(self.col_labels, n, "col_labels"))
        if not np.all(np.isfinite(r)):
            raise NonFiniteEntry("ratio matrix contains NaN or infinite entries")
        if not self.raw_game and np.any(r < 1.0 - RATIO_FLOOR_SLACK):
            raise SubUnitRatio(f"ratio {r.min()!r} < 1; set raw_game to allow it")

    @classmethod
    def from_array(
        cls,
        r: ArrayLike,
        row_labels: Sequence[Label] | None = None,
        col_labels: Sequence[Label] | None = None,
        raw_game: bool = False,
    ) -> "RatioMatrix":
        arr = np.asarray(r, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"ratio matrix must be 2-dimensional, got shape {arr.shape}")
        m, n = arr.shape
        return cls(
            row_labels=tuple(row_labels) if row_labels is not None else default_labels("s", m),
            col_labels=tuple(col_labels) if col_labels is not None else default_labels("p", n),
            r=arr,
            raw_game=raw_game,
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.r.shape

    def row_index(self, s: Label) -> int:
        try:
            return self.row_labels.index(s)
        except ValueError:
            raise LabelMismatch(f"unknown strategy {s!r}") from None

    def col_index(self, p: Label) -> int:
        try:
            return self.col_labels.index(p)
        except ValueError:
            raise LabelMismatch(f"unknown input {p!r}") from None


@dataclass(frozen=True)
class MixedStrategy:
    """A probability distribution over a finite label set."""

    labels: tuple[Label, ...]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        w = _frozen(self.weights, 1, "weights")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", _check_labels(self.labels, w.shape[0], "strategy"))
        if w.shape[0] == 0:
            raise InvalidDistribution("a mixed strategy needs at least one label")
        if not np.all(np.isfinite(w)):
            raise InvalidDistribution("weights must be finite")
        if np.any(w < 0):
            raise InvalidDistribution(f"negative weight {w.min()!r}")
        total = math.fsum(w)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistribution(f"weights sum to {total!r}, not 1")
        if not np.any(w > SUPPORT_THRESHOLD):
            raise InvalidDistribution("empty support")

    @classmethod
    def uniform(cls, labels: Sequence[Label]) -> "MixedStrategy":
        labels = tuple(labels)
        return cls(labels, np.full(len(labels), 1.0 / len(labels)))

    @classmethod
    def point(cls, labels: Sequence[Label], at: Label) -> "MixedStrategy":
        labels = tuple(labels)
        if at not in labels:
            raise LabelMismatch(f"point mass on unknown label {at!r}")
        w = np.zeros(len(labels))
        w[labels.index(at)] = 1.0
        return cls(labels, w)

    @classmethod
    def from_weights(
        cls, labels: Sequence[Label], weights: ArrayLike, clamp: float = 0.0
    ) -> "MixedStrategy":
        """Build from raw weights, zeroing entries in ``[-clamp, 0)`` and renormalizing."""
        w = np.array(weights, dtype=np.float64)
        if clamp > 0:
            w[(w < 0) & (w >= -clamp)] = 0.0
        total = w.sum()
        if total <= 0:
            raise InvalidDistribution("weights have no positive mass")
        return cls(tuple(labels), w / total)

    def support(self, threshold: float = SUPPORT_THRESHOLD) -> tuple[Label, ...]:
        return tuple(lab for lab, w in zip(self.labels, self.weights) if w > threshold)

    def support_indices(self, threshold: float = SUPPORT_THRESHOLD) -> NDArray[np.intp]:
        return np.flatnonzero(self.weights > threshold)

    def __getitem__(self, label: Label) -> float:
        try:
            return float(self.weights[self.labels.index(label)])
        except ValueError:
            raise LabelMismatch(f"unknown label {label!r}") from None


def ratio_from_costs(model: CostModel, raw_game: bool | None = None) -> RatioMatrix:
    """Divide each column of the online cost table by that input's offline cost."""
    raw = model.raw_game if raw_game is None else raw_game
    if np.any(model.cost_off <= 0):
        raise ZeroOfflineCost("offline cost must be positive")
    r = model.cost_on / model.cost_off[None, :]
    if not raw and np.any(r < 1.0 - RATIO_FLOOR_SLACK):
        raise SubUnitRatio(f"ratio {r.min()!r} < 1; set raw_game to allow it")
    return RatioMatrix(model.row_labels, model.col_labels, r, raw_game=raw)


def _require_cols(r: RatioMatrix, g: MixedStrategy) -> None:
    if g.labels != r.col_labels:
        raise LabelMismatch("input distribution labels do not match the matrix columns")


def _require_rows(r: RatioMatrix, f: MixedStrategy) -> None:
    if f.labels != r.row_labels:
        raise LabelMismatch("algorithm distribution labels do not match the matrix rows")


def u_vector(r: RatioMatrix, g: MixedStrategy) -> NDArray[np.float64]:
    """``U_g(s)`` for every row ``s``."""
    _require_cols(r, g)
    return r.r @ g.weights


def v_vector(r: RatioMatrix, f: MixedStrategy) -> NDArray[np.float64]:
    """``V_f(p)`` for every column ``p``."""
    _require_rows(r, f)
    return f.weights @ r.r


def expected_ratio_u(r: RatioMatrix, g: MixedStrategy, s: Label) -> float:
    return float(u_vector(r, g)[r.row_index(s)])


def expected_ratio_v(r: RatioMatrix, f: MixedStrategy, p: Label) -> float:
    return float(v_vector(r, f)[r.col_index(p)])


def h_row_first(r: RatioMatrix, f: MixedStrategy, g: MixedStrategy) -> float:
    """Sum over inputs first: ``sum_s f(s) U_g(s)``."""
    _require_rows(r, f)
    return math.fsum(f.weights * u_vector(r, g))


def h_col_first(r: RatioMatrix, f: MixedStrategy, g: MixedStrategy) -> float:
    """Sum over algorithms first: ``sum_p g(p) V_f(p)``."""
    _require_cols(r, g)
    return math.fsum(g.weights * v_vector(r, f))


def bilinear_value_h(r: RatioMatrix, f: MixedStrategy, g: MixedStrategy) -> float:
    return h_row_first(r, f, g)


def deterministic_cr(r: RatioMatrix, s: Label) -> float:
    """Competitive ratio of always running ``s``: its worst input."""
    return float(r.r[r.row_index(s)].max())


@dataclass(frozen=True)
class Diagnostics:
    shape: tuple[int, int]
    min_entry: float
    max_entry: float
    ratio_bound_holds: bool
    finite: bool
    # (dominating, dominated) label pairs; rows dominate by being entrywise <=,
    # columns by being entrywise >= (the adversary maximizes).
    dominated_rows: tuple[tuple[Label, Label], ...] = field(default_factory=tuple)
    dominated_cols: tuple[tuple[Label, Label], ...] = field(default_factory=tuple)


def _dominance(a: NDArray[np.float64], labels: tuple[Label, ...], better) -> tuple:
    pairs = []
    for i in range(a.shape[0]):
        for k in range(a.shape[0]):
            if i != k and np.all(better(a[i], a[k])):
                # identical rows dominate each other; report only the lower index
                if np.array_equal(a[i], a[k]) and i > k:
                    continue
                pairs.append((labels[i], labels[k]))
    return tuple(pairs)


def validate(r: RatioMatrix | ArrayLike) -> Diagnostics:
    """Report shape, entry range, the ``R >= 1`` property, finiteness and dominance.

    Accepts a raw array as well, so that matrices rejected by ``RatioMatrix``
    (for instance ones holding NaN) can still be inspected.
    """
    if isinstance(r, RatioMatrix):
        a, rows, cols = r.r, r.row_labels, r.col_labels
    else:
        a = np.asarray(r, dtype=np.float64)
        rows, cols = default_labels("s", a.shape[0]), default_labels("p", a.shape[1])
    finite = bool(np.all(np.isfinite(a)))
    if not finite:
        return Diagnostics(
            shape=a.shape,
            min_entry=float(np.nanmin(a)) if np.any(~np.isnan(a)) else math.nan,
            max_entry=float(np.nanmax(a)) if np.any(~np.isnan(a)) else math.nan,
            ratio_bound_holds=False,
            finite=False,
        )
    return Diagnostics(
        shape=a.shape,
        min_entry=float(a.min()),
        max_entry=float(a.max()),
        ratio_bound_holds=bool(a.min() >= 1.0 - RATIO_FLOOR_SLACK),
        finite=True,
        dominated_rows=_dominance(a, rows, np.less_equal),
        dominated_cols=_dominance(a.T, cols, np.greater_equal),
    )
