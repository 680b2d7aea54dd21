"""Instance generators and problem-file ingestion.

Problem files are UTF-8 JSON objects::

    {"kind": "ratio", "ratio": [[1, 3], [2, 1]]}
    {"kind": "costs", "cost_on": [[2, 2], [1, 3]], "cost_off": [1, 2],
     "row_labels": ["s1", "s2"], "col_labels": ["p1", "p2"], "raw_game": false}

Distribution files hold one ``label weight`` pair per line (``#`` starts a
comment); the shorthands ``uniform`` and ``point:<label>`` are accepted in
place of a file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .core import CostModel, Label, MixedStrategy, RatioMatrix, ratio_from_costs
from .errors import (
    DimensionMismatch,
    InvalidDistribution,
    InvalidRange,
    InvalidSpec,
    ParseError,
    ZeroOfflineCost,
)

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SkiRentalSpec:
    """Buy price ``buy_cost`` in rent-days; the adversary picks up to ``horizon`` ski days."""

    buy_cost: int
    horizon: int

    def __post_init__(self) -> None:
        if int(self.buy_cost) != self.buy_cost or int(self.horizon) != self.horizon:
            raise InvalidSpec("buy_cost and horizon must be integers")
        if self.buy_cost < 1:
            raise InvalidSpec(f"buy_cost must be >= 1, got {self.buy_cost}")
        if self.horizon < self.buy_cost:
            raise InvalidSpec(
                f"horizon {self.horizon} < buy_cost {self.buy_cost} truncates the adversary"
            )


def ski_rental_costs(s: int, p: int, buy_cost: int) -> tuple[int, int]:
    """Online and offline cost when buying at the start of day ``s`` and skiing ``p`` days."""
    online = p if p <= s - 1 else (s - 1) + buy_cost
    return online, min(p, buy_cost)


def ski_rental(spec: SkiRentalSpec) -> CostModel:
    # Buying after day B is dominated by buying on day B, so s stops at B.
    b, n = spec.buy_cost, spec.horizon
    cost_on = np.array(
        [[ski_rental_costs(s, p, b)[0] for p in range(1, n + 1)] for s in range(1, b + 1)],
        dtype=np.float64,
    )
    cost_off = np.array([min(p, b) for p in range(1, n + 1)], dtype=np.float64)
    return CostModel(
        row_labels=tuple(f"s{s}" for s in range(1, b + 1)),
        col_labels=tuple(f"p{p}" for p in range(1, n + 1)),
        cost_on=cost_on,
        cost_off=cost_off,
    )


def ski_rental_ratio(buy_cost: int, horizon: int | None = None) -> RatioMatrix:
    horizon = 2 * buy_cost if horizon is None else horizon
    return ratio_from_costs(ski_rental(SkiRentalSpec(buy_cost, horizon)))


def ski_rental_closed_form(buy_cost: int) -> float:
    """Optimal randomized competitive ratio for integer buy price ``buy_cost``."""
    return 1.0 / (1.0 - (1.0 - 1.0 / buy_cost) ** buy_cost)


class XorShift64Star:
    """xorshift64* (Vigna 2016): shifts 12, 25, 27, multiplier 0x2545F4914F6CDD1D.

    The state is seeded through one splitmix64 step (increment
    0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
    so that small or zero seeds still give a nonzero, well-mixed state.
    Doubles take the top 53 bits of each output, giving values in ``[0, 1)``.
    """

    def __init__(self, seed: int) -> None:
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


def random_instance(rows: int, cols: int, lo: float, hi: float, seed: int) -> RatioMatrix:
    """Entries uniform in ``[lo, hi]``, drawn row-major from ``XorShift64Star(seed)``."""
    if rows < 1 or cols < 1:
        raise InvalidRange(f"dimensions must be positive, got {rows}x{cols}")
    if not (1 <= lo <= hi) or not math.isfinite(hi):
        raise InvalidRange(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    rng = XorShift64Star(seed)
    span = hi - lo
    data = [[lo + span * rng.random() for _ in range(cols)] for _ in range(rows)]
    return RatioMatrix.from_array(data)


def random_distribution(labels: Sequence[Label], rng: XorShift64Star) -> MixedStrategy:
    """Random point of the simplex via normalized exponentials (flat Dirichlet)."""
    w = np.array([-math.log1p(-rng.random()) for _ in labels])
    if w.sum() <= 0:
        w[0] = 1.0
    return MixedStrategy(tuple(labels), w / w.sum())


def grid_discretize(
    s_grid: Sequence[float],
    p_grid: Sequence[float],
    cost_table: Sequence[Sequence[float]] | Callable[[float, float], float],
    offline_table: Sequence[float] | Callable[[float], float],
    raw_game: bool = False,
) -> CostModel:
    """Finite cost model over real-valued parameter grids; labels are the grid points.

    The tables may be given as arrays or as callables evaluated on the grids.
    """
    s_grid = tuple(float(s) for s in s_grid)
    p_grid = tuple(float(p) for p in p_grid)
    if callable(cost_table):
        on = np.array([[cost_table(s, p) for p in p_grid] for s in s_grid], dtype=np.float64)
    else:
        on = np.asarray(cost_table, dtype=np.float64)
    if callable(offline_table):
        off = np.array([offline_table(p) for p in p_grid], dtype=np.float64)
    else:
        off = np.asarray(offline_table, dtype=np.float64)
    if on.shape != (len(s_grid), len(p_grid)):
        raise DimensionMismatch(
            f"cost table has shape {on.shape}, grids imply {(len(s_grid), len(p_grid))}"
        )
    if off.shape != (len(p_grid),):
        raise DimensionMismatch(f"offline table has shape {off.shape}, expected ({len(p_grid)},)")
    if np.any(off <= 0):
        raise ZeroOfflineCost("offline cost must be positive on every grid point")
    return CostModel(s_grid, p_grid, on, off, raw_game=raw_game)


def _matrix(obj: dict, key: str, ndim: int) -> np.ndarray:
    if key not in obj:
        raise ParseError("missing required field", field=key)
    try:
        arr = np.array(obj[key], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"not a numeric array ({exc})", field=key) from None
    if arr.ndim != ndim:
        raise ParseError(f"expected a {ndim}-D array, got shape {arr.shape}", field=key)
    return arr


def _labels(obj: dict, key: str, default: tuple[str, ...]) -> tuple[str, ...]:
    if key not in obj or obj[key] is None:
        return default
    labels = obj[key]
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise ParseError("must be an array of strings", field=key)
    return tuple(labels)


def parse_problem(text: str) -> CostModel | RatioMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    kind = obj.get("kind")
    raw_game = obj.get("raw_game", False)
    if not isinstance(raw_game, bool):
        raise ParseError("must be a boolean", field="raw_game")
    if kind == "ratio":
        r = _matrix(obj, "ratio", 2)
        m, n = r.shape
        return RatioMatrix(
            _labels(obj, "row_labels", tuple(f"s{i + 1}" for i in range(m))),
            _labels(obj, "col_labels", tuple(f"p{j + 1}" for j in range(n))),
            r,
            raw_game=raw_game,
        )
    if kind == "costs":
        on = _matrix(obj, "cost_on", 2)
        off = _matrix(obj, "cost_off", 1)
        m, n = on.shape
        return CostModel(
            _labels(obj, "row_labels", tuple(f"s{i + 1}" for i in range(m))),
            _labels(obj, "col_labels", tuple(f"p{j + 1}" for j in range(n))),
            on,
            off,
            raw_game=raw_game,
        )
    raise ParseError(f"expected 'ratio' or 'costs', got {kind!r}", field="kind")


def from_file(path: str | Path) -> CostModel | RatioMatrix:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def problem_to_dict(problem: CostModel | RatioMatrix) -> dict:
    labels = {
        "row_labels": [str(x) for x in problem.row_labels],
        "col_labels": [str(x) for x in problem.col_labels],
    }
    if isinstance(problem, RatioMatrix):
        return {"kind": "ratio", **labels, "ratio": problem.r.tolist(), "raw_game": problem.raw_game}
    return {
        "kind": "costs",
        **labels,
        "cost_on": problem.cost_on.tolist(),
        "cost_off": problem.cost_off.tolist(),
        "raw_game": problem.raw_game,
    }


def dump_problem(problem: CostModel | RatioMatrix) -> str:
    # json writes floats with repr, which round-trips float64 exactly
    return json.dumps(problem_to_dict(problem), indent=2) + "\n"


def to_file(problem: CostModel | RatioMatrix, path: str | Path) -> None:
    Path(path).write_text(dump_problem(problem), encoding="utf-8")


def as_ratio(problem: CostModel | RatioMatrix) -> RatioMatrix:
    return problem if isinstance(problem, RatioMatrix) else ratio_from_costs(problem)


def parse_distribution(text: str, labels: Sequence[Label]) -> MixedStrategy:
    """Parse ``label weight`` lines into a strategy over ``labels`` (missing labels get 0)."""
    labels = tuple(labels)
    index = {str(lab): i for i, lab in enumerate(labels)}
    weights = np.zeros(len(labels))
    seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<label> <weight>'", line=lineno)
        label, raw = parts
        if label not in index:
            raise ParseError(f"unknown label {label!r}", line=lineno)
        try:
            w = float(raw)
        except ValueError:
            raise ParseError(f"bad weight {raw!r}", line=lineno) from None
        weights[index[label]] += w
        seen = True
    if not seen:
        raise ParseError("distribution file has no entries")
    try:
        return MixedStrategy(labels, weights)
    except InvalidDistribution as exc:
        raise ParseError(str(exc)) from None


def read_distribution(spec: str, labels: Sequence[Label]) -> MixedStrategy:
    """Resolve ``uniform``, ``point:<label>`` or a path to a distribution file."""
    labels = tuple(labels)
    if spec == "uniform":
        return MixedStrategy.uniform(labels)
    if spec.startswith("point:"):
        name = spec[len("point:"):]
        by_name = {str(lab): lab for lab in labels}
        if name not in by_name:
            raise ParseError(f"point mass on unknown label {name!r}")
        return MixedStrategy.point(labels, by_name[name])
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read distribution {spec!r}: {exc.strerror}") from None
    return parse_distribution(text, labels)


def dump_distribution(strategy: MixedStrategy) -> str:
    return "".join(f"{lab} {w!r}\n" for lab, w in zip(strategy.labels, strategy.weights.tolist()))

