"""Machine-checkable optimality certificates for a (ratio matrix, f, g) triple.

Four checks of increasing strength sit here:

``yao_lower_bound``
    ``min_s U_g(s)`` lower-bounds the competitive ratio of every randomized
    algorithm, whatever ``g`` is.
``check_sufficient``
    ``V_f`` constant over every input and ``U_g`` constant over every
    algorithm; the two constants must coincide and ``f`` is then optimal.
``check_necessary``
    ``U_g`` constant on the support of ``f`` and ``V_f`` constant on the
    support of ``g``; every Yao-tight optimal pair has this property.
``certify_saddle``
    each side is a best response to the other, so the lower bound is tight.

Constancy is measured as ``max - min`` over the quantified index set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core import (
    Label,
    MixedStrategy,
    RatioMatrix,
    h_col_first,
    h_row_first,
    u_vector,
    v_vector,
)

DEFAULT_TOLERANCE = 1e-6

Kind = Literal["yao_bound", "sufficient", "necessary", "saddle"]


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    passed: bool
    witnessed_constant: float
    max_deviation: float
    f_support: frozenset[Label]
    g_support: frozenset[Label]
    tolerance: float
    details: str = ""
    metrics: dict[str, float] = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.passed


def _spread(x: np.ndarray) -> float:
    return float(x.max() - x.min()) if x.size else 0.0


def _supports(f: MixedStrategy, g: MixedStrategy) -> tuple[frozenset, frozenset]:
    return frozenset(f.support()), frozenset(g.support())


def yao_lower_bound(r: RatioMatrix, g: MixedStrategy) -> float:
    """Best deterministic algorithm's expected ratio against the random input ``g``."""
    return float(u_vector(r, g).min())


def gap(r: RatioMatrix, f: MixedStrategy, g: MixedStrategy) -> float:
    """``max_p V_f(p) - min_s U_g(s)``; zero exactly at a saddle point."""
    return float(v_vector(r, f).max() - u_vector(r, g).min())


def check_sufficient(
    r: RatioMatrix, f: MixedStrategy, g: MixedStrategy, tol: float = DEFAULT_TOLERANCE
) -> Certificate:
    u = u_vector(r, g)
    v = v_vector(r, f)
    u_spread, v_spread = _spread(u), _spread(v)
    # C1 integrates U_g against f, C2 integrates V_f against g
    c1 = h_row_first(r, f, g)
    c2 = h_col_first(r, f, g)
    deviation = max(u_spread, v_spread, abs(c1 - c2))
    passed = deviation <= tol
    problems = []
    if v_spread > tol:
        problems.append(f"V_f not constant over all inputs (spread {v_spread:.3g})")
    if u_spread > tol:
        problems.append(f"U_g not constant over all strategies (spread {u_spread:.3g})")
    if abs(c1 - c2) > tol:
        problems.append(f"C1 != C2 ({c1!r} vs {c2!r})")
    fs, gs = _supports(f, g)
    return Certificate(
        kind="sufficient",
        passed=passed,
        witnessed_constant=0.5 * (c1 + c2),
        max_deviation=deviation,
        f_support=fs,
        g_support=gs,
        tolerance=tol,
        details="f certified optimal" if passed else "; ".join(problems),
        metrics={"C1": c1, "C2": c2, "u_spread": u_spread, "v_spread": v_spread},
    )


def check_necessary(
    r: RatioMatrix, f: MixedStrategy, g: MixedStrategy, tol: float = DEFAULT_TOLERANCE
) -> Certificate:
    """Constancy on supports; the min/H/max chain is reported but does not gate the pass."""
    u = u_vector(r, g)
    v = v_vector(r, f)
    fi, gi = f.support_indices(), g.support_indices()
    u_spread = _spread(u[fi])
    v_spread = _spread(v[gi])
    h = h_row_first(r, f, g)
    lower_dev = abs(float(u.min()) - h)
    upper_dev = abs(float(v.max()) - h)
    deviation = max(u_spread, v_spread)
    passed = deviation <= tol
    problems = []
    if u_spread > tol:
        problems.append(f"U_g not constant on support(f) (spread {u_spread:.3g})")
    if v_spread > tol:
        problems.append(f"V_f not constant on support(g) (spread {v_spread:.3g})")
    tight = lower_dev <= tol and upper_dev <= tol
    chain = "min U = H = max V holds" if tight else (
        f"min U = H = max V fails (deviations {lower_dev:.3g}, {upper_dev:.3g}): not a Yao-tight optimum"
    )
    fs, gs = _supports(f, g)
    return Certificate(
        kind="necessary",
        passed=passed,
        witnessed_constant=h,
        max_deviation=deviation,
        f_support=fs,
        g_support=gs,
        tolerance=tol,
        details="; ".join(problems + [chain]),
        metrics={
            "u_spread_on_support": u_spread,
            "v_spread_on_support": v_spread,
            "chain_lower_deviation": lower_dev,
            "chain_upper_deviation": upper_dev,
            "yao_tight": float(tight),
        },
    )


def certify_saddle(
    r: RatioMatrix, f: MixedStrategy, g: MixedStrategy, tol: float = DEFAULT_TOLERANCE
) -> Certificate:
    u = u_vector(r, g)
    v = v_vector(r, f)
    h = h_row_first(r, f, g)
    f_excess = h - float(u.min())  # > 0 means some pure algorithm beats f against g
    g_shortfall = float(v.max()) - h  # > 0 means some pure input hurts f more than g
    f_ok = f_excess <= tol
    g_ok = g_shortfall <= tol
    problems = []
    if not f_ok:
        s = r.row_labels[int(u.argmin())]
        problems.append(
            f"f is not a best response to g: {s!r} attains {u.min():.10g} < H = {h:.10g}"
        )
    if not g_ok:
        p = r.col_labels[int(v.argmax())]
        problems.append(
            f"g is not a best response to f: {p!r} attains {v.max():.10g} > H = {h:.10g}"
        )
    fs, gs = _supports(f, g)
    return Certificate(
        kind="saddle",
        passed=f_ok and g_ok,
        witnessed_constant=h,
        max_deviation=max(f_excess, g_shortfall, 0.0),
        f_support=fs,
        g_support=gs,
        tolerance=tol,
        details="saddle point; Yao bound tight" if f_ok and g_ok else "; ".join(problems),
        metrics={"f_excess": f_excess, "g_shortfall": g_shortfall},
    )


def yao_bound_certificate(r: RatioMatrix, f: MixedStrategy, g: MixedStrategy) -> Certificate:
    """Weak-duality record: the bound from ``g`` against the ratio guaranteed by ``f``."""
    lower = yao_lower_bound(r, g)
    upper = float(v_vector(r, f).max())
    fs, gs = _supports(f, g)
    return Certificate(
        kind="yao_bound",
        passed=lower <= upper + 1e-12,
        witnessed_constant=lower,
        max_deviation=max(lower - upper, 0.0),
        f_support=fs,
        g_support=gs,
        tolerance=1e-12,
        details=f"lower bound {lower:.10g} <= competitive ratio of f {upper:.10g}",
        metrics={"lower": lower, "upper": upper, "gap": upper - lower},
    )


CHECKS = {
    "sufficient": check_sufficient,
    "necessary": check_necessary,
    "saddle": certify_saddle,
}
