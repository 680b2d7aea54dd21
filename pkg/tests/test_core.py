import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import dist
from oracles import fubini_loops, ski_costs_by_hand
from yaogame.core import (
    CostModel,
    MixedStrategy,
    RatioMatrix,
    bilinear_value_h,
    deterministic_cr,
    expected_ratio_u,
    expected_ratio_v,
    h_col_first,
    h_row_first,
    ratio_from_costs,
    u_vector,
    v_vector,
    validate,
)
from yaogame.errors import (
    DimensionMismatch,
    InvalidDistribution,
    LabelMismatch,
    NonFiniteEntry,
    SubUnitRatio,
    ZeroOfflineCost,
)
from yaogame.problems import ski_rental_ratio


# --- construction -----------------------------------------------------------

def test_ratio_from_ski_rental_b2_costs():
    on, off = ski_costs_by_hand(2, 2)
    assert on == [[2, 2], [1, 3]] and off == [1, 2]
    r = ratio_from_costs(CostModel.from_arrays(on, off))
    np.testing.assert_array_equal(r.r, [[2, 1], [1, 1.5]])
    assert r.row_labels == ("s1", "s2") and r.col_labels == ("p1", "p2")


def test_ratio_identity_case():
    off = [2.0, 5.0, 7.0]
    r = ratio_from_costs(CostModel.from_arrays([off, off], off))
    np.testing.assert_array_equal(r.r, np.ones((2, 3)))


def test_zero_offline_cost_rejected():
    with pytest.raises(ZeroOfflineCost):
        CostModel.from_arrays([[1, 1]], [1, 0])


def test_sub_unit_ratio_needs_raw_flag():
    with pytest.raises(SubUnitRatio):
        CostModel.from_arrays([[0.5, 2]], [1, 1])
    model = CostModel.from_arrays([[0.5, 2]], [1, 1], raw_game=True)
    assert ratio_from_costs(model).r[0, 0] == 0.5
    with pytest.raises(SubUnitRatio):
        RatioMatrix.from_array([[0.5]])
    assert RatioMatrix.from_array([[0.5]], raw_game=True).r[0, 0] == 0.5


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        CostModel.from_arrays([[1, 2]], [1])
    with pytest.raises(DimensionMismatch):
        RatioMatrix.from_array([[1, 2]], row_labels=["a", "b"])
    with pytest.raises(DimensionMismatch):
        RatioMatrix.from_array([[1, 2]], col_labels=["a", "a"])


def test_non_finite_rejected():
    with pytest.raises(NonFiniteEntry):
        RatioMatrix.from_array([[1, math.nan]])
    with pytest.raises(NonFiniteEntry):
        CostModel.from_arrays([[math.inf]], [1])


def test_arrays_are_immutable(r2):
    with pytest.raises(ValueError):
        r2.r[0, 0] = 5.0


@pytest.mark.parametrize(
    "weights, error",
    [([0.5, 0.6], InvalidDistribution), ([1.5, -0.5], InvalidDistribution), ([0.0, 0.0], InvalidDistribution)],
)
def test_mixed_strategy_invariants(weights, error):
    with pytest.raises(error):
        MixedStrategy(("a", "b"), weights)


def test_mixed_strategy_support():
    s = MixedStrategy(("a", "b", "c"), [0.5, 0.5 - 1e-10, 1e-10])
    assert s.support() == ("a", "b")
    assert s["b"] == pytest.approx(0.5)


# --- U, V, H ----------------------------------------------------------------

def test_u_examples(r2):
    g = MixedStrategy.uniform(r2.col_labels)
    assert expected_ratio_u(r2, g, "s1") == 2.0
    assert expected_ratio_u(r2, MixedStrategy.point(r2.col_labels, "p2"), "s1") == 3.0
    assert expected_ratio_u(r2, dist(r2.col_labels, 2, 1), "s2") == pytest.approx(5 / 3, abs=1e-15)


def test_v_examples(r2):
    assert expected_ratio_v(r2, dist(r2.row_labels, 1, 2), "p1") == pytest.approx(5 / 3, abs=1e-15)
    assert expected_ratio_v(r2, MixedStrategy.point(r2.row_labels, "s2"), "p2") == 1.0
    assert expected_ratio_v(r2, MixedStrategy.uniform(r2.row_labels), "p2") == 2.0


def test_h_examples(r2):
    f = MixedStrategy.point(r2.row_labels, "s1")
    g = MixedStrategy.point(r2.col_labels, "p2")
    assert bilinear_value_h(r2, f, g) == 3.0
    assert bilinear_value_h(r2, dist(r2.row_labels, 1, 2), dist(r2.col_labels, 2, 1)) == pytest.approx(
        5 / 3, abs=1e-15
    )
    u_r = MixedStrategy.uniform(r2.row_labels)
    u_c = MixedStrategy.uniform(r2.col_labels)
    assert bilinear_value_h(r2, u_r, u_c) == 7 / 4


def test_label_mismatch(r2):
    wrong = MixedStrategy.uniform(("x", "y"))
    with pytest.raises(LabelMismatch):
        u_vector(r2, wrong)
    with pytest.raises(LabelMismatch):
        v_vector(r2, wrong)
    with pytest.raises(LabelMismatch):
        expected_ratio_u(r2, MixedStrategy.uniform(r2.col_labels), "s9")
    with pytest.raises(LabelMismatch):
        deterministic_cr(r2, "nope")


def test_deterministic_cr(r2):
    assert deterministic_cr(r2, "s1") == 3
    assert deterministic_cr(r2, "s2") == 2
    ones = RatioMatrix.from_array(np.ones((3, 4)))
    assert all(deterministic_cr(ones, s) == 1 for s in ones.row_labels)


# --- validate ---------------------------------------------------------------

def test_validate_reports_row_dominance():
    d = validate(RatioMatrix.from_array([[1, 2], [1, 3]]))
    assert ("s1", "s2") in d.dominated_rows
    assert ("s2", "s1") not in d.dominated_rows


def test_validate_flags_nan():
    d = validate(np.array([[1.0, math.nan]]))
    assert not d.finite and not d.ratio_bound_holds


def test_validate_ski_rental():
    d = validate(ski_rental_ratio(4, 8))
    assert d.shape == (4, 8)
    assert d.min_entry == 1.0 and d.ratio_bound_holds
    # every input past the buy price repeats column p4
    assert {("p4", f"p{k}") for k in range(5, 9)} <= set(d.dominated_cols)


# --- properties -------------------------------------------------------------

@st.composite
def games(draw, max_dim=6):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    entries = draw(arrays(np.float64, (m, n), elements=st.floats(1.0, 10.0)))
    r = RatioMatrix.from_array(entries)
    fw = draw(arrays(np.float64, m, elements=st.floats(0.0, 1.0)))
    gw = draw(arrays(np.float64, n, elements=st.floats(0.0, 1.0)))
    fw[0] += 1e-3
    gw[0] += 1e-3
    f = MixedStrategy(r.row_labels, fw / fw.sum())
    g = MixedStrategy(r.col_labels, gw / gw.sum())
    return r, f, g


@given(games())
def test_finite_fubini(game):
    r, f, g = game
    assert abs(h_row_first(r, f, g) - h_col_first(r, f, g)) <= 1e-12
    lo, hi = fubini_loops(r.r, f.weights.tolist(), g.weights.tolist())
    assert h_row_first(r, f, g) == pytest.approx(lo, abs=1e-12)
    assert h_col_first(r, f, g) == pytest.approx(hi, abs=1e-12)


@given(games())
def test_convexity_sandwich(game):
    r, f, g = game
    h = bilinear_value_h(r, f, g)
    assert u_vector(r, g).min() <= h + 1e-12
    assert h <= v_vector(r, f).max() + 1e-12


@given(games())
def test_point_mass_consistency(game):
    r, _, _ = game
    for i, s in enumerate(r.row_labels):
        f = MixedStrategy.point(r.row_labels, s)
        for j, p in enumerate(r.col_labels):
            g = MixedStrategy.point(r.col_labels, p)
            assert expected_ratio_u(r, g, s) == r.r[i, j]
            assert expected_ratio_v(r, f, p) == r.r[i, j]
        assert deterministic_cr(r, s) == v_vector(r, f).max()


@settings(max_examples=50)
@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.data(),
)
def test_cost_derived_ratios_at_least_one(m, n, data):
    off = np.array(data.draw(st.lists(st.floats(0.1, 100.0), min_size=n, max_size=n)))
    extra = data.draw(arrays(np.float64, (m, n), elements=st.floats(0.0, 50.0)))
    r = ratio_from_costs(CostModel.from_arrays(off[None, :] + extra, off))
    assert r.r.min() >= 1 - 1e-12
