import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import dist
from yaogame.core import MixedStrategy, RatioMatrix, v_vector
from yaogame.errors import LabelMismatch
from yaogame.problems import ski_rental_ratio
from yaogame.solver import solve
from yaogame.verify import (
    certify_saddle,
    check_necessary,
    check_sufficient,
    gap,
    yao_bound_certificate,
    yao_lower_bound,
)


@pytest.fixture
def opt_pair(r2):
    return dist(r2.row_labels, 1, 2), dist(r2.col_labels, 2, 1)


def test_yao_lower_bound(r2, opt_pair):
    assert yao_lower_bound(r2, MixedStrategy.uniform(r2.col_labels)) == 1.5
    assert yao_lower_bound(r2, opt_pair[1]) == pytest.approx(5 / 3, abs=1e-15)
    assert yao_lower_bound(r2, MixedStrategy.point(r2.col_labels, "p2")) == 1


def test_sufficient_passes_on_equalized_pair(r2, opt_pair):
    cert = check_sufficient(r2, *opt_pair)
    assert cert.passed and cert.kind == "sufficient"
    assert cert.witnessed_constant == pytest.approx(5 / 3, abs=1e-9)
    assert abs(cert.metrics["C1"] - cert.metrics["C2"]) <= 1e-12
    assert cert.max_deviation <= cert.tolerance


def test_sufficient_fails_uniform(r2):
    cert = check_sufficient(r2, MixedStrategy.uniform(r2.row_labels), MixedStrategy.uniform(r2.col_labels))
    assert not cert.passed
    assert "V_f not constant" in cert.details


def test_sufficient_needs_both_sides_ski_rental():
    r = ski_rental_ratio(4, 8)
    f = MixedStrategy(r.row_labels, np.array([27, 36, 48, 64]) / 175)
    v = v_vector(r, f)
    assert np.ptp(v) <= 1e-12 and v[0] == pytest.approx(256 / 175, abs=1e-12)
    cert = check_sufficient(r, f, MixedStrategy.uniform(r.col_labels))
    assert not cert.passed
    assert "U_g not constant" in cert.details and "V_f not constant" not in cert.details


def test_necessary_examples(r2, pure, opt_pair):
    cert = check_necessary(r2, *opt_pair)
    assert cert.passed and cert.witnessed_constant == pytest.approx(5 / 3, abs=1e-12)
    assert cert.f_support == {"s1", "s2"} and cert.g_support == {"p1", "p2"}
    assert cert.metrics["yao_tight"] == 1.0

    cert = check_necessary(pure, dist(pure.row_labels, 1, 0), dist(pure.col_labels, 0, 1))
    assert cert.passed and cert.f_support == {"s1"} and cert.g_support == {"p2"}

    cert = check_necessary(r2, MixedStrategy.uniform(r2.row_labels), opt_pair[1])
    assert not cert.passed
    assert "V_f not constant on support(g)" in cert.details


def test_necessary_reports_broken_chain(r2):
    # constant on singleton supports, yet not an optimum
    f = MixedStrategy.point(r2.row_labels, "s1")
    g = MixedStrategy.point(r2.col_labels, "p1")
    cert = check_necessary(r2, f, g)
    assert cert.passed
    assert cert.metrics["yao_tight"] == 0.0 and "not a Yao-tight optimum" in cert.details


def test_saddle_examples(r2, pure, opt_pair):
    cert = certify_saddle(r2, *opt_pair)
    assert cert.passed and cert.witnessed_constant == pytest.approx(5 / 3, abs=1e-12)

    cert = certify_saddle(r2, opt_pair[0], MixedStrategy.uniform(r2.col_labels))
    assert not cert.passed
    assert "f is not a best response to g" in cert.details
    assert "g is not a best response" not in cert.details
    assert cert.metrics["f_excess"] == pytest.approx(5 / 3 - 1.5, abs=1e-12)

    cert = certify_saddle(pure, dist(pure.row_labels, 1, 0), dist(pure.col_labels, 0, 1))
    assert cert.passed and cert.witnessed_constant == 2


def test_gap_examples(r2, opt_pair):
    assert abs(gap(r2, *opt_pair)) <= 1e-12
    assert gap(r2, MixedStrategy.uniform(r2.row_labels), MixedStrategy.uniform(r2.col_labels)) == 0.5
    one = RatioMatrix.from_array([[4.0]])
    assert gap(one, MixedStrategy.point(one.row_labels, "s1"), MixedStrategy.point(one.col_labels, "p1")) == 0


def test_label_mismatch(r2):
    bad = MixedStrategy.uniform(("a", "b"))
    good = MixedStrategy.uniform(r2.col_labels)
    for check in (check_sufficient, check_necessary, certify_saddle):
        with pytest.raises(LabelMismatch):
            check(r2, bad, good)
    with pytest.raises(LabelMismatch):
        yao_lower_bound(r2, bad)


def test_yao_bound_certificate(r2):
    cert = yao_bound_certificate(r2, MixedStrategy.uniform(r2.row_labels), MixedStrategy.uniform(r2.col_labels))
    assert cert.passed and cert.witnessed_constant == 1.5 and cert.metrics["upper"] == 2.0


@st.composite
def triples(draw, max_dim=5):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    a = draw(arrays(np.float64, (m, n), elements=st.floats(1.0, 10.0)))
    r = RatioMatrix.from_array(a)
    fw = draw(arrays(np.float64, m, elements=st.floats(0.0, 1.0)))
    gw = draw(arrays(np.float64, n, elements=st.floats(0.0, 1.0)))
    fw[-1] += 1e-3
    gw[-1] += 1e-3
    return r, MixedStrategy(r.row_labels, fw / fw.sum()), MixedStrategy(r.col_labels, gw / gw.sum())


@settings(max_examples=80, deadline=None)
@given(triples())
def test_condition_ordering(t):
    r, f, g = t
    if check_sufficient(r, f, g).passed:
        assert check_necessary(r, f, g).passed
        assert certify_saddle(r, f, g).passed
        assert abs(check_sufficient(r, f, g).witnessed_constant - solve(r).value) <= 1e-6 + 1e-9


@settings(max_examples=80, deadline=None)
@given(triples())
def test_lower_bound_never_exceeds_value(t):
    r, _, g = t
    assert yao_lower_bound(r, g) <= solve(r).value + 1e-9


@settings(max_examples=60, deadline=None)
@given(triples())
def test_solver_output_certifies(t):
    r, _, _ = t
    res = solve(r)
    nec = check_necessary(r, res.f_star, res.g_star, 1e-6)
    assert nec.passed
    assert abs(yao_lower_bound(r, res.g_star) - nec.witnessed_constant) <= 1e-6
    assert certify_saddle(r, res.f_star, res.g_star, 1e-6).passed


@settings(max_examples=40, deadline=None)
@given(triples())
def test_passed_implies_bounded_deviation(t):
    r, f, g = t
    for cert in (check_sufficient(r, f, g), check_necessary(r, f, g), certify_saddle(r, f, g)):
        if cert.passed:
            assert cert.max_deviation <= cert.tolerance
            assert np.isfinite(cert.witnessed_constant)
