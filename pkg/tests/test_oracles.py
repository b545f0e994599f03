"""The independent oracles must agree with their frozen values before anything else is trusted."""
import math

import pytest

import oracles as O


@pytest.mark.parametrize("x, frozen", [(2.0, O.LI_2), (10.0, O.LI_10), (100.0, O.LI_100)])
def test_ramanujan_series_matches_frozen_li(x, frozen):
    assert O.li_ramanujan(x) == pytest.approx(frozen, rel=1e-13)


def test_li_quadrature_route_agrees_with_series():
    for x in (3.0, 10.0, 57.5):
        assert O.li_by_quadrature(x) == pytest.approx(O.li_ramanujan(x), rel=1e-12)


def test_ei_series_frozen():
    assert O.ei_series(1.0) == pytest.approx(O.EI_1, rel=1e-14)
    assert O.ei_series(-2.0) == pytest.approx(O.EI_M2, rel=1e-12)


def test_si_and_beta_frozen():
    assert O.si_taylor(math.pi) == pytest.approx(O.SI_PI, rel=1e-14)
    assert O.beta_quad(2.5, 0.5) == pytest.approx(O.BETA_52_12, rel=1e-10)


def test_trial_division_j():
    assert O.j_trial_division(20) == pytest.approx(8 + 1 + 1 / 3 + 1 / 4)
    assert O.j_trial_division(2) == 1.0
