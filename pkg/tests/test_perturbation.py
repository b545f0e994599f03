import math

import numpy as np
import pytest

from riemann_lab.potential import RiemannPrincipal, SMode, perturbation_potential
from riemann_lab.quantizer import STANDARD_RULE, turning_point, wkb_eigenvalue
from riemann_lab.perturbation import (RH_PREFACTOR, ClosedForm, ClosedFormParams, DivergenceError,
                                      MissingStateError, StateSource, attractor_iteration,
                                      first_order_closed, first_order_numeric,
                                      integral_closed_form, perturbed_spectrum, rh_closed_form,
                                      rh_closed_form_correction)
from riemann_lab.specfun import DomainError
from riemann_lab.zeros import ZeroSet

M0 = RiemannPrincipal()


def test_params():
    p = ClosedFormParams()
    assert p.C == pytest.approx(3.0 * math.pi / 8.0, rel=1e-13)
    assert RH_PREFACTOR == pytest.approx(2.0 * p.C)
    with pytest.raises(ValueError):
        ClosedFormParams(delta=0.0)
    assert ClosedFormParams.from_zeros(ZeroSet.empty()).alpha_1 == p.alpha_1


def test_closed_forms_domain():
    p = ClosedFormParams()
    for form in ClosedForm:
        with pytest.raises(DomainError):
            first_order_closed(1.5, p, form, zeros=ZeroSet.critical_line([14.13]))
    with pytest.raises(ValueError):
        first_order_closed(10.0, p, ClosedForm.LINEAR)


def test_linear_form_is_scaled_vrp(zeros):
    z = zeros.head(30)
    p = ClosedFormParams.from_zeros(z)
    for x in (10.0, 300.0):
        assert first_order_closed(x, p, "linear", zeros=z) == pytest.approx(
            3.0 * math.pi / 8.0 * perturbation_potential(x, z))


def test_rh_closed_form_envelope():
    p = ClosedFormParams()
    x = 1e4
    lx = math.log(x)
    env = RH_PREFACTOR * x ** 1.5 / lx ** 2 * math.log(p.alpha_1) / p.alpha_1
    assert abs(rh_closed_form(x, p)) <= env * (1 + 1e-12)
    assert rh_closed_form_correction(x, p) == pytest.approx(abs(rh_closed_form(x, p)) / lx)


def test_integral_form_vanishes_at_cutoff():
    assert integral_closed_form(2.0, ClosedFormParams()) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.xfail(strict=True, reason="printed amplitude ratio is 0.118, not 1e-2")
def test_integral_over_rh_ratio_near_one_percent():
    p = ClosedFormParams()
    xs = np.geomspace(1e3, 1e5, 40)
    r = np.median([abs(integral_closed_form(x, p)) / abs(rh_closed_form(x, p)) for x in xs])
    assert 3e-3 <= r <= 3e-2


def test_numeric_additivity_over_pairs(zeros):
    z = zeros.head(6)
    budget = float(z.alpha[-1])
    kw = dict(source=StateSource.WKB, rule=STANDARD_RULE, alpha_budget=budget)
    total = first_order_numeric(M0, z, SMode.TERM_SUM, 15, **kw).value
    parts = sum(first_order_numeric(M0, ZeroSet(z.a[k:k + 1], z.alpha[k:k + 1]),
                                    SMode.TERM_SUM, 15, **kw).value for k in range(6))
    assert total == pytest.approx(parts, rel=1e-10)


def test_exact_source_and_missing_state(zeros):
    z = zeros.head(10)
    me = first_order_numeric(M0, z, SMode.TERM_SUM, 3, StateSource.EXACT, count=5)
    assert math.isfinite(me.value) and me.tail_bound >= 0.0
    assert float(me) == me.value
    with pytest.raises(MissingStateError):
        first_order_numeric(M0, z, SMode.TERM_SUM, 5, StateSource.EXACT, count=5)
    with pytest.raises(MissingStateError):
        first_order_numeric(M0, z, SMode.TERM_SUM, -1)
    with pytest.raises(ValueError):
        first_order_numeric(M0, z, SMode.TERM_SUM, 1, "wkb", patch_mode="ignore")


def test_empty_zero_set_gives_no_shift():
    levels = perturbed_spectrum(M0, ZeroSet.empty(), SMode.TERM_SUM, [1, 2, 3])
    assert all(lv.E_N1_numeric == 0.0 and lv.E_N1_closed == 0.0 for lv in levels)
    assert [lv.N for lv in levels] == [1, 2, 3]


def test_perturbed_spectrum_fields(zeros):
    levels = perturbed_spectrum(M0, zeros.head(20), SMode.TERM_SUM, [4, 2, 8], STANDARD_RULE)
    assert [lv.N for lv in levels] == [2, 4, 8]
    assert all(levels[i].E_N0 < levels[i + 1].E_N0 for i in range(2))
    for lv in levels:
        assert lv.x_T == pytest.approx(turning_point(M0, lv.E_N0))


@pytest.mark.parametrize("n", [20, 40])
def test_wkb_patch_substitution_tracks_exact(zeros, n):
    z = zeros.head(50)
    exact = first_order_numeric(M0, z, SMode.TERM_SUM, n, StateSource.EXACT,
                                rule=STANDARD_RULE, count=n + 1).value
    wkb = first_order_numeric(M0, z, SMode.TERM_SUM, n, StateSource.WKB, rule=STANDARD_RULE,
                              patch_mode="substitute").value
    assert wkb == pytest.approx(exact, rel=0.25)


@pytest.mark.xfail(strict=True, reason="Airy patch holds most of the V_RP weight")
@pytest.mark.parametrize("n", [20, 40])
def test_wkb_matches_exact_within_ten_percent(zeros, n):
    z = zeros.head(50)
    exact = first_order_numeric(M0, z, SMode.TERM_SUM, n, StateSource.EXACT,
                                rule=STANDARD_RULE, count=n + 1).value
    wkb = first_order_numeric(M0, z, SMode.TERM_SUM, n, StateSource.WKB, rule=STANDARD_RULE).value
    assert wkb == pytest.approx(exact, rel=0.10)


@pytest.mark.parametrize("rule", ["paper", "standard"])
def test_attractor_single_step_is_bounded(zeros, rule):
    z = zeros.head(100)
    step = attractor_iteration(z, rule, steps=1, n_levels=20)[0]
    assert step.step == 1 and step.alpha.size == 100
    rel = np.abs(step.alpha[:20] - z.alpha[:20]) / z.alpha[:20]
    assert np.all(rel < 1.0)
    assert step.max_shift >= step.mean_shift > 0.0
    np.testing.assert_array_equal(step.alpha[20:], z.alpha[20:])


def test_attractor_empty_set_fixed_point():
    step = attractor_iteration(ZeroSet.empty(), "paper", steps=1, n_levels=5)[0]
    expected = [wkb_eigenvalue(M0, n) for n in range(5)]
    np.testing.assert_allclose(step.alpha, expected, rtol=1e-14)


def test_attractor_deterministic(zeros):
    a = attractor_iteration(zeros.head(30), steps=1, n_levels=10)[0].alpha
    b = attractor_iteration(zeros.head(30), steps=1, n_levels=10)[0].alpha
    assert a.tobytes() == b.tobytes()


def test_attractor_pads_short_sets(zeros):
    hist = attractor_iteration(zeros.head(3), STANDARD_RULE, steps=1, n_levels=6)
    assert hist[0].alpha.size == 6


def test_attractor_step_validation(zeros):
    with pytest.raises(ValueError):
        attractor_iteration(zeros.head(3), steps=0)


def test_attractor_guard_trips_on_runaway(zeros):
    # the first update drags the lowest heights below 2, which blows up S on the next step
    with pytest.raises(DivergenceError):
        attractor_iteration(zeros.head(30), "paper", steps=2, n_levels=10)
