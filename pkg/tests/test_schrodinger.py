import math

import numpy as np
import pytest

import oracles as O
from riemann_lab.potential import Linear, Log, PowerNearHarmonic, Quadratic, RiemannPrincipal
from riemann_lab.quantizer import STANDARD_RULE, wkb_eigenvalue
from riemann_lab.schrodinger import (GridSpec, GridTooCoarseError, choose_x_max, eigenfunction,
                                     node_count, solve_spectrum, with_method)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(n_points=10)
    with pytest.raises(ValueError):
        GridSpec(method="spectral")
    assert with_method(GridSpec(), "numerov").method == "numerov"


@pytest.mark.parametrize("method", ["fd", "numerov"])
def test_harmonic_half_line(method):
    spec = solve_spectrum(Quadratic(), GridSpec(method=method), 5)
    np.testing.assert_allclose(spec.eigenvalues, O.HARMONIC_HALF_LINE, rtol=1e-6)
    assert spec.provenance["method"] == method


@pytest.mark.parametrize("method", ["fd", "numerov"])
def test_airy_levels(method):
    spec = solve_spectrum(Linear(), GridSpec(method=method), 3)
    np.testing.assert_allclose(spec.eigenvalues, O.AIRY_LEVELS, rtol=1e-5)


def test_methods_agree_on_riemann_potential():
    a = solve_spectrum(RiemannPrincipal(), GridSpec(method="fd"), 6).eigenvalues
    b = solve_spectrum(RiemannPrincipal(), GridSpec(method="numerov"), 6).eigenvalues
    np.testing.assert_allclose(a, b, rtol=1e-6)


def test_log_potential_solves():
    spec = solve_spectrum(Log(), GridSpec(), 4)
    assert np.all(np.diff(spec.eigenvalues) > 0)


def test_x_max_policy():
    m = Quadratic()
    g = GridSpec()
    x_max = choose_x_max(m, g, 5)
    e_top = wkb_eigenvalue(m, 4, STANDARD_RULE)
    assert x_max >= 1.25 * math.sqrt(e_top)
    assert choose_x_max(m, GridSpec(x_max=100.0), 5) == pytest.approx(100.0)


def test_eigenfunction_nodes_and_norm():
    x, psi = eigenfunction(PowerNearHarmonic(), GridSpec(), 5)
    assert psi[0] == 0.0 and psi[-1] == 0.0
    assert node_count(psi) == 5
    h = x[1] - x[0]
    assert float(np.sum(psi ** 2) * h) == pytest.approx(1.0, rel=1e-6)


def test_wavefunctions_stored():
    spec = solve_spectrum(Quadratic(), GridSpec(), 3, wavefunctions=True)
    assert spec.wavefunctions.shape == (3, spec.x.size)
    for n in range(3):
        assert node_count(spec.wavefunction(n)) == n


def test_grid_too_coarse_raises():
    # a tight tolerance with no room for refinement must refuse the grid
    with pytest.raises(GridTooCoarseError):
        solve_spectrum(RiemannPrincipal(), GridSpec(n_points=1000, rel_tol=1e-14, refinements=0), 20)


def test_wkb_matches_exact_for_harmonic():
    exact = solve_spectrum(Quadratic(), GridSpec(), 5).eigenvalues
    wkb = [wkb_eigenvalue(Quadratic(), n, STANDARD_RULE) for n in range(5)]
    np.testing.assert_allclose(wkb, exact, rtol=1e-6)
