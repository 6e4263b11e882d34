import dataclasses

import pytest
from scipy.integrate import quad

from analytic_core import Dimension, PotentialParams, ProblemSpec
from analytic_core import legacy, solutions
from analytic_core.ansatz import radial_eval
from numeric_oracle import NonIntegrable
from numeric_oracle import quadrature

THREE_D = ProblemSpec(Dimension.THREE_D, ell=0)
TWO_D = ProblemSpec(Dimension.TWO_D, ell=0)


def states():
    family_3d = solutions.build_solutions(solutions.solve_same_qn(1.0, THREE_D), THREE_D)
    family_2d = solutions.build_solutions(solutions.solve_same_qn(1.0, TWO_D), TWO_D)
    return [*family_3d, *family_2d, legacy.legacy_excited_candidate()]


@pytest.mark.parametrize("sol", states(), ids=["3d-ground", "3d-excited", "2d-ground",
                                                "2d-excited", "legacy-excited"])
def test_three_integrals_agree(sol):
    result = quadrature.normalization(sol)
    assert result.integral == pytest.approx(quadrature.closed_form_integral(sol), rel=1e-8)
    assert result.integral == pytest.approx(quadrature.gauss_legendre_integral(sol), rel=1e-8)


def test_normalized_integral_is_one():
    for sol in states():
        result = quadrature.normalization(sol)
        assert result.norm ** 2 * result.integral == pytest.approx(1.0, rel=1e-12)
        unit = quadrature.normalized(sol)
        lo, hi = result.window
        integral, _ = quad(lambda r: radial_eval(unit, r) ** 2, lo, hi, limit=200, epsrel=1e-10,
                           points=[x for x in (1.875 ** 0.25, 2 ** 0.25) if lo < x < hi])
        assert integral == pytest.approx(1.0, rel=1e-8)


def test_amplitude_scaling():
    params = solutions.solve_same_qn(1.0, THREE_D)
    _, excited = solutions.build_solutions(params, THREE_D)
    doubled = dataclasses.replace(excited, alpha=2 * excited.alpha, beta=2 * excited.beta,
                                  gamma=2 * excited.gamma)
    assert quadrature.normalize(doubled) == pytest.approx(quadrature.normalize(excited) / 2, rel=1e-10)


def test_existing_norm_is_ignored():
    sol = states()[0]
    assert quadrature.normalize(dataclasses.replace(sol, norm=5.0)) == pytest.approx(
        quadrature.normalize(sol), rel=1e-12)


def test_window_depth_invariance():
    for sol in states():
        shallow = quadrature.normalization(sol, depth=40.0)
        deep = quadrature.normalization(sol, depth=50.0)
        assert deep.window[0] <= shallow.window[0] and deep.window[1] >= shallow.window[1]
        assert deep.integral == pytest.approx(shallow.integral, rel=1e-10)
        assert deep.norm == pytest.approx(shallow.norm, rel=1e-10)


def test_closed_form_scales_with_a():
    for a in (0.25, 4.0):
        spec = ProblemSpec(Dimension.THREE_D, ell=1)
        for sol in solutions.build_solutions(solutions.solve_same_qn(a, spec), spec):
            assert quadrature.closed_form_integral(sol) == pytest.approx(
                quadrature.normalization(sol).integral, rel=1e-8)


def test_non_integrable():
    sol = dataclasses.replace(states()[0], kappa=5e6)
    with pytest.raises(NonIntegrable):
        quadrature.integration_window(sol)
    with pytest.raises(NonIntegrable):
        quadrature.normalize(sol)


def test_integration_window_brackets_peak():
    params = PotentialParams(a=1.0, b=-11.25, c=1.875 ** 2)
    ground = solutions.ground_state(params, THREE_D)
    lo, hi = quadrature.integration_window(ground)
    assert lo < 1.0 < hi
