import math

import numpy as np
import pytest

from analytic_core import DegenerateDenominator, Dimension, ProblemSpec
from analytic_core import constraints, cross_qn, solutions

CROSS = ProblemSpec(Dimension.THREE_D, ell=0, ell_prime=1)


def residuals(params, ell, ell_prime):
    spec = ProblemSpec(Dimension.THREE_D, ell=ell, ell_prime=ell_prime)
    return (constraints.ground_constraint_residual(params, spec),
            constraints.cross_constraint_residual(params, ell, ell_prime))


def test_solve_cross_l():
    params = cross_qn.solve_cross_l(1.0, 0, 1)
    assert params.b == pytest.approx(-4.2011, abs=1e-4)
    assert params.c == pytest.approx(0.75878, abs=1e-4)
    assert params.b == pytest.approx(-4.20110267, abs=1e-7)
    assert params.c == pytest.approx(0.75877753, abs=1e-7)
    for residual in residuals(params, 0, 1):
        assert abs(residual) < 1e-9


def test_solve_cross_l_scales_with_a():
    base = cross_qn.solve_cross_l(1.0, 0, 1)
    params = cross_qn.solve_cross_l(4.0, 0, 1)
    # b/sqrt(c) and sqrt(ac) are invariant
    assert params.b == pytest.approx(base.b / 2, rel=1e-8)
    assert params.c == pytest.approx(base.c / 4, rel=1e-8)
    for residual in residuals(params, 0, 1):
        assert abs(residual) < 1e-9


def test_find_cross_l_roots():
    roots = cross_qn.find_cross_l_roots(1.0, 0, 1)
    assert len(roots) == 1
    assert roots[0].b == pytest.approx(-4.20110267, abs=1e-7)
    assert roots[0].c == pytest.approx(0.75877753, abs=1e-7)


def test_find_cross_l_roots_two_branches():
    roots = cross_qn.find_cross_l_roots(1.0, 1, 0)
    assert len(roots) == 2
    assert roots[0].c < roots[1].c
    for params in roots:
        for residual in residuals(params, 1, 0):
            assert abs(residual) < 1e-9


def test_find_cross_l_roots_none():
    assert cross_qn.find_cross_l_roots(1.0, 1, 2) == []


def test_solve_cross_l_fallback():
    params = cross_qn.solve_cross_l(1.0, 2, 3)
    assert params.sqrt_ac == pytest.approx(2.01, abs=0.01)
    for residual in residuals(params, 2, 3):
        assert abs(residual) < 1e-9


def test_initial_guess():
    assert cross_qn.initial_guess(1.0, 0, 1) == (-4.0, 0.9)
    b0, s0 = cross_qn.initial_guess(4.0, 0, 1)
    assert b0 == -2.0 and s0 == 0.45
    assert cross_qn.initial_guess(1.0, 2, 3) is None


def test_solve_cross_l_invalid():
    with pytest.raises(DegenerateDenominator):
        cross_qn.solve_cross_l(1.0, 1, 1)
    with pytest.raises(ValueError):
        cross_qn.solve_cross_l(0.0, 0, 1)
    with pytest.raises(ValueError):
        cross_qn.solve_cross_l(1.0, -1, 1)


def test_roots_sit_on_ground_branch():
    for params in cross_qn.find_cross_l_roots(1.0, 1, 0):
        x = params.b / params.sqrt_c
        assert (x + 2) ** 2 == pytest.approx(9 + 8 * params.sqrt_ac, rel=1e-9)
        assert math.isfinite(params.b)


def test_solve_cross_l_any_a():
    base = cross_qn.solve_cross_l(1.0, 0, 1)
    for a in np.geomspace(1e-8, 1e8, 33):
        params = cross_qn.solve_cross_l(float(a), 0, 1)
        assert params.b / params.sqrt_c == pytest.approx(base.b / base.sqrt_c, rel=1e-8)
        assert params.sqrt_ac == pytest.approx(base.sqrt_ac, rel=1e-8)
        ground, excited = solutions.build_solutions(params, CROSS)
        assert excited.energy - ground.energy == pytest.approx(8.0 * math.sqrt(a), rel=1e-8)
