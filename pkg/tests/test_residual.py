import math

import numpy as np
import pytest

from analytic_core import Dimension, DomainError, ROUNDED_TOLERANCE, PotentialParams, ProblemSpec
from analytic_core import legacy, solutions
from numeric_oracle.residual import max_relative_residual, ode_residual, raw_ode_residual

THREE_D = ProblemSpec(Dimension.THREE_D, ell=0)
CROSS = ProblemSpec(Dimension.THREE_D, ell=0, ell_prime=1)
ROUNDED_CROSS = PotentialParams(a=1.0, b=-4.2011, c=0.75878)


def test_exact_family():
    params = solutions.solve_same_qn(1.0, THREE_D)
    for sol in solutions.build_solutions(params, THREE_D):
        for r in (0.5, 1.0, 2.0, 3.0):
            _, relative = ode_residual(sol, r)
            assert relative < 1e-12


def test_residual_at_node():
    params = solutions.solve_same_qn(1.0, THREE_D)
    _, excited = solutions.build_solutions(params, THREE_D)
    raw, relative = ode_residual(excited, 1.875 ** 0.25)
    assert abs(raw) < 1e-12
    assert relative < 1e-12


def test_rounded_cross_family():
    r = np.geomspace(0.3, 4.0, 64)
    for sol in solutions.build_solutions(ROUNDED_CROSS, CROSS, tolerance=ROUNDED_TOLERANCE):
        assert max_relative_residual(sol, r) < 1e-3


def test_legacy_candidate_fails():
    sol = legacy.legacy_excited_candidate()
    _, relative = ode_residual(sol, 1.0)
    assert relative > 1e-2
    # The legacy ground state is a genuine solution up to rounding
    assert max_relative_residual(legacy.legacy_ground_state(), np.geomspace(0.3, 4.0, 64)) < 1e-3


def test_random_families():
    rng = np.random.default_rng(99)
    r = np.geomspace(0.3, 4.0, 64)
    for _ in range(200):
        a = float(np.exp(rng.uniform(math.log(0.1), math.log(10.0))))
        dimension = Dimension.THREE_D if rng.random() < 0.5 else Dimension.TWO_D
        spec = ProblemSpec(dimension, ell=int(rng.integers(0, 2)))
        for sol in solutions.build_solutions(solutions.solve_same_qn(a, spec), spec):
            assert max_relative_residual(sol, r) <= 1e-10


def test_array_shape():
    params = solutions.solve_same_qn(1.0, THREE_D)
    ground, _ = solutions.build_solutions(params, THREE_D)
    r = np.linspace(0.5, 3.0, 7)
    raw, relative = ode_residual(ground, r)
    assert raw.shape == relative.shape == (7,)
    assert isinstance(raw_ode_residual(ground, 1.0), float)


def test_domain_error():
    params = solutions.solve_same_qn(1.0, THREE_D)
    ground, _ = solutions.build_solutions(params, THREE_D)
    with pytest.raises(DomainError):
        ode_residual(ground, 0.0)
    with pytest.raises(DomainError):
        raw_ode_residual(ground, np.array([1.0, -2.0]))
