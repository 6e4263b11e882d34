import numpy as np
import pytest

from analytic_core import Dimension, ProblemSpec, QuantumNumber
from analytic_core import solutions
from numeric_oracle import GridTooCoarse, InvalidWindow, RadialGrid
from numeric_oracle import eigensolver

THREE_D = ProblemSpec(Dimension.THREE_D, ell=0)
TWO_D = ProblemSpec(Dimension.TWO_D, ell=0)

GRID = RadialGrid(0.15, 7.0, 4000)


def test_three_d_eigenvalues():
    params = solutions.solve_same_qn(1.0, THREE_D)
    result = eigensolver.fd_eigensolve(params, THREE_D, GRID)
    assert result.best == pytest.approx([-2.0, 6.0], abs=1e-3)
    assert result.eigenvalues[0] < 0
    assert np.all(result.error_estimates < 1e-3)


def test_two_d_eigenvalues():
    params = solutions.solve_same_qn(1.0, TWO_D)
    result = eigensolver.fd_eigensolve(params, TWO_D, GRID)
    assert result.best == pytest.approx([-2.0, 6.0], abs=1e-3)


def test_spacing_scales_with_a():
    params = solutions.solve_same_qn(4.0, THREE_D)
    result = eigensolver.fd_eigensolve(params, THREE_D, RadialGrid.default_for(params))
    assert result.best[1] - result.best[0] == pytest.approx(16.0, abs=2e-3)


def test_node_counts():
    params = solutions.solve_same_qn(1.0, THREE_D)
    result = eigensolver.fd_eigensolve(params, THREE_D, GRID)
    assert result.node_counts == [0, 1]
    assert result.node_positions[1][0] == pytest.approx(1.875 ** 0.25, abs=GRID.spacing)


def test_excited_channel():
    spec = ProblemSpec(Dimension.THREE_D, ell=1)
    params = solutions.solve_same_qn(1.0, spec)
    result = eigensolver.fd_eigensolve(params, spec, RadialGrid.default_for(params),
                                       qn=QuantumNumber.EXCITED)
    _, excited = solutions.build_solutions(params, spec)
    assert result.best[1] == pytest.approx(excited.energy, abs=1e-3)


@pytest.mark.parametrize("dimension, qn", [(Dimension.THREE_D, 0), (Dimension.THREE_D, 1),
                                           (Dimension.TWO_D, 0), (Dimension.TWO_D, 1)])
def test_observed_order(dimension, qn):
    spec = ProblemSpec(dimension, ell=qn)
    params = solutions.solve_same_qn(1.0, spec)
    grid = RadialGrid.default_for(params, n=4000)
    ground, _ = solutions.build_solutions(params, spec)
    order = eigensolver.observed_order(params, spec, grid, reference=ground.energy)
    assert 3.6 <= 2 ** order <= 4.4
    order = eigensolver.observed_order(params, spec, grid)
    assert 3.6 <= 2 ** order <= 4.4


@pytest.mark.parametrize("dimension, qn", [(Dimension.THREE_D, 0), (Dimension.THREE_D, 1),
                                           (Dimension.TWO_D, 0), (Dimension.TWO_D, 1)])
def test_monotone_convergence(dimension, qn):
    spec = ProblemSpec(dimension, ell=qn)
    params = solutions.solve_same_qn(1.0, spec)
    ground, _ = solutions.build_solutions(params, spec)
    grid = RadialGrid.default_for(params, n=4000)
    errors = []
    for _ in range(3):
        result = eigensolver.fd_eigensolve(params, spec, grid, k=1, refine=False)
        errors.append(result.eigenvalues[0] - ground.energy)
        grid = grid.refined()
    # The three-point Laplacian shifts the eigenvalue by -h^2/12 times the integral of (u'')^2
    assert errors[0] < errors[1] < errors[2] < 0


def test_invalid_window():
    params = solutions.solve_same_qn(1.0, THREE_D)
    with pytest.raises(InvalidWindow):
        eigensolver.fd_eigensolve(params, THREE_D, RadialGrid(0.5, 7.0, 100))
    with pytest.raises(InvalidWindow):
        eigensolver.fd_eigensolve(params, THREE_D, RadialGrid(0.15, 3.0, 100))


def test_grid_too_coarse():
    params = solutions.solve_same_qn(1.0, THREE_D)
    with pytest.raises(GridTooCoarse):
        eigensolver.fd_eigensolve(params, THREE_D, RadialGrid(0.15, 7.0, 16))


def test_radial_grid():
    grid = RadialGrid(1.0, 2.0, 99)
    assert grid.spacing == pytest.approx(0.01)
    assert grid.points[0] == pytest.approx(1.01)
    assert grid.points[-1] == pytest.approx(1.99)
    assert grid.refined().spacing == pytest.approx(0.005)
    with pytest.raises(ValueError):
        RadialGrid(1.0, 2.0, 8)
    with pytest.raises(ValueError):
        RadialGrid(0.0, 2.0, 100)
    with pytest.raises(ValueError):
        RadialGrid(2.0, 1.0, 100)


def test_default_grid_passes_window_check():
    for a in (0.1, 1.0, 10.0):
        params = solutions.solve_same_qn(a, THREE_D)
        eigensolver.check_window(params, RadialGrid.default_for(params))


def test_richardson_extrapolate():
    h = 0.1
    assert eigensolver.richardson_extrapolate([1 + h * h, 1 + h * h / 4]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        eigensolver.richardson_extrapolate([1.0])


def test_sign_changes():
    r = np.linspace(0.0, 1.0, 11)
    assert eigensolver.sign_changes(r, r - 0.55) == pytest.approx([0.55])
    assert eigensolver.sign_changes(r, r + 1.0) == []
