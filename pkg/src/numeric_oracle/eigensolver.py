#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Finite-difference eigensolver for -R'' + [V(r) + L/r^2] R = E R.

The three-point second difference with Dirichlet walls at r_min and r_max gives a symmetric
tridiagonal matrix. Its lowest eigenvalues come from Sturm-sequence bisection (LAPACK stebz)
and the eigenvectors from inverse iteration. One Richardson step on the grid with half the
spacing removes the leading h^2 error.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from analytic_core import PotentialParams, ProblemSpec, QuantumNumber, centrifugal_coefficient
from numeric_oracle import (EigenResult, GridTooCoarse, InvalidWindow, RadialGrid,
                            WALL_EXPONENT)

log = logging.getLogger("qes-radial.oracle")

EIGENVALUE_TOLERANCE = 1e-12

# Largest Richardson correction, relative to max(1, |E|), before the grid is declared too coarse.
COARSE_THRESHOLD = 1e-2

# Entries smaller than this fraction of the largest are ignored when counting sign changes.
NODE_FLOOR = 1e-6


def check_window(params: PotentialParams, grid: RadialGrid):
    """Raise InvalidWindow if either wall sits where the analytic envelope is not negligible."""
    inner = params.sqrt_c / grid.r_min ** 2
    outer = params.sqrt_a * grid.r_max ** 2
    if inner < WALL_EXPONENT:
        raise InvalidWindow(f"r_min={grid.r_min:g} truncates the solution: sqrt(c)/r_min^2 = {inner:.4g} "
                            f"< {WALL_EXPONENT}")
    if outer < WALL_EXPONENT:
        raise InvalidWindow(f"r_max={grid.r_max:g} truncates the solution: sqrt(a) r_max^2 = {outer:.4g} "
                            f"< {WALL_EXPONENT}")


def richardson_extrapolate(base_values: Sequence[np.ndarray | float], p: int = 2,
                           r: float = 2.0) -> np.ndarray | float:
    """Combine approximations whose step shrinks by `r` per entry, with leading error O(h^p)."""
    if len(base_values) < 2:
        raise ValueError("richardson_extrapolate requires at least two base values")
    vals = [np.asarray(v, dtype=float) for v in base_values]
    for j in range(1, len(vals)):
        factor = r ** (p * j)
        for k in range(len(vals) - 1, j - 1, -1):
            vals[k] = (factor * vals[k] - vals[k - 1]) / (factor - 1.0)
    result = vals[-1]
    return float(result) if result.ndim == 0 else result


def sign_changes(r: np.ndarray, v: np.ndarray) -> list[float]:
    """Positions of the sign changes of `v`, linearly interpolated between grid points."""
    significant = np.flatnonzero(np.abs(v) > NODE_FLOOR * np.max(np.abs(v)))
    vs = v[significant]
    flips = np.flatnonzero(np.signbit(vs[:-1]) != np.signbit(vs[1:]))
    positions = []
    for j in flips:
        i0, i1 = significant[j], significant[j + 1]
        positions.append(float(r[i0] - v[i0] * (r[i1] - r[i0]) / (v[i1] - v[i0])))
    return positions


def _solve_grid(params: PotentialParams, cent: float, grid: RadialGrid,
                k: int) -> tuple[np.ndarray, np.ndarray]:
    r = grid.points
    h = grid.spacing
    diagonal = 2.0 / (h * h) + params.potential(r) + cent / (r * r)
    off_diagonal = np.full(grid.n - 1, -1.0 / (h * h))
    return eigh_tridiagonal(diagonal, off_diagonal, select="i", select_range=(0, k - 1),
                            lapack_driver="stebz", tol=EIGENVALUE_TOLERANCE)


def fd_eigensolve(params: PotentialParams, spec: ProblemSpec, grid: RadialGrid, k: int = 2,
                  qn: QuantumNumber = QuantumNumber.GROUND, refine: bool = True) -> EigenResult:
    """Lowest `k` eigenpairs in the angular channel `qn` of `spec`.

    With `refine`, the solve is repeated with half the spacing and the eigenvalues are
    Richardson-extrapolated; `error_estimates` are |E_h/2 - E_h| / 3.

    Raises:
        InvalidWindow: if a wall truncates the analytic solution by more than 1e-10.
        GridTooCoarse: if a Richardson correction exceeds 1e-2 max(1, |E|).
    """
    if not 1 <= k <= grid.n:
        raise ValueError(f"Number of eigenvalues must be in [1, {grid.n}], got {k}")
    check_window(params, grid)
    cent = centrifugal_coefficient(spec, qn)

    values, vectors = _solve_grid(params, cent, grid, k)
    r = grid.points
    positions = [sign_changes(r, vectors[:, i]) for i in range(k)]
    extrapolated = errors = None
    if refine:
        fine, _ = _solve_grid(params, cent, grid.refined(), k)
        extrapolated = richardson_extrapolate([values, fine], p=2)
        errors = np.abs(fine - values) / 3.0
        limit = COARSE_THRESHOLD * np.maximum(1.0, np.abs(extrapolated))
        if np.any(errors > limit):
            raise GridTooCoarse(f"Richardson corrections {errors} exceed {limit} on n={grid.n}")

    log.info("Eigenvalues for L=%g on [%g, %g], n=%d: %s", cent, grid.r_min, grid.r_max, grid.n,
             extrapolated if extrapolated is not None else values)
    return EigenResult(eigenvalues=values, eigenvectors=vectors,
                       node_counts=[len(p) for p in positions], node_positions=positions,
                       grid=grid, extrapolated=extrapolated, error_estimates=errors)


def observed_order(params: PotentialParams, spec: ProblemSpec, grid: RadialGrid, index: int = 0,
                   qn: QuantumNumber = QuantumNumber.GROUND,
                   reference: float | None = None) -> float:
    """Observed convergence order of eigenvalue `index` from solves with spacing h, h/2 and h/4.

    Against a `reference` value it is log2(|E_h/2 - E*| / |E_h/4 - E*|); without one, the
    three-level estimate log2(|E_h - E_h/2| / |E_h/2 - E_h/4|).

    Raises:
        GridTooCoarse: if successive shifts have opposite signs and are not negligible.
    """
    check_window(params, grid)
    cent = centrifugal_coefficient(spec, qn)
    levels = []
    g = grid
    for _ in range(3):
        values, _ = _solve_grid(params, cent, g, index + 1)
        levels.append(float(values[index]))
        g = g.refined()
    e_h, e_h2, e_h4 = levels
    first, second = e_h2 - e_h, e_h4 - e_h2
    limit = COARSE_THRESHOLD * max(1.0, abs(e_h4))
    if first * second < 0 and max(abs(first), abs(second)) > limit:
        raise GridTooCoarse(f"Eigenvalue {index} is not converging monotonically: {levels}")
    if reference is not None:
        order = math.log2(abs(e_h2 - reference) / abs(e_h4 - reference))
    else:
        order = math.log2(abs(first) / abs(second))
    log.info("Observed order for eigenvalue %d on n=%d: %.4f", index, grid.n, order)
    return order
