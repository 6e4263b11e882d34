#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Residual of the radial equation R'' + [E - V(r) - L/r^2] R = 0 for a candidate solution."""
from __future__ import annotations

import sys

import numpy as np

from analytic_core import AnsatzSolution
from analytic_core.ansatz import (Radius, radial_eval, radial_second_derivative,
                                  second_derivative_scale)


def raw_ode_residual(sol: AnsatzSolution, r: Radius) -> Radius:
    """R''(r) + [E - V(r) - L/r^2] R(r), with L the centrifugal coefficient of the state.

    Raises:
        DomainError: if any r <= 0.
    """
    rr = np.asarray(r, dtype=float)
    second = radial_second_derivative(sol, rr)
    value = radial_eval(sol, rr)
    residual = second + (sol.energy - sol.params.potential(rr) - sol.centrifugal / (rr * rr)) * value
    return float(residual) if np.ndim(r) == 0 else residual


def ode_residual(sol: AnsatzSolution, r: Radius) -> tuple[Radius, Radius]:
    """Raw residual, and the residual relative to the local scale

        max(|R''|, |E R|, largest single term of R'', tiny)

    The third entry keeps the scale meaningful at a node, where R'' and R vanish together.

    Raises:
        DomainError: if any r <= 0.
    """
    rr = np.asarray(r, dtype=float)
    raw = np.asarray(raw_ode_residual(sol, rr))
    scale = np.maximum.reduce([
        np.abs(np.asarray(radial_second_derivative(sol, rr))),
        np.abs(sol.energy * np.asarray(radial_eval(sol, rr))),
        np.asarray(second_derivative_scale(sol, rr)),
        np.full(rr.shape, sys.float_info.min),
    ])
    relative = np.abs(raw) / scale
    if np.ndim(r) == 0:
        return float(raw), float(relative)
    return raw, relative


def max_relative_residual(sol: AnsatzSolution, r: np.ndarray) -> float:
    """Largest relative residual over the sample points `r`."""
    return float(np.max(ode_residual(sol, r)[1]))
