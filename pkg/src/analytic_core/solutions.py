#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Closed-form exponents, energies and coefficients, and the builders for AnsatzSolution.

Coefficients are normalized as follows: alpha = 1 for the ground state, beta = 1 for the same-l
first excited state (where alpha = 0), and alpha = 1 for the cross-l first excited state.
"""
from __future__ import annotations

import logging
import math

from analytic_core import (AnsatzSolution, ConstraintViolated, EXACT_TOLERANCE, NoSolution,
                           PotentialParams, ProblemSpec, State, load_dimension)
from analytic_core import constraints

log = logging.getLogger("qes-radial.analytic")


def solve_same_qn(a: float, spec: ProblemSpec) -> PotentialParams:
    """Couplings (a, b, c) for which both states share the quantum number of `spec`.

    Substituting b = -6 sqrt(c) into the ground constraint fixes sqrt(ac): (16 - (2l+1)^2)/8 in
    three dimensions and (4 - m^2)/2 in two.

    Raises:
        NoSolution: if that sqrt(ac) is not positive (l >= 2, or m >= 2).
    """
    if spec.is_cross:
        raise ValueError("solve_same_qn does not take an 'ell_prime'; use cross_qn.solve_cross_l")
    if not a > 0:
        raise ValueError(f"Coupling 'a' must be positive, got {a}")
    dim = load_dimension(spec.dimension)
    sqrt_ac = dim.same_qn_sqrt_ac(spec.ell)
    if sqrt_ac <= 0:
        raise NoSolution(f"No same quantum number family for {dim.describe(spec.ell)}: "
                         f"sqrt(ac) = {sqrt_ac}")
    c = sqrt_ac * sqrt_ac / a
    params = PotentialParams(a=a, b=-6.0 * math.sqrt(c), c=c)
    log.info("Same quantum number family for %s: %s", dim.describe(spec.ell), params)
    return params


def kappa_and_energy(params: PotentialParams, spec: ProblemSpec, state: State) -> tuple[float, float]:
    """Exponent kappa and energy E of `state`. The formulas are the same in both dimensions."""
    sqrt_c = params.sqrt_c
    if state is State.GROUND:
        kappa = (params.b + 3.0 * sqrt_c) / (2.0 * sqrt_c)
        energy = math.sqrt(params.a / params.c) * (params.b + 4.0 * sqrt_c)
    else:
        kappa = (params.b + 7.0 * sqrt_c) / (2.0 * sqrt_c)
        energy = math.sqrt(params.a / params.c) * (params.b + 12.0 * sqrt_c)
    return kappa, energy


def excited_coefficients(params: PotentialParams, spec: ProblemSpec,
                         tolerance: float = EXACT_TOLERANCE) -> tuple[float, float, float]:
    """(alpha, beta, gamma) of the first excited state.

    Raises:
        ConstraintViolated: if the ground or excited constraint residual exceeds `tolerance`,
            scaled by c and sqrt(c) respectively when those exceed 1.
        DegenerateDenominator: for a cross-l problem whose denominators vanish.
    """
    _require(params, spec, tolerance, excited=True)
    if not spec.is_cross:
        return 0.0, 1.0, -math.sqrt(params.c / params.a)
    gap = constraints.qn_gap(spec.ell, spec.ell_prime)
    beta = 4.0 * params.sqrt_a / constraints.beta_denominator(params, spec.ell, spec.ell_prime)
    gamma = 4.0 * params.sqrt_c / gap
    return 1.0, beta, gamma


def ground_state(params: PotentialParams, spec: ProblemSpec,
                 tolerance: float = EXACT_TOLERANCE) -> AnsatzSolution:
    """The ground state r^kappa0 exp(...), with alpha = 1.

    Raises:
        ConstraintViolated: if the ground constraint residual exceeds `tolerance`.
    """
    _require(params, spec, tolerance, excited=False)
    kappa, energy = kappa_and_energy(params, spec, State.GROUND)
    return AnsatzSolution(state=State.GROUND, kappa=kappa, energy=energy,
                          alpha=1.0, beta=0.0, gamma=0.0, params=params, spec=spec)


def excited_state(params: PotentialParams, spec: ProblemSpec,
                  tolerance: float = EXACT_TOLERANCE) -> AnsatzSolution:
    """The first excited state. Its angular quantum number is `ell_prime` when present."""
    alpha, beta, gamma = excited_coefficients(params, spec, tolerance)
    kappa, energy = kappa_and_energy(params, spec, State.FIRST_EXCITED)
    return AnsatzSolution(state=State.FIRST_EXCITED, kappa=kappa, energy=energy,
                          alpha=alpha, beta=beta, gamma=gamma, params=params, spec=spec)


def build_solutions(params: PotentialParams, spec: ProblemSpec,
                    tolerance: float = EXACT_TOLERANCE) -> tuple[AnsatzSolution, AnsatzSolution]:
    """Both states for `params`, which must satisfy every applicable constraint."""
    return ground_state(params, spec, tolerance), excited_state(params, spec, tolerance)


def candidate(params: PotentialParams, spec: ProblemSpec, state: State,
              alpha: float, beta: float, gamma: float) -> AnsatzSolution:
    """A solution candidate with arbitrary coefficients and the closed-form kappa and E of `state`.

    No constraint is checked. This is how a published coefficient set is put in front of the
    coefficient-matching and ODE checks.
    """
    kappa, energy = kappa_and_energy(params, spec, state)
    return AnsatzSolution(state=state, kappa=kappa, energy=energy,
                          alpha=alpha, beta=beta, gamma=gamma, params=params, spec=spec)


def _require(params: PotentialParams, spec: ProblemSpec, tolerance: float, excited: bool):
    # The ground residual grows like c and the same-l residual like sqrt(c). Above 1 they are
    # compared relative to that size. The cross-l residual depends only on b/sqrt(c) and sqrt(ac).
    ground = constraints.ground_constraint_residual(params, spec)
    if abs(ground) > tolerance * max(1.0, params.c):
        raise ConstraintViolated(f"Ground constraint residual {ground:.6g} exceeds {tolerance:g} "
                                 f"for {params}")
    if excited:
        residual = constraints.excited_constraint_residual(params, spec)
        scale = 1.0 if spec.is_cross else max(1.0, params.sqrt_c)
        if abs(residual) > tolerance * scale:
            raise ConstraintViolated(f"Excited constraint residual {residual:.6g} exceeds "
                                     f"{tolerance:g} for {params}")
