#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Constraint residuals on the couplings (a, b, c).

Every residual is written as LHS - RHS, so that it is zero exactly when the corresponding
constraint holds:

- ground: the ground-state ansatz solves the radial equation
- excited, same quantum number: b + 6 sqrt(c)
- excited, cross-l: the third relation between (b, c) when l' != l
- constraint 9: the older form of the excited-state constraint for a common l, which coincides
  with (ground, b = -6 sqrt(c)) whenever the ground constraint holds
"""
from __future__ import annotations

import logging

from analytic_core import (ConstraintReport, DegenerateDenominator, Dimension, EXACT_TOLERANCE,
                           PotentialParams, ProblemSpec, centrifugal_coefficient, load_dimension)

log = logging.getLogger("qes-radial.constraints")


def ground_constraint_residual(params: PotentialParams, spec: ProblemSpec) -> float:
    """Residual of the ground-state constraint for the ground quantum number of `spec`."""
    return load_dimension(spec.dimension).ground_constraint_residual(params, spec.ell)


def excited_constraint_residual_same(params: PotentialParams) -> float:
    """b + 6 sqrt(c). Zero iff the same-l first excited state is consistent."""
    return params.b + 6.0 * params.sqrt_c


def qn_gap(ell: int, ell_prime: int) -> int:
    """D = l'(l'+1) - l(l+1)"""
    return ell_prime * (ell_prime + 1) - ell * (ell + 1)


def beta_denominator(params: PotentialParams, ell: int, ell_prime: int) -> float:
    """D - 4 (b + 6 sqrt(c)) / sqrt(c), the denominator of beta in the cross-l case."""
    return qn_gap(ell, ell_prime) - 4.0 * (params.b + 6.0 * params.sqrt_c) / params.sqrt_c


def cross_constraint_residual(params: PotentialParams, ell: int, ell_prime: int) -> float:
    """Residual of the third cross-l relation

        [D - 2 (b + 4 sqrt(c)) / sqrt(c)] / (32 sqrt(ac)) = 1 / [D - 4 (b + 6 sqrt(c)) / sqrt(c)] + 1 / D

    Raises:
        DegenerateDenominator: if D = 0 or the beta denominator vanishes.
    """
    gap = qn_gap(ell, ell_prime)
    if gap == 0:
        raise DegenerateDenominator(f"l'(l'+1) = l(l+1) for l={ell}, l'={ell_prime}")
    q = beta_denominator(params, ell, ell_prime)
    if q == 0.0:
        raise DegenerateDenominator(f"Beta denominator vanishes at b={params.b}, c={params.c}")
    sqrt_c = params.sqrt_c
    lhs = (gap - 2.0 * (params.b + 4.0 * sqrt_c) / sqrt_c) / (32.0 * params.sqrt_ac)
    rhs = 1.0 / q + 1.0 / gap
    return lhs - rhs


def excited_constraint_residual(params: PotentialParams, spec: ProblemSpec) -> float:
    """The excited-state residual that applies to `spec`: same-l or cross-l."""
    if spec.is_cross:
        return cross_constraint_residual(params, spec.ell, spec.ell_prime)
    return excited_constraint_residual_same(params)


def constraint9_residual(params: PotentialParams, ell: int,
                         dimension: Dimension = Dimension.THREE_D) -> float:
    """eta [(eta - 4)^2 - 4 (2 kappa1 - 1)^2] - 64 sqrt(ac) (eta - 4)

    with kappa1 = (b + 7 sqrt(c)) / (2 sqrt(c)) and eta = L + 2 sqrt(ac) - kappa1^2 + kappa1, where L
    is l(l+1) in three dimensions. In two dimensions `ell` is m and L = m^2 - 1/4.
    """
    sqrt_c = params.sqrt_c
    kappa1 = (params.b + 7.0 * sqrt_c) / (2.0 * sqrt_c)
    cent = centrifugal_coefficient(ProblemSpec(dimension, ell))
    eta = cent + 2.0 * params.sqrt_ac - kappa1 * kappa1 + kappa1
    return (eta * ((eta - 4.0) ** 2 - 4.0 * (2.0 * kappa1 - 1.0) ** 2)
            - 64.0 * params.sqrt_ac * (eta - 4.0))


def constraint_report(params: PotentialParams, spec: ProblemSpec,
                      tolerance: float = EXACT_TOLERANCE) -> ConstraintReport:
    """Evaluate every constraint that applies to `spec` and flag it against `tolerance`.

    A degenerate cross-l denominator is reported as an infinite, unsatisfied residual.
    """
    ground = ground_constraint_residual(params, spec)
    try:
        excited = excited_constraint_residual(params, spec)
    except DegenerateDenominator as e:
        log.warning("Excited constraint undefined: %s", e)
        excited = float("inf")
    c9 = None if spec.is_cross else constraint9_residual(params, spec.ell, spec.dimension)

    report = ConstraintReport(
        ground_residual=ground,
        excited_residual=excited,
        constraint9_residual=c9,
        tolerance=tolerance,
        ground_satisfied=abs(ground) <= tolerance,
        excited_satisfied=abs(excited) <= tolerance,
        constraint9_satisfied=None if c9 is None else abs(c9) <= tolerance,
    )
    log.debug("Constraints for %s at %s: %s", spec, params, report)
    return report
