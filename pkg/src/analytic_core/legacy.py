#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""The earlier published parameter set for l = 0 and its first-excited-state coefficients.

Its ground state is valid, but b + 6 sqrt(c) != 0, so no first excited state of the ansatz form
exists for these couplings. The published excited coefficients are kept here so the claim can be
checked against the coefficient-matching equations and the radial equation.
"""
from __future__ import annotations

from analytic_core import (AnsatzSolution, Dimension, ROUNDED_TOLERANCE, PotentialParams,
                           ProblemSpec, State)
from analytic_core import solutions

LEGACY_PARAMS = PotentialParams(a=1.0, b=0.04082, c=0.18)
LEGACY_SPEC = ProblemSpec(Dimension.THREE_D, ell=0)

# alpha, beta, gamma as published
LEGACY_EXCITED_COEFFICIENTS = (1.0, -0.1787, 0.8485)


def legacy_ground_state() -> AnsatzSolution:
    """Ground state for the legacy couplings. Their rounding only meets the rounded tier."""
    return solutions.ground_state(LEGACY_PARAMS, LEGACY_SPEC, tolerance=ROUNDED_TOLERANCE)


def legacy_excited_candidate() -> AnsatzSolution:
    """The published first-excited candidate, with the closed-form kappa1 and E1."""
    return solutions.candidate(LEGACY_PARAMS, LEGACY_SPEC, State.FIRST_EXCITED,
                               *LEGACY_EXCITED_COEFFICIENTS)
