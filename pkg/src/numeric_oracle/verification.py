#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Bundle the residual, eigenvalue, node and normalization checks of one state."""
from __future__ import annotations

import asyncio
import logging
from collections.abc import Iterable

import numpy as np

from analytic_core import AnsatzSolution
from analytic_core.ansatz import node_positions
from numeric_oracle import RadialGrid, Tier, VerificationReport
from numeric_oracle.eigensolver import fd_eigensolve
from numeric_oracle.quadrature import gauss_legendre_integral, integration_window, normalization
from numeric_oracle.residual import max_relative_residual

log = logging.getLogger("qes-radial.verify")

# The radial equation is sampled where log R^2 is within this depth of its peak.
RESIDUAL_DEPTH = 20.0
RESIDUAL_SAMPLES = 64

# Failures of a single check that are recorded instead of raised.
CHECK_ERRORS = (ArithmeticError, ValueError, np.linalg.LinAlgError)


def _describe(e: Exception) -> str:
    return f"{type(e).__name__}: {e}"


def verify(sol: AnsatzSolution, grid: RadialGrid | None = None, tier: Tier = Tier.EXACT,
           samples: int = RESIDUAL_SAMPLES, refine: bool = True) -> VerificationReport:
    """Run every check against `sol` and collect the outcome.

    The numeric eigenvalue compared with the analytic energy is the one whose index equals the
    number of analytic nodes, solved in the angular channel of the state. A check that raises is
    recorded in the report's `errors` and fails.
    """
    errors: dict[str, str] = {}
    analytic_nodes = node_positions(sol)
    fields = dict(state=sol.state, tier=tier, residual_tolerance=tier.residual_tolerance,
                  energy_analytic=sol.energy, energy_tolerance=tier.energy_tolerance,
                  analytic_nodes=analytic_nodes)

    try:
        lo, hi = integration_window(sol, RESIDUAL_DEPTH)
        fields["residual_max"] = max_relative_residual(sol, np.geomspace(lo, hi, samples))
    except CHECK_ERRORS as e:
        errors["residual"] = _describe(e)

    index = len(analytic_nodes)
    try:
        if grid is None:
            grid = RadialGrid.default_for(sol.params)
        result = fd_eigensolve(sol.params, sol.spec, grid, k=max(2, index + 1), qn=sol.qn,
                               refine=refine)
        fields["energy_numeric"] = float(result.best[index])
        numeric_nodes = result.node_positions[index]
        fields["numeric_nodes"] = numeric_nodes
        fields["node_check"] = (len(numeric_nodes) == index
                                and all(abs(x - y) <= grid.spacing
                                        for x, y in zip(numeric_nodes, analytic_nodes)))
    except CHECK_ERRORS as e:
        errors["eigen"] = _describe(e)

    try:
        norm = normalization(sol)
        fields["normalization"] = norm
        fields["normalization_agreement"] = abs(gauss_legendre_integral(sol) - norm.integral) / norm.integral
    except CHECK_ERRORS as e:
        errors["normalization"] = _describe(e)

    report = VerificationReport(errors=errors, **fields)
    log.info("Verification of the %s state: %s %s", sol.state.value, report.verdict, report.checks)
    for name, message in errors.items():
        log.warning("Check '%s' of the %s state failed: %s", name, sol.state.value, message)
    return report


async def verify_all(solutions: Iterable[AnsatzSolution], grid: RadialGrid | None = None,
                     tier: Tier = Tier.EXACT, refine: bool = True) -> list[VerificationReport]:
    """Verify several states concurrently, each in a worker thread."""
    return list(await asyncio.gather(
        *(asyncio.to_thread(verify, sol, grid, tier, RESIDUAL_SAMPLES, refine) for sol in solutions)))
