#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""The normalization integral I = integral of R(r)^2 over (0, inf), and N = 1/sqrt(I).

Three independent evaluations are available:

- `normalization`: adaptive Gauss-Kronrod (QUADPACK, through scipy) over a finite window
- `gauss_legendre_integral`: composite fixed-order Gauss-Legendre over the same window
- `closed_form_integral`: a sum of modified Bessel functions, no quadrature at all

The window is where log R^2 is within `depth` of its peak. Outside it the integrand is below
exp(-depth) of the peak, so its contribution is far below any tolerance used here.
"""
from __future__ import annotations

import dataclasses
import logging
import math

import numpy as np
from scipy import special
from scipy.integrate import quad

from analytic_core import AnsatzSolution
from analytic_core.ansatz import log_abs_radial, node_positions, radial_eval
from numeric_oracle import NonIntegrable, Normalization

log = logging.getLogger("qes-radial.quadrature")

WINDOW_DEPTH = 40.0
WINDOW_SPAN = 1e3
WINDOW_POINTS = 4001


def _unnormalized(sol: AnsatzSolution) -> AnsatzSolution:
    return dataclasses.replace(sol, norm=None) if sol.norm is not None else sol


def integration_window(sol: AnsatzSolution, depth: float = WINDOW_DEPTH) -> tuple[float, float]:
    """[r_lo, r_hi] outside which log R^2 is more than `depth` below its peak.

    The search runs over (c/a)^(1/8) * [1e-3, 1e3] on a geometric grid, and the window is widened
    by one grid point on each side.

    Raises:
        NonIntegrable: if the integrand has not dropped by `depth` at an end of the search range.
    """
    rho = (sol.params.c / sol.params.a) ** 0.125
    r = rho * np.geomspace(1.0 / WINDOW_SPAN, WINDOW_SPAN, WINDOW_POINTS)
    logs = 2.0 * np.asarray(log_abs_radial(_unnormalized(sol), r))
    finite = np.isfinite(logs)
    if not finite.any():
        raise NonIntegrable(f"Integrand vanishes or overflows everywhere on [{r[0]:g}, {r[-1]:g}]")
    peak = logs[finite].max()
    inside = np.flatnonzero(finite & (logs >= peak - depth))
    if inside[0] == 0 or inside[-1] == len(r) - 1:
        raise NonIntegrable(f"Integrand does not decay by {depth} within [{r[0]:g}, {r[-1]:g}]")
    return float(r[inside[0] - 1]), float(r[inside[-1] + 1])


def normalization(sol: AnsatzSolution, tol: float = 1e-10,
                  depth: float = WINDOW_DEPTH) -> Normalization:
    """Adaptive quadrature of R^2 for the unnormalized `sol`, split at its nodes.

    Raises:
        NonIntegrable: if no window exists or the integral is not a positive finite number.
    """
    base = _unnormalized(sol)
    lo, hi = integration_window(base, depth)
    nodes = [x for x in node_positions(base) if lo < x < hi]
    integral, error = quad(lambda r: radial_eval(base, r) ** 2, lo, hi, epsabs=0.0, epsrel=tol,
                           limit=200, points=nodes or None)
    if not (math.isfinite(integral) and integral > 0):
        raise NonIntegrable(f"Normalization integral is {integral} on [{lo:g}, {hi:g}]")
    if error > tol * integral:
        log.warning("Quadrature error estimate %.3g exceeds %.3g", error, tol * integral)
    log.debug("Normalization integral %.15g +/- %.3g on [%g, %g]", integral, error, lo, hi)
    return Normalization(norm=1.0 / math.sqrt(integral), integral=integral,
                         error_estimate=error, window=(lo, hi))


def normalize(sol: AnsatzSolution, tol: float = 1e-10) -> float:
    """N = 1/sqrt(I). Any norm already carried by `sol` is ignored."""
    return normalization(sol, tol).norm


def normalized(sol: AnsatzSolution, tol: float = 1e-10) -> AnsatzSolution:
    return dataclasses.replace(sol, norm=normalize(sol, tol))


def gauss_legendre_integral(sol: AnsatzSolution, panels: int = 512, order: int = 16,
                            depth: float = WINDOW_DEPTH) -> float:
    """Composite Gauss-Legendre rule over geometric panels spanning the integration window."""
    base = _unnormalized(sol)
    lo, hi = integration_window(base, depth)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.geomspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    r = mid[:, None] + half[:, None] * x
    values = np.asarray(radial_eval(base, r)) ** 2
    return float(np.sum(half[:, None] * w * values))


def closed_form_integral(sol: AnsatzSolution) -> float:
    """I from

        integral r^mu exp(-sqrt(a) r^2 - sqrt(c) r^-2) dr = (sqrt(c)/sqrt(a))^((mu+1)/4) K_((mu+1)/2)(2 (ac)^(1/4))

    summed over the monomials of r^(2 kappa) (alpha + beta r^2 + gamma r^-2)^2.
    """
    p = sol.params
    alpha, beta, gamma = sol.coefficients
    two_k = 2.0 * sol.kappa
    terms = [
        (alpha * alpha + 2.0 * beta * gamma, two_k),
        (beta * beta, two_k + 4.0),
        (gamma * gamma, two_k - 4.0),
        (2.0 * alpha * beta, two_k + 2.0),
        (2.0 * alpha * gamma, two_k - 2.0),
    ]
    z = 2.0 * math.sqrt(p.sqrt_ac)
    log_ratio = math.log(p.sqrt_c / p.sqrt_a)
    # kve carries a factor exp(z), taken out once at the end.
    total = sum(coef * math.exp(0.25 * (mu + 1.0) * log_ratio) * special.kve(0.5 * (mu + 1.0), z)
                for coef, mu in terms if coef != 0.0)
    return float(total * math.exp(-z))
