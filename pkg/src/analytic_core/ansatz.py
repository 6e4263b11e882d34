#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Evaluate the ansatz R(r) = N r^kappa (alpha + beta r^2 + gamma r^-2) exp[-(sqrt(a) r^2 + sqrt(c) r^-2)/2].

The functions accept a float or a numpy array for `r` and return the same shape. The envelope
r^kappa exp(...) is evaluated through its logarithm: anything below the smallest positive double
comes back as exactly 0, which keeps the essential singularity at r -> 0 from producing 0 * inf.
"""
from __future__ import annotations

import math
import sys

import numpy as np

from analytic_core import (AnsatzSolution, DomainError, PotentialParams, ProblemSpec,
                           centrifugal_coefficient)

# Powers of r carried by the bracket of the closed-form second derivative.
SECOND_DERIVATIVE_POWERS = (4, 2, 0, -2, -4, -6, -8)

LOG_TINY = math.log(sys.float_info.min)

type Radius = float | np.ndarray


def _radii(r: Radius) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError(f"The radial function is defined for r > 0 only, got {r.min(initial=np.inf)}")
    return r


def _shaped(values: np.ndarray, like: Radius) -> Radius:
    return float(values) if np.ndim(like) == 0 else values


def log_envelope(sol: AnsatzSolution, r: np.ndarray) -> np.ndarray:
    """log of N r^kappa exp[-(sqrt(a) r^2 + sqrt(c) r^-2)/2]"""
    p = sol.params
    log_norm = math.log(sol.norm) if sol.norm is not None else 0.0
    return log_norm + sol.kappa * np.log(r) - 0.5 * (p.sqrt_a * r * r + p.sqrt_c / (r * r))


def _times_envelope(sol: AnsatzSolution, r: np.ndarray, factor: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        log_mag = log_envelope(sol, r) + np.log(np.abs(factor))
    safe = np.where(log_mag < LOG_TINY, -np.inf, log_mag)
    return np.sign(factor) * np.exp(safe)


def polynomial(sol: AnsatzSolution, r: np.ndarray) -> np.ndarray:
    """alpha + beta r^2 + gamma r^-2"""
    r2 = r * r
    return sol.alpha + sol.beta * r2 + sol.gamma / r2


def radial_eval(sol: AnsatzSolution, r: Radius) -> Radius:
    """R(r). N defaults to 1 when the solution is unnormalized.

    Raises:
        DomainError: if any r <= 0.
    """
    rr = _radii(r)
    return _shaped(_times_envelope(sol, rr, polynomial(sol, rr)), r)


def log_abs_radial(sol: AnsatzSolution, r: Radius) -> Radius:
    """log |R(r)|, -inf at a node."""
    rr = _radii(r)
    with np.errstate(divide="ignore"):
        values = log_envelope(sol, rr) + np.log(np.abs(polynomial(sol, rr)))
    return _shaped(values, r)


def second_derivative_coefficients(kappa: float, alpha: float, beta: float, gamma: float,
                                   sqrt_a: float, sqrt_c: float) -> tuple[float, ...]:
    """Coefficients of r^4, r^2, r^0, r^-2, r^-4, r^-6, r^-8 in R''(r) / (r^kappa exp(...))."""
    a = sqrt_a * sqrt_a
    c = sqrt_c * sqrt_c
    sqrt_ac = sqrt_a * sqrt_c
    k = kappa
    return (
        a * beta,
        a * alpha - beta * sqrt_a * (2 * k + 5),
        -alpha * sqrt_a * (2 * k + 1) + beta * (2 + 3 * k + k * k - 2 * sqrt_ac) + gamma * a,
        alpha * (k * k - k - 2 * sqrt_ac) + beta * sqrt_c * (2 * k + 1) - gamma * sqrt_a * (2 * k - 3),
        alpha * sqrt_c * (2 * k - 3) + beta * c + gamma * (6 - 5 * k - 2 * sqrt_ac + k * k),
        alpha * c + gamma * sqrt_c * (2 * k - 7),
        gamma * c,
    )


def second_derivative_terms(sol: AnsatzSolution, r: np.ndarray) -> np.ndarray:
    """The seven bracket terms c_k r^k, stacked along the first axis."""
    coeffs = second_derivative_coefficients(sol.kappa, sol.alpha, sol.beta, sol.gamma,
                                            sol.params.sqrt_a, sol.params.sqrt_c)
    return np.stack([coef * r ** power for coef, power in zip(coeffs, SECOND_DERIVATIVE_POWERS)])


def radial_second_derivative(sol: AnsatzSolution, r: Radius) -> Radius:
    """Closed-form R''(r).

    Raises:
        DomainError: if any r <= 0.
    """
    rr = _radii(r)
    bracket = second_derivative_terms(sol, rr).sum(axis=0)
    return _shaped(_times_envelope(sol, rr, bracket), r)


def second_derivative_scale(sol: AnsatzSolution, r: Radius) -> Radius:
    """Magnitude of the largest single bracket term of R''(r), times the envelope."""
    rr = _radii(r)
    largest = np.abs(second_derivative_terms(sol, rr)).max(axis=0)
    return _shaped(_times_envelope(sol, rr, largest), r)


def coefficient_match_residuals(sol: AnsatzSolution, params: PotentialParams,
                                spec: ProblemSpec) -> tuple[float, float, float, float, float]:
    """LHS - RHS of the five equations from matching powers r^2, r^0, r^-2, r^-4, r^-6.

    All five vanish exactly when the ansatz solves the radial equation for `params`. The
    centrifugal coefficient is that of the solution's own state in `spec`.
    """
    cent = centrifugal_coefficient(spec, sol.qn)
    sqrt_a, sqrt_c = params.sqrt_a, params.sqrt_c
    sqrt_ac = sqrt_a * sqrt_c
    k, e, b = sol.kappa, sol.energy, params.b
    alpha, beta, gamma = sol.coefficients
    return (
        beta * (e - sqrt_a * (2 * k + 5)),
        alpha * (e - sqrt_a * (2 * k + 1)) - beta * (cent + 2 * sqrt_ac - k * k - 3 * k - 2),
        (alpha * (cent + 2 * sqrt_ac - k * k + k)
         - beta * (-b + sqrt_c * (2 * k + 1))
         - gamma * (e - sqrt_a * (2 * k - 3))),
        alpha * (b - sqrt_c * (2 * k - 3)) + gamma * (cent + 2 * sqrt_ac - k * k + 5 * k - 6),
        gamma * (b - sqrt_c * (2 * k - 7)),
    )


def node_positions(sol: AnsatzSolution) -> list[float]:
    """Positive zeros of alpha + beta r^2 + gamma r^-2, ascending. Empty for the ground state."""
    # Multiplied through by r^2 this is a quadratic in x = r^2.
    coeffs = np.trim_zeros(np.array([sol.beta, sol.alpha, sol.gamma], dtype=float), "f")
    if coeffs.size < 2:
        return []
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) <= 1e-12 * np.maximum(1.0, np.abs(roots.real))].real
    return sorted(math.sqrt(x) for x in real if x > 0)
