"""Formulas for the two-dimensional radial equation.

psi(rho, phi) = rho^-1/2 R_m(rho) exp(+-i m phi); the centrifugal term is (m^2 - 1/4)/rho^2.
"""
from analytic_core import PotentialParams


def centrifugal(m: int) -> float:
    return m * m - 0.25


def ground_constraint_residual(params: PotentialParams, m: int) -> float:
    """(2 sqrt(c) + b)^2 - 4c [m^2 + 2 sqrt(ac)]"""
    lhs = (2.0 * params.sqrt_c + params.b) ** 2
    rhs = 4.0 * params.c * (m * m + 2.0 * params.sqrt_ac)
    return lhs - rhs


def same_qn_sqrt_ac(m: int) -> float:
    """sqrt(ac) of the family with b = -6 sqrt(c) that satisfies the ground constraint."""
    return (4.0 - m * m) / 2.0


def describe(m: int) -> str:
    return f"2-D, m={m}"
