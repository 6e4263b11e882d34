"""Formulas for the three-dimensional radial equation.

psi(r, theta, phi) = r^-1 R_l(r) Y_lm(theta, phi); the centrifugal term is l(l+1)/r^2.
"""
from analytic_core import PotentialParams


def centrifugal(ell: int) -> float:
    return float(ell * (ell + 1))


def ground_constraint_residual(params: PotentialParams, ell: int) -> float:
    """(2 sqrt(c) + b)^2 - c [(2l+1)^2 + 8 sqrt(ac)]"""
    lhs = (2.0 * params.sqrt_c + params.b) ** 2
    rhs = params.c * ((2 * ell + 1) ** 2 + 8.0 * params.sqrt_ac)
    return lhs - rhs


def same_qn_sqrt_ac(ell: int) -> float:
    """sqrt(ac) of the family with b = -6 sqrt(c) that satisfies the ground constraint."""
    return (16.0 - (2 * ell + 1) ** 2) / 8.0


def describe(ell: int) -> str:
    return f"3-D, l={ell}"
