#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Root finder for the three-dimensional cross-l family, where the first excited state has
angular momentum l' != l.

The unknowns are (b, s) with s = sqrt(c) > 0. The two equations are the ground constraint for l

    F1 = (2s + b)^2 - s^2 [(2l+1)^2 + 8 sqrt(a) s]

and the third cross-l relation

    F2 = (D - 2b/s - 8) / (32 sqrt(a) s) - 1 / (D - 4b/s - 24) - 1 / D,   D = l'(l'+1) - l(l+1)

Both depend on (b, s) only through x = b/s and t = sqrt(a) s, so a root found for one `a` maps to
every other `a` with s scaled by 1/sqrt(a).
"""
from __future__ import annotations

import logging
import math

import numpy as np
from scipy.optimize import brentq

from analytic_core import (DegenerateDenominator, Dimension, NoConvergence, NoSolution,
                           PotentialParams, ProblemSpec)
from analytic_core import constraints
from analytic_core.solutions import solve_same_qn

log = logging.getLogger("qes-radial.cross")

NEWTON_TOLERANCE = 1e-10
MAX_ITERATIONS = 200
MAX_HALVINGS = 20

# Pre-scan resolution along t = sqrt(ac), and the largest |F2| a bracketed sign change may have
# before it is treated as a pole.
SCAN_POINTS = 4000
POLE_THRESHOLD = 1e-6


class _System:
    """F1, F2 and their Jacobian for fixed (a, l, l')."""

    def __init__(self, a: float, ell: int, ell_prime: int):
        self.sqrt_a = math.sqrt(a)
        self.k = (2 * ell + 1) ** 2
        self.gap = constraints.qn_gap(ell, ell_prime)

    def residuals(self, b: float, s: float) -> np.ndarray:
        q = self.gap - 4.0 * b / s - 24.0
        if q == 0.0:
            raise DegenerateDenominator(f"Beta denominator vanishes at b={b}, sqrt(c)={s}")
        f1 = (2.0 * s + b) ** 2 - s * s * (self.k + 8.0 * self.sqrt_a * s)
        f2 = (self.gap - 2.0 * b / s - 8.0) / (32.0 * self.sqrt_a * s) - 1.0 / q - 1.0 / self.gap
        return np.array([f1, f2])

    @staticmethod
    def scaled(f: np.ndarray, s: float) -> np.ndarray:
        """(F1 / s^2, F2). Both are functions of x and t alone, so the same for every `a`."""
        return np.array([f[0] / (s * s), f[1]])

    def jacobian(self, b: float, s: float) -> np.ndarray:
        p = self.gap - 2.0 * b / s - 8.0
        q = self.gap - 4.0 * b / s - 24.0
        w = 32.0 * self.sqrt_a
        return np.array([
            [2.0 * (2.0 * s + b),
             4.0 * (2.0 * s + b) - 2.0 * s * self.k - 24.0 * self.sqrt_a * s * s],
            [-2.0 / (w * s * s) - 4.0 / (s * q * q),
             2.0 * b / (w * s ** 3) - p / (w * s * s) + 4.0 * b / (s * s * q * q)],
        ])

    def on_ground_branch(self, t: float, sign: float) -> float:
        """F2 along the branch b = s (-2 +/- sqrt((2l+1)^2 + 8t)) of F1 = 0, as a function of t."""
        root = math.sqrt(self.k + 8.0 * t)
        x = -2.0 + sign * root
        # q = (D - 16) - 4 sign root. When the two parts nearly cancel, use the rationalized form,
        # whose numerator is exact in the integer part.
        shift = self.gap - 16
        conjugate = shift + 4.0 * sign * root
        if abs(conjugate) > abs(shift):
            q = (shift * shift - 16 * self.k - 128.0 * t) / conjugate
        else:
            q = shift - 4.0 * sign * root
        if q == 0.0:
            return math.nan
        return (self.gap - 2.0 * x - 8.0) / (32.0 * t) - 1.0 / q - 1.0 / self.gap

    def point_on_branch(self, t: float, sign: float) -> tuple[float, float]:
        s = t / self.sqrt_a
        return s * (-2.0 + sign * math.sqrt(self.k + 8.0 * t)), s


def _newton(system: _System, b: float, s: float, max_iterations: int,
            max_halvings: int) -> tuple[float, float]:
    """Damped Newton on (b, s). Each step is halved until the norm of the scaled residuals
    decreases and s > 0. Convergence is judged on the scaled residuals too."""
    f = system.residuals(b, s)
    norm = np.linalg.norm(system.scaled(f, s))
    for iteration in range(max_iterations):
        if np.max(np.abs(system.scaled(f, s))) < NEWTON_TOLERANCE:
            log.debug("Newton converged after %d iterations at b=%r, sqrt(c)=%r", iteration, b, s)
            return b, s
        try:
            step = np.linalg.solve(system.jacobian(b, s), -f)
        except np.linalg.LinAlgError as e:
            raise NoConvergence(f"Singular Jacobian at b={b}, sqrt(c)={s}") from e
        scale = 1.0
        for _ in range(max_halvings + 1):
            b_new, s_new = b + scale * step[0], s + scale * step[1]
            if s_new > 0:
                try:
                    f_new = system.residuals(b_new, s_new)
                except DegenerateDenominator:
                    f_new = None
                if (f_new is not None and np.all(np.isfinite(f_new))
                        and np.linalg.norm(system.scaled(f_new, s_new)) < norm):
                    break
            scale *= 0.5
        else:
            raise NoConvergence(f"Line search failed at b={b}, sqrt(c)={s}, |F|={norm:.3g}")
        b, s, f = b_new, s_new, f_new
        norm = np.linalg.norm(system.scaled(f, s))
    if np.max(np.abs(system.scaled(f, s))) < NEWTON_TOLERANCE:
        return b, s
    raise NoConvergence(f"No convergence after {max_iterations} iterations; |F|={norm:.3g}")


def _validate(a: float, ell: int, ell_prime: int) -> _System:
    if not a > 0:
        raise ValueError(f"Coupling 'a' must be positive, got {a}")
    if ell < 0 or ell_prime < 0:
        raise ValueError(f"Quantum numbers must be non-negative, got l={ell}, l'={ell_prime}")
    if constraints.qn_gap(ell, ell_prime) == 0:
        raise DegenerateDenominator(f"l'(l'+1) = l(l+1) for l={ell}, l'={ell_prime}")
    return _System(a, ell, ell_prime)


def find_cross_l_roots(a: float, ell: int, ell_prime: int,
                       max_iterations: int = MAX_ITERATIONS,
                       max_halvings: int = MAX_HALVINGS) -> list[PotentialParams]:
    """Every root the pre-scan finds, polished by Newton and sorted by c.

    The scan walks both branches of the ground constraint over t = sqrt(ac) in [1e-8, 16 + D^2]
    on a geometric grid, brackets sign changes of F2 and rejects the ones that are poles. No claim
    of completeness is made.
    """
    system = _validate(a, ell, ell_prime)
    ts = np.geomspace(1e-8, 16.0 + system.gap ** 2, SCAN_POINTS)
    found: list[tuple[float, float]] = []
    for sign in (1.0, -1.0):
        values = np.array([system.on_ground_branch(t, sign) for t in ts])
        for i in range(len(ts) - 1):
            lo, hi = values[i], values[i + 1]
            if not (np.isfinite(lo) and np.isfinite(hi)) or lo * hi > 0:
                continue
            t_root = ts[i] if lo == 0 else brentq(system.on_ground_branch, ts[i], ts[i + 1],
                                                  args=(sign,), xtol=1e-14, rtol=1e-14)
            if abs(system.on_ground_branch(t_root, sign)) > POLE_THRESHOLD:
                log.debug("Rejected pole near t=%g on branch %+g", t_root, sign)
                continue
            b, s = system.point_on_branch(t_root, sign)
            try:
                b, s = _newton(system, b, s, max_iterations, max_halvings)
            except (NoConvergence, DegenerateDenominator) as e:
                log.debug("Could not polish root near t=%g: %s", t_root, e)
                continue
            if not any(math.isclose(s, s_old, rel_tol=1e-8) and math.isclose(b, b_old, rel_tol=1e-8)
                       for b_old, s_old in found):
                found.append((b, s))
    roots = sorted((PotentialParams(a=a, b=b, c=s * s) for b, s in found), key=lambda p: p.c)
    log.info("Found %d cross-l root(s) for a=%g, l=%d, l'=%d", len(roots), a, ell, ell_prime)
    return roots


def initial_guess(a: float, ell: int, ell_prime: int) -> tuple[float, float] | None:
    """Documented start (b0, sqrt(c0)), or None when no same-l family exists to start from."""
    sqrt_a = math.sqrt(a)
    if (ell, ell_prime) == (0, 1):
        return -4.0 / sqrt_a, 0.9 / sqrt_a
    try:
        same = solve_same_qn(a, ProblemSpec(Dimension.THREE_D, min(ell, ell_prime)))
    except NoSolution:
        return None
    return same.b, 1.1 * same.sqrt_c


def solve_cross_l(a: float, ell: int, ell_prime: int,
                  max_iterations: int = MAX_ITERATIONS,
                  max_halvings: int = MAX_HALVINGS) -> PotentialParams:
    """Couplings (a, b, c) for which the ground state has angular momentum `ell` and the first
    excited state `ell_prime`.

    Newton starts from `initial_guess`. If it does not converge from there, the root from
    `find_cross_l_roots` nearest that start is returned instead.

    Raises:
        DegenerateDenominator: if l'(l'+1) = l(l+1), or a denominator vanishes at the start.
        NoConvergence: if no root is found.
    """
    system = _validate(a, ell, ell_prime)
    start = initial_guess(a, ell, ell_prime)
    if start is not None:
        try:
            b, s = _newton(system, *start, max_iterations, max_halvings)
            params = PotentialParams(a=a, b=b, c=s * s)
            log.info("Cross-l root for l=%d, l'=%d: %s", ell, ell_prime, params)
            return params
        except NoConvergence as e:
            log.info("Newton from the initial guess failed (%s); falling back to the pre-scan", e)

    roots = find_cross_l_roots(a, ell, ell_prime, max_iterations, max_halvings)
    if not roots:
        raise NoConvergence(f"No cross-l root found for a={a}, l={ell}, l'={ell_prime}")
    if start is None:
        return roots[0]
    return min(roots, key=lambda p: math.hypot(p.b - start[0], p.sqrt_c - start[1]))
