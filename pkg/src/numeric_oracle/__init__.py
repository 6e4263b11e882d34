#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Independent numerical checks of the closed-form states.

- residual: residual of the radial equation, evaluated with the closed-form second derivative
- eigensolver: finite-difference eigenvalues on a radial grid, with Richardson extrapolation
- quadrature: the normalization integral, by adaptive quadrature and two independent rules
- verification: all of the above bundled into a VerificationReport
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from analytic_core import PotentialParams, State

# Exponent below which the analytic solution at a grid wall counts as negligible: exp(-23.03) is
# 1e-10, and the probability density is the square of that.
WALL_EXPONENT = 23.03

# Defaults for the grid: the wall exponent sqrt(c)/(2 r_min^2) and sqrt(a) r_max^2 / 2 are 46.
DEFAULT_WALL_DEPTH = 92.0
DEFAULT_POINTS = 4000


class GridTooCoarse(ArithmeticError):
    """Raised when finite-difference eigenvalues do not settle under grid refinement."""


class NonIntegrable(ArithmeticError):
    """Raised when the normalization integrand does not decay inside the search window."""


class InvalidWindow(ValueError):
    """Raised when a radial grid cuts off a non-negligible part of the solution."""


class Tier(enum.Enum):
    """Tolerance tier, chosen by where the inputs came from."""
    EXACT = "exact"
    ROUNDED = "rounded"

    @property
    def residual_tolerance(self) -> float:
        """Largest accepted relative residual of the radial equation."""
        return 1e-10 if self is Tier.EXACT else 1e-3

    @property
    def energy_tolerance(self) -> float:
        # Bounded by the extrapolated finite-difference error, whatever the inputs.
        return 1e-3

    @property
    def constraint_tolerance(self) -> float:
        return 1e-9 if self is Tier.EXACT else 1e-4


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid of `n` interior points strictly between the walls `r_min` and `r_max`."""
    r_min: float
    r_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and math.isfinite(self.r_max)):
            raise ValueError(f"Grid walls must be finite, got [{self.r_min}, {self.r_max}]")
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"Grid walls must satisfy 0 < r_min < r_max, got [{self.r_min}, {self.r_max}]")
        if self.n < 16:
            raise ValueError(f"Grid needs at least 16 interior points, got {self.n}")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        return self.r_min + self.spacing * np.arange(1, self.n + 1)

    def refined(self) -> RadialGrid:
        """Same walls, half the spacing."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.n + 1)

    @classmethod
    def default_for(cls, params: PotentialParams, n: int = DEFAULT_POINTS,
                    r_min: float | None = None, r_max: float | None = None) -> RadialGrid:
        """Grid with walls where the exponent of the analytic envelope reaches 46."""
        if r_min is None:
            r_min = math.sqrt(params.sqrt_c / DEFAULT_WALL_DEPTH)
        if r_max is None:
            r_max = math.sqrt(DEFAULT_WALL_DEPTH / params.sqrt_a)
        return cls(r_min, r_max, n)


@dataclass(frozen=True)
class EigenResult:
    """Lowest eigenpairs of the discretized radial operator on `grid`.

    `eigenvectors` has one column per eigenvalue. `extrapolated` and `error_estimates` are filled
    in when the solve was repeated on the refined grid.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    node_counts: list[int]
    node_positions: list[list[float]]
    grid: RadialGrid
    extrapolated: np.ndarray | None = None
    error_estimates: np.ndarray | None = None

    def __post_init__(self):
        if np.any(np.diff(self.eigenvalues) <= 0):
            raise ValueError(f"Eigenvalues must be strictly ascending, got {self.eigenvalues}")
        if any(n1 < n0 for n0, n1 in zip(self.node_counts, self.node_counts[1:])):
            raise ValueError(f"Node counts must not decrease with the state index, got {self.node_counts}")

    @property
    def best(self) -> np.ndarray:
        """Extrapolated eigenvalues when available, otherwise the raw ones."""
        return self.extrapolated if self.extrapolated is not None else self.eigenvalues


@dataclass(frozen=True)
class Normalization:
    """N = 1/sqrt(I), with I the integral of R^2 over `window`."""
    norm: float
    integral: float
    error_estimate: float
    window: tuple[float, float]


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of every numerical check of one state.

    A check whose computation raised is recorded in `errors` under its name and counts as failed.
    """
    state: State
    tier: Tier
    residual_max: float | None = None
    residual_tolerance: float = 0.0
    energy_analytic: float | None = None
    energy_numeric: float | None = None
    energy_tolerance: float = 0.0
    analytic_nodes: list[float] = field(default_factory=list)
    numeric_nodes: list[float] = field(default_factory=list)
    node_check: bool = False
    normalization: Normalization | None = None
    normalization_agreement: float | None = None
    normalization_tolerance: float = 1e-8
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def energy_delta(self) -> float | None:
        """numeric - analytic"""
        if self.energy_numeric is None or self.energy_analytic is None:
            return None
        return self.energy_numeric - self.energy_analytic

    @property
    def checks(self) -> dict[str, bool]:
        delta = self.energy_delta
        return {
            "residual": self.residual_max is not None and self.residual_max <= self.residual_tolerance,
            "energy": delta is not None and abs(delta) <= self.energy_tolerance,
            "nodes": self.node_check,
            "normalization": (self.normalization_agreement is not None
                              and self.normalization_agreement <= self.normalization_tolerance),
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values()) and not self.errors

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"
