#
# Copyright (c) 2025-present Tom Keffer <tkeffer@gmail.com>
#
# This source code is licensed under the MIT license found in the
# LICENSE.txt file in the root directory of this source tree.
#
"""Closed-form ground and first-excited states of the potential V(r) = a r^2 + b r^-4 + c r^-6.

Units are dimensionless with hbar = 2m = 1. The radial function of both states has the form

    R(r) = N r^kappa (alpha + beta r^2 + gamma r^-2) exp[-(sqrt(a) r^2 + sqrt(c) r^-2) / 2]

and is an exact solution of the radial equation only when (a, b, c) satisfy the constraints
computed in `analytic_core.constraints`.

This module holds the value types and the exceptions shared by the submodules:

- constraints: constraint residuals and the `ConstraintReport`
- solutions: same-quantum-number parameter solution, kappa/E, coefficients, solution builders
- cross_qn: the cross-l root finder
- ansatz: evaluation of R, its closed-form second derivative, coefficient matching, nodes
- dimensions: the per-dimension formulas, loaded by name
"""
from __future__ import annotations

import enum
import importlib
import math
from dataclasses import dataclass
from types import ModuleType

# Tolerance tiers for "constraint satisfied". Exact inputs come out of closed forms; rounded inputs
# are the 4-5 significant digit values quoted in the literature.
EXACT_TOLERANCE = 1e-9
ROUNDED_TOLERANCE = 1e-4


class DomainError(ValueError):
    """Raised when a radial function is evaluated at r <= 0."""


class NoSolution(ValueError):
    """Raised when the exact-solution family does not exist for the requested quantum numbers."""


class DegenerateDenominator(ValueError):
    """Raised when a denominator of the cross-l formulas vanishes."""


class ConstraintViolated(ValueError):
    """Raised when asked to build a solution from parameters that do not satisfy its constraints."""


class NoConvergence(ArithmeticError):
    """Raised when the cross-l Newton iteration fails to converge."""


class Dimension(enum.Enum):
    THREE_D = "three_d"
    TWO_D = "two_d"

    @classmethod
    def from_int(cls, dim: int) -> Dimension:
        if dim == 3:
            return cls.THREE_D
        if dim == 2:
            return cls.TWO_D
        raise ValueError(f"Unsupported dimension {dim} (expected 2 or 3)")

    def __int__(self) -> int:
        return 3 if self is Dimension.THREE_D else 2


class State(enum.Enum):
    GROUND = "ground"
    FIRST_EXCITED = "excited"


class QuantumNumber(enum.Enum):
    """Selects which angular quantum number of a ProblemSpec applies."""
    GROUND = "ground"
    EXCITED = "excited"

    @classmethod
    def for_state(cls, state: State) -> QuantumNumber:
        return cls.GROUND if state is State.GROUND else cls.EXCITED


@dataclass(frozen=True)
class PotentialParams:
    """Couplings of V(r) = a r^2 + b r^-4 + c r^-6."""
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"Coupling '{name}' must be finite, got {getattr(self, name)}")
        if self.a <= 0:
            raise ValueError(f"Coupling 'a' must be positive, got {self.a}")
        if self.c <= 0:
            raise ValueError(f"Coupling 'c' must be positive, got {self.c}")

    @property
    def sqrt_a(self) -> float:
        return math.sqrt(self.a)

    @property
    def sqrt_c(self) -> float:
        return math.sqrt(self.c)

    @property
    def sqrt_ac(self) -> float:
        return math.sqrt(self.a * self.c)

    def potential(self, r):
        """V(r). Works on floats and numpy arrays."""
        r2 = r * r
        return self.a * r2 + self.b / (r2 * r2) + self.c / (r2 * r2 * r2)


@dataclass(frozen=True)
class ProblemSpec:
    """Dimension and angular quantum numbers.

    In three dimensions `ell` is the angular momentum of the ground state and `ell_prime`, when
    given, the angular momentum of the first excited state. In two dimensions `ell` holds the
    magnetic quantum number m, and `ell_prime` is not allowed.
    """
    dimension: Dimension
    ell: int = 0
    ell_prime: int | None = None

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError(f"Quantum number 'ell' must be non-negative, got {self.ell}")
        if self.ell_prime is not None:
            if self.dimension is not Dimension.THREE_D:
                raise ValueError("'ell_prime' is only defined in three dimensions")
            if self.ell_prime < 0:
                raise ValueError(f"Quantum number 'ell_prime' must be non-negative, got {self.ell_prime}")
            if self.ell_prime == self.ell:
                raise ValueError("'ell_prime' must differ from 'ell'; omit it for the same-l case")

    @property
    def is_cross(self) -> bool:
        return self.ell_prime is not None

    def quantum_number(self, which: QuantumNumber) -> int:
        if which is QuantumNumber.EXCITED and self.ell_prime is not None:
            return self.ell_prime
        return self.ell


@dataclass(frozen=True)
class AnsatzSolution:
    """One state of the ansatz, with the parameters and quantum numbers it was built for."""
    state: State
    kappa: float
    energy: float
    alpha: float
    beta: float
    gamma: float
    params: PotentialParams
    spec: ProblemSpec
    norm: float | None = None

    def __post_init__(self):
        if self.norm is not None and not self.norm > 0:
            raise ValueError(f"Normalization factor must be positive, got {self.norm}")

    @property
    def qn(self) -> QuantumNumber:
        return QuantumNumber.for_state(self.state)

    @property
    def centrifugal(self) -> float:
        return centrifugal_coefficient(self.spec, self.qn)

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return self.alpha, self.beta, self.gamma


@dataclass(frozen=True)
class ConstraintReport:
    """Constraint residuals (LHS - RHS) and whether each is within `tolerance`.

    `constraint9_residual` is None for the cross-l case, where that constraint does not apply.
    """
    ground_residual: float
    excited_residual: float
    constraint9_residual: float | None
    tolerance: float
    ground_satisfied: bool
    excited_satisfied: bool
    constraint9_satisfied: bool | None

    @property
    def all_satisfied(self) -> bool:
        return (self.ground_satisfied and self.excited_satisfied
                and self.constraint9_satisfied is not False)


def load_dimension(dimension: Dimension) -> ModuleType:
    """Return the module with the formulas for `dimension`."""
    return importlib.import_module(f"analytic_core.dimensions.{dimension.value}")


def centrifugal_coefficient(spec: ProblemSpec, which: QuantumNumber = QuantumNumber.GROUND) -> float:
    """Coefficient L of the L/r^2 term of the radial equation.

    Asking for the excited quantum number when `ell_prime` is absent gives the same-l value.
    """
    return load_dimension(spec.dimension).centrifugal(spec.quantum_number(which))
