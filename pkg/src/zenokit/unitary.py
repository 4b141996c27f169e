"""Single-step free-evolution unitaries for a two-level system.

The step matrix is parametrized as

    [[ a,                 b               ],
     [ -e^{i phi} conj(b), e^{i phi} conj(a) ]]

so its entries double as the step coefficients: c_eq_0 (stay in 0),
c_neq_0 (enter 0 from 1), c_neq_1 (enter 1 from 0), c_eq_1 (stay in 1).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

ROW_NORM_TOL = 1e-9


@dataclass(frozen=True)
class FreeEvolutionUnitary:
    a: complex
    b: complex
    phi: float = 0.0

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > ROW_NORM_TOL:
            raise ValidationError(
                f"|a|^2 + |b|^2 = {norm!r} deviates from 1 by {abs(norm - 1.0):.3e}"
            )

    @property
    def c_eq_0(self) -> complex:
        return self.a

    @property
    def c_neq_0(self) -> complex:
        return self.b

    @property
    def c_neq_1(self) -> complex:
        return -cmath.exp(1j * self.phi) * self.b.conjugate()

    @property
    def c_eq_1(self) -> complex:
        return cmath.exp(1j * self.phi) * self.a.conjugate()

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.c_eq_0, self.c_neq_0], [self.c_neq_1, self.c_eq_1]],
            dtype=complex,
        )


def make_rabi_unitary(omega: float, delta: float) -> FreeEvolutionUnitary:
    """Sigma_x rotation by angle omega*delta: a = cos, b = -i sin, phi = 0.

    The off-diagonal weight satisfies |b|^2 = sin^2(omega*delta), i.e.
    V*delta^2 + O(delta^4) with V = omega^2.
    """
    if delta < 0:
        raise ValidationError(f"delta must be >= 0, got {delta}")
    theta = omega * delta
    return FreeEvolutionUnitary(a=math.cos(theta), b=-1j * math.sin(theta), phi=0.0)


def make_general_unitary(a: complex, b: complex, phi: float) -> FreeEvolutionUnitary:
    """Validated (a, b, phi) constructor.

    Inputs whose row norm deviates from 1 by more than 1e-9 are rejected;
    anything closer is renormalized so the assembled matrix is unitary to
    machine precision.
    """
    norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
    if abs(norm * norm - 1.0) > ROW_NORM_TOL:
        raise ValidationError(
            f"|a|^2 + |b|^2 = {norm * norm!r} deviates from 1 by "
            f"{abs(norm * norm - 1.0):.3e}"
        )
    return FreeEvolutionUnitary(a=complex(a) / norm, b=complex(b) / norm, phi=float(phi))


@dataclass(frozen=True)
class EvolutionConfig:
    """Run parameters: Rabi frequency omega, total time T, step count n.

    c_ratio is the dimensionless interaction-time ratio used by the
    pointer-state model; it does not affect the free evolution itself.
    """

    omega: float
    T: float
    n: int
    c_ratio: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"n must be >= 1, got {self.n}")
        if self.T <= 0:
            raise ValidationError(f"T must be > 0, got {self.T}")
        if self.omega < 0:
            raise ValidationError(f"omega must be >= 0, got {self.omega}")
        if self.c_ratio <= 0:
            raise ValidationError(f"c_ratio must be > 0, got {self.c_ratio}")
        if self.V * self.delta**2 >= 1.0:
            warnings.warn(
                f"V*delta^2 = {self.V * self.delta**2:.3g} >= 1; "
                "second-order comparisons are not meaningful at this step size",
                stacklevel=2,
            )

    @property
    def V(self) -> float:
        return self.omega**2

    @property
    def delta(self) -> float:
        return self.T / self.n

    def step_unitary(self) -> FreeEvolutionUnitary:
        return make_rabi_unitary(self.omega, self.delta)
