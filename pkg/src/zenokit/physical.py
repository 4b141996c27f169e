"""Physical scenarios mapped onto decoherence schedules.

This is the only module that touches SI constants; everything else works
in natural units with hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .schedules import PowerLawOverlap

HBAR = 1.054571817e-34  # J*s, CODATA 2018

# At m = 1e-26 kg, sigma = 1e-10 m the validity-time formula gives
# ~2.68e-12 s; a commonly quoted estimate of 4e-13 s for the same inputs
# is inconsistent with the formula. Surfaced by the CLI so downstream
# comparisons are not silently off by ~7x.
VALIDITY_TIME_DISCREPANCY_NOTE = (
    "the 2*sqrt(2)*m*sigma^2/hbar formula gives ~2.68e-12 s at "
    "m=1e-26 kg, sigma=1e-10 m; the commonly quoted 4e-13 s does not "
    "follow from it"
)


def _require_positive(**fields: float) -> None:
    for name, value in fields.items():
        if not value > 0:
            raise ValidationError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class FreeParticleParams:
    m: float
    sigma: float
    hbar: float = HBAR

    def __post_init__(self):
        _require_positive(m=self.m, sigma=self.sigma, hbar=self.hbar)


@dataclass(frozen=True)
class PointerModelParams:
    """Coupling velocity v, environment packet width sigma, interaction-time
    ratio c_ratio, total time T."""

    v: float
    sigma: float
    c_ratio: float
    T: float

    def __post_init__(self):
        _require_positive(v=self.v, sigma=self.sigma, c_ratio=self.c_ratio, T=self.T)


@dataclass(frozen=True)
class BrownianModelParams:
    """Diffusion constant D (units 1/sqrt(time), so D^2 * delta is
    dimensionless) and total time T."""

    D: float
    T: float

    def __post_init__(self):
        if self.D < 0:
            raise ValidationError(f"D must be >= 0, got {self.D}")
        _require_positive(T=self.T)


def free_particle_variance(p: FreeParticleParams) -> float:
    """Energy variance hbar^4 / (8 m^2 sigma^4) of a Gaussian wave packet
    under the kinetic Hamiltonian."""
    return p.hbar**4 / (8.0 * p.m**2 * p.sigma**4)


def quadratic_validity_time(p: FreeParticleParams) -> float:
    """Time scale 2*sqrt(2)*m*sigma^2/hbar below which the quadratic
    short-time decay is valid; cross-checked against hbar/sqrt(Var)."""
    t_c = 2.0 * math.sqrt(2.0) * p.m * p.sigma**2 / p.hbar
    alt = p.hbar / math.sqrt(free_particle_variance(p))
    assert abs(t_c - alt) <= 1e-12 * t_c
    return t_c


def gaussian_pointer_overlap(v: float, delta: float, sigma: float) -> float:
    """Overlap exp(-(v*delta)^2 / sigma^2) of two Gaussian pointer states
    displaced by +-v*delta. Quadratic in delta for v*delta << sigma."""
    _require_positive(v=v, sigma=sigma)
    if delta < 0:
        raise ValidationError(f"delta must be >= 0, got {delta}")
    return math.exp(-((v * delta) ** 2) / sigma**2)


def gaussian_model_schedule(p: PointerModelParams) -> PowerLawOverlap:
    """Power-law schedule induced by the pointer model.

    With interaction time c*T/n per step, 1 - eta_n ~= (v*c*T/sigma)^2 / n^2,
    i.e. alpha = (v*c*T/sigma)^2 and beta = 2: always the free-evolution
    regime, whatever the coupling strength.
    """
    return PowerLawOverlap(alpha=(p.v * p.c_ratio * p.T / p.sigma) ** 2, beta=2.0)


def brownian_schedule(p: BrownianModelParams) -> PowerLawOverlap:
    """Power-law schedule induced by Brownian diffusion of the records.

    From |<E(delta)|E(0)>| ~= 1 - D^2*delta/2 with delta = T/n:
    alpha = D^2*T/2 and beta = 1, the intermediate family. Large D drives
    the limit toward Zeno freezing, small D toward free evolution.
    """
    if p.D == 0:
        raise ValidationError("D = 0 realizes no decoherence; no schedule to build")
    return PowerLawOverlap(alpha=p.D**2 * p.T / 2.0, beta=1.0)
