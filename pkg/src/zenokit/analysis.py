"""Second-order survival formula, Zeno criterion, and regime classification.

The central object is the weighted geometric tail

    S_tail(eta, n) = sum_{k=1}^{n-1} (n - k) * eta**k

which controls the second-order decay of the survival probability:
p_n ~= 1 - 2 * (n/2 + S_tail) * V * delta^2. The system freezes (Zeno
regime) iff S_tail / n^2 -> 0 as n grows with the schedule's eta_n.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import UnclassifiableScheduleError, ValidationError
from .schedules import (
    ConstantOverlap,
    ExplicitOverlaps,
    ExponentialOverlap,
    OverlapSchedule,
    PowerLawOverlap,
    family_eta,
)
from .unitary import EvolutionConfig

# Below this distance from eta = 1 the closed form divides by a tiny
# (1-eta)^2 and cancels catastrophically; switch to direct summation
# (all terms positive, so plain compensated summation is stable).
CLOSED_FORM_CROSSOVER = 1e-4


class Regime(enum.Enum):
    ZENO = "Zeno"
    FREE_EVOLUTION = "FreeEvolution"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class RegimeClassification:
    """Asymptotic label plus the coefficient k in lim p_n = 1 - k*V*T^2.

    k = 0 for the Zeno regime, k = 1 for free evolution, k in (0,1) for
    the intermediate family. diagnostics carries (n, criterion value)
    probe points when produced numerically.
    """

    label: Regime
    limit_coefficient: float
    diagnostics: tuple[tuple[int, float], ...] = ()
    converged: bool = True
    extrapolated_limit: float | None = None

    def limit_p(self, V: float, T: float) -> float:
        return 1.0 - self.limit_coefficient * V * T**2


def _check_eta_n(eta: float, n: int) -> None:
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta must lie in [0, 1], got {eta}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")


def _weighted_tail(eta: float, n: int) -> float:
    """sum_{k=1}^{n-1} (n - k) * eta**k, stable on all of [0, 1]."""
    if n == 1 or eta == 0.0:
        return 0.0
    if 1.0 - eta >= CLOSED_FORM_CROSSOVER:
        return (n * eta * (1.0 - eta) + eta * (eta**n - 1.0)) / (1.0 - eta) ** 2
    k = np.arange(1, n, dtype=float)
    terms = (n - k) * np.power(eta, k)
    return math.fsum(terms.tolist())


def zeno_sum(eta: float, n: int) -> float:
    """S(eta, n) = n/2 + sum_{k=1}^{n-1} (n-k) eta^k."""
    _check_eta_n(eta, n)
    return n / 2.0 + _weighted_tail(eta, n)


def criterion_value(eta: float, n: int) -> float:
    """The Zeno criterion term sum_{k=1}^{n-1} (n-k) eta^k / n^2.

    The regime is Zeno iff this tends to 0 as n grows. Identical to
    (zeno_sum(eta, n) - n/2) / n^2.
    """
    _check_eta_n(eta, n)
    return _weighted_tail(eta, n) / (n * n)


def second_order_pn(eta: float, config: EvolutionConfig) -> float:
    """Second-order survival probability 1 - 2*S(eta, n)*V*delta^2."""
    _check_eta_n(eta, config.n)
    vd2 = config.V * config.delta**2
    if vd2 > 0.1:
        warnings.warn(
            f"V*delta^2 = {vd2:.3g} > 0.1; the second-order formula is "
            "unreliable at this step size",
            stacklevel=2,
        )
    return 1.0 - 2.0 * zeno_sum(eta, config.n) * vd2


def second_order_partial(eta: float, config: EvolutionConfig, i: int) -> float:
    """Second-order survival after the first i of the run's n steps.

    Same step length delta = T/n; only the number of elapsed steps varies.
    """
    if not 1 <= i <= config.n:
        raise ValidationError(f"step index {i} outside 1..{config.n}")
    return 1.0 - 2.0 * zeno_sum(eta, i) * config.V * config.delta**2


def intermediate_coefficient(alpha: float) -> float:
    """k(alpha) = 2*(1/alpha + (exp(-alpha) - 1)/alpha^2) for the beta = 1 family."""
    if alpha <= 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    # expm1 keeps the small-alpha limit (k -> 1) free of cancellation
    return 2.0 * (1.0 / alpha + math.expm1(-alpha) / alpha**2)


def classify_schedule(schedule: OverlapSchedule) -> RegimeClassification:
    """Analytic regime of a family schedule.

    Explicit schedules carry no analytic form and are rejected; probe
    them with numeric_limit_probe instead.
    """
    if isinstance(schedule, ConstantOverlap):
        eta = abs(schedule.eta)
        if eta == 1.0:
            return RegimeClassification(Regime.FREE_EVOLUTION, 1.0)
        return RegimeClassification(Regime.ZENO, 0.0)
    if isinstance(schedule, PowerLawOverlap):
        if schedule.beta < 1.0:
            return RegimeClassification(Regime.ZENO, 0.0)
        if schedule.beta > 1.0:
            return RegimeClassification(Regime.FREE_EVOLUTION, 1.0)
        return RegimeClassification(
            Regime.INTERMEDIATE, intermediate_coefficient(schedule.alpha)
        )
    if isinstance(schedule, ExponentialOverlap):
        return RegimeClassification(Regime.FREE_EVOLUTION, 1.0)
    raise UnclassifiableScheduleError(
        f"{type(schedule).__name__} has no analytic regime; numeric-only"
    )


def limit_pn(schedule: OverlapSchedule, V: float, T: float) -> float:
    """Limiting survival probability of a family schedule as n -> infinity."""
    if isinstance(schedule, ExplicitOverlaps):
        raise ValidationError("explicit schedules have no analytic limit")
    return classify_schedule(schedule).limit_p(V, T)


def _aitken_accelerate(seq: list[float]) -> tuple[float, bool]:
    """Iterated Aitken delta-squared extrapolation of a convergent sequence.

    Returns the extrapolated limit and whether the last two passes agreed
    (a convergence indicator, not a certificate).
    """
    estimates = [seq[-1]]
    s = list(seq)
    while len(s) >= 3:
        t = []
        for x0, x1, x2 in zip(s, s[1:], s[2:]):
            denom = (x2 - x1) - (x1 - x0)
            scale = max(abs(x0), abs(x1), abs(x2), 1.0)
            if abs(denom) <= 1e3 * np.finfo(float).eps * scale:
                t.append(x2)
            else:
                t.append(x2 - (x2 - x1) ** 2 / denom)
        s = t
        estimates.append(s[-1])
    converged = (
        len(estimates) >= 2
        and abs(estimates[-1] - estimates[-2])
        <= 1e-6 * max(abs(estimates[-1]), 1.0) + 1e-12
    )
    return estimates[-1], converged


def numeric_limit_probe(
    schedule: OverlapSchedule, config: EvolutionConfig, n_max: int
) -> RegimeClassification:
    """Empirical regime label from extrapolating second-order p_n.

    Evaluates along the geometric grid n = 64, 128, ..., n_max,
    accelerates the tail, and compares the extrapolated limit with 1 and
    1 - V*T^2 at tolerance 1e-3 * V*T^2.
    """
    if n_max < 64:
        raise ValidationError(f"n_max must be >= 64, got {n_max}")
    grid = [2**k for k in range(6, int(math.log2(n_max)) + 1)]
    seq = []
    diagnostics = []
    for n in grid:
        eta = family_eta(schedule, n)
        seq.append(second_order_pn(eta, replace(config, n=n)))
        diagnostics.append((n, criterion_value(eta, n)))
    limit, converged = _aitken_accelerate(seq)

    scale = config.V * config.T**2
    tol = 1e-3 * scale
    if abs(limit - 1.0) <= tol:
        label, k = Regime.ZENO, 0.0
    elif abs(limit - (1.0 - scale)) <= tol:
        label, k = Regime.FREE_EVOLUTION, 1.0
    else:
        label = Regime.INTERMEDIATE
        k = (1.0 - limit) / scale if scale > 0 else math.nan
    return RegimeClassification(label, k, tuple(diagnostics), converged, limit)
