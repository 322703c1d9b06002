"""Constrained minimization of the paradox criterion over (cutoff, gain).

At a fixed target chi' the output criterion only improves with gain, while
both the fidelity bound and the success probability only degrade, so the
best gain per cutoff sits on a constraint boundary and bisection finds it.
The cutoff scan is bounded by the fidelity-floor bound plus a small guard.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .epr_analysis import (
    LossyEprParams,
    chi_for_target,
    epr_criterion,
    fidelity_epr_lower_bound,
    max_cutoff,
    prob_epr,
    transform_params,
)
from .errors import NlaError
from .fock_core import AmplifierSpec

__all__ = [
    "Binding",
    "ConstraintSet",
    "OptimizationResult",
    "EtaSweepPoint",
    "max_feasible_gain",
    "optimize_epr",
    "optimize_point",
    "sweep_eta",
]

DEFAULT_GAIN_CAP = 1e4
DEFAULT_GAIN_TOL = 1e-9
# how far past the feasible end the probe sits when naming the binding constraint
BINDING_PROBE = 1e-6


class Binding(enum.Enum):
    FIDELITY = "fidelity"
    PROBABILITY = "probability"
    GAIN_CAP = "gain_cap"
    NONE = "none"


@dataclass(frozen=True)
class ConstraintSet:
    """Feasibility box: fidelity floor, probability floor, target chi', eta."""

    f_min: float
    p_min: float
    chi_prime: float
    eta: float

    def __post_init__(self) -> None:
        if not 0.0 < self.f_min < 1.0:
            raise ValueError(f"f_min must lie in (0, 1), got {self.f_min!r}")
        if not 0.0 < self.p_min <= 1.0:
            raise ValueError(f"p_min must lie in (0, 1], got {self.p_min!r}")
        if not 0.0 < self.chi_prime < 1.0:
            raise ValueError(f"chi_prime must lie in (0, 1), got {self.chi_prime!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")


@dataclass(frozen=True)
class OptimizationResult:
    cutoff: int
    gain: float
    epsilon: float
    fidelity: float
    probability: float
    binding: Binding


@dataclass(frozen=True)
class EtaSweepPoint:
    """One transmission grid point, with the no-amplification and
    saturated-squeezing baselines alongside the optimizer's answer."""

    eta: float
    result: Optional[OptimizationResult]
    error: Optional[str]
    epsilon_no_amp: float
    epsilon_unit_chi: float


def _performance(
    cutoff: int, constraints: ConstraintSet, gain: float
) -> tuple[float, float]:
    spec = AmplifierSpec(gain, cutoff)
    chi_in = chi_for_target(constraints.chi_prime, constraints.eta, gain)
    p = prob_epr(chi_in, constraints.eta, spec)
    f = fidelity_epr_lower_bound(chi_in, constraints.eta, spec)
    return p, f


def _feasible(cutoff: int, constraints: ConstraintSet, gain: float) -> bool:
    p, f = _performance(cutoff, constraints, gain)
    return f >= constraints.f_min and p >= constraints.p_min


def max_feasible_gain(
    cutoff: int,
    constraints: ConstraintSet,
    gain_cap: float = DEFAULT_GAIN_CAP,
    tol: float = DEFAULT_GAIN_TOL,
) -> tuple[float, Binding]:
    """Largest gain in [1, gain_cap] meeting both constraints, by bisection.

    Both the fidelity bound and the probability decrease with gain at fixed
    target chi', so the feasible set is an interval anchored at gain 1,
    where both constraints hold with slack (F = P = 1 there).  The returned
    gain is the feasible bracket end; the binding label names whichever
    constraint fails just past it.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    if gain_cap <= 1.0:
        raise ValueError("gain_cap must exceed 1")
    if _feasible(cutoff, constraints, gain_cap):
        return gain_cap, Binding.GAIN_CAP
    lo, hi = 1.0, gain_cap
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _feasible(cutoff, constraints, mid):
            lo = mid
        else:
            hi = mid
    p, f = _performance(cutoff, constraints, lo + BINDING_PROBE)
    if f < constraints.f_min and p < constraints.p_min:
        # corner where both constraints turn infeasible together: report the
        # relatively more violated one
        worse_f = (constraints.f_min - f) / constraints.f_min
        worse_p = (constraints.p_min - p) / constraints.p_min
        binding = Binding.FIDELITY if worse_f >= worse_p else Binding.PROBABILITY
    elif f < constraints.f_min:
        binding = Binding.FIDELITY
    elif p < constraints.p_min:
        binding = Binding.PROBABILITY
    else:
        # probe landed back inside (can only happen within tol of the end)
        binding = Binding.NONE
    return lo, binding


def _criterion_at(chi_prime: float, eta: float, gain: float) -> float:
    out = transform_params(LossyEprParams(chi_prime, eta), gain)
    # the output state's criterion depends on gain only through eta'
    return epr_criterion(LossyEprParams(chi_prime, out.eta_prime))


def optimize_epr(
    constraints: ConstraintSet,
    gain_cap: float = DEFAULT_GAIN_CAP,
    tol: float = DEFAULT_GAIN_TOL,
) -> OptimizationResult:
    """Best (cutoff, gain) under the constraints, minimizing the criterion.

    Scans cutoffs from 1 up to the fidelity-floor bound plus a guard of 2
    (finite-gain fidelity exceeds its floor, so slightly larger cutoffs can
    still bind), takes each cutoff's maximal feasible gain, and keeps the
    lowest criterion; ties go to the smaller cutoff.
    """
    top = max_cutoff(constraints.f_min, constraints.chi_prime).value + 2
    best: Optional[OptimizationResult] = None
    for cutoff in range(1, top + 1):
        gain, binding = max_feasible_gain(cutoff, constraints, gain_cap, tol)
        eps = _criterion_at(constraints.chi_prime, constraints.eta, gain)
        if best is None or eps < best.epsilon:
            p, f = _performance(cutoff, constraints, gain)
            best = OptimizationResult(
                cutoff=cutoff,
                gain=gain,
                epsilon=eps,
                fidelity=f,
                probability=p,
                binding=binding,
            )
    assert best is not None
    return best


def optimize_point(
    chi_prime: float,
    f_min: float,
    p_min: float,
    eta: float,
    gain_cap: float = DEFAULT_GAIN_CAP,
    tol: float = DEFAULT_GAIN_TOL,
) -> EtaSweepPoint:
    """One transmission point of a sweep; failures are recorded, not raised."""
    no_amp = epr_criterion(LossyEprParams(chi_prime, eta))
    unit_chi = (1.0 - eta) ** 2
    try:
        result = optimize_epr(ConstraintSet(f_min, p_min, chi_prime, eta), gain_cap, tol)
        error = None
    except NlaError as exc:
        result = None
        error = str(exc)
    return EtaSweepPoint(
        eta=eta,
        result=result,
        error=error,
        epsilon_no_amp=no_amp,
        epsilon_unit_chi=unit_chi,
    )


def sweep_eta(
    chi_prime: float,
    f_min: float,
    p_min: float,
    eta_grid: Sequence[float],
    gain_cap: float = DEFAULT_GAIN_CAP,
) -> list[EtaSweepPoint]:
    """Optimize along a transmission grid, carrying both baseline curves."""
    etas = list(eta_grid)
    if any(not 0.0 < e <= 1.0 for e in etas):
        raise ValueError("eta grid values must lie in (0, 1]")
    if etas != sorted(etas):
        raise ValueError("eta grid must be sorted ascending")
    return [optimize_point(chi_prime, f_min, p_min, eta, gain_cap) for eta in etas]
