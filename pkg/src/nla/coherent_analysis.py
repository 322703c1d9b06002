"""Closed-form success probability and fidelity for coherent-state inputs,
plus the smallest-cutoff sweep that keeps the fidelity above a floor."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CutoffSearchError, NlaError
from .fock_core import AmplifierSpec
from .special_functions import log_reg_gamma_q, reg_gamma_p, reg_gamma_q

__all__ = [
    "CoherentResult",
    "prob_coherent",
    "fidelity_coherent",
    "min_cutoff_for_fidelity",
    "sweep_coherent",
]

# exponents above this go through the log-domain product to dodge overflow;
# the products themselves are bounded by 1, only the factors blow up
_EXP_LIMIT = 300.0


@dataclass(frozen=True)
class CoherentResult:
    """One sweep point: input amplitude, amplifier, and its performance."""

    alpha_mag: float
    gain: float
    cutoff: int
    p_success: float
    fidelity: float


def _ramp_term(log_prefactor: float, a: int, x: float) -> float:
    """gain-ramp contribution e^log_prefactor * Q(a, x), overflow-safe."""
    if log_prefactor > _EXP_LIMIT:
        return math.exp(log_prefactor + log_reg_gamma_q(a, x))
    return math.exp(log_prefactor) * reg_gamma_q(a, x)


def prob_coherent(alpha_mag: float, spec: AmplifierSpec) -> float:
    """Success probability for a coherent input of the given magnitude.

    Two pieces: the Poisson mass already above the cutoff, and the
    geometrically attenuated mass below it, which resums to
    gain^(-2 cutoff) e^((gain^2-1)|alpha|^2) Q(cutoff+1, |gain alpha|^2).
    """
    if alpha_mag < 0:
        raise ValueError("alpha_mag must be nonnegative")
    g = spec.gain
    n = spec.cutoff
    x = alpha_mag * alpha_mag
    above = reg_gamma_p(n + 1, x)
    log_pref = (g * g - 1.0) * x - 2.0 * n * math.log(g)
    below = _ramp_term(log_pref, n + 1, g * g * x)
    return min(1.0, above + below)


def fidelity_coherent(alpha_mag: float, spec: AmplifierSpec) -> float:
    """Fidelity of the success branch against the amplified coherent state.

    The unnormalized overlap splits the same way the probability does; the
    square over the probability is the fidelity, which lands in [0, 1].
    """
    if alpha_mag < 0:
        raise ValueError("alpha_mag must be nonnegative")
    g = spec.gain
    n = spec.cutoff
    x = alpha_mag * alpha_mag
    log_pref = 0.5 * (g * g - 1.0) * x - n * math.log(g)
    ramp = _ramp_term(log_pref, n + 1, g * g * x)
    flat = math.exp(-0.5 * (g - 1.0) ** 2 * x) * reg_gamma_p(n + 1, g * x)
    overlap = ramp + flat
    p = prob_coherent(alpha_mag, spec)
    if p <= 0.0:
        raise NlaError("success probability underflowed to zero")
    return min(1.0, overlap * overlap / p)


def min_cutoff_for_fidelity(
    alpha_mag: float, gain: float, f_min: float, max_cutoff: int = 200
) -> int:
    """Smallest cutoff >= 1 whose fidelity reaches f_min at this gain.

    Scans upward; the fidelity tends to 1 as the cutoff grows, but the scan
    is capped so pathological requests fail loudly instead of spinning.
    """
    if not 0.0 < f_min < 1.0:
        raise ValueError("f_min must lie in (0, 1)")
    for cutoff in range(1, max_cutoff + 1):
        if fidelity_coherent(alpha_mag, AmplifierSpec(gain, cutoff)) >= f_min:
            return cutoff
    raise CutoffSearchError(
        f"no cutoff <= {max_cutoff} reaches fidelity {f_min} "
        f"at alpha={alpha_mag}, gain={gain}"
    )


def sweep_coherent(
    alpha_mag: float, gains: Sequence[float], f_min: float
) -> list[CoherentResult]:
    """Per gain, pick the smallest adequate cutoff and report (P, F) there."""
    gains = list(gains)
    if any(g < 1.0 for g in gains):
        raise ValueError("gains must all be >= 1")
    if gains != sorted(gains):
        raise ValueError("gains must be sorted ascending")
    results = []
    for g in gains:
        cutoff = min_cutoff_for_fidelity(alpha_mag, g, f_min)
        spec = AmplifierSpec(g, cutoff)
        results.append(
            CoherentResult(
                alpha_mag=alpha_mag,
                gain=g,
                cutoff=cutoff,
                p_success=prob_coherent(alpha_mag, spec),
                fidelity=fidelity_coherent(alpha_mag, spec),
            )
        )
    return results
