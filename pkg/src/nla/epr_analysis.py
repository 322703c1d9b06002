"""Lossy two-mode squeezing through the amplifier: state construction, the
equivalent-parameter transform, the paradox criterion, closed-form success
probability and fidelity lower bound, asymptotics, and the cutoff bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DivergenceError, NlaError, UnreachableTargetError
from .fock_core import AmplifierSpec, FockVector
from .special_functions import reg_beta_i_stream

__all__ = [
    "LossyEprParams",
    "TransformedParams",
    "EprResult",
    "AsymptoticLimits",
    "CutoffBound",
    "make_lossy_epr",
    "epr_n_max",
    "transform_params",
    "chi_for_target",
    "epr_criterion",
    "default_n_terms",
    "prob_epr",
    "fidelity_epr_lower_bound",
    "amplified_epr",
    "asymptotics",
    "max_cutoff",
]

# hard ceiling on the cutoff bound; beyond this the bound is of no
# practical use and the clamped flag tells the caller so
MAX_CUTOFF_CAP = 200


@dataclass(frozen=True)
class LossyEprParams:
    """Squeezing strength chi in [0, 1) and transmission eta in [0, 1]."""

    chi: float
    eta: float

    def __post_init__(self) -> None:
        if math.isnan(self.chi) or not 0.0 <= self.chi < 1.0:
            raise ValueError(f"chi must lie in [0, 1), got {self.chi!r}")
        if math.isnan(self.eta) or not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")


@dataclass(frozen=True)
class TransformedParams:
    """Equivalent lossy-squeezing description of the amplified state.

    scale is sqrt(1 - eta + eta gain^2); the amplified state equals a fresh
    lossy state with squeezing chi*scale and transmission gain^2 eta/scale^2.
    """

    chi_prime: float
    eta_prime: float
    scale: float


@dataclass(frozen=True)
class EprResult:
    """Performance of one amplified lossy-squeezing configuration."""

    chi_in: float
    params_out: TransformedParams
    p_success: float
    fidelity_lower_bound: float
    epsilon_epr: float


class AsymptoticLimits(NamedTuple):
    p_leading: float
    fidelity_floor: float


class CutoffBound(NamedTuple):
    value: int
    clamped: bool


def make_lossy_epr(params: LossyEprParams, n_max: int) -> FockVector:
    """Three-mode purification of two-mode squeezing with one lossy arm.

    Amplitude at (n, t) is sqrt(1-chi^2) chi^n sqrt(C(n,t) eta^t (1-eta)^(n-t));
    the loss mode's occupation is the implied n - t.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    chi, eta = params.chi, params.eta
    amps = np.zeros((n_max + 1, n_max + 1))
    pref = math.sqrt(1.0 - chi * chi)
    for n in range(n_max + 1):
        radial = pref * chi**n
        if radial == 0.0 and n > 0:
            break
        for t in range(n + 1):
            amps[n, t] = radial * math.sqrt(
                math.comb(n, t) * eta**t * (1.0 - eta) ** (n - t)
            )
    return FockVector(amps)


def epr_n_max(chi: float, tail: float = 1e-14) -> int:
    """Smallest truncation with geometric tail chi^(2(m+1)) below `tail`."""
    if not 0.0 <= chi < 1.0 or not 0.0 < tail < 1.0:
        raise ValueError("need 0 <= chi < 1 and 0 < tail < 1")
    if chi == 0.0:
        return 1
    return max(1, math.floor(math.log(tail) / (2.0 * math.log(chi))))


def transform_params(params: LossyEprParams, gain: float) -> TransformedParams:
    """Equivalent (chi', eta') of the success-weighted lossy state at this gain."""
    if gain < 1.0:
        raise ValueError("gain must be >= 1")
    scale_sq = 1.0 - params.eta + params.eta * gain * gain
    scale = math.sqrt(scale_sq)
    return TransformedParams(
        chi_prime=params.chi * scale,
        eta_prime=params.eta * gain * gain / scale_sq,
        scale=scale,
    )


def chi_for_target(chi_prime: float, eta: float, gain: float) -> float:
    """Input squeezing that lands on the target chi' at this (eta, gain)."""
    if chi_prime <= 0.0 or math.isnan(chi_prime):
        raise ValueError("chi_prime must be positive")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if gain < 1.0:
        raise ValueError("gain must be >= 1")
    scale = math.sqrt(1.0 - eta + eta * gain * gain)
    chi = chi_prime / scale
    if chi >= 1.0:
        raise UnreachableTargetError(
            f"target chi'={chi_prime} needs input squeezing {chi:.6f} >= 1 "
            f"at eta={eta}, gain={gain}"
        )
    return chi


def epr_criterion(params: LossyEprParams) -> float:
    """Product of conditional quadrature variances; below 1 shows the paradox."""
    chi, eta = params.chi, params.eta
    return (1.0 - 2.0 * chi * chi * eta / (1.0 + chi * chi)) ** 2


def default_n_terms(chi_prime: float) -> int:
    """Series length rule: stop once chi'^(2n) < 1e-15 (1 - chi'^2)."""
    if not 0.0 <= chi_prime < 1.0:
        raise ValueError("chi_prime must lie in [0, 1)")
    if chi_prime == 0.0:
        return 8
    threshold = 1e-15 * (1.0 - chi_prime * chi_prime)
    return max(8, math.ceil(math.log(threshold) / (2.0 * math.log(chi_prime))))


def _series_setup(
    chi: float, eta: float, spec: AmplifierSpec, n_terms: Optional[int]
) -> tuple[TransformedParams, int]:
    params = LossyEprParams(chi, eta)
    tp = transform_params(params, spec.gain)
    if tp.chi_prime >= 1.0:
        raise DivergenceError(
            f"transformed squeezing {tp.chi_prime:.6f} >= 1 at gain {spec.gain}; "
            f"the success-weighted state diverges"
        )
    if n_terms is None:
        n_terms = default_n_terms(tp.chi_prime)
    elif n_terms < 1:
        raise ValueError("n_terms must be positive")
    return tp, n_terms


def prob_epr(
    chi: float, eta: float, spec: AmplifierSpec, n_terms: Optional[int] = None
) -> float:
    """Success probability for the lossy-squeezing input, in closed form.

    A leading geometric resummation carries everything at and below the
    cutoff; the correction series over occupation numbers above the cutoff
    uses incomplete-beta tails of the transmission statistics.
    """
    tp, n_terms = _series_setup(chi, eta, spec, n_terms)
    g, cut = spec.gain, spec.cutoff
    chi_p = tp.chi_prime
    g_m2n = g ** (-2.0 * cut)
    lead = g_m2n / (1.0 - chi_p * chi_p)

    in_stream = reg_beta_i_stream(eta, cut + 1)
    out_stream = reg_beta_i_stream(tp.eta_prime, cut + 1)
    chi_sq = chi * chi
    chip_sq = chi_p * chi_p
    pow_in = chi_sq ** (cut + 1)
    pow_out = chip_sq ** (cut + 1)
    terms = []
    for _ in range(n_terms):
        terms.append(pow_in * next(in_stream) - g_m2n * pow_out * next(out_stream))
        pow_in *= chi_sq
        pow_out *= chip_sq
    p = (1.0 - chi_sq) * (lead + math.fsum(terms))
    return min(1.0, max(0.0, p))


def fidelity_epr_lower_bound(
    chi: float, eta: float, spec: AmplifierSpec, n_terms: Optional[int] = None
) -> float:
    """Lower bound on the fidelity between the success branch and the
    equivalent (chi', eta') lossy state, via the purifications' overlap.

    The series ratios are pre-multiplied so no intermediate factor grows
    with gain; both pieces contract at least as fast as chi'^(2n).
    """
    tp, n_terms = _series_setup(chi, eta, spec, n_terms)
    g, cut = spec.gain, spec.cutoff
    chi_sq = chi * chi
    chip_sq = tp.chi_prime * tp.chi_prime
    g_mn = g ** (-1.0 * cut)
    lead = g_mn / (1.0 - chip_sq)

    # overlap series ratios: the cross state contracts at chi*chi' times the
    # per-mode overlap factors, folded here into plain powers
    mix = 1.0 - eta + g * eta
    r_in = chi_sq * mix
    x_in = g * eta / mix
    in_stream = reg_beta_i_stream(x_in, cut + 1)
    out_stream = reg_beta_i_stream(tp.eta_prime, cut + 1)
    pow_in = r_in ** (cut + 1)
    pow_out = chip_sq ** (cut + 1)
    terms = []
    for _ in range(n_terms):
        terms.append(pow_in * next(in_stream) - g_mn * pow_out * next(out_stream))
        pow_in *= r_in
        pow_out *= chip_sq
    overlap_sq = (lead + math.fsum(terms)) ** 2 * (1.0 - chi_sq) * (1.0 - chip_sq)

    p = prob_epr(chi, eta, spec, n_terms)
    if p <= 0.0:
        raise NlaError("success probability underflowed to zero")
    return min(1.0, max(0.0, overlap_sq / p))


def amplified_epr(
    chi_prime: float, eta: float, spec: AmplifierSpec, n_terms: Optional[int] = None
) -> EprResult:
    """Full performance at a fixed target chi': solve for the input squeezing,
    then evaluate probability, fidelity bound and the output criterion."""
    chi_in = chi_for_target(chi_prime, eta, spec.gain)
    params_out = transform_params(LossyEprParams(chi_in, eta), spec.gain)
    p = prob_epr(chi_in, eta, spec, n_terms)
    f = fidelity_epr_lower_bound(chi_in, eta, spec, n_terms)
    eps = epr_criterion(LossyEprParams(params_out.chi_prime, params_out.eta_prime))
    return EprResult(
        chi_in=chi_in,
        params_out=params_out,
        p_success=p,
        fidelity_lower_bound=f,
        epsilon_epr=eps,
    )


def asymptotics(chi_prime: float, spec: AmplifierSpec) -> AsymptoticLimits:
    """Large-gain limits at fixed target chi': the leading probability term
    gain^(-2 cutoff) (1 - chi'^(2 cutoff + 2))/(1 - chi'^2), and the fidelity
    floor 1 - chi'^(2 cutoff + 2) approached from above."""
    if not 0.0 <= chi_prime < 1.0:
        raise ValueError("chi_prime must lie in [0, 1)")
    cut = spec.cutoff
    head = chi_prime ** (2 * cut + 2)
    p_leading = spec.gain ** (-2.0 * cut) * (1.0 - head) / (1.0 - chi_prime**2)
    return AsymptoticLimits(p_leading=p_leading, fidelity_floor=1.0 - head)


def max_cutoff(f_min: float, chi_prime: float) -> CutoffBound:
    """Largest cutoff whose infinite-gain fidelity floor still sits below
    f_min, i.e. for which the fidelity constraint can pin a finite gain.

    Returns (0, clamped) when even cutoff 0 clears the floor, and caps the
    value at MAX_CUTOFF_CAP with the flag set when the bound runs away.
    """
    if not 0.0 < f_min < 1.0:
        raise ValueError("f_min must lie in (0, 1)")
    if not 0.0 < chi_prime < 1.0:
        raise ValueError("chi_prime must lie in (0, 1)")
    bound = math.log(1.0 - f_min) / (2.0 * math.log(chi_prime)) - 1.0
    if bound < 0.0:
        return CutoffBound(0, True)
    if bound > MAX_CUTOFF_CAP:
        return CutoffBound(MAX_CUTOFF_CAP, True)
    return CutoffBound(math.floor(bound), False)
