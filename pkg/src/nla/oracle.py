"""Brute-force reference sums, the ground truth behind every closed form.

Everything here is a direct truncated Fock-basis summation with per-term
log-domain evaluation and compensated accumulation.  The module deliberately
shares no code with the analytic modules: it never touches the incomplete
gamma/beta routines and re-derives the transformed squeezing parameters
inline, so agreement with the closed forms is evidence, not tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivergenceError, TailBoundError
from .fock_core import AmplifierSpec

__all__ = ["OracleConfig", "oracle_coherent", "oracle_epr"]


@dataclass(frozen=True)
class OracleConfig:
    """Basis truncation and the largest neglected mass the caller accepts."""

    n_max: int = 80
    tail_bound: float = 1e-13

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")
        if not 0 < self.tail_bound < 1:
            raise ValueError("tail_bound must lie in (0, 1)")


def _success_weight(n: int, spec: AmplifierSpec) -> float:
    # gain >= 1, so the ramp saturates at the cutoff; skipping the power
    # there also avoids float overflow for very high n
    if n >= spec.cutoff:
        return 1.0
    return spec.gain ** (n - spec.cutoff)


def _require_tail(bound: float, cfg: OracleConfig, what: str) -> None:
    if not bound <= cfg.tail_bound:
        raise TailBoundError(
            f"{what}: truncation tail bound {bound:.3e} exceeds {cfg.tail_bound:.3e}; "
            f"increase n_max"
        )


def oracle_coherent(
    alpha_mag: float, spec: AmplifierSpec, cfg: OracleConfig = OracleConfig(n_max=60)
) -> tuple[float, float]:
    """Success probability and fidelity for a coherent input, by direct sums.

    The probability is the weighted Poisson sum over occupation numbers;
    the fidelity compares the success branch against the coherent state of
    gain-times-larger amplitude via a term-by-term inner product.
    """
    if alpha_mag < 0:
        raise ValueError("alpha_mag must be nonnegative")
    g = spec.gain
    m = cfg.n_max
    x = alpha_mag * alpha_mag
    if x == 0.0:
        w0 = _success_weight(0, spec)
        return w0 * w0, 1.0

    lx = math.log(x)
    lgx = math.log(g * x)
    weights = [_success_weight(n, spec) for n in range(m + 1)]

    # probability: sum_n e^-x x^n/n! * weight^2
    p_terms = [
        math.exp(-x + n * lx - math.lgamma(n + 1)) * weights[n] * weights[n]
        for n in range(m + 1)
    ]
    p = math.fsum(p_terms)
    # dropped terms are bounded by the bare Poisson tail since weights <= 1
    _require_tail(_geometric_poisson_tail(x, m), cfg, "coherent probability")

    # overlap with the amplified target: sum_n e^-(1+g^2)x/2 (gx)^n/n! * weight
    s_prefix = -0.5 * (1.0 + g * g) * x
    s_terms = [
        math.exp(s_prefix + n * lgx - math.lgamma(n + 1)) * weights[n]
        for n in range(m + 1)
    ]
    s = math.fsum(s_terms)
    if g * x < m + 2:
        s_tail = math.exp(s_prefix + (m + 1) * lgx - math.lgamma(m + 2)) / (
            1.0 - g * x / (m + 2)
        )
    else:
        s_tail = 1.0
    _require_tail(s_tail, cfg, "coherent overlap")

    return p, s * s / p


def _geometric_poisson_tail(x: float, m: int) -> float:
    if x >= m + 2:
        return 1.0
    first = math.exp(-x + (m + 1) * math.log(x) - math.lgamma(m + 2))
    return first / (1.0 - x / (m + 2))


def oracle_epr(
    chi: float, eta: float, spec: AmplifierSpec, cfg: OracleConfig = OracleConfig()
) -> tuple[float, float]:
    """Success probability and fidelity lower bound for lossy two-mode
    squeezing, by explicit three-mode summation.

    Builds both purifications term by term: the input state with (chi, eta)
    and the reference state with the transformed (chi', eta'), applies the
    success weights on the transmitted mode's occupation, and accumulates
    the squared norm and the inner product directly.
    """
    if not 0.0 <= chi < 1.0:
        raise ValueError("chi must lie in [0, 1)")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    g = spec.gain
    m = cfg.n_max

    scale_sq = 1.0 - eta + eta * g * g
    chi_ref = chi * math.sqrt(scale_sq)
    eta_ref = eta * g * g / scale_sq
    if chi_ref >= 1.0:
        raise DivergenceError(
            f"transformed squeezing {chi_ref:.6f} >= 1; the weighted state diverges"
        )

    # tails: per-n probability mass is <= (1-chi^2) chi^(2n) because the
    # success weights never exceed 1; the overlap contracts at chi*chi_ref.
    p_tail = chi ** (2 * (m + 1))
    _require_tail(p_tail, cfg, "epr probability")
    ratio = chi * chi_ref
    s_tail = ratio ** (m + 1) / (1.0 - ratio)
    _require_tail(s_tail, cfg, "epr overlap")

    pref_in = 1.0 - chi * chi
    pref_ref = 1.0 - chi_ref * chi_ref
    p_terms: list[float] = []
    s_terms: list[float] = []
    for n in range(m + 1):
        chi2n = chi ** (2 * n)
        cross_n = ratio**n
        for t in range(n + 1):
            comb = math.comb(n, t)
            w = _success_weight(t, spec)
            prob_in = comb * eta**t * (1.0 - eta) ** (n - t)
            p_terms.append(pref_in * chi2n * prob_in * w * w)
            cross = (
                comb
                * math.sqrt(eta * eta_ref) ** t
                * math.sqrt((1.0 - eta) * (1.0 - eta_ref)) ** (n - t)
            )
            s_terms.append(cross_n * cross * w)
    p = math.fsum(p_terms)
    s = math.sqrt(pref_in * pref_ref) * math.fsum(s_terms)
    return p, s * s / p
