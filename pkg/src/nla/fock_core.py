"""Truncated Fock-space model of the heralded amplifier.

States live on occupation numbers 0..n_max.  The amplifier itself is a
two-outcome generalized measurement: a diagonal success operator whose
entries ramp geometrically up to the cutoff and sit at 1 above it, the
complementary failure operator, and the block-diagonal system-apparatus
unitary that dilates the pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AmplifierSpec",
    "FockVector",
    "DiagonalOperator",
    "JointUnitary",
    "make_coherent",
    "coherent_n_max",
    "make_ms",
    "make_mf",
    "apply_diag",
    "build_joint_unitary",
    "herald_branches",
    "hamiltonian_phase",
    "rotation_from_phase",
    "verify_n1_decomposition",
]


@dataclass(frozen=True)
class AmplifierSpec:
    """One amplifier instance: amplitude gain >= 1 and Fock cutoff >= 0.

    Below the cutoff the success operator attenuates by gain^(n - cutoff);
    at and above it the amplifier acts ideally.
    """

    gain: float
    cutoff: int

    def __post_init__(self) -> None:
        if math.isnan(self.gain) or self.gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {self.gain!r}")
        if int(self.cutoff) != self.cutoff or self.cutoff < 0:
            raise ValueError(f"cutoff must be a nonnegative integer, got {self.cutoff!r}")
        object.__setattr__(self, "gain", float(self.gain))
        object.__setattr__(self, "cutoff", int(self.cutoff))


@dataclass(frozen=True)
class FockVector:
    """Amplitudes over occupation numbers 0..n_max.

    A 1-D array is a single mode indexed by n.  A 2-D array is the
    three-mode purification used for lossy two-mode squeezing: entry (n, t)
    multiplies |n> (intact mode) |t> (transmitted mode) |n-t> (loss mode),
    so only the lower triangle t <= n may be populated.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes)
        if amps.ndim not in (1, 2):
            raise ValueError("amplitudes must be a 1-D or 2-D array")
        if amps.ndim == 2:
            if amps.shape[0] != amps.shape[1]:
                raise ValueError("three-mode amplitudes must be square over (n, t)")
            if np.any(np.triu(amps, 1) != 0):
                raise ValueError("three-mode amplitudes require t <= n")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[0] - 1

    @property
    def n_modes(self) -> int:
        return 1 if self.amplitudes.ndim == 1 else 3

    def norm_sq(self) -> float:
        mags = np.abs(self.amplitudes.ravel())
        return math.fsum((mags * mags).tolist())

    def overlap(self, other: "FockVector") -> complex:
        """Inner product <self|other>, summed with compensated accumulation."""
        if self.amplitudes.shape != other.amplitudes.shape:
            raise ValueError("shape mismatch in overlap")
        prod = np.conjugate(self.amplitudes.ravel()) * other.amplitudes.ravel()
        return complex(math.fsum(prod.real.tolist()), math.fsum(prod.imag.tolist()))

    def normalized(self) -> "FockVector":
        norm = math.sqrt(self.norm_sq())
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / norm)


@dataclass(frozen=True)
class DiagonalOperator:
    """Real diagonal operator d_n over a single mode's occupation number."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 1:
            raise ValueError("entries must be a 1-D array")
        if not np.all(np.isfinite(entries)):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def n_max(self) -> int:
        return self.entries.shape[0] - 1


@dataclass(frozen=True)
class JointUnitary:
    """Block-diagonal dilation: one 2x2 rotation per occupation number.

    Apparatus basis index 0 is the success herald, index 1 the failure
    herald, which doubles as the apparatus ready state.  Column 1 of each
    block therefore maps the ready state to (success, failure) weights.
    """

    blocks: np.ndarray

    def __post_init__(self) -> None:
        blocks = np.asarray(self.blocks, dtype=float)
        if blocks.ndim != 3 or blocks.shape[1:] != (2, 2):
            raise ValueError("blocks must have shape (n_max + 1, 2, 2)")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_max(self) -> int:
        return self.blocks.shape[0] - 1

    def dense(self) -> np.ndarray:
        """Assemble the full matrix; row/column index is 2*n + apparatus."""
        k = self.blocks.shape[0]
        full = np.zeros((2 * k, 2 * k))
        for n in range(k):
            full[2 * n : 2 * n + 2, 2 * n : 2 * n + 2] = self.blocks[n]
        return full


def make_coherent(alpha: complex, n_max: int) -> tuple[FockVector, float]:
    """Coherent state truncated at n_max, plus a bound on the dropped mass.

    Amplitudes are exp(-|alpha|^2/2) alpha^n / sqrt(n!); the phase of alpha
    is carried through unchanged.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    mag = abs(alpha)
    amps = np.zeros(n_max + 1, dtype=complex)
    if mag == 0.0:
        amps[0] = 1.0
        return FockVector(amps), 0.0
    x = mag * mag
    phase = complex(alpha) / mag
    lmag = math.log(mag)
    rot = 1.0 + 0.0j
    for n in range(n_max + 1):
        amps[n] = math.exp(-0.5 * x + n * lmag - 0.5 * math.lgamma(n + 1)) * rot
        rot *= phase
    tail = _poisson_tail_bound(x, n_max)
    return FockVector(amps), tail


def _poisson_tail_bound(x: float, m: int) -> float:
    """Upper bound on the Poisson(x) mass beyond occupation m."""
    if x == 0.0:
        return 0.0
    if x >= m + 2:
        return 1.0
    # first dropped term times a geometric envelope on the ratio x/(n+1)
    log_first = -x + (m + 1) * math.log(x) - math.lgamma(m + 2)
    return math.exp(log_first) / (1.0 - x / (m + 2))


def coherent_n_max(alpha_mag: float, tail: float = 1e-14) -> int:
    """Smallest truncation whose coherent-state tail bound is below `tail`."""
    if alpha_mag < 0 or not 0 < tail < 1:
        raise ValueError("need alpha_mag >= 0 and 0 < tail < 1")
    x = alpha_mag * alpha_mag
    m = max(4, math.ceil(x))
    while _poisson_tail_bound(x, m) >= tail:
        m += 1
    return m


def _success_entries(spec: AmplifierSpec, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1, dtype=float)
    return np.minimum(1.0, spec.gain ** (n - spec.cutoff))


def make_ms(spec: AmplifierSpec, n_max: int) -> DiagonalOperator:
    """Success operator: entries min(1, gain^(n - cutoff))."""
    if n_max < spec.cutoff:
        raise ValueError("operator not representable: n_max below the cutoff")
    return DiagonalOperator(_success_entries(spec, n_max))


def make_mf(spec: AmplifierSpec, n_max: int) -> DiagonalOperator:
    """Failure operator, fixed by completeness against the success entries."""
    if n_max < spec.cutoff:
        raise ValueError("operator not representable: n_max below the cutoff")
    entries = np.zeros(n_max + 1)
    if spec.gain > 1.0:
        lg = math.log(spec.gain)
        for n in range(min(spec.cutoff, n_max + 1)):
            # 1 - gain^(2(n - cutoff)) via expm1 to keep precision near gain = 1
            entries[n] = math.sqrt(-math.expm1(2.0 * (n - spec.cutoff) * lg))
    return DiagonalOperator(entries)


def apply_diag(op: DiagonalOperator, psi: FockVector, mode: int = 0) -> FockVector:
    """Multiply amplitudes entrywise by op over one mode's occupation number.

    For the three-mode layout, mode 0 contracts with n, mode 1 with t and
    mode 2 with n - t.  Output is left unnormalized; its squared norm is
    the outcome probability when psi is normalized.
    """
    amps = psi.amplitudes
    d = op.entries
    if d.shape[0] != amps.shape[0]:
        raise ValueError("dimension mismatch between operator and state")
    if amps.ndim == 1:
        if mode != 0:
            raise ValueError("single-mode state only has mode 0")
        return FockVector(amps * d)
    if mode == 0:
        return FockVector(amps * d[:, None])
    if mode == 1:
        return FockVector(amps * d[None, :])
    if mode == 2:
        size = amps.shape[0]
        diff = np.arange(size)[:, None] - np.arange(size)[None, :]
        return FockVector(amps * d[np.clip(diff, 0, size - 1)])
    raise ValueError(f"mode must be 0, 1 or 2, got {mode!r}")


def build_joint_unitary(spec: AmplifierSpec, n_max: int) -> JointUnitary:
    """Dilation unitary: per occupation number the rotation
    [[sqrt(1 - d^2), d], [-d, sqrt(1 - d^2)]] with d the success entry."""
    succ = make_ms(spec, n_max).entries
    fail = make_mf(spec, n_max).entries
    blocks = np.empty((n_max + 1, 2, 2))
    blocks[:, 0, 0] = fail
    blocks[:, 0, 1] = succ
    blocks[:, 1, 0] = -succ
    blocks[:, 1, 1] = fail
    return JointUnitary(blocks)


def herald_branches(u: JointUnitary, psi: FockVector) -> tuple[FockVector, FockVector]:
    """Run psi (x) |ready> through the dilation and read the apparatus.

    Returns the unnormalized success and failure branches; their squared
    norms are the outcome probabilities.
    """
    if psi.amplitudes.ndim != 1:
        raise ValueError("herald_branches expects a single-mode state")
    if u.n_max != psi.n_max:
        raise ValueError("dimension mismatch between unitary and state")
    success = psi.amplitudes * u.blocks[:, 0, 1]
    failure = psi.amplitudes * u.blocks[:, 1, 1]
    return FockVector(success), FockVector(failure)


def hamiltonian_phase(spec: AmplifierSpec, n_max: int) -> np.ndarray:
    """Rotation phase per occupation number: arcsin of the success entry.

    The closed-form exponential of these phases reproduces the dilation
    blocks exactly; entries at and above the cutoff are pi/2.
    """
    return np.arcsin(_success_entries(spec, n_max))


def rotation_from_phase(theta) -> np.ndarray:
    """Closed-form block exponential [[cos t, sin t], [-sin t, cos t]].

    Accepts a scalar or an array of phases; the 2x2 axes come last.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)
    s = np.sin(theta)
    out = np.empty(theta.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def verify_n1_decomposition(gain: float) -> float:
    """Check the two-qubit gate decomposition of the cutoff-1 dilation.

    On the span of the two lowest occupation numbers the dilation equals
    -(X(x)X) (I(x)Z) C(Ry(theta)) (X(x)I) with the rotation controlled on
    the upper system level; cos(theta/2) = 1/gain fixes the angle.  Returns
    the largest entrywise deviation between the two 4x4 matrices.
    """
    spec = AmplifierSpec(gain, 1)
    target = build_joint_unitary(spec, 1).dense()

    theta = 2.0 * math.acos(1.0 / spec.gain)
    half = 0.5 * theta
    ry = np.array(
        [[math.cos(half), -math.sin(half)], [math.sin(half), math.cos(half)]]
    )
    controlled = np.eye(4)
    controlled[2:, 2:] = ry

    eye = np.eye(2)
    px = np.array([[0.0, 1.0], [1.0, 0.0]])
    pz = np.array([[1.0, 0.0], [0.0, -1.0]])
    candidate = -np.kron(px, px) @ np.kron(eye, pz) @ controlled @ np.kron(px, eye)
    return float(np.max(np.abs(target - candidate)))
