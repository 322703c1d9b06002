"""Heralded noiseless linear amplification: exact finite-cutoff model.

The package models a probabilistic amplifier that multiplies the first
``cutoff + 1`` Fock amplitudes of a state by ``gain**n`` (renormalized,
success probability < 1) and passes higher ones through untouched.  It
provides the operator/unitary construction, closed-form performance
figures for coherent and two-mode-squeezed inputs, a brute-force oracle
for cross-checks, and a constrained optimizer for steering-style
figures of merit.
"""

__version__ = "0.1.0"

from .errors import (
    CutoffSearchError,
    DivergenceError,
    NlaError,
    TailBoundError,
    UnreachableTargetError,
)
from .fock_core import (
    AmplifierSpec,
    DiagonalOperator,
    FockVector,
    JointUnitary,
    apply_diag,
    build_joint_unitary,
    coherent_n_max,
    hamiltonian_phase,
    herald_branches,
    make_coherent,
    make_mf,
    make_ms,
    rotation_from_phase,
    verify_n1_decomposition,
)
from .special_functions import reg_beta_i, reg_gamma_p, reg_gamma_q
from .coherent_analysis import (
    CoherentResult,
    fidelity_coherent,
    min_cutoff_for_fidelity,
    prob_coherent,
    sweep_coherent,
)
from .epr_analysis import (
    AsymptoticLimits,
    CutoffBound,
    EprResult,
    LossyEprParams,
    TransformedParams,
    amplified_epr,
    asymptotics,
    chi_for_target,
    epr_criterion,
    epr_n_max,
    fidelity_epr_lower_bound,
    make_lossy_epr,
    max_cutoff,
    prob_epr,
    transform_params,
)
from .optimizer import (
    Binding,
    ConstraintSet,
    EtaSweepPoint,
    OptimizationResult,
    max_feasible_gain,
    optimize_epr,
    optimize_point,
    sweep_eta,
)
from .oracle import OracleConfig, oracle_coherent, oracle_epr

__all__ = [
    "__version__",
    "NlaError",
    "DivergenceError",
    "UnreachableTargetError",
    "TailBoundError",
    "CutoffSearchError",
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
    "reg_gamma_p",
    "reg_gamma_q",
    "reg_beta_i",
    "CoherentResult",
    "prob_coherent",
    "fidelity_coherent",
    "min_cutoff_for_fidelity",
    "sweep_coherent",
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
    "prob_epr",
    "fidelity_epr_lower_bound",
    "amplified_epr",
    "asymptotics",
    "max_cutoff",
    "Binding",
    "ConstraintSet",
    "OptimizationResult",
    "EtaSweepPoint",
    "max_feasible_gain",
    "optimize_epr",
    "optimize_point",
    "sweep_eta",
    "OracleConfig",
    "oracle_coherent",
    "oracle_epr",
]
