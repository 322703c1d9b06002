"""Operator pair, dilation unitary, and single-photon-regime gate identity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nla.fock_core import (
    AmplifierSpec,
    DiagonalOperator,
    FockVector,
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

gains = st.floats(min_value=1.0, max_value=50.0, allow_nan=False)
cutoffs = st.integers(min_value=0, max_value=12)


# --- basic types -----------------------------------------------------------


def test_spec_validation():
    spec = AmplifierSpec(2.0, 3)
    assert spec.gain == 2.0 and spec.cutoff == 3
    with pytest.raises(ValueError):
        AmplifierSpec(0.5, 1)
    with pytest.raises(ValueError):
        AmplifierSpec(2.0, -1)
    with pytest.raises(ValueError):
        AmplifierSpec(2.0, 1.5)


def test_fock_vector_norm_and_overlap():
    v = FockVector(np.array([3.0, 4.0]))
    assert v.norm_sq() == pytest.approx(25.0)
    w = v.normalized()
    assert w.norm_sq() == pytest.approx(1.0, abs=1e-15)
    u = FockVector(np.array([1.0, 0.0]))
    assert u.overlap(v) == pytest.approx(3.0)


def test_fock_vector_two_mode_validation():
    ok = np.array([[1.0, 0.0], [0.5, 0.5]])
    FockVector(ok)
    bad = np.array([[1.0, 0.3], [0.5, 0.5]])  # t > n entry populated
    with pytest.raises(ValueError):
        FockVector(bad)
    with pytest.raises(ValueError):
        FockVector(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))  # not square
    with pytest.raises(ValueError):
        FockVector(np.array([1.0, np.nan]))


# --- diagonal operator pair ------------------------------------------------


def test_success_entries_fixed_example():
    d = make_ms(AmplifierSpec(2.0, 3), 4)
    assert np.allclose(d.entries, [0.125, 0.25, 0.5, 1.0, 1.0])


def test_failure_entries_complement():
    spec = AmplifierSpec(2.0, 3)
    ms = make_ms(spec, 6).entries
    mf = make_mf(spec, 6).entries
    assert np.max(np.abs(ms**2 + mf**2 - 1.0)) < 1e-15
    # ramp saturates: no failure amplitude at and above the cutoff
    assert np.all(mf[3:] == 0.0)


def test_unit_gain_passthrough():
    spec = AmplifierSpec(1.0, 4)
    assert np.all(make_ms(spec, 8).entries == 1.0)
    assert np.all(make_mf(spec, 8).entries == 0.0)


def test_mf_needs_room_for_cutoff():
    with pytest.raises(ValueError):
        make_mf(AmplifierSpec(2.0, 5), 3)


def test_filter_norm_fixed_example():
    # (|0> + |1>)/sqrt(2) under the gain-2, cutoff-1 success arm
    psi = FockVector(np.array([1.0, 1.0]) / math.sqrt(2.0))
    out = apply_diag(make_ms(AmplifierSpec(2.0, 1), 1), psi)
    assert out.norm_sq() == pytest.approx(0.625, rel=1e-14)


@given(gain=gains, cutoff=cutoffs)
def test_completeness_property(gain, cutoff):
    spec = AmplifierSpec(gain, cutoff)
    n_max = cutoff + 6
    ms = make_ms(spec, n_max).entries
    mf = make_mf(spec, n_max).entries
    assert np.max(np.abs(ms**2 + mf**2 - 1.0)) < 1e-12


# --- multi-mode application ------------------------------------------------


def test_apply_diag_modes_on_purification():
    amps = np.zeros((3, 3))
    amps[0, 0] = 0.5
    amps[1, 1] = 0.5
    amps[2, 1] = math.sqrt(0.5)
    psi = FockVector(amps)
    op = DiagonalOperator(np.array([1.0, 2.0, 3.0]))
    by_n = apply_diag(op, psi, mode=0).amplitudes
    assert by_n[0, 0] == 0.5 and by_n[1, 1] == 1.0 and by_n[2, 1] == pytest.approx(3 * math.sqrt(0.5))
    by_t = apply_diag(op, psi, mode=1).amplitudes
    assert by_t[0, 0] == 0.5 and by_t[1, 1] == 1.0 and by_t[2, 1] == pytest.approx(2 * math.sqrt(0.5))
    by_loss = apply_diag(op, psi, mode=2).amplitudes  # weight by n - t
    assert by_loss[0, 0] == 0.5 and by_loss[1, 1] == 0.5
    assert by_loss[2, 1] == pytest.approx(2 * math.sqrt(0.5))


def test_apply_diag_dimension_checks():
    psi = FockVector(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        apply_diag(DiagonalOperator(np.array([1.0, 2.0])), psi)
    with pytest.raises(ValueError):
        apply_diag(DiagonalOperator(np.array([1.0, 1.0, 1.0])), psi, mode=3)


# --- coherent state builder ------------------------------------------------


def test_make_coherent_matches_poisson():
    alpha = 0.8
    psi, tail = make_coherent(alpha, 40)
    # amplitude form: e^{-|a|^2/2} a^n / sqrt(n!)
    expect = np.array(
        [math.exp(-0.32) * alpha**k / math.sqrt(math.factorial(k)) for k in range(41)]
    )
    assert np.max(np.abs(psi.amplitudes - expect)) < 1e-15
    assert psi.norm_sq() == pytest.approx(1.0, abs=1e-13)
    assert 0.0 <= tail < 1e-13


def test_make_coherent_complex_phase():
    psi, _ = make_coherent(0.5j, 20)
    assert psi.amplitudes[1] == pytest.approx(
        0.5j * math.exp(-0.125), rel=1e-14
    )


def test_coherent_n_max_covers_tail():
    for a in (0.1, 0.8, 2.0, 5.0):
        m = coherent_n_max(a)
        _, tail = make_coherent(a, m)
        assert tail < 1e-13


def test_vacuum_state():
    psi, tail = make_coherent(0.0, 5)
    assert psi.amplitudes[0] == 1.0 and np.all(psi.amplitudes[1:] == 0.0)
    assert tail == 0.0


# --- dilation unitary ------------------------------------------------------


@given(gain=gains, cutoff=cutoffs)
@settings(max_examples=60)
def test_dilation_unitary_property(gain, cutoff):
    spec = AmplifierSpec(gain, cutoff)
    n_max = cutoff + 5
    u = build_joint_unitary(spec, n_max).dense()
    assert np.max(np.abs(u.T @ u - np.eye(2 * (n_max + 1)))) < 1e-12


def test_dilation_blocks_fixed_example():
    u = build_joint_unitary(AmplifierSpec(2.0, 1), 2)
    r0 = u.blocks[0]
    s3 = math.sqrt(3.0) / 2.0
    assert np.allclose(r0, [[s3, 0.5], [-0.5, s3]], atol=1e-15)
    # at and past the cutoff the rotation is a (reflected) swap
    assert np.allclose(u.blocks[1], [[0.0, 1.0], [-1.0, 0.0]], atol=1e-15)


@given(gain=gains, cutoff=cutoffs)
@settings(max_examples=40)
def test_herald_branches_reproduce_filters(gain, cutoff):
    spec = AmplifierSpec(gain, cutoff)
    n_max = cutoff + 5
    rng = np.random.default_rng(20260825)
    raw = rng.normal(size=n_max + 1)
    psi = FockVector(raw).normalized()
    u = build_joint_unitary(spec, n_max)
    ok, fail = herald_branches(u, psi)
    expect_ok = apply_diag(make_ms(spec, n_max), psi)
    expect_fail = apply_diag(make_mf(spec, n_max), psi)
    assert np.max(np.abs(ok.amplitudes - expect_ok.amplitudes)) < 1e-12
    assert np.max(np.abs(fail.amplitudes - expect_fail.amplitudes)) < 1e-12
    # branch probabilities sum to one
    assert ok.norm_sq() + fail.norm_sq() == pytest.approx(1.0, abs=1e-12)


# --- interaction generator -------------------------------------------------


def test_phase_fixed_values():
    theta = hamiltonian_phase(AmplifierSpec(2.0, 1), 3)
    assert theta[0] == pytest.approx(math.pi / 6.0, rel=1e-14)  # arcsin(1/2)
    assert theta[1] == pytest.approx(math.pi / 2.0, rel=1e-14)
    assert theta[2] == pytest.approx(math.pi / 2.0, rel=1e-14)


@given(gain=gains, cutoff=cutoffs)
@settings(max_examples=40)
def test_phase_exponential_matches_blocks(gain, cutoff):
    spec = AmplifierSpec(gain, cutoff)
    n_max = cutoff + 4
    theta = hamiltonian_phase(spec, n_max)
    blocks = rotation_from_phase(theta)
    u = build_joint_unitary(spec, n_max)
    assert np.max(np.abs(blocks - u.blocks)) < 1e-12


# --- two-qubit decomposition of the lowest nontrivial cutoff ----------------


@pytest.mark.parametrize("gain", [1.0, 2.0, 10.0])
def test_n1_decomposition(gain):
    assert verify_n1_decomposition(gain) < 1e-12


@given(gain=st.floats(min_value=1.0, max_value=500.0))
@settings(max_examples=60)
def test_n1_decomposition_any_gain(gain):
    assert verify_n1_decomposition(gain) < 1e-12
