"""Closed-form coherent-input performance.

Reference numbers below were frozen from the brute-force oracle
(tests never recompute them from the formulas under test).
"""


import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nla.coherent_analysis import (
    fidelity_coherent,
    min_cutoff_for_fidelity,
    prob_coherent,
    sweep_coherent,
)
from nla.errors import CutoffSearchError
from nla.fock_core import AmplifierSpec

# oracle_coherent(0.8, AmplifierSpec(2, N), OracleConfig(n_max=60))
FROZEN_ALPHA08_G2 = {
    1: (0.60453068196771365, 0.64657762553094966),
    2: (0.25256298891897871, 0.78587018817293453),
    3: (0.083578949323782709, 0.89153758165215691),
}
# oracle_coherent(1.5, AmplifierSpec(3, 2), OracleConfig(n_max=80))
FROZEN_ALPHA15_G3_N2 = (0.68510355130899792, 0.00017786705315966147)
# oracle_coherent(6.0, AmplifierSpec(4, 3), OracleConfig(n_max=900))
FROZEN_ALPHA6_G4_N3 = (0.99999999999984657, 1.9435148500495926e-141)


@pytest.mark.parametrize("cutoff", [1, 2, 3])
def test_frozen_values(cutoff):
    spec = AmplifierSpec(2.0, cutoff)
    p_ref, f_ref = FROZEN_ALPHA08_G2[cutoff]
    assert prob_coherent(0.8, spec) == pytest.approx(p_ref, rel=1e-12)
    assert fidelity_coherent(0.8, spec) == pytest.approx(f_ref, rel=1e-12)


def test_frozen_value_weak_amplification_corner():
    spec = AmplifierSpec(3.0, 2)
    p_ref, f_ref = FROZEN_ALPHA15_G3_N2
    assert prob_coherent(1.5, spec) == pytest.approx(p_ref, rel=1e-12)
    assert fidelity_coherent(1.5, spec) == pytest.approx(f_ref, rel=1e-11)


def test_frozen_value_log_branch():
    # (gain^2-1)|alpha|^2 = 540 forces the log-domain evaluation path
    spec = AmplifierSpec(4.0, 3)
    p_ref, f_ref = FROZEN_ALPHA6_G4_N3
    assert prob_coherent(6.0, spec) == pytest.approx(p_ref, rel=1e-12)
    assert fidelity_coherent(6.0, spec) == pytest.approx(f_ref, rel=1e-12)


def test_unit_gain():
    for alpha in (0.0, 0.3, 1.5):
        spec = AmplifierSpec(1.0, 2)
        assert prob_coherent(alpha, spec) == pytest.approx(1.0, abs=1e-14)
        assert fidelity_coherent(alpha, spec) == pytest.approx(1.0, abs=1e-14)


def test_vacuum_input():
    spec = AmplifierSpec(2.5, 3)
    assert prob_coherent(0.0, spec) == pytest.approx(2.5**-6, rel=1e-14)
    assert fidelity_coherent(0.0, spec) == pytest.approx(1.0, abs=1e-14)


@given(
    alpha=st.floats(min_value=0.0, max_value=2.0),
    gain=st.floats(min_value=1.0, max_value=5.0),
    cutoff=st.integers(min_value=0, max_value=10),
)
@settings(max_examples=80)
def test_ranges(alpha, gain, cutoff):
    spec = AmplifierSpec(gain, cutoff)
    p = prob_coherent(alpha, spec)
    f = fidelity_coherent(alpha, spec)
    assert gain ** (-2 * cutoff) - 1e-13 <= p <= 1.0
    assert 0.0 <= f <= 1.0


@given(
    alpha=st.floats(min_value=0.05, max_value=1.0),
    gain=st.floats(min_value=1.1, max_value=4.0),
)
@settings(max_examples=40)
def test_probability_decreases_with_cutoff(alpha, gain):
    values = [prob_coherent(alpha, AmplifierSpec(gain, n)) for n in range(6)]
    assert all(a >= b - 1e-13 for a, b in zip(values, values[1:]))


def test_fidelity_improves_with_cutoff_in_working_regime():
    # alpha g^2 << N keeps the device faithful; fidelity climbs toward 1
    values = [fidelity_coherent(0.3, AmplifierSpec(1.8, n)) for n in range(1, 9)]
    assert all(a <= b + 1e-13 for a, b in zip(values, values[1:]))
    assert values[-1] > 0.9999


def test_min_cutoff_low_amplitude():
    for gain in (1.0, 1.7, 2.4, 3.0):
        assert min_cutoff_for_fidelity(0.1, gain, 0.99) == 1


def test_min_cutoff_frozen_example():
    # oracle scan at alpha=0.8, gain=4 first clears 0.99 at cutoff 18
    assert min_cutoff_for_fidelity(0.8, 4.0, 0.99) == 18


def test_min_cutoff_unreachable():
    with pytest.raises(CutoffSearchError):
        min_cutoff_for_fidelity(8.0, 4.0, 0.9999)


def test_min_cutoff_respects_floor():
    n = min_cutoff_for_fidelity(0.5, 2.0, 0.95)
    assert fidelity_coherent(0.5, AmplifierSpec(2.0, n)) >= 0.95
    if n > 0:
        assert fidelity_coherent(0.5, AmplifierSpec(2.0, n - 1)) < 0.95


def test_sweep_matches_pointwise():
    gains = [1.0, 1.5, 2.0, 3.0]
    rows = sweep_coherent(0.8, gains, 0.99)
    assert [r.gain for r in rows] == gains
    for row in rows:
        n = min_cutoff_for_fidelity(0.8, row.gain, 0.99)
        spec = AmplifierSpec(row.gain, n)
        assert row.cutoff == n
        assert row.p_success == pytest.approx(prob_coherent(0.8, spec), rel=1e-14)
        assert row.fidelity == pytest.approx(fidelity_coherent(0.8, spec), rel=1e-14)
        assert row.fidelity >= 0.99


def test_sweep_rejects_bad_grid():
    with pytest.raises(ValueError):
        sweep_coherent(0.8, [2.0, 1.5], 0.99)
    with pytest.raises(ValueError):
        sweep_coherent(0.8, [0.5, 1.5], 0.99)
