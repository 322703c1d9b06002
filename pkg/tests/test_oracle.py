"""Brute-force cross-check engine: trivial limits and self-consistency.

These tests deliberately avoid the closed forms; equivalence between the
two routes is asserted elsewhere.
"""

import pytest

from nla.errors import DivergenceError, TailBoundError
from nla.fock_core import AmplifierSpec
from nla.oracle import OracleConfig, oracle_coherent, oracle_epr


def test_vacuum_input():
    p, f = oracle_coherent(0.0, AmplifierSpec(3.0, 2))
    assert p == pytest.approx(3.0**-4, rel=1e-15)
    assert f == 1.0


def test_unit_gain_is_identity():
    for alpha in (0.1, 0.8, 2.0):
        p, f = oracle_coherent(alpha, AmplifierSpec(1.0, 3))
        assert p == pytest.approx(1.0, abs=1e-13)
        assert f == pytest.approx(1.0, abs=1e-13)
    p, f = oracle_epr(0.4, 0.6, AmplifierSpec(1.0, 2))
    assert p == pytest.approx(1.0, abs=1e-12)
    assert f == pytest.approx(1.0, abs=1e-12)


def test_coherent_probability_bounds():
    # worst case scales everything by gain^-cutoff
    spec = AmplifierSpec(2.5, 3)
    p, f = oracle_coherent(1.2, spec)
    assert 2.5**-6 <= p <= 1.0
    assert 0.0 <= f <= 1.0


def test_coherent_truncation_stability():
    spec = AmplifierSpec(2.0, 2)
    p1, f1 = oracle_coherent(0.8, spec, OracleConfig(n_max=60))
    p2, f2 = oracle_coherent(0.8, spec, OracleConfig(n_max=120))
    assert abs(p1 - p2) / p2 < 1e-12
    assert abs(f1 - f2) / f2 < 1e-12


def test_epr_truncation_stability():
    spec = AmplifierSpec(2.0, 2)
    p1, f1 = oracle_epr(0.36, 0.3, spec, OracleConfig(n_max=80))
    p2, f2 = oracle_epr(0.36, 0.3, spec, OracleConfig(n_max=160))
    assert abs(p1 - p2) / p2 < 1e-12
    assert abs(f1 - f2) / f2 < 1e-12


def test_undersized_truncation_rejected():
    with pytest.raises(TailBoundError):
        oracle_coherent(3.0, AmplifierSpec(4.0, 2), OracleConfig(n_max=15))
    with pytest.raises(TailBoundError):
        oracle_epr(0.9, 0.5, AmplifierSpec(1.2, 1), OracleConfig(n_max=30))


def test_epr_divergent_reference_rejected():
    # gain drags the reference squeezing past 1: no normalizable target
    with pytest.raises(DivergenceError):
        oracle_epr(0.6, 1.0, AmplifierSpec(2.0, 1), OracleConfig(n_max=80))


def test_epr_lossless_arm():
    # eta = 0 sends every photon into the loss mode; success probability
    # collapses to the vacuum weight gain^-2cutoff
    spec = AmplifierSpec(2.0, 2)
    p, _ = oracle_epr(0.5, 0.0, spec, OracleConfig(n_max=80))
    assert p == pytest.approx(2.0**-4, rel=1e-12)
