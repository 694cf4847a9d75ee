from __future__ import annotations

import dataclasses
import math

import pytest

from photonradar import (
    CapacityError,
    ConfigurationError,
    JamScenario,
    jam_table,
    sj_classical,
    sj_entangled,
    sj_entangled_log2,
)


def scenario(**overrides):
    base = dict(
        photons_sent=1000,
        cross_section=0.1,
        quantum_cross_section=0.1,
        qubits=0,
        jammer_photons=100.0,
    )
    base.update(overrides)
    return JamScenario(**base)


class TestClassical:
    def test_unit_example(self):
        assert sj_classical(scenario()) == pytest.approx(1.0, rel=1e-12)

    def test_zero_cross_section(self):
        assert sj_classical(scenario(cross_section=0.0)) == 0.0

    def test_bench_scattering_example(self):
        s = scenario(photons_sent=10**6, cross_section=0.13, jammer_photons=10**4)
        assert sj_classical(s) == pytest.approx(13.0, rel=1e-12)

    def test_linear_in_photons_inverse_in_jammer(self):
        base = sj_classical(scenario())
        assert sj_classical(scenario(photons_sent=3000)) == pytest.approx(3 * base, rel=1e-12)
        assert sj_classical(scenario(jammer_photons=200.0)) == pytest.approx(base / 2, rel=1e-12)


class TestEntangled:
    def test_m_zero_reduces_to_classical_exactly(self):
        s = scenario()
        assert sj_entangled(s) == sj_classical(s)

    def test_one_qubit_doubles_exactly(self):
        assert sj_entangled(scenario(qubits=1)) == 2.0 * sj_entangled(scenario(qubits=0))

    def test_ten_qubits(self):
        assert sj_entangled(scenario(qubits=10)) == pytest.approx(1024.0, rel=1e-12)

    def test_exponential_identity_over_range(self):
        for m in range(1, 16):
            assert sj_entangled(scenario(qubits=m)) == 2.0 * sj_entangled(scenario(qubits=m - 1))

    def test_overflow_raises_capacity_error(self):
        with pytest.raises(CapacityError):
            sj_entangled(scenario(qubits=1100))

    def test_log2_form_always_finite(self):
        assert sj_entangled_log2(scenario(qubits=1100)) == pytest.approx(1100.0, rel=1e-9)
        assert sj_entangled_log2(scenario(qubits=10)) == pytest.approx(10.0, rel=1e-9)
        assert sj_entangled_log2(scenario(quantum_cross_section=0.0)) == -math.inf

    def test_log2_consistent_with_direct(self):
        s = scenario(qubits=7, quantum_cross_section=0.013)
        assert 2.0 ** sj_entangled_log2(s) == pytest.approx(sj_entangled(s), rel=1e-9)


class TestTableAndValidation:
    def test_table_rows_double(self):
        rows = jam_table(scenario(), m_max=3)
        assert len(rows) == 4
        assert [m for m, *_ in rows] == [0, 1, 2, 3]
        for (m0, _, e0, _), (m1, _, e1, _) in zip(rows, rows[1:]):
            assert e1 == 2.0 * e0

    def test_scenario_validation(self):
        with pytest.raises(ConfigurationError):
            scenario(photons_sent=0)
        with pytest.raises(ConfigurationError):
            scenario(cross_section=-0.1)
        with pytest.raises(ConfigurationError):
            scenario(qubits=-1)
        with pytest.raises(ConfigurationError):
            scenario(jammer_photons=0.0)

    def test_replace_keeps_validation(self):
        with pytest.raises(ConfigurationError):
            dataclasses.replace(scenario(), jammer_photons=-5.0)
