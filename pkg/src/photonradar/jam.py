"""Analytical signal-to-jam ratios for classical and entangled illumination.

These are reporting formulas, decoupled from the event simulation: the
quantum cross-section has no operational definition here and stays a free
input. Entanglement multiplies the classical ratio by exactly 2^m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, ConfigurationError

_MAX_EXP2 = 1023  # largest m for which the ratio still fits a float


@dataclass(frozen=True)
class JamScenario:
    photons_sent: int  # K
    cross_section: float  # sigma
    quantum_cross_section: float  # sigma_Q
    qubits: int = 0  # m
    jammer_photons: float = 1.0  # P_j

    def __post_init__(self) -> None:
        if self.photons_sent <= 0:
            raise ConfigurationError("photons_sent must be positive")
        if self.cross_section < 0 or self.quantum_cross_section < 0:
            raise ConfigurationError("cross sections must be >= 0")
        if self.qubits < 0:
            raise ConfigurationError("qubits must be >= 0")
        if self.jammer_photons <= 0:
            raise ConfigurationError("jammer_photons must be positive")


def sj_classical(s: JamScenario) -> float:
    """S/J for unentangled illumination: K * sigma / P_j."""
    return s.photons_sent * s.cross_section / s.jammer_photons


def sj_entangled(s: JamScenario) -> float:
    """S/J with m qubits of entanglement: K * 2^m * sigma_Q / P_j.

    The base ratio is computed exactly like sj_classical and multiplied by
    2^m, so the m = 0 case is bit-identical to the classical formula with
    sigma_Q in place of sigma, and each additional qubit doubles it exactly.
    """
    if s.qubits > _MAX_EXP2:
        raise CapacityError(
            "2^%d overflows a float; use sj_entangled_log2" % s.qubits
        )
    base = s.photons_sent * s.quantum_cross_section / s.jammer_photons
    return base * 2.0**s.qubits


def sj_entangled_log2(s: JamScenario) -> float:
    """log2 of the entangled S/J ratio; finite for any qubit count."""
    if s.quantum_cross_section == 0:
        return -math.inf
    return (
        math.log2(s.photons_sent)
        + s.qubits
        + math.log2(s.quantum_cross_section)
        - math.log2(s.jammer_photons)
    )


def jam_table(s: JamScenario, m_max: int) -> list[tuple[int, float, float, float]]:
    """Rows (m, classical, entangled, log2 entangled) for m in [0, m_max]."""
    if m_max < 0:
        raise ConfigurationError("m_max must be >= 0")
    classical = sj_classical(s)
    rows = []
    for m in range(m_max + 1):
        variant = JamScenario(
            s.photons_sent, s.cross_section, s.quantum_cross_section, m, s.jammer_photons
        )
        entangled = sj_entangled(variant) if m <= _MAX_EXP2 else math.inf
        rows.append((m, classical, entangled, sj_entangled_log2(variant)))
    return rows
