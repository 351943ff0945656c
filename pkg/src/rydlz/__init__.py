"""Landau-Zener sweeps of one and two Rydberg atoms: dynamics, entanglement and LU invariants."""

__version__ = "0.1.0"

from .dynamics import (Trajectory, asymptotic_pair_populations, lz_probability,  # noqa: E402
                       max_entanglement_times, propagate_lindblad, propagate_schrodinger,
                       relative_phases)
from .model import DissipationSpec, SweepSchedule  # noqa: E402

__all__ = [
    "DissipationSpec",
    "SweepSchedule",
    "Trajectory",
    "asymptotic_pair_populations",
    "lz_probability",
    "max_entanglement_times",
    "propagate_lindblad",
    "propagate_schrodinger",
    "relative_phases",
]
