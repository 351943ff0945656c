from .analysis import DecayFitResult, OscStats, detect_maxima, fit_decay_constants, oscillation_stats
from .scenarios import (REFERENCE_STATES, ScenarioConfig, reference_state, run_invariants_check,
                        run_pair_coherent, run_pair_dissipative, run_single_atom, run_sweep_map)

__all__ = [
    "DecayFitResult",
    "OscStats",
    "REFERENCE_STATES",
    "ScenarioConfig",
    "detect_maxima",
    "fit_decay_constants",
    "oscillation_stats",
    "reference_state",
    "run_invariants_check",
    "run_pair_coherent",
    "run_pair_dissipative",
    "run_single_atom",
    "run_sweep_map",
]
