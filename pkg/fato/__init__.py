"""
fato - Fourier-approximated time-optimal control of driven qubits.
"""

__version__ = "1.0.0"

from .logger import get_logger, setup_logging
from .bangbang import (BangSequence, DriveParams, derive_params, params_from_theta, rwa_reference,
                       search_to_sequence, strong_pi_sequence, synthesize_pi, weak_pi_sequence)
from .fourier import FourierWaveform, evaluate, order_for_bandwidth, series_of, tail_error
from .dynamics import (PropagationResult, analytic_fidelity, magnus_effective, propagate_bb,
                       propagate_waveform)
from .twoqubit import TwoQubitDrive, build_swap_schedule, fato_swap_fidelity, opposite_drift_fidelity

__all__ = [
    "BangSequence",
    "DriveParams",
    "FourierWaveform",
    "PropagationResult",
    "TwoQubitDrive",
    "analytic_fidelity",
    "build_swap_schedule",
    "derive_params",
    "evaluate",
    "fato_swap_fidelity",
    "get_logger",
    "magnus_effective",
    "opposite_drift_fidelity",
    "order_for_bandwidth",
    "params_from_theta",
    "propagate_bb",
    "propagate_waveform",
    "rwa_reference",
    "search_to_sequence",
    "series_of",
    "setup_logging",
    "strong_pi_sequence",
    "synthesize_pi",
    "tail_error",
    "weak_pi_sequence",
]
