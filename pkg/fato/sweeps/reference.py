"""
On-resonance reference driving and robustness points.

The on-resonance strategy plays omega_bar cos(omega0 t + phi) for 2 pi / omega_bar,
with phi = 0 for an X and pi/2 for a Y rotation, and is judged in the frame
rotating at the nominal omega0.
"""

from functools import lru_cache, partial

import numpy as np

from fato.bangbang import DriveParams, gate_target, normalize_gate, synthesize_pi
from fato.config import IntegratorConfig
from fato.dynamics import drift_unitary, propagate_drive, propagate_waveform
from fato.exceptions import PreconditionError, StrongRegime
from fato.fourier import series_of
from fato.logger import get_logger
from fato.qmat import trace_fidelity
from fato.sweeps.sweep_module import SweepRecord, analytic_for, sequence_record

logger = get_logger('reference')

MAX_RELATIVE_ERROR = 0.2
RWA_SAMPLES_PER_CARRIER = 256


def _resonant_cosine(t: np.ndarray, frequency: float, phase: float) -> np.ndarray:
    return np.cos(frequency * t + phase)


def rwa_config(omega0: float) -> IntegratorConfig:
    """Fourth-order stepping with 256 steps per carrier period."""
    return IntegratorConfig(scheme="magnus4", step_hint=2 * np.pi / (RWA_SAMPLES_PER_CARRIER * omega0),
                            max_refinements=5)


def _check_errors(eps_omega0: float, eps_amp: float):
    for name, eps in (("eps_omega0", eps_omega0), ("eps_amp", eps_amp)):
        if not np.isfinite(eps) or abs(eps) > MAX_RELATIVE_ERROR:
            logger.error(f"{name}={eps} outside [-{MAX_RELATIVE_ERROR}, {MAX_RELATIVE_ERROR}]")
            raise PreconditionError(f"|{name}| must not exceed {MAX_RELATIVE_ERROR}, got {eps}")


def rwa_infidelity(gate: str, params: DriveParams, eps_omega0: float = 0.0, eps_amp: float = 0.0) -> float:
    '''
    Infidelity of the on-resonance pi pulse, including counter-rotating terms.

    The cosine drive is designed for the nominal parameters; the optional
    fractional errors perturb only the physics it is played on.

            Parameters:
                    gate (str): 'X' or 'Y'
                    params (DriveParams): Nominal drive, theta <= pi/4
                    eps_omega0 (float): Fractional drift error
                    eps_amp (float): Fractional amplitude error
            Returns:
                    infidelity (float)
    '''
    gate = normalize_gate(gate)
    if not params.is_weak:
        logger.error(f"On-resonance driving requested at theta={params.theta} > pi/4")
        raise StrongRegime(f"The on-resonance reference needs theta <= pi/4, got {params.theta}")
    _check_errors(eps_omega0, eps_amp)
    physical = params.scaled(eps_omega0, eps_amp)
    t_rwa = 2 * np.pi / params.omega_bar
    phase = 0.0 if gate == "X" else np.pi / 2
    drive = partial(_resonant_cosine, frequency=params.omega0, phase=phase)
    result = propagate_drive(drive, physical.omega0, physical.omega_bar, t_rwa, config=rwa_config(params.omega0))
    u_rotating = drift_unitary(params.omega0, t_rwa).conj().T @ result.final_unitary
    infidelity = 1.0 - trace_fidelity(gate_target(gate), u_rotating)
    logger.info(f"On-resonance {gate} at theta={params.theta:.6f}, T={t_rwa:.6f}: infidelity {infidelity:.3e}")
    return float(infidelity)


@lru_cache(maxsize=256)
def cached_rwa_infidelity(gate: str, params: DriveParams, eps_omega0: float = 0.0, eps_amp: float = 0.0) -> float:
    return rwa_infidelity(gate, params, eps_omega0, eps_amp)


def robustness_point(gate: str, params: DriveParams, K: int, eps_omega0: float = 0.0, eps_amp: float = 0.0,
                     config: IntegratorConfig = IntegratorConfig(), with_rwa: bool = False) -> SweepRecord:
    '''
    FATO fidelity when the nominal waveform is played on perturbed physics.

            Parameters:
                    gate (str): 'X' or 'Y'
                    params (DriveParams): Nominal parameters used for synthesis
                    K (int): Fourier order
                    eps_omega0 (float): Fractional error of omega0, |eps| <= 0.2
                    eps_amp (float): Fractional error of omega_bar, |eps| <= 0.2
                    config (IntegratorConfig): Step control
                    with_rwa (bool): Also run the on-resonance pulse with the same errors
            Returns:
                    record (SweepRecord): x is eps_omega0; the analytic column is the nominal prediction
    '''
    gate = normalize_gate(gate)
    _check_errors(eps_omega0, eps_amp)
    seq = synthesize_pi(gate, params)
    waveform = series_of(seq, K)
    physical = params.scaled(eps_omega0, eps_amp)
    result = propagate_waveform(waveform, physical, target=gate_target(gate), config=config)
    rwa = float('nan')
    if with_rwa and params.is_weak:
        rwa = 1.0 - cached_rwa_infidelity(gate, params, float(eps_omega0), float(eps_amp))
    logger.debug(f"Robustness {gate} eps_omega0={eps_omega0}, eps_amp={eps_amp}: F={result.fidelity:.12f}")
    return sequence_record(eps_omega0, seq, waveform, result.fidelity,
                           analytic_for(gate, params, waveform, {}), rwa)
