from fato.bangbang import gate_target, synthesize_pi
from fato.dynamics import propagate_waveform
from fato.exceptions import ValidationError
from fato.fourier import order_for_bandwidth, series_of
from fato.logger import get_logger
from fato.sweeps.reference import cached_rwa_infidelity
from fato.sweeps.sweep_module import (NORMALIZATIONS, SweepModule, SweepRecord, SweepSpec, analytic_for,
                                      base_params, sequence_record)

logger = get_logger('bandwidth')


class bandwidth(SweepModule):
    """
    Fidelity of the FATO pulse against its bandwidth. Child of the SweepModule class.
    Grid values are the bandwidth divided by omega0 or by omega_bar, selected
    by fixed['normalization'] (default 'omega0').

    ...

    Attributes
    ----------
    kind : str
        A unique string identifying the sweep kind

    Methods
    -------
    execute(spec: SweepSpec, x: float) -> SweepRecord
        Synthesises the pi pulse of spec.base and propagates its series truncated at x.
    """
    kind = "bandwidth"

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        '''
        Evaluates one bandwidth.

                Parameters:
                        spec (SweepSpec): base holds the DriveParams
                        x (float): Normalised bandwidth
                Returns:
                        record (SweepRecord)
        '''
        self.check(spec)
        params = base_params(spec)
        normalization = spec.fixed.get("normalization", "omega0")
        if normalization not in NORMALIZATIONS:
            raise ValidationError(f"normalization must be one of {NORMALIZATIONS}, got {normalization}")
        delta_omega = x * (params.omega0 if normalization == "omega0" else params.omega_bar)

        seq = synthesize_pi(spec.gate, params)
        order = order_for_bandwidth(delta_omega, seq.total_time)
        waveform = series_of(seq, order, bandwidth=delta_omega)
        result = propagate_waveform(waveform, params, target=gate_target(spec.gate))
        rwa = float('nan')
        if params.is_weak and spec.fixed.get("rwa", True):
            rwa = 1.0 - cached_rwa_infidelity(spec.gate, params)
        logger.debug(f"Bandwidth {delta_omega:.6f} -> K={order}, F={result.fidelity:.12f}")
        return sequence_record(x, seq, waveform, result.fidelity,
                               analytic_for(spec.gate, params, waveform, spec.fixed), rwa)
