from typing import List

import numpy as np

from fato.bangbang import gate_target, params_from_theta, synthesize_pi
from fato.dynamics import propagate_waveform
from fato.fourier import series_of
from fato.sweeps.reference import cached_rwa_infidelity
from fato.sweeps.sweep_module import (SweepModule, SweepRecord, SweepSpec, analytic_for, base_omega0,
                                      order_from_fixed, sequence_record)


def analytic_theta_grid(gate: str, n_min: int = 2, n_max: int = 16) -> List[float]:
    """theta = pi/(2n) for the n in [n_min, n_max] whose parity matches the gate, increasing."""
    wanted = 1 if str(gate).upper() == "X" else 0
    return sorted(np.pi / (2 * n) for n in range(n_min, n_max + 1) if n % 2 == wanted)


class theta(SweepModule):
    """
    Fidelity against the drive angle theta at fixed omega0 (spec.base or fixed['omega0']).
    The order is fixed['order'], or derived per point from the absolute fixed['bandwidth'].
    """
    kind = "theta"

    def default_grid(self, gate: str) -> List[float]:
        return analytic_theta_grid(gate)

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        self.check(spec)
        params = params_from_theta(x, base_omega0(spec))
        seq = synthesize_pi(spec.gate, params)
        waveform = series_of(seq, order_from_fixed(spec.fixed, seq.total_time))
        result = propagate_waveform(waveform, params, target=gate_target(spec.gate))
        rwa = float('nan')
        if params.is_weak and spec.fixed.get("rwa", True):
            rwa = 1.0 - cached_rwa_infidelity(spec.gate, params)
        return sequence_record(x, seq, waveform, result.fidelity,
                               analytic_for(spec.gate, params, waveform, spec.fixed), rwa)
