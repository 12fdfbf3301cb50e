from dataclasses import replace

from fato.bangbang import synthesize_pi
from fato.sweeps.reference import robustness_point
from fato.sweeps.sweep_module import SweepModule, SweepRecord, SweepSpec, base_params, order_from_fixed


class _detuning(SweepModule):
    """Shared body of the robustness sweeps: x is a fractional parameter error."""
    perturbs = None

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        self.check(spec)
        params = base_params(spec)
        order = order_from_fixed(spec.fixed, synthesize_pi(spec.gate, params).total_time)
        errors = {"eps_omega0": 0.0, "eps_amp": 0.0}
        errors[self.perturbs] = x
        record = robustness_point(spec.gate, params, order, with_rwa=spec.fixed.get("rwa", True), **errors)
        return replace(record, x=float(x))


class detune_omega0(_detuning):
    """Fidelity when the qubit frequency is off by a fraction x of omega0."""
    kind = "detune_omega0"
    perturbs = "eps_omega0"


class detune_amp(_detuning):
    """Fidelity when the drive amplitude is off by a fraction x of omega_bar."""
    kind = "detune_amp"
    perturbs = "eps_amp"
