from fato.exceptions import PreconditionError
from fato.logger import get_logger
from fato.sweeps.sweep_module import SweepModule, SweepRecord, SweepSpec
from fato.twoqubit import TwoQubitDrive, build_swap_schedule, fato_swap_fidelity, schedule_waveforms

logger = get_logger('swap')


def _coupling(spec: SweepSpec) -> float:
    if isinstance(spec.base, TwoQubitDrive):
        return spec.base.coupling_or_drift
    return float(spec.fixed.get("J", 1.0))


def _swap_record(x: float, schedule: TwoQubitDrive, bandwidth: float) -> SweepRecord:
    f_fato, f_rect = fato_swap_fidelity(schedule, bandwidth)
    wx, wy = schedule_waveforms(schedule, bandwidth)
    return SweepRecord(x=float(x), fidelity_sim=float(f_fato), fidelity_analytic=float(f_rect),
                       total_time=float(schedule.total_time), order_K=int(wx.order),
                       e_k=float(wx.tail_error + wy.tail_error))


class swap_bandwidth(SweepModule):
    """
    SWAP fidelity against the bandwidth in units of J. The pulse amplitude comes
    from spec.base (a TwoQubitDrive) or fixed['omega'] in units of J.
    The analytic column holds the exact rectangular-pulse fidelity.
    """
    kind = "swap_bandwidth"
    gates = ("SWAP",)

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        self.check(spec)
        J = _coupling(spec)
        if isinstance(spec.base, TwoQubitDrive):
            schedule = spec.base
        elif "omega" in spec.fixed:
            schedule = build_swap_schedule(J, float(spec.fixed["omega"]) * J)
        else:
            logger.error("swap_bandwidth sweep without a schedule or amplitude")
            raise PreconditionError("swap_bandwidth needs a TwoQubitDrive base or fixed['omega']")
        return _swap_record(x, schedule, x * J)


class swap_amp(SweepModule):
    """
    SWAP fidelity against the pulse amplitude Omega / J at the fixed bandwidth
    fixed['bandwidth'], also in units of J.
    """
    kind = "swap_amp"
    gates = ("SWAP",)

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        self.check(spec)
        if "bandwidth" not in spec.fixed:
            logger.error("swap_amp sweep without a bandwidth")
            raise PreconditionError("swap_amp needs fixed['bandwidth']")
        J = _coupling(spec)
        schedule = build_swap_schedule(J, x * J)
        return _swap_record(x, schedule, float(spec.fixed["bandwidth"]) * J)
