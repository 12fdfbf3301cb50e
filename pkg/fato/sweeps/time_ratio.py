from fato.bangbang import params_from_theta, rwa_reference
from fato.sweeps.sweep_module import SweepModule, SweepRecord, SweepSpec, base_omega0


class time_ratio(SweepModule):
    """
    Gibbs-corrected gate time of the FATO pulse relative to on-resonance driving,
    Si(pi) sin(theta) / (2 theta), for theta in (0, pi/4]. The ratio is reported
    as total_time in units of T_RWA = 2 pi / omega_bar; fidelity columns are NaN.
    """
    kind = "time_ratio"

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        self.check(spec)
        _, ratio = rwa_reference(params_from_theta(x, base_omega0(spec)))
        return SweepRecord(x=float(x), total_time=ratio)
