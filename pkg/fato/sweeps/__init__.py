from fato.sweeps.sweep_module import CSV_COLUMNS, SweepModule, SweepRecord, SweepSpec
from fato.sweeps import bandwidth, detuning, swap, theta, time_ratio
from fato.sweeps.theta import analytic_theta_grid
from fato.sweeps.reference import robustness_point, rwa_infidelity
from fato.sweeps.engine import records_frame, records_to_csv, run_sweep

SWEEP_KINDS = {module.kind: module for module in (bandwidth.bandwidth, theta.theta, detuning.detune_omega0,
                                                 detuning.detune_amp, time_ratio.time_ratio,
                                                 swap.swap_bandwidth, swap.swap_amp)}
