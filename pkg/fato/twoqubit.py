"""
Two-qubit extensions of FATO driving.

Opposite-drift qubits driven by one collective field, and a SWAP gate built
from three ZZ evolutions separated by collective pi/2 pulses about x and y.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from fato.bangbang import BangSequence
from fato.config import IntegratorConfig
from fato.dynamics import (SIGMA_X, SIGMA_Y, SIGMA_Z, ControlledHamiltonian, integrate_fixed,
                           propagate_hamiltonian, qubit_hamiltonian)
from fato.exceptions import ConstructionFailed, NonPositiveInput, PreconditionError
from fato.fourier import FourierWaveform, evaluate, order_for_bandwidth, series_of, series_of_profile
from fato.logger import get_logger
from fato.qmat import expm_hermitian, identity, kron, phase_aligned_distance, trace_fidelity

logger = get_logger('twoqubit')

I2 = identity(2)
ZZ = kron(SIGMA_Z, SIGMA_Z)
X_COLLECTIVE = kron(SIGMA_X, I2) + kron(I2, SIGMA_X)
Y_COLLECTIVE = kron(SIGMA_Y, I2) + kron(I2, SIGMA_Y)
Z_OPPOSITE = kron(SIGMA_Z, I2) - kron(I2, SIGMA_Z)

SWAP_INTEGRATOR = IntegratorConfig(scheme="magnus4", max_refinements=5)


def swap_unitary() -> np.ndarray:
    return np.array([[1, 0, 0, 0],
                     [0, 0, 1, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1]], dtype=complex)


def collective_rotation(axis: str, sign: int) -> np.ndarray:
    """Ideal simultaneous pi/2 rotation of both qubits about x or y, sense given by sign."""
    generator = X_COLLECTIVE if axis == "x" else Y_COLLECTIVE
    return expm_hermitian(sign * np.pi / 4 * generator)


@dataclass(frozen=True)
class ScheduleSegment:
    """A rectangular piece of a two-qubit schedule; levels are in units of the drive amplitude."""
    duration: float
    x_level: int = 0
    y_level: int = 0

    @property
    def is_pulse(self) -> bool:
        return self.x_level != 0 or self.y_level != 0


@dataclass
class TwoQubitDrive:
    """
    Collective drive of two coupled qubits.

    Attributes
    ----------
    coupling_or_drift : float
        J for the SWAP construction
    drive_amp : float
        Omega, the rectangular pulse amplitude
    segments : list
        rectangular schedule, in time order
    x_profile, y_profile : tuple
        (levels, durations) of the x and y pulse profiles over [0, total_time]
    total_time : float
        ZZ time plus pulse time
    metadata : dict
        chosen frame order, pulse signs and oracle distance
    """
    coupling_or_drift: float
    drive_amp: float
    segments: List[ScheduleSegment]
    metadata: Dict = field(default_factory=dict)

    @property
    def total_time(self) -> float:
        return float(sum(s.duration for s in self.segments))

    @property
    def zz_time(self) -> float:
        return float(sum(s.duration for s in self.segments if not s.is_pulse))

    @property
    def pulse_time(self) -> float:
        return float(sum(s.duration for s in self.segments if s.is_pulse))

    def _profile(self, attr: str) -> Tuple[np.ndarray, np.ndarray]:
        levels: List[float] = []
        durations: List[float] = []
        for segment in self.segments:
            level = getattr(segment, attr)
            if levels and levels[-1] == level:
                durations[-1] += segment.duration
            else:
                levels.append(level)
                durations.append(segment.duration)
        return np.array(levels, dtype=float), np.array(durations, dtype=float)

    @property
    def x_profile(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._profile("x_level")

    @property
    def y_profile(self) -> Tuple[np.ndarray, np.ndarray]:
        return self._profile("y_level")


def _frame_pulses(frame: str, sign: int) -> List[Tuple[str, int]]:
    """Elementary pulse rotating the ZZ frame into `frame`: x-x via y rotations, y-y via x rotations."""
    if frame == "zz":
        return []
    return [("y", sign)] if frame == "xx" else [("x", sign)]


def _candidate_plan(order: Sequence[str], signs: Sequence[int], polarity: str) -> List[Tuple[str, object]]:
    """
    Time-ordered plan of 'zz' periods and ('pulse', (axis, sign)) entries for
    prod_i F_i ZZ F_i^dagger, with F the frame rotations.
    """
    plan: List[Tuple[str, object]] = []
    sign_iter = iter(signs)
    frame_pulses = []
    for frame in order:
        sign = next(sign_iter) if frame != "zz" else 1
        frame_pulses.append(_frame_pulses(frame, sign))

    previous: List[Tuple[str, int]] = []
    for pulses in frame_pulses:
        for axis, sign in previous:
            plan.append(("pulse", (axis, sign)))
        for axis, sign in pulses:
            plan.append(("pulse", (axis, -sign if polarity == "inverse" else sign)))
        plan.append(("zz", None))
        previous = pulses
    for axis, sign in previous:
        plan.append(("pulse", (axis, sign)))
    return plan


def _delta_product(plan, coupling: float) -> np.ndarray:
    zz_step = expm_hermitian(0.5 * coupling * ZZ, np.pi / (2 * coupling))
    u = identity(4)
    for kind, payload in plan:
        u = (zz_step if kind == "zz" else collective_rotation(*payload)) @ u
    return u


def build_swap_schedule(J: float, omega: float) -> TwoQubitDrive:
    '''
    SWAP from three ZZ evolutions of angle pi/4 (duration pi/(2J) each) with
    collective rectangular pi/2 pulses of amplitude omega in between.

    Frame orders, pulse senses and the polarity of the undo pulses are
    enumerated; the first assignment whose delta-pulse product equals SWAP up
    to global phase within 1e-9 is kept and recorded in metadata.

            Parameters:
                    J (float): ZZ coupling
                    omega (float): Pulse amplitude
            Returns:
                    schedule (TwoQubitDrive)
    '''
    if not (J > 0 and omega > 0):
        logger.error(f"Non-positive SWAP parameters J={J}, omega={omega}")
        raise NonPositiveInput(f"J and omega must be positive, got {J}, {omega}")
    target = swap_unitary()
    for order in itertools.permutations(("zz", "xx", "yy")):
        for signs in itertools.product((1, -1), repeat=2):
            for polarity in ("inverse", "same"):
                plan = _candidate_plan(order, signs, polarity)
                distance = phase_aligned_distance(target, _delta_product(plan, J))
                if distance >= 1e-9:
                    continue
                pulse_duration = np.pi / (2 * omega)
                segments = []
                for kind, payload in plan:
                    if kind == "zz":
                        segments.append(ScheduleSegment(np.pi / (2 * J)))
                    else:
                        axis, sign = payload
                        segments.append(ScheduleSegment(pulse_duration,
                                                        x_level=sign if axis == "x" else 0,
                                                        y_level=sign if axis == "y" else 0))
                schedule = TwoQubitDrive(coupling_or_drift=float(J), drive_amp=float(omega), segments=segments,
                                         metadata={"frame_order": list(order), "signs": list(signs),
                                                   "polarity": polarity, "delta_distance": distance})
                logger.info(f"SWAP schedule: frames {order}, signs {signs}, {polarity} undo, "
                            f"T={schedule.total_time:.6f}")
                return schedule
    logger.error("No frame assignment reproduced SWAP in the delta-pulse limit")
    raise ConstructionFailed("No ZZ frame assignment reproduced the SWAP gate")


def delta_pulse_unitary(schedule: TwoQubitDrive) -> np.ndarray:
    """Schedule product with every pulse replaced by its ideal instantaneous rotation."""
    J = schedule.coupling_or_drift
    u = identity(4)
    for segment in schedule.segments:
        if segment.is_pulse:
            axis = "x" if segment.x_level else "y"
            u = collective_rotation(axis, segment.x_level or segment.y_level) @ u
        else:
            u = expm_hermitian(0.5 * J * ZZ, segment.duration) @ u
    return u


def propagate_schedule(schedule: TwoQubitDrive, coupling_during_pulses: bool = True) -> np.ndarray:
    """Exact propagator of the rectangular schedule, one exponential per segment."""
    J, omega = schedule.coupling_or_drift, schedule.drive_amp
    u = identity(4)
    for segment in schedule.segments:
        coupling = J if (coupling_during_pulses or not segment.is_pulse) else 0.0
        h = (0.5 * coupling * ZZ + 0.5 * omega * (segment.x_level * X_COLLECTIVE + segment.y_level * Y_COLLECTIVE))
        u = expm_hermitian(h, segment.duration) @ u
    return u


def rect_swap_fidelity(schedule: TwoQubitDrive, coupling_during_pulses: bool = True) -> float:
    return trace_fidelity(swap_unitary(), propagate_schedule(schedule, coupling_during_pulses))


def schedule_waveforms(schedule: TwoQubitDrive, bandwidth: float) -> Tuple[FourierWaveform, FourierWaveform]:
    """Fourier series of the x and y profiles truncated by the bandwidth rule."""
    period = schedule.total_time
    if not bandwidth >= 2 * np.pi / period * (1 - 1e-12):
        logger.error(f"Bandwidth {bandwidth} below 2 pi / T = {2 * np.pi / period}")
        raise PreconditionError(f"bandwidth must be at least 2 pi / T = {2 * np.pi / period:.6f}")
    order = order_for_bandwidth(bandwidth, period)
    x_levels, x_durations = schedule.x_profile
    y_levels, y_durations = schedule.y_profile
    return (series_of_profile(x_levels, x_durations, order, bandwidth=bandwidth),
            series_of_profile(y_levels, y_durations, order, bandwidth=bandwidth))


def fato_swap_fidelity(schedule: TwoQubitDrive, bandwidth: float,
                       config: IntegratorConfig = SWAP_INTEGRATOR) -> Tuple[float, float]:
    '''
    SWAP fidelity with the x and y pulse profiles replaced by their truncated
    Fourier series, next to the rectangular-pulse fidelity.

    H(t) = J ZZ/2 + Omega f_x(t) (X1 + X2)/2 + Omega f_y(t) (Y1 + Y2)/2

            Parameters:
                    schedule (TwoQubitDrive): From build_swap_schedule
                    bandwidth (float): At least 2 pi / total_time
                    config (IntegratorConfig): Step control; fourth-order stepping by default
            Returns:
                    f_fato (float), f_rect (float)
    '''
    wx, wy = schedule_waveforms(schedule, bandwidth)
    J, omega = schedule.coupling_or_drift, schedule.drive_amp
    model = ControlledHamiltonian(0.5 * J * ZZ, [(wx, 0.5 * omega * X_COLLECTIVE),
                                                 (wy, 0.5 * omega * Y_COLLECTIVE)])
    result = propagate_hamiltonian(model, schedule.total_time, target=swap_unitary(),
                                   cycles=wx.order, config=config)
    f_rect = rect_swap_fidelity(schedule)
    logger.info(f"SWAP bandwidth {bandwidth}: K={wx.order}, F_fato={result.fidelity:.10f}, F_rect={f_rect:.10f}")
    return result.fidelity, f_rect


def schedule_frame(schedule: TwoQubitDrive, samples: int, bandwidth: Optional[float] = None) -> pd.DataFrame:
    """Sampled rectangular x/y profiles as a t,x_bb,y_bb table, plus x_fato,y_fato when a bandwidth is given."""
    if int(samples) != samples or samples < 1:
        raise PreconditionError(f"samples must be a positive integer, got {samples}")
    t = np.linspace(0.0, schedule.total_time, int(samples))
    profiles = {"t": t}
    for name, (levels, durations) in (("x", schedule.x_profile), ("y", schedule.y_profile)):
        edges = np.concatenate([[0.0], np.cumsum(durations)])
        index = np.clip(np.searchsorted(edges, t, side='right') - 1, 0, len(levels) - 1)
        profiles[f"{name}_bb"] = levels[index]
    if bandwidth is not None:
        wx, wy = schedule_waveforms(schedule, bandwidth)
        profiles["x_fato"] = evaluate(wx, t)
        profiles["y_fato"] = evaluate(wy, t)
    return pd.DataFrame(profiles)


def opposite_drift_fidelity(seq: BangSequence, K: int,
                            config: IntegratorConfig = IntegratorConfig()) -> Tuple[float, float]:
    '''
    Two qubits with drifts +omega0 and -omega0 under one collective FATO drive.

    H(t) = omega0/2 (Z1 - Z2) + omega_bar f_K(t)/2 (X1 + X2). The second qubit's
    ideal propagator is sigma_x U_id sigma_x, so the simultaneous target is
    U_id (x) sigma_x U_id sigma_x. The one-qubit fidelity is computed with the
    same scheme and step count as the two-qubit run.

            Parameters:
                    seq (BangSequence): Ideal single-qubit sequence
                    K (int): FATO order
                    config (IntegratorConfig): Step control
            Returns:
                    f2q (float), f1q (float)
    '''
    params = seq.params
    waveform = series_of(seq, K)
    u_id = seq.realized_unitary()
    target = kron(u_id, SIGMA_X @ u_id @ SIGMA_X)

    model = ControlledHamiltonian(0.5 * params.omega0 * Z_OPPOSITE, [(waveform, 0.5 * params.omega_bar * X_COLLECTIVE)])
    two = propagate_hamiltonian(model, waveform.period, target=target, cycles=max(K, 1), config=config)
    u1 = integrate_fixed(qubit_hamiltonian(waveform, params.omega0, params.omega_bar), waveform.period,
                         two.steps, scheme=config.scheme, chunk=config.chunk)
    f1q = trace_fidelity(u_id, u1)
    logger.info(f"Opposite-drift K={K}: f2q={two.fidelity:.12f}, f1q^2={f1q ** 2:.12f}")
    return two.fidelity, f1q
