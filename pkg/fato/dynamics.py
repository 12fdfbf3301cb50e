"""
Qubit dynamics under bang-bang and Fourier-approximated drives.

Bang sequences are propagated exactly. Time-dependent drives are integrated
with piecewise-constant exponential steps, so every step is exactly unitary,
and each run is checked against a run at half the step size.
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from fato.bangbang import BangSequence, DriveParams, bang_unitary
from fato.config import INTEGRATION_SCHEMES, IntegratorConfig
from fato.exceptions import (NoConvergence, PreconditionError, QuadratureBudgetExceeded,
                             ValidationError)
from fato.fourier import FourierWaveform, evaluate, evaluate_grid, series_of
from fato.logger import get_logger
from fato.qmat import (exp_su2, exp_su2_batch, expm_hermitian, identity, max_entry_norm, ordered_product,
                       pauli, trace_fidelity, unitarity_defect)

logger = get_logger('dynamics')

SIGMA_X = pauli('x')
SIGMA_Y = pauli('y')
SIGMA_Z = pauli('z')

# Gauss points and weights of the two-exponential fourth-order commutator-free scheme
_CF4_NODES = (0.5 - np.sqrt(3) / 6, 0.5 + np.sqrt(3) / 6)
_CF4_EARLY = 0.25 - np.sqrt(3) / 6
_CF4_LATE = 0.25 + np.sqrt(3) / 6

MAX_MAGNUS_NODES = 4_000_000


@dataclass
class PropagationResult:
    """
    Outcome of a propagation.

    Attributes
    ----------
    final_unitary : np.ndarray
        propagator at the final time
    fidelity : float
        trace_fidelity(target, final_unitary)
    steps : int
        number of exponential steps in the reported run (bangs for exact propagation)
    max_unitarity_defect : float
        max-entry norm of U^dagger U - I
    step_size : float
        step length of the reported run
    richardson_defect : float
        max-entry distance between the runs at h and h/2 (0 for exact propagation)
    refinements : int
        how many times the step was halved beyond the first comparison
    """
    final_unitary: np.ndarray
    fidelity: float
    steps: int
    max_unitarity_defect: float
    step_size: float
    richardson_defect: float = 0.0
    refinements: int = 0
    target: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.fidelity


def _result(u: np.ndarray, target: Optional[np.ndarray], steps: int, step_size: float,
            richardson_defect: float = 0.0, refinements: int = 0) -> PropagationResult:
    if target is None:
        target = u
    return PropagationResult(final_unitary=u, fidelity=trace_fidelity(target, u), steps=steps,
                             max_unitarity_defect=unitarity_defect(u), step_size=step_size,
                             richardson_defect=richardson_defect, refinements=refinements,
                             target=np.asarray(target, dtype=complex))


def propagate_bb(seq: BangSequence, target: Optional[np.ndarray] = None) -> PropagationResult:
    '''
    Exact propagator of a bang sequence, one closed-form exponential per bang.

            Parameters:
                    seq (BangSequence): The sequence; an empty sequence gives the identity
                    target (np.ndarray, optional): Defaults to seq.target
            Returns:
                    result (PropagationResult)
    '''
    u = seq.realized_unitary()
    if target is None:
        target = seq.target
    step = float(np.max(seq.durations)) if len(seq) else 0.0
    return _result(u, target, steps=len(seq), step_size=step)


def exp_hermitian_steps(h_stack: np.ndarray, dt: float) -> np.ndarray:
    """
    exp(-i dt H) for a stack of Hermitian matrices. 2x2 stacks use the
    axis-angle form, larger ones an eigendecomposition.
    """
    if h_stack.shape[-1] != 2:
        return expm_hermitian(h_stack, dt)
    e0 = 0.5 * (h_stack[..., 0, 0] + h_stack[..., 1, 1]).real
    a = h_stack[..., 1, 0].real
    b = h_stack[..., 1, 0].imag
    c = 0.5 * (h_stack[..., 0, 0] - h_stack[..., 1, 1]).real
    r = np.sqrt(a * a + b * b + c * c)
    scale = dt * np.sinc(dt * r / np.pi)
    out = np.empty(r.shape + (2, 2), dtype=complex)
    cos_term = np.cos(dt * r)
    out[..., 0, 0] = cos_term - 1j * c * scale
    out[..., 1, 1] = cos_term + 1j * c * scale
    out[..., 0, 1] = -1j * a * scale - b * scale
    out[..., 1, 0] = -1j * a * scale + b * scale
    return out * np.exp(-1j * dt * e0)[..., None, None]


Drive = Union[FourierWaveform, Callable[[np.ndarray], np.ndarray]]


class ControlledHamiltonian:
    """
    H(t) = drift + sum_m f_m(t) H_m with scalar drives f_m.

    A drive is either a FourierWaveform, sampled on the step grid with an FFT,
    or a vectorised callable of time.

    Attributes
    ----------
    drift : np.ndarray
        time-independent part
    controls : list
        (drive, matrix) pairs
    clamp : bool
        hard-limit Fourier drives to [-1, 1]
    """

    def __init__(self, drift: np.ndarray, controls: Sequence[Tuple[Drive, np.ndarray]], clamp: bool = False):
        self.drift = np.asarray(drift, dtype=complex)
        self.controls = [(drive, np.asarray(matrix, dtype=complex)) for drive, matrix in controls]
        if not self.controls:
            raise ValidationError("At least one control term is required")
        self.clamp = clamp

    @property
    def dim(self) -> int:
        return self.drift.shape[0]

    def sample(self, n_steps: int, total_time: float, fraction: float) -> List[np.ndarray]:
        """Drive values at t_j = (j + fraction) T / n for every control."""
        values = []
        for drive, _ in self.controls:
            if isinstance(drive, FourierWaveform):
                values.append(evaluate_grid(drive, n_steps, fraction, clamp=self.clamp))
            else:
                times = (np.arange(n_steps) + fraction) * total_time / n_steps
                values.append(np.asarray(drive(times), dtype=float))
        return values

    def stack(self, values: Sequence[np.ndarray]) -> np.ndarray:
        h = np.broadcast_to(self.drift, values[0].shape + self.drift.shape).copy()
        for f, (_, matrix) in zip(values, self.controls):
            h += f[:, None, None] * matrix
        return h


def integrate_fixed(model: ControlledHamiltonian, total_time: float, n_steps: int,
                    scheme: str = "midpoint", chunk: int = 8192) -> np.ndarray:
    '''
    Time-ordered propagator over [0, total_time] with n_steps equal steps.

    midpoint: one exponential per step with H sampled at the step centre.
    magnus4: two exponentials per step built from H at the two Gauss points.

            Parameters:
                    model (ControlledHamiltonian): The Hamiltonian
                    total_time (float): Final time
                    n_steps (int): Number of steps
                    scheme (str): 'midpoint' (second order) or 'magnus4' (fourth order)
                    chunk (int): Steps materialised at once
            Returns:
                    u (np.ndarray)
    '''
    if scheme not in INTEGRATION_SCHEMES:
        logger.error(f"Unknown integration scheme {scheme}")
        raise ValidationError(f"scheme must be one of {INTEGRATION_SCHEMES}, got {scheme}")
    h = total_time / n_steps
    fractions = (0.5,) if scheme == "midpoint" else _CF4_NODES
    samples = [model.sample(n_steps, total_time, c) for c in fractions]

    u = identity(model.dim)
    for start in range(0, n_steps, chunk):
        window = slice(start, min(start + chunk, n_steps))
        stacks = [model.stack([f[window] for f in node]) for node in samples]
        if scheme == "midpoint":
            steps = exp_hermitian_steps(stacks[0], h)
        else:
            h1, h2 = stacks
            first = exp_hermitian_steps(_CF4_LATE * h1 + _CF4_EARLY * h2, h)
            second = exp_hermitian_steps(_CF4_EARLY * h1 + _CF4_LATE * h2, h)
            steps = second @ first
        u = ordered_product(steps, model.dim) @ u
    return u


def initial_steps(total_time: float, cycles: int, config: IntegratorConfig) -> int:
    """Step count for h = min(step_hint, T / (samples_per_cycle * max(cycles, 1)))."""
    h0 = min(config.step_hint, total_time / (config.samples_per_cycle * max(cycles, 1)))
    return max(1, int(np.ceil(total_time / h0 - 1e-9)))


def propagate_hamiltonian(model: ControlledHamiltonian, total_time: float, target: Optional[np.ndarray] = None,
                          cycles: int = 1, config: IntegratorConfig = IntegratorConfig(),
                          n_steps: Optional[int] = None, richardson: bool = True) -> PropagationResult:
    '''
    Step-controlled propagation of a time-dependent Hamiltonian.

    The run is repeated at half the step; while the two final unitaries differ
    by richardson_tol or more the step is halved again, at most
    max_refinements times. The finer run is reported.

            Parameters:
                    model (ControlledHamiltonian): The Hamiltonian
                    total_time (float): Final time T > 0
                    target (np.ndarray, optional): Fidelity reference
                    cycles (int): Periods of the fastest drive component over [0, T]
                    config (IntegratorConfig): Step control
                    n_steps (int, optional): Initial step count instead of the step rule
                    richardson (bool): Run the half-step check
            Returns:
                    result (PropagationResult)
    '''
    if not total_time > 0:
        logger.error(f"Propagation over non-positive time {total_time}")
        raise PreconditionError(f"total_time must be positive, got {total_time}")
    n_steps = initial_steps(total_time, cycles, config) if n_steps is None else max(int(n_steps), 1)

    def run(n: int) -> np.ndarray:
        return integrate_fixed(model, total_time, n, scheme=config.scheme, chunk=config.chunk)

    coarse = run(n_steps)
    if not richardson:
        return _result(coarse, target, steps=n_steps, step_size=total_time / n_steps)

    fine = run(2 * n_steps)
    defect = max_entry_norm(coarse - fine)
    refinements = 0
    while defect >= config.richardson_tol:
        if refinements >= config.max_refinements:
            logger.error(f"Richardson defect {defect:.3e} above {config.richardson_tol:.1e} "
                         f"after {refinements} refinements ({2 * n_steps} steps)")
            raise NoConvergence(f"Step refinement did not converge: defect {defect:.3e}", defect=defect)
        n_steps *= 2
        coarse = fine
        fine = run(2 * n_steps)
        defect = max_entry_norm(coarse - fine)
        refinements += 1
        logger.debug(f"Refinement {refinements}: {2 * n_steps} steps, defect {defect:.3e}")

    logger.debug(f"Propagated T={total_time:.6f} with {2 * n_steps} steps, defect {defect:.3e}")
    return _result(fine, target, steps=2 * n_steps, step_size=total_time / (2 * n_steps),
                   richardson_defect=defect, refinements=refinements)


def qubit_hamiltonian(drive: Drive, omega0: float, omega_bar: float, clamp: bool = False) -> ControlledHamiltonian:
    """H(t) = (omega0 sigma_z + omega_bar f(t) sigma_x) / 2."""
    return ControlledHamiltonian(0.5 * omega0 * SIGMA_Z, [(drive, 0.5 * omega_bar * SIGMA_X)], clamp=clamp)


def propagate_drive(drive: Drive, omega0: float, omega_bar: float, total_time: float,
                    target: Optional[np.ndarray] = None, cycles: int = 1,
                    config: IntegratorConfig = IntegratorConfig(), n_steps: Optional[int] = None,
                    richardson: bool = True, clamp: bool = False) -> PropagationResult:
    """Propagate i dU/dt = (omega0 sigma_z + omega_bar f(t) sigma_x)/2 U over [0, total_time]."""
    return propagate_hamiltonian(qubit_hamiltonian(drive, omega0, omega_bar, clamp=clamp), total_time,
                                 target=target, cycles=cycles, config=config, n_steps=n_steps,
                                 richardson=richardson)


def propagate_waveform(waveform: FourierWaveform, params: DriveParams, target: Optional[np.ndarray] = None,
                       step_hint: Optional[float] = None, config: IntegratorConfig = IntegratorConfig(),
                       clamp: bool = False, n_steps: Optional[int] = None,
                       richardson: bool = True) -> PropagationResult:
    '''
    Propagate the qubit under the truncated Fourier drive omega_bar * f_K(t).

            Parameters:
                    waveform (FourierWaveform): Drive shape, period > 0
                    params (DriveParams): Physical parameters used for the dynamics
                    target (np.ndarray, optional): Fidelity reference
                    step_hint (float, optional): Overrides config.step_hint
                    config (IntegratorConfig): Step control
                    clamp (bool): Hard-limit the drive to the amplitude bound
                    n_steps (int, optional): Initial step count instead of the step rule
                    richardson (bool): Run the half-step check
            Returns:
                    result (PropagationResult)
    '''
    if not waveform.period > 0:
        raise PreconditionError("Waveform period must be positive")
    if step_hint is not None:
        config = replace(config, step_hint=step_hint)
    result = propagate_drive(waveform, params.omega0, params.omega_bar, waveform.period, target=target,
                             cycles=waveform.order, config=config, n_steps=n_steps,
                             richardson=richardson, clamp=clamp)
    logger.info(f"FATO propagation K={waveform.order}, T={waveform.period:.6f}: F={result.fidelity:.12f}")
    return result


def drift_unitary(omega0: float, total_time: float) -> np.ndarray:
    """exp(-i omega0 T sigma_z / 2)."""
    return exp_su2(0.0, 0.0, 1.0, omega0 * total_time / 2)


@dataclass
class EffectiveHamiltonian:
    """
    First-order toggling-frame Hamiltonian of the truncation error.

    Attributes
    ----------
    matrix : np.ndarray
        time average over [0, T] of H_err carried by U_id, Hermitian
    norm : float
        largest singular value of matrix
    period : float
        T
    order : int
        K of the truncated drive
    reference_order : int
        highest harmonic kept in the remainder
    neglected_tail : float
        E at reference_order, the remainder power left out
    nodes : int
        quadrature nodes used
    orientation : str
        'forward' (U_id H_err U_id^dagger) or 'adjoint' (U_id^dagger H_err U_id)
    """
    matrix: np.ndarray
    norm: float
    period: float
    order: int
    reference_order: int
    neglected_tail: float
    nodes: int
    orientation: str = "forward"

    @property
    def components(self) -> Dict[str, float]:
        """Pauli components h_a with matrix = sum_a h_a sigma_a (trace part dropped)."""
        return {axis: float(np.real(np.trace(self.matrix @ sigma)) / 2)
                for axis, sigma in (("x", SIGMA_X), ("y", SIGMA_Y), ("z", SIGMA_Z))}

    def error_unitary(self) -> np.ndarray:
        """exp(-i H_bar T), the first-order error propagator."""
        return expm_hermitian(self.matrix, self.period)


def _gauss_panels(seq: BangSequence, total_nodes: int, points: int = 16):
    """Composite Gauss-Legendre nodes per bang: (segment index, local time, weight)."""
    xg, wg = np.polynomial.legendre.leggauss(points)
    seg_index, local, weights = [], [], []
    for j, duration in enumerate(seq.durations):
        panels = max(1, int(np.ceil(total_nodes * duration / seq.total_time / points)))
        width = duration / panels
        left = np.arange(panels)[:, None] * width
        seg_index.append(np.full(panels * points, j))
        local.append((left + 0.5 * width * (xg[None, :] + 1)).ravel())
        weights.append(np.tile(0.5 * width * wg, panels))
    return np.concatenate(seg_index), np.concatenate(local), np.concatenate(weights)


MAGNUS_ORIENTATIONS = ("forward", "adjoint")


def magnus_effective(seq: BangSequence, K: int, nodes: Optional[int] = None,
                     max_nodes: int = MAX_MAGNUS_NODES, orientation: str = "forward") -> EffectiveHamiltonian:
    '''
    First-order Magnus (average) Hamiltonian of the FATO truncation error,
    carried by the ideal bang-bang propagator U_id(t).

    The actual drive is f - R_K, so the error Hamiltonian is
    H_err(t) = -(omega_bar/2) R_K(t) sigma_x. With orientation 'forward' the
    integrand is U_id H_err U_id^dagger; in the weak regime this gives the
    closed-form structure proportional to sigma_x - tan(theta) sigma_z.
    'adjoint' integrates U_id^dagger H_err U_id instead. R_K is itself cut at
    harmonic 8K + 64; the power of the dropped harmonics is reported as
    neglected_tail.

            Parameters:
                    seq (BangSequence): Ideal sequence
                    K (int): Order of the FATO drive
                    nodes (int, optional): Total quadrature nodes; defaults to
                        max(256 (K_ref / max(K, 1) + 1), 16 K_ref)
                    max_nodes (int): Quadrature budget
                    orientation (str): 'forward' or 'adjoint'
            Returns:
                    effective (EffectiveHamiltonian)
    '''
    if int(K) != K or K < 0:
        raise PreconditionError(f"K must be a non-negative integer, got {K}")
    if orientation not in MAGNUS_ORIENTATIONS:
        logger.error(f"Unknown Magnus orientation {orientation}")
        raise ValidationError(f"orientation must be one of {MAGNUS_ORIENTATIONS}, got {orientation}")
    K = int(K)
    k_ref = 8 * K + 64
    if nodes is None:
        nodes = int(max(256 * (k_ref / max(K, 1) + 1), 16 * k_ref))
    if nodes > max_nodes:
        logger.error(f"Magnus quadrature needs {nodes} nodes, budget is {max_nodes}")
        raise QuadratureBudgetExceeded(f"{nodes} quadrature nodes exceed the budget of {max_nodes}")

    params = seq.params
    reference = series_of(seq, k_ref)
    remainder = reference.tail_part(K)

    seg_index, local, weights = _gauss_panels(seq, nodes)
    prefixes = [identity(2)]
    for level, duration in seq.bangs:
        prefixes.append(bang_unitary(level, duration, params) @ prefixes[-1])
    prefixes = np.array(prefixes[:-1])

    levels = np.asarray(seq.levels)[seg_index]
    s, c = np.sin(params.theta), np.cos(params.theta)
    singular = levels == 0
    nx = np.where(singular, 0.0, levels * s)
    nz = np.where(singular, 1.0, c)
    rate = np.where(singular, params.omega0, params.omega)
    u_id = exp_su2_batch(nx, 0.0, nz, rate * local / 2) @ prefixes[seg_index]

    times = seq.switch_times[seg_index] + local
    r_k = evaluate(remainder, np.clip(times, 0.0, seq.total_time))
    u_dag = np.conj(np.swapaxes(u_id, -1, -2))
    toggled = u_id @ SIGMA_X @ u_dag if orientation == "forward" else u_dag @ SIGMA_X @ u_id
    integral = np.einsum('n,nij->ij', -0.5 * params.omega_bar * r_k * weights, toggled)
    matrix = integral / seq.total_time
    matrix = 0.5 * (matrix + matrix.conj().T)

    effective = EffectiveHamiltonian(matrix=matrix, norm=float(np.linalg.norm(matrix, 2)),
                                     period=seq.total_time, order=K, reference_order=k_ref,
                                     neglected_tail=reference.tail_error, nodes=int(weights.size),
                                     orientation=orientation)
    logger.debug(f"Magnus K={K}: |H|={effective.norm:.3e}, neglected tail {reference.tail_error:.3e}")
    return effective


def first_order_fidelity(seq: BangSequence, K: int, orientation: str = "forward") -> float:
    """Fidelity of U_id exp(-i H_bar T) against U_id, i.e. |cos(|h| T)| for H_bar = h.sigma."""
    u_id = seq.realized_unitary()
    effective = magnus_effective(seq, K, orientation=orientation)
    return trace_fidelity(u_id, u_id @ effective.error_unitary())


COEFF_VARIANTS = ("main_text", "appendix")
# agrees with propagated infidelities on most weak-regime points
DEFAULT_COEFF_VARIANT = "appendix"


def analytic_fidelity(regime: str, gate: str, theta: float, e_k: float,
                      coeff_variant: str = DEFAULT_COEFF_VARIANT) -> float:
    '''
    Closed-form fidelity prediction from the mean truncation error.

    weak:      cos(tan(theta) E_K c) with c = pi/4 (main_text) or pi/2 (appendix)
    strong X:  cos(2/pi sin(theta) E_K)
    strong Y:  cos(2/pi tan(theta) E_K)

            Parameters:
                    regime (str): 'weak' or 'strong'
                    gate (str): 'X' or 'Y'
                    theta (float): Drive angle
                    e_k (float): Mean truncation error, non-negative
                    coeff_variant (str): Weak-regime constant, 'main_text' or 'appendix'
            Returns:
                    fidelity (float)
    '''
    if e_k < 0:
        raise PreconditionError(f"e_k must be non-negative, got {e_k}")
    if coeff_variant not in COEFF_VARIANTS:
        raise ValidationError(f"coeff_variant must be one of {COEFF_VARIANTS}, got {coeff_variant}")
    gate = str(gate).upper()
    if regime == "weak":
        constant = np.pi / 4 if coeff_variant == "main_text" else np.pi / 2
        argument = np.tan(theta) * e_k * constant
    elif regime == "strong":
        if gate == "X":
            argument = 2 / np.pi * np.sin(theta) * e_k
        elif gate == "Y":
            argument = 2 / np.pi * np.tan(theta) * e_k
        else:
            raise ValidationError(f"gate must be X or Y, got {gate}")
    else:
        raise ValidationError(f"regime must be 'weak' or 'strong', got {regime}")
    return float(np.cos(argument)) if argument < np.pi / 2 else 0.0


def variant_agreement(infidelity_sim: Sequence[float], theta: Sequence[float], e_k: Sequence[float],
                      band=(1e-5, 1e-2), factor: float = 2.0) -> Dict[str, float]:
    """
    Fraction of weak-regime points, with simulated infidelity inside `band`,
    whose analytic infidelity is within `factor` of the simulated one, per variant.
    """
    inf_sim = np.asarray(infidelity_sim, dtype=float)
    theta = np.asarray(theta, dtype=float)
    e_k = np.asarray(e_k, dtype=float)
    mask = (inf_sim >= band[0]) & (inf_sim <= band[1])
    scores = {}
    for variant in COEFF_VARIANTS:
        if not np.any(mask):
            scores[variant] = float('nan')
            continue
        predicted = np.array([1.0 - analytic_fidelity("weak", "X", th, e, variant)
                              for th, e in zip(theta[mask], e_k[mask])])
        ratio = predicted / inf_sim[mask]
        scores[variant] = float(np.mean((ratio <= factor) & (ratio >= 1.0 / factor)))
    return scores


def best_analytic_variant(infidelity_sim, theta, e_k, **kwargs) -> str:
    """The weak-regime variant with the highest agreement score; main_text on ties."""
    scores = variant_agreement(infidelity_sim, theta, e_k, **kwargs)
    best = max(COEFF_VARIANTS, key=lambda v: (np.nan_to_num(scores[v], nan=-1.0), v == "main_text"))
    logger.info(f"Analytic variant agreement: {scores}; best {best}")
    return best
