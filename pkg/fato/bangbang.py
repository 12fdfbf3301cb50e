"""
Time-optimal bang-bang synthesis for a driven qubit.

The qubit Hamiltonian is H(t) = (omega0 sigma_z + Omega(t) sigma_x) / 2 with
|Omega| <= omega_bar. A bang holds the normalised control f = Omega/omega_bar
at +1, -1 or 0 (singular) for a fixed duration.
"""

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from fato.config import TOLERANCES, SearchConfig
from fato.exceptions import (ConstructionFailed, NonPositiveInput, NonUnitary, NotFound,
                             ParityMismatch, PreconditionError, StrongRegime, ThetaMismatch,
                             ValidationError, WeakRegime)
from fato.logger import get_logger
from fato.qmat import (exp_su2, exp_su2_batch, identity, pauli, phase_aligned_distance,
                       trace_fidelity, unitarity_defect)

logger = get_logger('bangbang')

LEVELS = (1, 0, -1)
GATES = ("X", "Y")


def normalize_gate(gate: str) -> str:
    key = str(gate).upper()
    if key not in GATES:
        logger.error(f"Unsupported single-qubit gate: {gate}")
        raise ValidationError(f"Unsupported gate '{gate}', expected X or Y")
    return key


def gate_target(gate: str) -> np.ndarray:
    """Target pi rotation for gate X or Y (the Pauli matrix itself, up to phase)."""
    return pauli(normalize_gate(gate).lower())


@dataclass(frozen=True)
class DriveParams:
    """
    Physical frame of a single driven qubit.

    Attributes
    ----------
    omega0 : float
        drift frequency
    omega_bar : float
        drive amplitude bound
    theta : float
        arctan(omega_bar / omega0), in (0, pi/2)
    omega : float
        sqrt(omega0^2 + omega_bar^2), the Rabi frequency during a nonzero bang
    """
    omega0: float
    omega_bar: float
    theta: float
    omega: float

    @property
    def is_weak(self) -> bool:
        return self.theta <= np.pi / 4 + 1e-12

    def scaled(self, eps_omega0: float = 0.0, eps_amp: float = 0.0) -> "DriveParams":
        """Return parameters with fractional errors applied to omega0 and omega_bar."""
        return derive_params(self.omega0 * (1.0 + eps_omega0), self.omega_bar * (1.0 + eps_amp))

    def to_dict(self) -> Dict[str, float]:
        return {"omega0": self.omega0, "omega_bar": self.omega_bar,
                "theta": self.theta, "omega": self.omega}


def derive_params(omega0: float, omega_bar: float) -> DriveParams:
    '''
    Build DriveParams from the drift frequency and the amplitude bound.

            Parameters:
                    omega0 (float): Drift frequency, strictly positive
                    omega_bar (float): Amplitude bound, strictly positive
            Returns:
                    params (DriveParams)
    '''
    if not (np.isfinite(omega0) and np.isfinite(omega_bar)) or omega0 <= 0 or omega_bar <= 0:
        logger.error(f"Non-positive drive parameters: omega0={omega0}, omega_bar={omega_bar}")
        raise NonPositiveInput(f"omega0 and omega_bar must be positive, got {omega0} and {omega_bar}")
    omega0 = float(omega0)
    omega_bar = float(omega_bar)
    return DriveParams(omega0=omega0, omega_bar=omega_bar,
                       theta=float(np.arctan2(omega_bar, omega0)),
                       omega=float(np.hypot(omega0, omega_bar)))


def params_from_theta(theta: float, omega0: float = 1.0) -> DriveParams:
    """DriveParams for a given angle theta in (0, pi/2) and drift omega0."""
    if not 0 < theta < np.pi / 2:
        logger.error(f"theta={theta} outside (0, pi/2)")
        raise ValidationError(f"theta must lie in (0, pi/2), got {theta}")
    return derive_params(omega0, omega0 * np.tan(theta))


def bang_unitary(level: int, duration: float, params: DriveParams) -> np.ndarray:
    """Exact propagator of a single bang."""
    if level == 0:
        return exp_su2(0.0, 0.0, 1.0, params.omega0 * duration / 2)
    s, c = np.sin(params.theta), np.cos(params.theta)
    return exp_su2(level * s, 0.0, c, params.omega * duration / 2)


def _bang_unitaries(levels: np.ndarray, durations: np.ndarray, params: DriveParams) -> np.ndarray:
    """Batched bang propagators; levels and durations broadcast to a common shape."""
    levels, durations = np.broadcast_arrays(np.asarray(levels), np.asarray(durations, dtype=float))
    s, c = np.sin(params.theta), np.cos(params.theta)
    singular = levels == 0
    nx = np.where(singular, 0.0, levels * s)
    nz = np.where(singular, 1.0, c)
    rate = np.where(singular, params.omega0, params.omega)
    return exp_su2_batch(nx, 0.0, nz, rate * durations / 2)


def _sequence_unitaries(levels: Sequence[int], durations: np.ndarray, params: DriveParams) -> np.ndarray:
    """Products for a batch of duration vectors, shape (N, n) -> (N, 2, 2)."""
    steps = _bang_unitaries(np.asarray(levels)[None, :], durations, params)
    u = np.broadcast_to(identity(2), (durations.shape[0], 2, 2)).copy()
    for k in range(steps.shape[1]):
        u = steps[:, k] @ u
    return u


@dataclass
class BangSequence:
    """
    An ordered list of bangs for a given drive.

    Attributes
    ----------
    bangs : tuple
        (level, duration) pairs in time order; level in {+1, 0, -1}
    params : DriveParams
        the drive the sequence was synthesised for
    time_optimal : bool
        whether the sequence claims the time-optimal structure; checked at construction
    target : np.ndarray, optional
        the unitary the sequence realises, up to global phase
    metadata : dict
        construction details (gate, regime, chosen parsings, search residual)

    Methods
    -------
    realized_unitary()
        exact product of the bang propagators
    satisfies_time_optimal_constraints()
        equal interior nonzero durations, each at least pi/omega
    """
    bangs: Tuple[Tuple[int, float], ...]
    params: DriveParams
    time_optimal: bool = False
    target: Optional[np.ndarray] = None
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        self.bangs = tuple((int(level), float(duration)) for level, duration in self.bangs)
        previous = None
        for level, duration in self.bangs:
            if level not in LEVELS:
                logger.error(f"Invalid bang level {level}")
                raise ValidationError(f"Bang level must be +1, 0 or -1, got {level}")
            if not np.isfinite(duration) or duration <= 0:
                logger.error(f"Invalid bang duration {duration}")
                raise ValidationError(f"Bang durations must be positive, got {duration}")
            if level == previous:
                logger.error(f"Consecutive bangs share level {level}")
                raise ValidationError("Consecutive bangs must have different levels")
            previous = level
        if self.time_optimal and not self.satisfies_time_optimal_constraints():
            logger.error("Sequence flagged time-optimal violates the interior bang constraints")
            raise PreconditionError("Interior nonzero bangs must be equal and at least pi/omega long")

    @property
    def levels(self) -> List[int]:
        return [level for level, _ in self.bangs]

    @property
    def durations(self) -> np.ndarray:
        return np.array([duration for _, duration in self.bangs], dtype=float)

    @property
    def total_time(self) -> float:
        return float(np.sum(self.durations)) if self.bangs else 0.0

    @property
    def switch_times(self) -> np.ndarray:
        """Segment boundaries, from 0 to total_time inclusive."""
        return np.concatenate([[0.0], np.cumsum(self.durations)])

    def __len__(self) -> int:
        return len(self.bangs)

    def __str__(self) -> str:
        ret = f"BangSequence(T={self.total_time:.6f}, theta={self.params.theta:.6f})\n"
        for level, duration in self.bangs:
            ret += f"  {level:+d} for {duration:.10f}\n"
        return ret.rstrip()

    def satisfies_time_optimal_constraints(self) -> bool:
        interior = [d for level, d in self.bangs[1:-1] if level != 0]
        if not interior:
            return True
        interior = np.array(interior)
        equal = np.ptp(interior) <= TOLERANCES.equal_durations
        long_enough = np.all(interior >= np.pi / self.params.omega - TOLERANCES.equal_durations)
        return bool(equal and long_enough)

    def realized_unitary(self) -> np.ndarray:
        u = identity(2)
        for level, duration in self.bangs:
            u = bang_unitary(level, duration, self.params) @ u
        return u

    def to_dict(self) -> Dict:
        return {
            "params": self.params.to_dict(),
            "bangs": [{"level": level, "duration": duration} for level, duration in self.bangs],
            "total_time": self.total_time,
            "time_optimal": self.time_optimal,
            "metadata": dict(self.metadata),
        }


def gate_distance(target: np.ndarray, seq: BangSequence) -> float:
    """Phase-aligned max-entry distance between target and the realised product."""
    return phase_aligned_distance(target, seq.realized_unitary())


def weak_pi_sequence(gate: str, n: int, params: DriveParams) -> BangSequence:
    '''
    Weak-driving pi rotation: n alternating bangs of duration pi/omega.

            Parameters:
                    gate (str): 'X' (n odd) or 'Y' (n even)
                    n (int): Number of bangs, at least 2, with theta = pi/(2n)
                    params (DriveParams): Drive with theta = pi/(2n)
            Returns:
                    seq (BangSequence): Time-optimal sequence with T = n pi/omega
    '''
    gate = normalize_gate(gate)
    if int(n) != n or n < 2:
        logger.error(f"weak_pi_sequence needs an integer n >= 2, got {n}")
        raise PreconditionError(f"n must be an integer >= 2, got {n}")
    n = int(n)
    if (gate == "X") != (n % 2 == 1):
        logger.error(f"Gate {gate} is not reachable with n={n} bangs")
        raise ParityMismatch(f"Gate {gate} needs {'odd' if gate == 'X' else 'even'} n, got {n}")
    if abs(params.theta - np.pi / (2 * n)) > TOLERANCES.theta:
        logger.error(f"theta={params.theta} does not equal pi/(2n) for n={n}")
        raise ThetaMismatch(f"theta must equal pi/(2*{n}) = {np.pi / (2 * n)}, got {params.theta}")

    duration = np.pi / params.omega
    bangs = [(1 if k % 2 == 0 else -1, duration) for k in range(n)]
    target = gate_target(gate)
    seq = BangSequence(bangs, params, time_optimal=True, target=target,
                       metadata={"gate": gate, "regime": "weak", "n": n})
    distance = gate_distance(target, seq)
    seq.metadata["gate_distance"] = distance
    logger.info(f"Weak {gate} sequence: n={n}, T={seq.total_time:.8f}, distance={distance:.2e}")
    return seq


def _arccsc(x: float) -> float:
    return float(np.arcsin(1.0 / x))


def _arccot(x: float) -> float:
    return float(np.arctan(1.0 / x))


def strong_x_candidates(params: DriveParams) -> Dict[str, List[Tuple[int, float]]]:
    """Both readings of the middle X bang duration, keyed by parsing name."""
    a = 2 * _arccsc(2 * np.sin(params.theta))
    t_outer = a / params.omega
    return {
        "scaled": [(1, t_outer), (-1, (2 * np.pi - a) / params.omega), (1, t_outer)],
        "offset": [(1, t_outer), (-1, 2 * np.pi - a / params.omega), (1, t_outer)],
    }


def strong_y_candidates(params: DriveParams) -> Dict[str, List[Tuple[int, float]]]:
    """Singular-middle Y sequences with same and opposite outer signs."""
    theta = params.theta
    t_outer = 2 * _arccot(np.sqrt(-np.cos(2 * theta))) / params.omega
    t_mid = 2 * np.arctan(np.sqrt(np.tan(theta) ** 2 - 1)) / params.omega0
    return {
        "+0+": [(1, t_outer), (0, t_mid), (1, t_outer)],
        "+0-": [(1, t_outer), (0, t_mid), (-1, t_outer)],
    }


def strong_pi_sequence(gate: str, params: DriveParams) -> BangSequence:
    '''
    Ultrastrong-driving pi rotation with three bangs.

    Both candidate constructions of the gate are built and the first one whose
    product matches the target within 1e-9 is kept. The choice is recorded in
    metadata['t2x_parsing'] for X and metadata['y_pattern'] for Y.

            Parameters:
                    gate (str): 'X' or 'Y'
                    params (DriveParams): Drive with theta > pi/4
            Returns:
                    seq (BangSequence)
    '''
    gate = normalize_gate(gate)
    if params.is_weak:
        logger.error(f"strong_pi_sequence called in the weak regime (theta={params.theta})")
        raise WeakRegime(f"theta={params.theta} <= pi/4; use weak_pi_sequence")

    target = gate_target(gate)
    if gate == "X":
        candidates, key = strong_x_candidates(params), "t2x_parsing"
    else:
        candidates, key = strong_y_candidates(params), "y_pattern"

    distances = {}
    for name, bangs in candidates.items():
        seq = BangSequence(bangs, params, time_optimal=True, target=target,
                           metadata={"gate": gate, "regime": "strong", key: name})
        distances[name] = gate_distance(target, seq)
        logger.debug(f"Strong {gate} candidate {name}: distance {distances[name]:.3e}")
        if distances[name] < TOLERANCES.gate:
            seq.metadata["gate_distance"] = distances[name]
            logger.info(f"Strong {gate} sequence via {name}: T={seq.total_time:.8f}")
            return seq

    logger.error(f"No strong {gate} candidate reached the target: {distances}")
    raise ConstructionFailed(f"No strong-regime {gate} construction reached the target: {distances}")


def synthesize_pi(gate: str, params: DriveParams, n_max: int = 32, tol: float = 1e-10) -> BangSequence:
    """
    Pick the construction for a pi rotation: the analytic weak solution when
    theta = pi/(2n) with the right parity, the strong three-bang solution when
    theta > pi/4, and the numerical search otherwise.
    """
    gate = normalize_gate(gate)
    if not params.is_weak:
        return strong_pi_sequence(gate, params)
    n = int(round(np.pi / (2 * params.theta)))
    parity_ok = (gate == "X") == (n % 2 == 1)
    if n >= 2 and parity_ok and abs(params.theta - np.pi / (2 * n)) <= TOLERANCES.theta:
        return weak_pi_sequence(gate, n, params)
    logger.info(f"theta={params.theta} has no analytic {gate} solution; searching")
    seq = search_to_sequence(gate_target(gate), params, n_max=n_max, tol=tol)
    seq.metadata.setdefault("gate", gate)
    return seq


def time_optimal_time(gate: str, params: DriveParams) -> float:
    return synthesize_pi(gate, params).total_time


def _patterns_for(n: int) -> List[Tuple[str, Tuple[int, ...]]]:
    """Level patterns with n bangs, in a fixed enumeration order."""
    if n == 1:
        return [("+", (1,)), ("-", (-1,)), ("0", (0,))]
    patterns = []
    for sign in (1, -1):
        alternating = tuple(sign * (-1) ** k for k in range(n))
        label = "+" if sign > 0 else "-"
        patterns.append((f"alt{label}", alternating))
        if n >= 3:
            mid = n // 2
            zeroed = alternating[:mid] + (0,) + alternating[mid + 1:]
            patterns.append((f"sing{label}", zeroed))
            flipped = alternating[:mid] + (0,) + tuple(-v for v in alternating[mid + 1:])
            patterns.append((f"singflip{label}", flipped))
    return patterns


class _PatternModel:
    """Maps (t_i, t_m, t_f) search coordinates onto bang durations for one pattern."""

    def __init__(self, levels: Tuple[int, ...], params: DriveParams):
        self.levels = levels
        self.params = params
        self.n = len(levels)
        self.dim = min(self.n, 3)
        interior = levels[1:-1]
        self.offset = np.pi / params.omega if any(v != 0 for v in interior) else 0.0

    def durations(self, x: np.ndarray) -> np.ndarray:
        x = np.abs(np.atleast_2d(x))
        if self.n == 1:
            return x[:, :1]
        if self.n == 2:
            return x[:, :2]
        middle = np.repeat(self.offset + x[:, 1:2], self.n - 2, axis=1)
        return np.concatenate([x[:, :1], middle, x[:, 2:3]], axis=1)

    def coords(self, x: np.ndarray) -> Tuple[float, ...]:
        """(t_i, t_m, t_f) in physical time for tie-breaking."""
        x = np.abs(np.asarray(x, dtype=float))
        if self.n == 1:
            return (float(x[0]), 0.0, 0.0)
        if self.n == 2:
            return (float(x[0]), 0.0, float(x[1]))
        return (float(x[0]), float(self.offset + x[1]), float(x[2]))

    def infidelity(self, x: np.ndarray, target: np.ndarray) -> np.ndarray:
        u = _sequence_unitaries(self.levels, self.durations(x), self.params)
        overlap = np.abs(np.einsum('ij,nij->n', target.conj(), u)) / 2
        return 1.0 - overlap

    def residual(self, x: np.ndarray, target: np.ndarray) -> np.ndarray:
        """Real and imaginary parts of the phase-aligned difference U - target."""
        u = _sequence_unitaries(self.levels, self.durations(x), self.params)[0]
        overlap = np.trace(target.conj().T @ u)
        phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
        diff = (u / phase - target).ravel()
        return np.concatenate([diff.real, diff.imag])

    def polish(self, x: np.ndarray, target: np.ndarray, config: SearchConfig) -> np.ndarray:
        result = optimize.least_squares(lambda y: self.residual(y, target), np.abs(x), method='lm',
                                        ftol=config.polish_tol, xtol=config.polish_tol,
                                        gtol=config.polish_tol, max_nfev=config.polish_max_nfev)
        return result.x

    def grid(self, points: int) -> np.ndarray:
        period = 2 * np.pi / self.params.omega
        edge = period * np.arange(1, points + 1) / points
        offsets = period * np.arange(points) / points
        axes = [edge] if self.dim == 1 else [edge, edge] if self.dim == 2 else [edge, offsets, edge]
        return np.array(list(itertools.product(*axes)), dtype=float)


def _normalize_bangs(levels: Sequence[int], durations: Sequence[float], min_duration: float = 1e-12):
    """Drop vanishing bangs and merge equal neighbours."""
    merged: List[List] = []
    for level, duration in zip(levels, durations):
        if duration <= min_duration:
            continue
        if merged and merged[-1][0] == level:
            merged[-1][1] += duration
        else:
            merged.append([int(level), float(duration)])
    return [tuple(b) for b in merged]


def search_to_sequence(target: np.ndarray, params: DriveParams, n_max: int = 8, tol: float = 1e-10,
                       config: SearchConfig = SearchConfig()) -> BangSequence:
    '''
    Numerical search for the shortest bang sequence realising an arbitrary SU(2) target.

    Every level pattern with up to n_cap bangs is screened on a grid of start
    points, the best starts are refined with Nelder-Mead and then polished by
    least squares on the phase-aligned matrix difference. Only sequences with
    1 - F < tol and a phase-aligned gate distance below 1e-9 count, and the
    shortest of them is returned. Ties in total time go to fewer bangs, then to
    the lexicographically smaller (t_i, t_m, t_f).

            Parameters:
                    target (np.ndarray): 2x2 unitary
                    params (DriveParams): Drive parameters
                    n_max (int): Largest bang count tried, capped at max(4, floor(pi/(2 theta)) + 1)
                    tol (float): Infidelity threshold
                    config (SearchConfig): Grid and optimiser settings
            Returns:
                    seq (BangSequence)
    '''
    target = np.asarray(target, dtype=complex)
    if target.shape != (2, 2) or unitarity_defect(target) > TOLERANCES.unitary:
        logger.error("search_to_sequence target must be a 2x2 unitary")
        raise NonUnitary("Target must be a 2x2 unitary")
    if int(n_max) != n_max or n_max < 1:
        raise PreconditionError(f"n_max must be a positive integer, got {n_max}")
    if not tol > 0:
        raise PreconditionError(f"tol must be positive, got {tol}")

    if 1.0 - trace_fidelity(target, identity(2)) < tol:
        logger.info("Target is the identity; returning the empty sequence")
        return BangSequence((), params, time_optimal=True, target=target,
                            metadata={"search": True, "residual": 0.0, "pattern": "empty"})

    n_cap = min(int(n_max), max(4, int(np.floor(np.pi / (2 * params.theta))) + 1))
    logger.info(f"Searching bang sequences up to n={n_cap} (theta={params.theta:.6f}, tol={tol})")

    solutions = []
    best_residual, best_bangs = np.inf, None
    for n in range(1, n_cap + 1):
        for name, levels in _patterns_for(n):
            model = _PatternModel(levels, params)
            starts = model.grid(config.grid)
            residuals = model.infidelity(starts, target)
            order = np.argsort(residuals, kind='stable')[:config.refine]
            for idx in order:
                result = optimize.minimize(
                    lambda x: float(model.infidelity(x, target)[0]), starts[idx],
                    method='Nelder-Mead',
                    options={"fatol": config.fatol, "xatol": config.xatol,
                             "maxiter": config.maxiter, "maxfev": 2 * config.maxiter})
                x = result.x
                residual = float(model.infidelity(x, target)[0])
                if residual < max(tol, config.polish_screen):
                    x = model.polish(x, target, config)
                    residual = float(model.infidelity(x, target)[0])
                durations = model.durations(x)[0]
                if residual < best_residual:
                    best_residual, best_bangs = residual, list(zip(levels, durations))
                if residual >= tol:
                    continue
                bangs = _normalize_bangs(levels, durations)
                distance = phase_aligned_distance(target, BangSequence(bangs, params).realized_unitary())
                if distance < TOLERANCES.gate:
                    solutions.append((float(np.sum(durations)), n, model.coords(x),
                                      name, levels, durations, residual, distance))
            logger.debug(f"Pattern {name} (n={n}): {len(solutions)} solutions so far")

    if not solutions:
        logger.error(f"No bang sequence reached tol={tol}; best residual {best_residual:.3e}")
        best = None
        if best_bangs is not None:
            bangs = _normalize_bangs([b[0] for b in best_bangs], [b[1] for b in best_bangs])
            best = BangSequence(bangs, params, target=target) if bangs else None
        raise NotFound(f"No sequence with up to {n_cap} bangs reached infidelity {tol} exactly",
                       best_residual=best_residual, best_sequence=best)

    t_min = min(s[0] for s in solutions)
    tied = [s for s in solutions if s[0] <= t_min + config.tie_tol * max(1.0, t_min)]
    total, n, coords, name, levels, durations, residual, distance = min(tied, key=lambda s: (s[1], s[2]))

    bangs = _normalize_bangs(levels, durations)
    seq = BangSequence(bangs, params, target=target,
                       metadata={"search": True, "pattern": name, "n_pattern": n, "residual": residual,
                                 "gate_distance": distance})
    seq.time_optimal = seq.satisfies_time_optimal_constraints()
    logger.info(f"Search found pattern {name} with T={seq.total_time:.10f}, residual={residual:.2e}")
    return seq


def sine_integral(x: float) -> float:
    """Si(x) by adaptive quadrature of sin(u)/u."""
    value, abserr = integrate.quad(lambda u: np.sinc(u / np.pi), 0.0, x, epsabs=1e-13, epsrel=1e-13, limit=200)
    logger.debug(f"Si({x}) = {value} (quadrature error estimate {abserr:.1e})")
    return float(value)


def gibbs_factor() -> float:
    """Peak overshoot of a truncated square wave, 2 Si(pi)/pi."""
    return 2 * sine_integral(np.pi) / np.pi


def rwa_reference(params: DriveParams) -> Tuple[float, float]:
    '''
    On-resonance comparison timing.

            Parameters:
                    params (DriveParams): Drive with theta <= pi/4
            Returns:
                    t_rwa (float): 2 pi / omega_bar
                    ratio (float): Si(pi) sin(theta) / (2 theta), the time-optimal to RWA time ratio
    '''
    if not params.is_weak:
        logger.error(f"RWA reference requested at theta={params.theta} > pi/4")
        raise StrongRegime(f"RWA comparison only defined for theta <= pi/4, got {params.theta}")
    t_rwa = 2 * np.pi / params.omega_bar
    ratio = sine_integral(np.pi) * np.sin(params.theta) / (2 * params.theta)
    return t_rwa, float(ratio)
