from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from fato.bangbang import BangSequence, DriveParams
from fato.config import DEFAULT_OMEGA0
from fato.dynamics import DEFAULT_COEFF_VARIANT, analytic_fidelity
from fato.exceptions import PreconditionError, ValidationError
from fato.fourier import FourierWaveform, order_for_bandwidth
from fato.logger import get_logger
from fato.twoqubit import TwoQubitDrive

logger = get_logger('sweep_module')

SWEEP_GATES = ("X", "Y", "SWAP")
CSV_COLUMNS = ["x", "fidelity_sim", "fidelity_analytic", "fidelity_rwa", "total_time", "order_K", "e_k"]
NORMALIZATIONS = ("omega0", "omega_bar")


@dataclass
class SweepSpec:
    """
    Description of a one-dimensional sweep.

    Attributes
    ----------
    kind : str
        registered sweep kind, see fato.sweeps.SWEEP_KINDS
    gate : str
        'X', 'Y' or 'SWAP'
    grid : list
        sweep values, non-empty and strictly increasing
    base : DriveParams or TwoQubitDrive, optional
        nominal configuration the grid perturbs
    fixed : dict
        held-constant parameters, e.g. {'order': 57} or {'bandwidth': 2.0}
    """
    kind: str
    gate: str
    grid: List[float]
    base: Optional[Union[DriveParams, TwoQubitDrive]] = None
    fixed: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.gate = str(self.gate).upper()
        if self.gate not in SWEEP_GATES:
            logger.error(f"Unknown sweep gate {self.gate}")
            raise ValidationError(f"gate must be one of {SWEEP_GATES}, got {self.gate}")
        self.grid = [float(x) for x in self.grid]
        if len(self.grid) == 0:
            logger.error("Sweep grid is empty")
            raise PreconditionError("Sweep grid must not be empty")
        if not all(np.isfinite(self.grid)):
            raise PreconditionError("Sweep grid values must be finite")
        if np.any(np.diff(self.grid) <= 0):
            logger.error(f"Sweep grid is not strictly increasing: {self.grid}")
            raise PreconditionError("Sweep grid must be strictly increasing")


@dataclass
class SweepRecord:
    """
    One row of sweep output. Inapplicable columns hold NaN; `error` names the
    exception when the point failed and is kept out of the CSV schema.
    """
    x: float
    fidelity_sim: float = float('nan')
    fidelity_analytic: float = float('nan')
    fidelity_rwa: float = float('nan')
    total_time: float = float('nan')
    order_K: int = 0
    e_k: float = float('nan')
    error: Optional[str] = None

    @classmethod
    def failed(cls, x: float, error: str) -> "SweepRecord":
        return cls(x=float(x), error=error)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class SweepModule:
    """
    The parent class of every sweep kind.

    ...

    Attributes
    ----------
    kind : str
        A unique string identifying the sweep kind

    Methods
    -------
    execute(spec: SweepSpec, x: float) -> SweepRecord
        Evaluates one grid point. To be overwritten by child classes.
    default_grid(gate: str) -> list
        Grid used when the caller gives none. None unless a child class defines one.
    """
    kind = None
    gates = ("X", "Y")

    def check(self, spec: SweepSpec):
        if spec.kind != self.kind:
            raise ValidationError(f"{type(self).__name__} cannot run a '{spec.kind}' sweep")
        if spec.gate not in self.gates:
            logger.error(f"Sweep kind {self.kind} does not support gate {spec.gate}")
            raise ValidationError(f"Sweep kind {self.kind} supports gates {self.gates}, got {spec.gate}")

    def default_grid(self, gate: str) -> Optional[List[float]]:
        return None

    def execute(self, spec: SweepSpec, x: float) -> SweepRecord:
        """
        Execute one grid point. This method should be overridden by subclasses.
        """
        raise NotImplementedError("Subclasses must implement the execute method")


def base_params(spec: SweepSpec) -> DriveParams:
    """The nominal single-qubit parameters of a sweep."""
    if isinstance(spec.base, DriveParams):
        return spec.base
    logger.error(f"Sweep kind {spec.kind} needs DriveParams as base, got {type(spec.base).__name__}")
    raise PreconditionError(f"Sweep kind {spec.kind} requires DriveParams as its base")


def base_omega0(spec: SweepSpec) -> float:
    if isinstance(spec.base, DriveParams):
        return spec.base.omega0
    return float(spec.fixed.get("omega0", DEFAULT_OMEGA0))


def order_from_fixed(fixed: Dict[str, Any], period: float) -> int:
    '''
    The Fourier order held fixed by a sweep.

            Parameters:
                    fixed (dict): Either 'order' (K) or 'bandwidth' (absolute delta omega)
                    period (float): Gate time T
            Returns:
                    K (int)
    '''
    if "order" in fixed:
        order = fixed["order"]
        if int(order) != order or order < 0:
            raise PreconditionError(f"order must be a non-negative integer, got {order}")
        return int(order)
    if "bandwidth" in fixed:
        return order_for_bandwidth(float(fixed["bandwidth"]), period)
    logger.error(f"Neither 'order' nor 'bandwidth' in fixed parameters {fixed}")
    raise PreconditionError("Sweep needs a fixed 'order' or 'bandwidth'")


def analytic_for(gate: str, params: DriveParams, waveform: FourierWaveform, fixed: Dict[str, Any]) -> float:
    """Closed-form fidelity prediction for a single-qubit point."""
    regime = "weak" if params.is_weak else "strong"
    variant = fixed.get("coeff_variant", DEFAULT_COEFF_VARIANT)
    return analytic_fidelity(regime, gate, params.theta, waveform.tail_error, coeff_variant=variant)


def sequence_record(x: float, seq: BangSequence, waveform: FourierWaveform, fidelity_sim: float,
                    fidelity_analytic: float, fidelity_rwa: float = float('nan')) -> SweepRecord:
    return SweepRecord(x=float(x), fidelity_sim=float(fidelity_sim), fidelity_analytic=float(fidelity_analytic),
                       fidelity_rwa=float(fidelity_rwa), total_time=float(seq.total_time),
                       order_K=int(waveform.order), e_k=float(waveform.tail_error))
