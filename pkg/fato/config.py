"""Numeric defaults shared across fato."""

from dataclasses import dataclass

DEFAULT_OMEGA0 = 1.0
SCHEMA_VERSION = 1

INTEGRATION_SCHEMES = ("midpoint", "magnus4")


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-10
    axis: float = 1e-12
    hermitian: float = 1e-10
    theta: float = 1e-9
    gate: float = 1e-9
    equal_durations: float = 1e-10


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Step control for waveform propagation.

    step_hint caps the step size; samples_per_cycle sets the minimum number of
    steps per period of the fastest retained harmonic. Each run is repeated at
    half the step and refined up to max_refinements times until the two final
    unitaries agree to richardson_tol. chunk bounds how many step unitaries are
    materialised at once.
    """
    step_hint: float = 2.5e-4
    samples_per_cycle: int = 64
    richardson_tol: float = 1e-8
    max_refinements: int = 3
    scheme: str = "midpoint"
    chunk: int = 8192


@dataclass(frozen=True)
class SearchConfig:
    """
    Multi-start settings for search_to_sequence.

    Nelder-Mead results with infidelity below polish_screen are polished by a
    least-squares solve on the phase-aligned matrix residual to polish_tol.
    """
    grid: int = 8
    refine: int = 4
    fatol: float = 1e-14
    xatol: float = 1e-11
    maxiter: int = 4000
    tie_tol: float = 1e-9
    polish_screen: float = 1e-6
    polish_tol: float = 1e-15
    polish_max_nfev: int = 400


TOLERANCES = Tolerances()
