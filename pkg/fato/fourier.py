"""
Fourier series of bang-bang switching functions.

For a sequence of total time T the switching function is expanded as

    f(t) = c0/2 + sum_k [c_k cos(2 pi k t/T) + s_k sin(2 pi k t/T)]

with coefficients computed segment by segment in closed form. Truncating at
order K keeps the harmonics with 2 pi K / T <= bandwidth. The power of the
dropped harmonics follows from Parseval, so no infinite sums are taken.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import pandas as pd

from fato.bangbang import BangSequence
from fato.exceptions import EmptySequence, NonPositiveInput, OutOfDomain, PreconditionError
from fato.logger import get_logger

logger = get_logger('fourier')

# floor(x) is taken on x + BANDWIDTH_SLACK * max(1, x) so exact multiples of 2 pi/T count
BANDWIDTH_SLACK = 1e-9
EVAL_CHUNK = 4096


@dataclass(frozen=True)
class FourierWaveform:
    """
    Truncated Fourier series of a switching function.

    Attributes
    ----------
    period : float
        T, the total time of the source sequence
    c0 : float
        DC coefficient (the series starts with c0/2)
    cos_coeffs, sin_coeffs : np.ndarray
        c_k and s_k for k = 1..K
    order : int
        K
    bandwidth : float
        delta omega, with 2 pi K / T <= bandwidth < 2 pi (K+1) / T
    tail_error : float
        E_K = 1/2 sum_{k>K} (c_k^2 + s_k^2)
    source_power : float
        (2/T) integral of f^2 over one period
    """
    period: float
    c0: float
    cos_coeffs: np.ndarray = field(repr=False)
    sin_coeffs: np.ndarray = field(repr=False)
    order: int
    bandwidth: float
    tail_error: float
    source_power: float = 0.0

    @property
    def tail_integral(self) -> float:
        """(2/T) integral of R_K^2, which is twice tail_error."""
        return 2.0 * self.tail_error

    @property
    def harmonics(self) -> np.ndarray:
        return np.arange(1, self.order + 1)

    def eval(self, t, clamp: bool = False):
        return evaluate(self, t, clamp=clamp)

    def truncated(self, order: int) -> "FourierWaveform":
        """The same series cut at a lower order."""
        if order > self.order:
            raise PreconditionError(f"Cannot raise order from {self.order} to {order}")
        partial = _partial_power(self.cos_coeffs[:order], self.sin_coeffs[:order])
        tail = 0.5 * (self.source_power - self.c0 ** 2 / 2 - partial)
        return replace(self, cos_coeffs=self.cos_coeffs[:order], sin_coeffs=self.sin_coeffs[:order],
                       order=order, bandwidth=2 * np.pi * order / self.period, tail_error=max(0.0, tail))

    def tail_part(self, order: int) -> "FourierWaveform":
        """Harmonics above `order` only, i.e. the remainder R_order cut at self.order."""
        cos_coeffs = self.cos_coeffs.copy()
        sin_coeffs = self.sin_coeffs.copy()
        cos_coeffs[:order] = 0.0
        sin_coeffs[:order] = 0.0
        return replace(self, c0=0.0, cos_coeffs=cos_coeffs, sin_coeffs=sin_coeffs)

    def nonzero_count(self, tol: float = 1e-12) -> int:
        """Number of harmonics (DC included) with a non-vanishing amplitude."""
        amplitudes = np.hypot(self.cos_coeffs, self.sin_coeffs)
        return int(np.count_nonzero(amplitudes > tol) + (abs(self.c0) > tol))


def _partial_power(cos_coeffs: np.ndarray, sin_coeffs: np.ndarray) -> float:
    return float(np.sum(cos_coeffs ** 2) + np.sum(sin_coeffs ** 2))


def _check_profile(levels, durations):
    levels = np.asarray(levels, dtype=float)
    durations = np.asarray(durations, dtype=float)
    if levels.size == 0 or levels.shape != durations.shape or np.sum(durations) <= 0:
        logger.error("Fourier coefficients requested for an empty profile")
        raise EmptySequence("Sequence has no bangs")
    return levels, durations


def signal_power(seq: BangSequence) -> float:
    """(2/T) times the integral of f^2, exact for piecewise-constant f."""
    levels, durations = _check_profile(seq.levels, seq.durations)
    return float(2.0 / np.sum(durations) * np.sum(levels ** 2 * durations))


def profile_coefficients(levels, durations, order: int):
    '''
    Closed-form Fourier coefficients of a piecewise-constant profile.

    Each segment [a, b) at level L adds L/(pi k) [sin(2 pi k b/T) - sin(2 pi k a/T)]
    to c_k and L/(pi k) [cos(2 pi k a/T) - cos(2 pi k b/T)] to s_k.

            Parameters:
                    levels (array): Segment values
                    durations (array): Segment lengths, summing to the period
                    order (int): Highest harmonic K
            Returns:
                    c0 (float), cos_coeffs (np.ndarray), sin_coeffs (np.ndarray)
    '''
    levels, durations = _check_profile(levels, durations)
    if int(order) != order or order < 0:
        logger.error(f"Invalid Fourier order {order}")
        raise PreconditionError(f"order must be a non-negative integer, got {order}")
    edges = np.concatenate([[0.0], np.cumsum(durations)])
    period = edges[-1]
    starts, ends = edges[:-1], edges[1:]
    c0 = float(2.0 / period * np.sum(levels * durations))

    k = np.arange(1, int(order) + 1, dtype=float)[:, None]
    phase_a = 2 * np.pi * k * starts[None, :] / period
    phase_b = 2 * np.pi * k * ends[None, :] / period
    weight = levels[None, :] / (np.pi * k)
    cos_coeffs = np.sum(weight * (np.sin(phase_b) - np.sin(phase_a)), axis=1)
    sin_coeffs = np.sum(weight * (np.cos(phase_a) - np.cos(phase_b)), axis=1)
    return c0, cos_coeffs, sin_coeffs


def coefficients(seq: BangSequence, order: int):
    """Fourier coefficients of the switching function of a bang sequence."""
    return profile_coefficients(seq.levels, seq.durations, order)


def series_of_profile(levels, durations, order: int, bandwidth: Optional[float] = None) -> FourierWaveform:
    '''
    Truncated Fourier series of a piecewise-constant profile.

            Parameters:
                    levels (array): Segment values
                    durations (array): Segment lengths; their sum is the period
                    order (int): K >= 0
                    bandwidth (float, optional): Bandwidth the order was derived from.
                        Defaults to 2 pi K / T.
            Returns:
                    waveform (FourierWaveform)
    '''
    c0, cos_coeffs, sin_coeffs = profile_coefficients(levels, durations, order)
    levels = np.asarray(levels, dtype=float)
    durations = np.asarray(durations, dtype=float)
    period = float(np.sum(durations))
    if bandwidth is None:
        bandwidth = 2 * np.pi * order / period
    elif order_for_bandwidth(bandwidth, period) != order:
        logger.error(f"Bandwidth {bandwidth} does not admit order {order} for T={period}")
        raise PreconditionError(f"Bandwidth {bandwidth} corresponds to order "
                                f"{order_for_bandwidth(bandwidth, period)}, not {order}")

    power = float(2.0 / period * np.sum(levels ** 2 * durations))
    tail = 0.5 * (power - c0 ** 2 / 2 - _partial_power(cos_coeffs, sin_coeffs))
    waveform = FourierWaveform(period=period, c0=c0, cos_coeffs=cos_coeffs, sin_coeffs=sin_coeffs,
                               order=int(order), bandwidth=float(bandwidth),
                               tail_error=max(0.0, float(tail)), source_power=power)
    logger.debug(f"Series of order {order} over T={period:.6f}: E_K={waveform.tail_error:.3e}")
    return waveform


def series_of(seq: BangSequence, order: int, bandwidth: Optional[float] = None) -> FourierWaveform:
    '''
    Truncated Fourier series of a bang sequence's switching function.

            Parameters:
                    seq (BangSequence): Source sequence, T > 0
                    order (int): K >= 0
                    bandwidth (float, optional): Defaults to 2 pi K / T
            Returns:
                    waveform (FourierWaveform)
    '''
    if len(seq) == 0:
        logger.error("Fourier series requested for an empty sequence")
        raise EmptySequence("Sequence has no bangs")
    return series_of_profile(seq.levels, seq.durations, order, bandwidth=bandwidth)


def series_for_bandwidth(seq: BangSequence, delta_omega: float) -> FourierWaveform:
    """Series truncated by the bandwidth rule 2 pi K / T <= delta_omega."""
    order = order_for_bandwidth(delta_omega, seq.total_time)
    return series_of(seq, order, bandwidth=delta_omega)


def order_for_bandwidth(delta_omega: float, period: float) -> int:
    '''
    Largest K with 2 pi K / period <= delta_omega.

            Parameters:
                    delta_omega (float): Bandwidth, positive
                    period (float): Waveform period, positive
            Returns:
                    order (int)
    '''
    if not (delta_omega > 0 and period > 0):
        logger.error(f"Non-positive bandwidth rule input: delta_omega={delta_omega}, period={period}")
        raise NonPositiveInput(f"delta_omega and period must be positive, got {delta_omega}, {period}")
    x = delta_omega * period / (2 * np.pi)
    return int(np.floor(x + BANDWIDTH_SLACK * max(1.0, x)))


def evaluate(waveform: FourierWaveform, t, clamp: bool = False, check_domain: bool = True):
    '''
    Value of the truncated series at time(s) t.

            Parameters:
                    waveform (FourierWaveform): The series
                    t (float or np.ndarray): Times in [0, period]
                    clamp (bool): Hard-limit the result to [-1, 1]
                    check_domain (bool): Raise OutOfDomain for times outside [0, period]
            Returns:
                    value (float or np.ndarray): Same shape as t
    '''
    t_arr = np.asarray(t, dtype=float)
    if check_domain:
        slack = 1e-12 * waveform.period
        if np.any(t_arr < -slack) or np.any(t_arr > waveform.period + slack):
            logger.error(f"Waveform evaluated outside [0, {waveform.period}]")
            raise OutOfDomain(f"t must lie in [0, {waveform.period}]")

    flat = t_arr.reshape(-1)
    values = np.full(flat.shape, waveform.c0 / 2)
    if waveform.order > 0:
        amplitudes = waveform.cos_coeffs - 1j * waveform.sin_coeffs
        k = waveform.harmonics
        for start in range(0, flat.size, EVAL_CHUNK):
            chunk = flat[start:start + EVAL_CHUNK]
            phases = np.exp(2j * np.pi * np.outer(chunk, k) / waveform.period)
            values[start:start + EVAL_CHUNK] += (phases @ amplitudes).real
    if clamp:
        values = np.clip(values, -1.0, 1.0)
    values = values.reshape(t_arr.shape)
    return float(values) if values.ndim == 0 else values


def evaluate_grid(waveform: FourierWaveform, n: int, fraction: float = 0.5, clamp: bool = False) -> np.ndarray:
    """
    Values at the n uniform grid points t_j = (j + fraction) T / n, j = 0..n-1.

    On this grid the partial sum is a discrete Fourier transform, so it is
    evaluated with an FFT of length n when n exceeds K.
    """
    n = int(n)
    if waveform.order >= n:
        times = (np.arange(n) + fraction) * waveform.period / n
        return evaluate(waveform, times, clamp=clamp, check_domain=False)
    spectrum = np.zeros(n, dtype=complex)
    k = waveform.harmonics
    spectrum[1:waveform.order + 1] = ((waveform.cos_coeffs - 1j * waveform.sin_coeffs)
                                      * np.exp(2j * np.pi * k * fraction / n))
    values = waveform.c0 / 2 + n * np.fft.ifft(spectrum).real
    if clamp:
        values = np.clip(values, -1.0, 1.0)
    return values


def tail_error(seq: BangSequence, K: int) -> float:
    """E_K = 1/2 sum_{k>K}(c_k^2 + s_k^2), from the Parseval identity."""
    return series_of(seq, K).tail_error


def tail_integral(seq: BangSequence, K: int) -> float:
    """(2/T) integral of R_K^2, equal to 2 E_K."""
    return series_of(seq, K).tail_integral


def sample_times(waveform: FourierWaveform, samples: int) -> np.ndarray:
    if int(samples) != samples or samples < 1:
        logger.error(f"Invalid sample count {samples}")
        raise PreconditionError(f"samples must be a positive integer, got {samples}")
    return np.linspace(0.0, waveform.period, int(samples))


def sample(waveform: FourierWaveform, samples: int, clamp: bool = False) -> np.ndarray:
    return evaluate(waveform, sample_times(waveform, samples), clamp=clamp)


def gibbs_maximum(waveform: FourierWaveform, samples: int = 8192) -> float:
    """Largest |f| over a uniform sampling, the overshoot above the bound when > 1."""
    return float(np.max(np.abs(sample(waveform, samples))))


def waveform_frame(waveform: FourierWaveform, samples: int, clamp: bool = False) -> pd.DataFrame:
    """Sampled waveform as a two-column t,f table."""
    t = sample_times(waveform, samples)
    return pd.DataFrame({"t": t, "f": evaluate(waveform, t, clamp=clamp)})
