"""Analytic and measured magnitude responses and the -3 dB cutoff."""

from typing import Sequence
from dataclasses import dataclass
import math
import numpy as np
from tqdm import tqdm
from impl.filtering import FilterState, Signal, run
from .metrics import fit_sine


class SaturationError(ValueError):
    pass


class CutoffNotFoundError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ResponseCurve:
    freqs: np.ndarray
    magnitude: np.ndarray

    def __post_init__(self):
        freqs, magnitude = np.asarray(self.freqs, dtype=float), np.asarray(self.magnitude, dtype=float)
        if freqs.shape != magnitude.shape:
            raise ValueError(f'Got {len(freqs)} frequencies but {len(magnitude)} magnitudes.')
        if len(freqs) and (freqs[0] < 0 or np.any(np.diff(freqs) <= 0)):
            raise ValueError('Frequencies must be non-negative and strictly increasing.')
        object.__setattr__(self, 'freqs', freqs)
        object.__setattr__(self, 'magnitude', magnitude)

    def __len__(self) -> int:
        return len(self.freqs)


def response_at(weights: Sequence[float], f_s: float, freqs: Sequence[float]) -> np.ndarray:
    """|sum_i w_i exp(-j 2 pi f i / f_s)| at every frequency in `freqs`."""
    weights = np.asarray(weights, dtype=float)
    phase = -2j * np.pi * np.outer(np.asarray(freqs, dtype=float), np.arange(len(weights))) / f_s
    return np.abs(np.exp(phase) @ weights)


def frequency_response(weights: Sequence[float], f_s: float, n_points: int) -> ResponseCurve:
    if n_points < 2:
        raise ValueError(f'Need at least 2 grid points, got {n_points}.')
    freqs = np.linspace(0.0, f_s / 2, n_points)
    return ResponseCurve(freqs, response_at(weights, f_s, freqs))


def measured_frequency_response(filter_state: FilterState, freqs: Sequence[float], probe_amp: float, n_periods: int = 20) -> ResponseCurve:
    """Drive the filter with pure sines and fit the output amplitude at each probe frequency.

    Every probe starts from zero history; the first `n_taps` output samples are discarded.
    """
    cfg = filter_state.cfg
    if not probe_amp > 0:
        raise ValueError(f'Probe amplitude must be positive, got {probe_amp}.')
    if probe_amp >= (cfg.code_max + 0.5) * cfg.lsb:
        raise SaturationError(f'Probe amplitude {probe_amp} V clips the ADC (full scale {cfg.adc_fullscale} V).')
    freqs = np.sort(np.asarray(freqs, dtype=float))
    if np.any(freqs <= 0) or np.any(freqs >= cfg.f_s / 2):
        raise ValueError(f'Probe frequencies must lie in (0, {cfg.f_s / 2}) Hz.')
    gains = []
    for freq in tqdm(freqs, desc='analysis: Probing frequencies', disable=len(freqs) < 10):
        n_samples = cfg.n_taps + int(math.ceil(n_periods * cfg.f_s / freq))
        probe = probe_amp * np.sin(2 * np.pi * freq * np.arange(n_samples) / cfg.f_s)
        output = run(filter_state.reset(), Signal(probe, cfg.f_s))
        gains.append(fit_sine(output.samples, freq, cfg.f_s, cfg.n_taps).amplitude / probe_amp)
    return ResponseCurve(freqs, np.array(gains))


def cutoff_frequency(curve: ResponseCurve) -> float:
    """Lowest frequency at which the magnitude falls below DC / sqrt(2), linearly interpolated."""
    if len(curve) == 0 or not curve.magnitude[0] > 0:
        raise ValueError('Cutoff needs a curve with positive DC magnitude.')
    level = curve.magnitude[0] / math.sqrt(2)
    below = np.nonzero(curve.magnitude < level)[0]
    if len(below) == 0:
        raise CutoffNotFoundError(f'Magnitude never drops below {level:.4g} up to {curve.freqs[-1]} Hz.')
    idx = below[0]
    f0, f1 = curve.freqs[idx - 1], curve.freqs[idx]
    m0, m1 = curve.magnitude[idx - 1], curve.magnitude[idx]
    return float(f0 + (level - m0) * (f1 - f0) / (m1 - m0))
