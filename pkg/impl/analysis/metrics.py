"""Sine fitting and the noise-reduction metric."""

from typing import NamedTuple
import numpy as np
from impl.filtering import Signal


MIN_SINE_PERIODS = 10


class MetricError(ValueError):
    pass


class SineFit(NamedTuple):
    amplitude: float
    phase: float
    dc: float
    residual: np.ndarray


class NoiseReduction(NamedTuple):
    factor: float
    sine_amplitude_ratio: float
    peak_to_peak_factor: float


def fit_sine(samples: np.ndarray, freq: float, f_s: float, start_index: int = 0) -> SineFit:
    """Least-squares fit of a sine of known frequency plus offset to `samples[start_index:]`."""
    samples = np.asarray(samples, dtype=float)[start_index:]
    if len(samples) < 3:
        raise MetricError(f'Need at least 3 samples for a sine fit, got {len(samples)}.')
    phase_arg = 2 * np.pi * freq * np.arange(start_index, start_index + len(samples)) / f_s
    basis = np.column_stack([np.sin(phase_arg), np.cos(phase_arg), np.ones(len(samples))])
    (a_sin, a_cos, dc), *_ = np.linalg.lstsq(basis, samples, rcond=None)
    return SineFit(float(np.hypot(a_sin, a_cos)), float(np.arctan2(a_cos, a_sin)), float(dc), samples - basis @ np.array([a_sin, a_cos, dc]))


def noise_reduction_factor(input_signal: Signal, output_signal: Signal, sine_freq: float, n_warmup: int = 0, dc_gain: float = None) -> NoiseReduction:
    """Ratio of the noise RMS at the input to the gain-normalized noise RMS at the output.

    The sine component (and offset) is removed from both signals by least squares before comparing. The output
    residual is divided by `dc_gain` or, if not given, by the fitted output/input sine amplitude ratio.
    """
    if len(input_signal) != len(output_signal) or input_signal.f_s != output_signal.f_s:
        raise ValueError('Input and output must have equal length and sample rate.')
    if len(input_signal) * sine_freq / input_signal.f_s < MIN_SINE_PERIODS:
        raise ValueError(f'Signals must cover at least {MIN_SINE_PERIODS} periods of {sine_freq} Hz.')
    fit_in = fit_sine(input_signal.samples, sine_freq, input_signal.f_s, n_warmup)
    fit_out = fit_sine(output_signal.samples, sine_freq, output_signal.f_s, n_warmup)
    if fit_in.amplitude == 0:
        raise MetricError('Input carries no sine component.')
    amplitude_ratio = fit_out.amplitude / fit_in.amplitude
    gain = abs(dc_gain) if dc_gain is not None else amplitude_ratio
    if gain == 0:
        raise MetricError('Cannot normalize by a zero gain.')
    rms_in = np.sqrt(np.mean(fit_in.residual ** 2))
    rms_out = np.sqrt(np.mean(fit_out.residual ** 2)) / gain
    if rms_in == 0 or rms_out == 0:
        raise MetricError('Degenerate sine fit: residual is identically zero.')
    ptp_factor = np.ptp(fit_in.residual) / (np.ptp(fit_out.residual) / gain)
    sine_ratio = amplitude_ratio / abs(dc_gain) if dc_gain is not None else amplitude_ratio
    return NoiseReduction(float(rms_in / rms_out), float(sine_ratio), float(ptp_factor))
