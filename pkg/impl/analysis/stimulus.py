"""Noisy-sine test stimulus."""

from dataclasses import dataclass
import numpy as np
from scipy import signal as sps
from impl.filtering import Signal
from impl.util.rng import make_rng


NOISE_CONVENTIONS = {
    'peak3sigma': 1 / 3,  # the quoted amplitude is the ~3 sigma envelope of the noise
    'rms': 1.0,
}
NOISE_FILTER_ORDER = 4


@dataclass(frozen=True)
class NoisySineSpec:
    sine_amp: float = 0.75
    sine_freq: float = 5.0
    noise_amp: float = 0.5
    noise_bw: float = 20000.0
    f_s: float = 15000.0
    duration: float = 2.0
    seed: int = 0
    noise_amp_convention: str = 'peak3sigma'

    def validate(self) -> 'NoisySineSpec':
        if self.sine_amp < 0 or self.noise_amp < 0:
            raise ValueError(f'Amplitudes must be non-negative, got sine {self.sine_amp} and noise {self.noise_amp}.')
        if not 0 <= self.sine_freq < self.f_s / 2:
            raise ValueError(f'Sine frequency {self.sine_freq} Hz must lie below Nyquist ({self.f_s / 2} Hz).')
        if not self.duration > 0 or not self.noise_bw > 0:
            raise ValueError(f'Duration and noise bandwidth must be positive, got {self.duration} s and {self.noise_bw} Hz.')
        if self.noise_amp_convention not in NOISE_CONVENTIONS:
            raise ValueError(f'Unknown noise amplitude convention "{self.noise_amp_convention}". Use one of {", ".join(NOISE_CONVENTIONS)}.')
        return self

    @property
    def noise_rms(self) -> float:
        return self.noise_amp * NOISE_CONVENTIONS[self.noise_amp_convention]


def noisy_sine(spec: NoisySineSpec) -> Signal:
    """Sine plus Gaussian noise band-limited to `noise_bw` and scaled to an exact RMS.

    A bandwidth at or above Nyquist leaves the sampled noise white.
    """
    spec.validate()
    n_samples = int(round(spec.duration * spec.f_s))
    t = np.arange(n_samples) / spec.f_s
    sine = spec.sine_amp * np.sin(2 * np.pi * spec.sine_freq * t)
    if spec.noise_amp == 0 or n_samples == 0:
        return Signal(sine, spec.f_s)
    noise = make_rng(spec.seed).standard_normal(n_samples)
    if spec.noise_bw < spec.f_s / 2:
        b, a = sps.butter(NOISE_FILTER_ORDER, spec.noise_bw / (spec.f_s / 2))
        noise = sps.lfilter(b, a, noise)
    noise *= spec.noise_rms / np.sqrt(np.mean(noise ** 2))
    return Signal(sine + noise, spec.f_s)
