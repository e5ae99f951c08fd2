"""Filter configuration and the data converters of the signal path (symmetric mid-tread ADC, per-tap DAC)."""

from typing import Tuple
from dataclasses import dataclass
import math
import numpy as np
from .signal import Signal


class FilterConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FilterConfig:
    n_taps: int = 6
    k_d: int = 8
    f_s: float = 15000.0
    r_f: float = 2200.0
    v_tap_max: float = 0.2
    adc_fullscale: float = 1.28
    sign_compensated: bool = True

    def __post_init__(self):
        if self.n_taps < 1 or self.k_d < 1:
            raise FilterConfigError(f'Need at least one tap and one bit, got n_taps={self.n_taps}, k_d={self.k_d}.')
        for name in ['f_s', 'r_f', 'v_tap_max', 'adc_fullscale']:
            if not getattr(self, name) > 0:
                raise FilterConfigError(f'Filter parameter {name} must be positive, got {getattr(self, name)}.')

    @property
    def alpha(self) -> float:
        """Analog gain between ADC input and tap voltage."""
        return self.v_tap_max / self.adc_fullscale

    @property
    def lsb(self) -> float:
        return 2 * self.adc_fullscale / 2 ** self.k_d

    @property
    def code_min(self) -> int:
        return -2 ** (self.k_d - 1)

    @property
    def code_max(self) -> int:
        return 2 ** (self.k_d - 1) - 1


def adc_convert(v: float, cfg: FilterConfig) -> Tuple[int, bool]:
    """Return the ADC code of `v` and whether the input was clipped."""
    x = v / cfg.lsb
    code = int(math.copysign(math.floor(abs(x) + 0.5), x))  # round half away from zero
    if code > cfg.code_max:
        return cfg.code_max, True
    if code < cfg.code_min:
        return cfg.code_min, True
    return code, False


def adc_quantize(v: float, cfg: FilterConfig) -> int:
    return adc_convert(v, cfg)[0]


def dequantize(code: int, cfg: FilterConfig) -> float:
    return code * cfg.lsb


def quantize_signal(signal: Signal, cfg: FilterConfig) -> Signal:
    """Quantize and dequantize every sample; the input the ideal filter sees in the oracle comparison."""
    x = signal.samples / cfg.lsb
    codes = np.clip(np.sign(x) * np.floor(np.abs(x) + 0.5), cfg.code_min, cfg.code_max)
    return Signal(codes * cfg.lsb, signal.f_s, signal.units)


def dac_tap_voltage(code: int, cfg: FilterConfig) -> float:
    return code * cfg.v_tap_max / 2 ** (cfg.k_d - 1)
