"""Mixed-signal FIR filter: ADC, digital shift register, per-tap DAC, memristive weights and an inverting adder.

Each tap drives its device with the DAC voltage of a delayed input code; the device currents meet at the
virtual ground of the summing amplifier, so the output is -r_f times the sum of the tap currents.
"""

from typing import Sequence
from collections import deque
import numpy as np
import utils
from impl.device import DeviceState, memristance, read_current
from impl.device.model import READ_RANGE
from .converter import FilterConfig, FilterConfigError, adc_convert, dac_tap_voltage
from .signal import Signal


class InvariantError(AssertionError):
    pass


class FilterState:
    def __init__(self, cfg: FilterConfig, taps: Sequence[DeviceState]):
        if len(taps) != cfg.n_taps:
            raise FilterConfigError(f'Filter with {cfg.n_taps} taps got {len(taps)} devices.')
        for idx, tap in enumerate(taps):
            if cfg.v_tap_max > tap.params.v_threshold:
                raise FilterConfigError(f'Tap swing {cfg.v_tap_max} V exceeds the threshold {tap.params.v_threshold} V of device {idx}.')
        if cfg.v_tap_max > READ_RANGE:
            raise FilterConfigError(f'Tap swing {cfg.v_tap_max} V exceeds the read range of {READ_RANGE} V.')
        self.cfg = cfg
        self.taps = tuple(taps)
        self.shift_reg = deque([0] * cfg.n_taps, maxlen=cfg.n_taps)  # most recent code first
        self.saturations = 0

    def reset(self) -> 'FilterState':
        """Return a new filter on the same devices with zero history."""
        return FilterState(self.cfg, self.taps)

    def tap_snapshot(self) -> tuple:
        return tuple((tap.s, tap.params) for tap in self.taps)

    @property
    def weights(self) -> np.ndarray:
        return weights_from_devices(self.taps, self.cfg)


def weights_from_devices(taps: Sequence[DeviceState], cfg: FilterConfig) -> np.ndarray:
    """Effective dimensionless tap weights alpha * r_f / M_i."""
    if len(taps) == 0:
        raise ValueError('Cannot derive weights without taps.')
    return np.array([cfg.alpha * cfg.r_f / memristance(tap) for tap in taps])


def step(state: FilterState, v_in: float) -> float:
    cfg = state.cfg
    code, clipped = adc_convert(v_in, cfg)
    state.saturations += clipped
    state.shift_reg.appendleft(code)
    tap_current = 0.0
    for tap, tap_code in zip(state.taps, state.shift_reg):
        v_tap = dac_tap_voltage(tap_code, cfg)
        if abs(v_tap) > cfg.v_tap_max:
            raise InvariantError(f'Tap drive {v_tap} V exceeds the swing of {cfg.v_tap_max} V.')
        tap_current += read_current(tap, v_tap)
    y_raw = -cfg.r_f * tap_current
    return -y_raw if cfg.sign_compensated else y_raw


def run(state: FilterState, signal: Signal) -> Signal:
    """Filter a whole signal sample by sample; the tap devices must come out of it untouched."""
    if signal.f_s != state.cfg.f_s:
        raise FilterConfigError(f'Signal sampled at {signal.f_s} Hz fed to a filter clocked at {state.cfg.f_s} Hz.')
    snapshot = state.tap_snapshot()
    output = [step(state, v) for v in signal.samples]
    if state.tap_snapshot() != snapshot:
        raise InvariantError('Device states changed during filtering.')
    if state.saturations:
        utils.get_logger().debug(f'ADC clipped {state.saturations} samples..')
    return Signal(np.array(output), signal.f_s, signal.units)
