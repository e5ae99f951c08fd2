"""Behavioural model of a Pt/TiO2-x/Pt memristive device.

The device is described by a normalized ionic state `s` in [0, 1] (0 at r_off, 1 at r_on) whose conductance
is affine in `s`. Reads follow a (nearly) linear static I-V; writes follow threshold-gated kinetics

    ds/dt = dir * rate * sinh((|v| - v_threshold) / v_char) * window(s, dir)

with dir = -1 (reset, v > 0, window s) and dir = +1 (set, v < 0, window 1 - s). Below the threshold the state
does not change at all.
"""

from typing import Optional, Tuple
from dataclasses import dataclass, replace
import math
import numpy as np
import utils


READ_RANGE = utils.get_config('device.read_range')
MIN_STEPS_PER_PULSE = utils.get_config('device.min_steps_per_pulse')
MAX_STEP = utils.get_config('device.max_step')


class DeviceParameterError(ValueError):
    pass


class ReadRangeError(ValueError):
    pass


@dataclass(frozen=True)
class DeviceParams:
    r_on: float
    r_off: float
    v_char: float
    rate_reset: float
    rate_set: float
    v_threshold: float
    nl_coeff: float = 0.0

    def validate(self) -> 'DeviceParams':
        if not 0 < self.r_on < self.r_off:
            raise DeviceParameterError(f'Expected 0 < r_on < r_off, got r_on={self.r_on}, r_off={self.r_off}.')
        for name in ['v_char', 'v_threshold', 'rate_reset', 'rate_set']:
            if not getattr(self, name) > 0:
                raise DeviceParameterError(f'Parameter {name} must be positive, got {getattr(self, name)}.')
        return self

    @property
    def g_on(self) -> float:
        return 1 / self.r_on

    @property
    def g_off(self) -> float:
        return 1 / self.r_off


@dataclass(frozen=True)
class VariationSpec:
    sigma_d2d: float = 0.0
    sigma_c2c: float = 0.0
    seed: int = 0

    def validate(self) -> 'VariationSpec':
        if self.sigma_d2d < 0 or self.sigma_c2c < 0:
            raise DeviceParameterError(f'Variation sigmas must be non-negative, got d2d={self.sigma_d2d}, c2c={self.sigma_c2c}.')
        return self


@dataclass(frozen=True)
class DeviceState:
    s: float
    params: DeviceParams
    sigma_c2c: float = 0.0  # relative spread of every pulse's state increment

    @property
    def memristance(self) -> float:
        return memristance(self)


def get_device_preset(name: str = None) -> DeviceParams:
    """Return the named parameter set from the `device_presets` configuration."""
    name = name or utils.get_config('device.default_preset')
    presets = utils.get_config('device_presets')
    if name not in presets:
        raise KeyError(f'Unknown device preset "{name}". Available: {", ".join(presets)}.')
    return DeviceParams(**{key: float(val) for key, val in presets[name].items()}).validate()


def spawn_device(nominal: DeviceParams, variation: VariationSpec, rng: Optional[np.random.Generator]) -> DeviceState:
    """Sample a device in its high-resistance state with lognormal device-to-device spread of r_on, r_off and both rates."""
    nominal.validate()
    variation.validate()
    params = nominal
    if variation.sigma_d2d > 0:
        while True:  # re-draw until the sampled bounds are ordered
            f_on, f_off, f_reset, f_set = rng.lognormal(mean=0.0, sigma=variation.sigma_d2d, size=4)
            params = replace(nominal, r_on=nominal.r_on * f_on, r_off=nominal.r_off * f_off,
                             rate_reset=nominal.rate_reset * f_reset, rate_set=nominal.rate_set * f_set)
            if params.r_on < params.r_off:
                break
    return DeviceState(0.0, params.validate(), variation.sigma_c2c)


def device_at_memristance(params: DeviceParams, r: float, sigma_c2c: float = 0.0) -> DeviceState:
    """Return the ideal device state whose memristance equals `r`."""
    params.validate()
    if not params.r_on <= r <= params.r_off:
        raise DeviceParameterError(f'Memristance {r} outside [{params.r_on}, {params.r_off}].')
    s = (1 / r - params.g_off) / (params.g_on - params.g_off)
    return DeviceState(min(1.0, max(0.0, s)), params, sigma_c2c)


def memristance(state: DeviceState) -> float:
    p = state.params
    return 1 / (p.g_off + state.s * (p.g_on - p.g_off))


def static_current(state: DeviceState, v: float) -> float:
    """Static I-V at the current state without any range check."""
    return v / memristance(state) * (1 + state.params.nl_coeff * v * v)


def read_current(state: DeviceState, v: float, read_range: float = None) -> float:
    """Non-destructive read of the device current at bias `v`."""
    read_range = READ_RANGE if read_range is None else read_range
    if abs(v) > read_range:
        raise ReadRangeError(f'Read voltage {v} V outside the read range of +-{read_range} V; use apply_pulse for writes.')
    return static_current(state, v)


def apply_pulse(state: DeviceState, v: float, duration: float, rng: Optional[np.random.Generator]) -> DeviceState:
    """Apply a rectangular voltage pulse and return the resulting device state."""
    if not duration > 0:
        raise DeviceParameterError(f'Pulse duration must be positive, got {duration}.')
    p = state.params
    overdrive = abs(v) - p.v_threshold
    if overdrive <= 0:
        return state
    is_reset = v > 0
    k = (p.rate_reset if is_reset else p.rate_set) * math.sinh(overdrive / p.v_char)
    decay = _euler_decay(k, duration)
    if is_reset:
        delta = state.s * decay - state.s
    else:
        delta = (1 - state.s) * (1 - decay)
    if delta != 0 and state.sigma_c2c > 0:
        delta *= rng.lognormal(mean=0.0, sigma=state.sigma_c2c)
    return replace(state, s=min(1.0, max(0.0, state.s + delta)))


def integration_grid(duration: float) -> Tuple[int, float]:
    """Number of explicit steps and step size used for a pulse of `duration` seconds."""
    n_steps = max(MIN_STEPS_PER_PULSE, int(math.ceil(duration / MAX_STEP - 1e-9)))
    return n_steps, duration / n_steps


def _euler_decay(k: float, duration: float) -> float:
    # the window decays by (1 - k*dt) per explicit step; a step overshooting zero is clamped there
    n_steps, dt = integration_grid(duration)
    step_factor = 1 - k * dt
    if step_factor <= 0:
        return 0.0
    return step_factor ** n_steps
