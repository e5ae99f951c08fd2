"""Quasi-DC triangular sweeps tracing the hysteretic I-V loops of a device."""

from typing import List, NamedTuple, Optional
import numpy as np
from scipy.optimize import brentq
import utils
from .model import DeviceState, DeviceParameterError, apply_pulse, memristance, static_current


COMPLIANCE = utils.get_config('device.compliance')


class ComplianceError(ValueError):
    pass


class SweepPoint(NamedTuple):
    v: float
    i: float


class SweepResult(NamedTuple):
    points: List[SweepPoint]
    final_state: DeviceState


def triangular_trajectory(peak: float, n_steps: int) -> np.ndarray:
    """Points of the ramp 0 -> peak -> 0, both ends included."""
    if n_steps < 2:
        raise DeviceParameterError(f'A sweep needs at least 2 points, got {n_steps}.')
    return peak * (1 - np.abs(np.linspace(-1.0, 1.0, n_steps)))


def quasi_dc_voltage_sweep(state: DeviceState, v_peak: float, n_steps: int, step_duration: float, rng: Optional[np.random.Generator]) -> SweepResult:
    if not v_peak > 0:
        raise DeviceParameterError(f'Voltage sweep peak must be positive, got {v_peak}.')
    points = []
    for v in triangular_trajectory(v_peak, n_steps):
        v = float(v)
        points.append(SweepPoint(v, static_current(state, v)))
        state = apply_pulse(state, v, step_duration, rng)
    return SweepResult(points, state)


def quasi_dc_current_sweep(state: DeviceState, i_peak: float, n_steps: int, step_duration: float, rng: Optional[np.random.Generator], compliance: float = None) -> SweepResult:
    """Force a triangular current ramp; the device voltage follows from the static I-V at every point."""
    if i_peak == 0:
        raise DeviceParameterError('Current sweep peak must be non-zero.')
    compliance = COMPLIANCE if compliance is None else compliance
    points = []
    for i in triangular_trajectory(i_peak, n_steps):
        i = float(i)
        v = _solve_voltage(state, i, compliance)
        points.append(SweepPoint(v, i))
        state = apply_pulse(state, v, step_duration, rng)
    return SweepResult(points, state)


def _solve_voltage(state: DeviceState, i: float, compliance: float) -> float:
    if i == 0:
        return 0.0
    if state.params.nl_coeff == 0:
        v = i * memristance(state)
    else:
        residual = lambda x: static_current(state, x) - i
        if residual(-compliance) * residual(compliance) > 0:
            raise ComplianceError(f'Current {i} A not reachable within the compliance of +-{compliance} V.')
        v = brentq(residual, -compliance, compliance, xtol=1e-15)
    if abs(v) > compliance:
        raise ComplianceError(f'Current {i} A requires {v:.3f} V, above the compliance of {compliance} V.')
    return v
