"""Closed-loop write-verify programming of devices to target memristances."""

from typing import List, NamedTuple, Optional, Tuple
from dataclasses import dataclass
import math
import multiprocessing as mp
import numpy as np
from tqdm import tqdm
import utils
from impl.device import DeviceState, apply_pulse, read_current
from impl.device.model import READ_RANGE
from impl.util.rng import split_rng


class TargetRangeError(ValueError):
    pass


class ReadDisturbError(ValueError):
    pass


@dataclass(frozen=True)
class TuneConfig:
    tolerance: float = 0.05
    v_read: float = 0.1
    v_start: float = 0.6
    v_step: float = 0.05
    v_max: float = 1.5
    pulse_duration: float = 1e-3
    max_pulses: int = 500

    def validate(self, v_threshold: float) -> 'TuneConfig':
        if not 0 < self.tolerance < 1:
            raise ValueError(f'Tolerance must be in (0, 1), got {self.tolerance}.')
        if not 0 < self.v_read <= read_limit(v_threshold):
            raise ReadDisturbError(f'Read voltage must be in (0, {read_limit(v_threshold)}] V, got {self.v_read}.')
        if not v_threshold < self.v_start <= self.v_max:
            raise ValueError(f'Expected v_threshold < v_start <= v_max, got {v_threshold} / {self.v_start} / {self.v_max}.')
        if not self.v_step > 0:
            raise ValueError(f'Amplitude step must be positive, got {self.v_step}.')
        if not self.pulse_duration > 0 or self.max_pulses < 0:
            raise ValueError(f'Invalid pulse budget: duration {self.pulse_duration}, max pulses {self.max_pulses}.')
        return self

    @property
    def precision_bits(self) -> int:
        """Number of weight bits that a relative tolerance can resolve."""
        return int(math.floor(math.log2(1 / self.tolerance)))


class TunePulse(NamedTuple):
    voltage: float
    measured_r: float


class TuneReport(NamedTuple):
    converged: bool
    pulses_used: int
    final_r: float
    trace: List[TunePulse]
    target: float
    device: DeviceState
    error: Optional[str] = None


def read_limit(v_threshold: float) -> float:
    """Largest read voltage that neither switches the device nor leaves the linear read region."""
    return min(v_threshold, READ_RANGE)


def measure_resistance(device: DeviceState, v_read: float) -> float:
    if not 0 < v_read <= read_limit(device.params.v_threshold):
        raise ReadDisturbError(f'Read voltage {v_read} V outside the non-destructive read window of {read_limit(device.params.v_threshold)} V.')
    return v_read / read_current(device, v_read)


def is_within_tolerance(r: float, target: float, tolerance: float) -> bool:
    return abs(r - target) <= tolerance * target


def tune(device: DeviceState, target: float, cfg: TuneConfig, rng: Optional[np.random.Generator]) -> TuneReport:
    """Program `device` to `target` ohms with an adaptive amplitude ramp.

    Pulses of unchanged polarity grow by `v_step` up to `v_max`; a change of polarity (overshoot) restarts
    the ramp at `v_start`. Positive pulses reset (raise R), negative pulses set (lower R).
    """
    p = device.params
    cfg.validate(p.v_threshold)
    if not p.r_on * (1 + cfg.tolerance) <= target <= p.r_off * (1 - cfg.tolerance):
        raise TargetRangeError(f'Target {target} Ohm not reachable within [{p.r_on}, {p.r_off}] at tolerance {cfg.tolerance}.')

    trace = []
    r = measure_resistance(device, cfg.v_read)
    polarity, amplitude = 0, 0.0
    while not is_within_tolerance(r, target, cfg.tolerance):
        if len(trace) >= cfg.max_pulses:
            return TuneReport(False, len(trace), r, trace, target, device)
        new_polarity = 1 if r < target else -1
        amplitude = min(amplitude + cfg.v_step, cfg.v_max) if new_polarity == polarity else cfg.v_start
        polarity = new_polarity
        device = apply_pulse(device, polarity * amplitude, cfg.pulse_duration, rng)
        r = measure_resistance(device, cfg.v_read)
        trace.append(TunePulse(polarity * amplitude, r))
    return TuneReport(True, len(trace), r, trace, target, device)


def tune_bank(devices: List[DeviceState], targets: List[float], cfg: TuneConfig, rng: Optional[np.random.Generator], processes: int = 1) -> List[TuneReport]:
    """Tune every device independently; reports follow the input order and one failure never stops the others."""
    if len(devices) != len(targets):
        raise ValueError(f'Got {len(devices)} devices but {len(targets)} targets.')
    if not devices:
        return []
    utils.get_logger().debug(f'Tuning bank of {len(devices)} devices..')
    rngs = split_rng(rng, len(devices)) if rng is not None else [None] * len(devices)
    jobs = list(zip(devices, targets, [cfg] * len(devices), rngs))
    if processes > 1:
        with mp.Pool(processes=processes) as pool:
            reports = list(tqdm(pool.imap(_tune_job, jobs), total=len(jobs), desc='tuning: Programming devices', disable=len(jobs) < 10))
    else:
        reports = [_tune_job(job) for job in tqdm(jobs, desc='tuning: Programming devices', disable=len(jobs) < 10)]
    failed = [idx for idx, report in enumerate(reports) if not report.converged]
    if failed:
        utils.get_logger().warning(f'{len(failed)} of {len(reports)} devices did not converge (indices {failed}).')
    return reports


def _tune_job(args: Tuple[DeviceState, float, TuneConfig, Optional[np.random.Generator]]) -> TuneReport:
    device, target, cfg, rng = args
    try:
        return tune(device, target, cfg, rng)
    except ValueError as e:  # range, disturb and parameter errors all end up in the report
        return TuneReport(False, 0, device.memristance, [], target, device, str(e))
