"""Monte-Carlo estimate of the write-verify yield under device variation."""

from typing import NamedTuple
import numpy as np
import utils
from impl.device import DeviceParams, VariationSpec, spawn_device
from impl.util.rng import derive_rngs
from .tuner import TuneConfig, tune_bank


class YieldSummary(NamedTuple):
    n_devices: int
    convergence_rate: float
    mean_pulses: float
    p95_pulses: float


def monte_carlo_yield(nominal: DeviceParams, variation: VariationSpec, target: float, cfg: TuneConfig, n_devices: int, seed: int = None, processes: int = 1) -> YieldSummary:
    """Spawn `n_devices` varied devices, tune all of them to `target` and summarize convergence and pulse counts."""
    if n_devices < 1:
        raise ValueError(f'Need at least one device, got {n_devices}.')
    seed = variation.seed if seed is None else seed
    rngs = derive_rngs(seed, ['devices', 'tuning'])
    devices = [spawn_device(nominal, variation, rngs['devices']) for _ in range(n_devices)]
    reports = tune_bank(devices, [target] * n_devices, cfg, rngs['tuning'], processes=processes)
    converged = [r for r in reports if r.converged]
    pulses = np.array([r.pulses_used for r in converged]) if converged else np.array([np.nan])
    summary = YieldSummary(n_devices, len(converged) / n_devices, float(np.mean(pulses)), float(np.percentile(pulses, 95)))
    utils.get_logger().debug(f'Yield for target {target} (d2d={variation.sigma_d2d}, c2c={variation.sigma_c2c}): {summary.convergence_rate:.3f}..')
    return summary
