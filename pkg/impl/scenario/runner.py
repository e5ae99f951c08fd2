"""Experiment workflows: programming the tap devices, filtering the stimulus, measuring and writing artifacts."""

from typing import Dict, List, NamedTuple, Optional, Sequence, Union
from dataclasses import replace
import os
import numpy as np
import utils
from impl.device import DeviceParams, DeviceState, get_device_preset, device_at_memristance, memristance, spawn_device, quasi_dc_voltage_sweep, quasi_dc_current_sweep
from impl.tuning import TuneReport, tune_bank
from impl.filtering import FilterState, InvariantError, run, ideal_fir, quantize_signal
from impl.analysis import noisy_sine, frequency_response, measured_frequency_response, cutoff_frequency, noise_reduction_factor
from impl.util.rng import derive_rngs, derive_seed, make_rng
from . import io
from .config import ScenarioConfig, SweepOptions, with_overrides


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NOT_CONVERGED = 2
EXIT_INVARIANT = 3

STREAMS = ['devices', 'tuning', 'stimulus']


class ScenarioResult(NamedTuple):
    status: int
    metrics: Dict[str, float]
    files: List[str]


def program_taps(cfg: ScenarioConfig, rngs: dict, processes: int = 1) -> List[TuneReport]:
    """Spawn one device per tap and tune each of them to its target."""
    devices = [spawn_device(cfg.device, cfg.variation, rngs['devices']) for _ in range(cfg.filter.n_taps)]
    return tune_bank(devices, list(cfg.targets), cfg.tune, rngs['tuning'], processes=processes)


def run_tuning(cfg: ScenarioConfig, processes: int = 1) -> ScenarioResult:
    directory = io.prepare_output_dir(cfg.output_dir)
    reports = program_taps(cfg, derive_rngs(cfg.seed, STREAMS), processes)
    files = _write_tuning(reports, directory)
    status = _tuning_status(reports)
    metrics = _tuning_metrics(reports)
    files.append(io.write_metrics(metrics, utils.get_results_file('results.metrics', directory)))
    io.write_manifest(cfg, files, directory, status)
    return ScenarioResult(status, metrics, files)


def run_frequency_response(cfg: ScenarioConfig, processes: int = 1) -> ScenarioResult:
    directory = io.prepare_output_dir(cfg.output_dir)
    reports = program_taps(cfg, derive_rngs(cfg.seed, STREAMS), processes)
    files = _write_tuning(reports, directory)
    status = _tuning_status(reports)
    metrics = _tuning_metrics(reports)
    filter_state = FilterState(cfg.filter, [report.device for report in reports])
    metrics.update(_write_responses(cfg, filter_state, directory, files))
    files.append(io.write_metrics(metrics, utils.get_results_file('results.metrics', directory)))
    io.write_manifest(cfg, files, directory, status)
    return ScenarioResult(status, metrics, files)


def run_scenario(cfg: ScenarioConfig, processes: int = 1) -> ScenarioResult:
    """Program the taps, filter the noisy-sine stimulus, measure the responses and write all artifacts.

    Non-converged taps are reported with status 2 but the pipeline continues with their final states.
    """
    utils.get_logger().info(f'Running scenario {cfg.preset or "<custom>"} with seed {cfg.seed}..')
    directory = io.prepare_output_dir(cfg.output_dir)
    rngs = derive_rngs(cfg.seed, STREAMS)
    reports = program_taps(cfg, rngs, processes)
    files = _write_tuning(reports, directory)
    status = _tuning_status(reports)
    metrics = _tuning_metrics(reports)
    try:
        filter_state = FilterState(cfg.filter, [report.device for report in reports])
        weights = filter_state.weights
        stimulus = noisy_sine(replace(cfg.stimulus, seed=derive_seed(rngs['stimulus'])))
        output = run(filter_state, stimulus)
        _check_oracle(filter_state, weights, stimulus, output)
        files.append(io.write_signals(stimulus, output, utils.get_results_file('results.signal', directory)))
        reduction = noise_reduction_factor(stimulus, output, cfg.stimulus.sine_freq, n_warmup=cfg.filter.n_taps, dc_gain=float(np.sum(weights)))
        metrics.update({
            'noise_reduction_factor': reduction.factor,
            'sine_amplitude_ratio': reduction.sine_amplitude_ratio,
            'peak_to_peak_factor': reduction.peak_to_peak_factor,
            'adc_saturations': filter_state.saturations,
        })
        metrics.update(_write_responses(cfg, filter_state, directory, files))
    except InvariantError as e:
        utils.get_logger().error(f'Invariant violated: {e}')
        status = EXIT_INVARIANT
    files.append(io.write_metrics(metrics, utils.get_results_file('results.metrics', directory)))
    io.write_manifest(cfg, files, directory, status)
    utils.get_logger().info(f'Finished scenario with status {status}.')
    return ScenarioResult(status, metrics, files)


def run_demo(cfg_exp1: ScenarioConfig, cfg_exp2: ScenarioConfig, directory: str, processes: int = 1) -> ScenarioResult:
    """Run the averaging and the three-tap configuration and compare their cutoff frequencies."""
    directory = io.prepare_output_dir(directory)
    cfg1 = with_overrides(cfg_exp1, output_dir=os.path.join(directory, 'exp1'))
    cfg2 = with_overrides(cfg_exp2, output_dir=os.path.join(directory, 'exp2'))
    result1 = run_scenario(cfg1, processes)
    result2 = run_scenario(cfg2, processes)
    metrics = {key: result1.metrics[key] for key in ['noise_reduction_factor', 'sine_amplitude_ratio', 'peak_to_peak_factor'] if key in result1.metrics}
    status = max(result1.status, result2.status)
    if 'cutoff_hz' in result1.metrics and 'cutoff_hz' in result2.metrics:
        metrics['cutoff_hz_config1'] = result1.metrics['cutoff_hz']
        metrics['cutoff_hz_config2'] = result2.metrics['cutoff_hz']
        metrics['cutoff_ratio'] = metrics['cutoff_hz_config2'] / metrics['cutoff_hz_config1']
    files = [io.write_metrics(metrics, utils.get_results_file('results.metrics', directory))]
    files += [path for result in [result1, result2] for path in result.files]
    files += [utils.get_results_file('results.manifest', os.path.join(directory, sub)) for sub in ['exp1', 'exp2']]
    parts = {'exp1': cfg1, 'exp2': cfg2}
    io.write_manifest(with_overrides(cfg_exp1, output_dir=directory), files, directory, status, parts)
    return ScenarioResult(status, metrics, files)


def export_sweep(preset: Union[str, DeviceParams], v_peaks: Sequence[float], directory: str, i_peaks: Sequence[float] = (), sweep: Optional[SweepOptions] = None, seed: Optional[int] = None) -> List[str]:
    """Write one I-V trace per sweep amplitude: voltage sweeps start fully set, current sweeps fully reset."""
    params = get_device_preset(preset) if isinstance(preset, str) else preset
    sweep = sweep or SweepOptions()
    directory = io.prepare_output_dir(directory)
    rng = make_rng(seed)
    files = []
    for v_peak in v_peaks:
        result = quasi_dc_voltage_sweep(device_at_memristance(params, params.r_on), v_peak, sweep.n_steps, sweep.step_duration, rng)
        utils.get_logger().debug(f'Voltage sweep to {v_peak} V ends at {memristance(result.final_state):.1f} Ohm..')
        files.append(io.write_sweep(result, utils.get_results_file('results.sweep_voltage', directory, v_peak)))
    for i_peak in i_peaks:
        result = quasi_dc_current_sweep(DeviceState(0.0, params), i_peak, sweep.n_steps, sweep.current_step_duration, rng)
        utils.get_logger().debug(f'Current sweep to {i_peak} A ends at {memristance(result.final_state):.1f} Ohm..')
        files.append(io.write_sweep(result, utils.get_results_file('results.sweep_current', directory, i_peak)))
    return files


def run_sweeps(cfg: ScenarioConfig) -> ScenarioResult:
    directory = io.prepare_output_dir(cfg.output_dir)
    files = export_sweep(cfg.device, cfg.sweep.v_peaks, directory, cfg.sweep.i_peaks, cfg.sweep, cfg.seed)
    metrics = {'n_sweeps': len(files)}
    io.write_manifest(cfg, files, directory, EXIT_OK)
    return ScenarioResult(EXIT_OK, metrics, files)


def _write_tuning(reports: List[TuneReport], directory: str) -> List[str]:
    return [io.write_tune_report(report, utils.get_results_file('results.tuning', directory, idx)) for idx, report in enumerate(reports)]


def _tuning_status(reports: List[TuneReport]) -> int:
    return EXIT_OK if all(report.converged for report in reports) else EXIT_NOT_CONVERGED


def _tuning_metrics(reports: List[TuneReport]) -> Dict[str, float]:
    metrics = {'converged_taps': sum(report.converged for report in reports), 'total_pulses': sum(report.pulses_used for report in reports)}
    metrics.update({f'tap{idx}_r_ohms': report.final_r for idx, report in enumerate(reports)})
    return metrics


def _write_responses(cfg: ScenarioConfig, filter_state: FilterState, directory: str, files: List[str]) -> Dict[str, float]:
    metrics = {}
    analytic = frequency_response(filter_state.weights, cfg.filter.f_s, cfg.analysis.n_points)
    files.append(io.write_response(analytic, utils.get_results_file('results.response_analytic', directory)))
    metrics['dc_gain'] = float(analytic.magnitude[0])
    try:
        metrics['cutoff_hz'] = cutoff_frequency(analytic)
    except ValueError as e:  # no crossing or no positive DC gain
        utils.get_logger().warning(f'No cutoff frequency: {e}')
    if cfg.analysis.probe_freqs:
        measured = measured_frequency_response(filter_state, cfg.analysis.probe_freqs, cfg.analysis.probe_amp, cfg.analysis.n_periods)
        files.append(io.write_response(measured, utils.get_results_file('results.response_measured', directory)))
    return metrics


def _check_oracle(filter_state: FilterState, weights: np.ndarray, stimulus, output):
    """The filter output must stay within the quantization bound of the ideal filter on the quantized input."""
    if any(tap.params.nl_coeff != 0 for tap in filter_state.taps):
        return
    reference = ideal_fir(weights, quantize_signal(stimulus, filter_state.cfg))
    bound = np.sum(np.abs(weights)) * filter_state.cfg.lsb / 2
    deviation = np.max(np.abs(output.samples - reference.samples)) if len(output) else 0.0
    if deviation > bound:
        raise InvariantError(f'Filter deviates from the ideal filter by {deviation:.3g} V (bound {bound:.3g} V).')
