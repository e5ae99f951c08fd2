"""Artifact files of a scenario run (CSV tables, metrics summary and manifest)."""

from typing import Dict, List, Optional
import datetime
import os
import pandas as pd
import yaml
import utils
from impl.device import SweepResult
from impl.tuning import TuneReport
from impl.filtering import Signal
from impl.analysis import ResponseCurve
from .config import ScenarioConfig


def prepare_output_dir(directory: str) -> str:
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise IOError(f'Could not create output directory {directory}: {e}')
    if not os.access(directory, os.W_OK):
        raise IOError(f'Output directory {directory} is not writable.')
    return directory


def write_tune_report(report: TuneReport, filepath: str) -> str:
    df = pd.DataFrame({
        'pulse_index': range(len(report.trace)),
        'pulse_voltage_v': [pulse.voltage for pulse in report.trace],
        'measured_r_ohms': [pulse.measured_r for pulse in report.trace],
    })
    df.to_csv(filepath, index=False)
    return filepath


def write_signals(input_signal: Signal, output_signal: Signal, filepath: str) -> str:
    df = pd.DataFrame({
        'index': range(len(input_signal)),
        'time_s': [f'{t:.9g}' for t in input_signal.times],
        'input_v': input_signal.samples,
        'output_v': output_signal.samples,
    })
    df.to_csv(filepath, index=False)
    return filepath


def write_response(curve: ResponseCurve, filepath: str) -> str:
    pd.DataFrame({'freq_hz': curve.freqs, 'magnitude': curve.magnitude}).to_csv(filepath, index=False)
    return filepath


def write_sweep(result: SweepResult, filepath: str) -> str:
    pd.DataFrame(result.points, columns=['v_volts', 'i_amperes']).to_csv(filepath, index=False)
    return filepath


def write_metrics(metrics: Dict[str, float], filepath: str) -> str:
    with open(filepath, mode='w') as f:
        f.writelines(f'{key}={val}\n' for key, val in metrics.items())
    return filepath


def read_metrics(filepath: str) -> Dict[str, str]:
    with open(filepath) as f:
        return dict(line.strip().split('=', 1) for line in f if '=' in line)


def write_manifest(cfg: ScenarioConfig, files: List[str], directory: str, status: int, parts: Optional[Dict[str, ScenarioConfig]] = None) -> str:
    """Record seed, config hash, exit status and a content hash of every emitted file.

    Runs combining several scenarios pass them as `parts`; each one is recorded with its own hash.
    """
    manifest = {
        'seed': cfg.seed,
        'preset': cfg.preset,
        'config_sha256': cfg.config_hash,
        'status': status,
        'timestamp': datetime.datetime.now().isoformat(timespec='seconds'),
        'files': {os.path.relpath(path, directory): utils.get_file_hash(path) for path in files},
    }
    if parts:
        manifest['config_sha256'] = {name: part.config_hash for name, part in parts.items()}
        manifest['configs'] = {name: part.to_dict() for name, part in parts.items()}
    else:
        manifest['config'] = cfg.to_dict()
    filepath = utils.get_results_file('results.manifest', directory)
    with open(filepath, mode='w') as f:
        yaml.safe_dump(manifest, f, sort_keys=False)
    return filepath
