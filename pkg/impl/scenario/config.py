"""Scenario configuration: YAML scenario files merged over the built-in defaults and presets.

A scenario file mirrors the `scenario_defaults` section of `config.yaml`. An optional top-level `preset` key picks the
base preset. The merge order is defaults <- preset <- file; keys unknown to the defaults are rejected.
"""

from typing import Any, Dict, Optional, Tuple
from dataclasses import dataclass, field, fields, replace, asdict
import copy
import hashlib
import json
import yaml
import utils
from impl.device import DeviceParams, VariationSpec, get_device_preset
from impl.tuning import TuneConfig
from impl.filtering import FilterConfig
from impl.analysis import NoisySineSpec


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisOptions:
    n_points: int = 4097
    probe_freqs: Tuple[float, ...] = ()
    probe_amp: float = 1.0
    n_periods: int = 20


@dataclass(frozen=True)
class SweepOptions:
    v_peaks: Tuple[float, ...] = ()
    i_peaks: Tuple[float, ...] = ()
    n_steps: int = 201
    step_duration: float = 2e-4
    current_step_duration: float = 1e-2


@dataclass(frozen=True)
class ScenarioConfig:
    device_preset: str
    device: DeviceParams
    variation: VariationSpec
    tune: TuneConfig
    targets: Tuple[float, ...]
    filter: FilterConfig
    stimulus: NoisySineSpec
    analysis: AnalysisOptions
    sweep: SweepOptions
    output_dir: str
    seed: int
    preset: Optional[str] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return json.loads(json.dumps(asdict(self)))

    @property
    def config_hash(self) -> str:
        """Hash of the resolved values; the name of the preset they came from does not count."""
        values = self.to_dict()
        values.pop('preset')
        return hashlib.sha256(json.dumps(values, sort_keys=True).encode('utf-8')).hexdigest()


def get_preset_names() -> list:
    return list(utils.get_config('presets'))


def load_preset(name: str) -> ScenarioConfig:
    return _resolve({}, name)


def load_config(path: Optional[str] = None, preset: Optional[str] = None) -> ScenarioConfig:
    """Load and validate a scenario file; `preset` (if given) replaces the file's own `preset` key."""
    values = _read_yaml(path) if path else {}
    preset = preset or values.pop('preset', None)
    values.pop('preset', None)
    return _resolve(values, preset)


def with_overrides(cfg: ScenarioConfig, seed: Optional[int] = None, output_dir: Optional[str] = None) -> ScenarioConfig:
    if seed is not None:
        cfg = replace(cfg, seed=seed, variation=replace(cfg.variation, seed=seed))
    if output_dir is not None:
        cfg = replace(cfg, output_dir=output_dir)
    return cfg


def _read_yaml(path: str) -> dict:
    try:
        with open(path, 'r') as f:
            values = yaml.safe_load(f)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        line = f' (line {mark.line + 1})' if mark is not None else ''
        raise ConfigError(f'Could not parse scenario file {path}{line}: {getattr(e, "problem", e)}')
    except OSError as e:
        raise ConfigError(f'Could not read scenario file {path}: {e}')
    if values is None:
        return {}
    if not isinstance(values, dict):
        raise ConfigError(f'Scenario file {path} must contain a mapping at top level.')
    return values


def _resolve(values: dict, preset: Optional[str]) -> ScenarioConfig:
    defaults = utils.get_config('scenario_defaults')
    merged = copy.deepcopy(defaults)
    if preset is not None:
        presets = utils.get_config('presets')
        if preset not in presets:
            raise ConfigError(f'Unknown preset "{preset}". Available: {", ".join(presets)}.')
        merged = _merge(merged, presets[preset] or {}, defaults, '')
    merged = _merge(merged, values, defaults, '')
    return _build(merged, preset)


def _merge(base: dict, override: dict, reference: dict, prefix: str) -> dict:
    """Deep-merge `override` into `base`, failing on keys that `reference` does not know."""
    if not isinstance(override, dict):
        raise ConfigError(f'Expected a mapping at "{prefix.rstrip(".") or "<root>"}".')
    for key, val in override.items():
        dotted = prefix + str(key)
        if key not in _allowed_keys(reference, prefix):
            raise ConfigError(f'Unknown configuration key "{dotted}".')
        if isinstance(reference.get(key), dict):
            base[key] = _merge(base.get(key, {}), val, reference[key], dotted + '.')
        else:
            base[key] = val
    return base


def _allowed_keys(reference: dict, prefix: str) -> set:
    keys = set(reference)
    if prefix == 'device.':  # single device parameters may be overridden on top of the preset
        keys |= {f.name for f in fields(DeviceParams)}
    return keys


def _build(values: Dict[str, Any], preset: Optional[str]) -> ScenarioConfig:
    seed = _coerce('seed', values['seed'], int)
    device_values = dict(values['device'])
    preset_name = device_values.pop('preset')
    try:
        nominal = get_device_preset(preset_name)
    except KeyError as e:
        raise ConfigError(f'Invalid value for "device.preset": {e}')
    device = _section(DeviceParams, 'device', {**asdict(nominal), **device_values})
    _validate('device', device.validate)
    variation = _section(VariationSpec, 'variation', {**values['variation'], 'seed': seed})
    _validate('variation', variation.validate)
    tune = _section(TuneConfig, 'tune', values['tune'])
    _validate('tune', lambda: tune.validate(device.v_threshold))
    filter_cfg = _section(FilterConfig, 'filter', values['filter'])
    if filter_cfg.v_tap_max > device.v_threshold:
        raise ConfigError(f'Invalid value for "filter.v_tap_max": {filter_cfg.v_tap_max} V exceeds the device threshold of {device.v_threshold} V.')
    targets = tuple(_coerce('targets', t, float) for t in (values['targets'] or []))
    if len(targets) != filter_cfg.n_taps:
        raise ConfigError(f'Invalid value for "targets": expected {filter_cfg.n_taps} targets (filter.n_taps), got {len(targets)}.')
    stimulus = _section(NoisySineSpec, 'stimulus', {**values['stimulus'], 'f_s': filter_cfg.f_s})
    _validate('stimulus', stimulus.validate)
    analysis_values = dict(values['analysis'])
    analysis_values['probe_freqs'] = tuple(_coerce('analysis.probe_freqs', f, float) for f in analysis_values['probe_freqs'] or [])
    analysis = _section(AnalysisOptions, 'analysis', analysis_values)
    sweep_values = dict(values['sweep'])
    for key in ['v_peaks', 'i_peaks']:
        sweep_values[key] = tuple(_coerce(f'sweep.{key}', v, float) for v in sweep_values[key] or [])
    sweep = _section(SweepOptions, 'sweep', sweep_values)
    return ScenarioConfig(preset_name, device, variation, tune, targets, filter_cfg, stimulus, analysis, sweep, str(values['output_dir']), seed, preset)


def _section(cls, name: str, values: dict):
    kwargs = {}
    for f in fields(cls):
        if f.name in values:
            kwargs[f.name] = _coerce(f'{name}.{f.name}', values[f.name], f.type)
    try:
        return cls(**kwargs)
    except ValueError as e:
        raise ConfigError(f'Invalid section "{name}": {e}')


def _coerce(dotted: str, value, type_):
    if type_ not in (int, float, bool, str):
        return value
    if type_ is bool and not isinstance(value, bool):
        raise ConfigError(f'Invalid value for "{dotted}": expected true/false, got {value!r}.')
    try:
        return type_(value)
    except (TypeError, ValueError):
        raise ConfigError(f'Invalid value for "{dotted}": expected {type_.__name__}, got {value!r}.')


def _validate(name: str, check):
    try:
        check()
    except ValueError as e:
        raise ConfigError(f'Invalid section "{name}": {e}')
