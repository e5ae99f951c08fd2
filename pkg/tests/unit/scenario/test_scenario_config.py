from dataclasses import replace
import pytest
import pytest_check as check
from impl.device import get_device_preset
from impl.scenario import ConfigError, load_config, load_preset, with_overrides, get_preset_names


def _write(tmp_path, content: str) -> str:
    path = tmp_path / 'scenario.yaml'
    path.write_text(content)
    return str(path)


def test_presets():
    check.is_true({'paper-exp1', 'paper-exp2', 'paper-fig1'} <= set(get_preset_names()))
    exp1, exp2 = load_preset('paper-exp1'), load_preset('paper-exp2')
    check.equal(exp1.targets, (2000.0,) * 6)
    check.equal(exp2.targets, (2000.0, 2000.0, 4000.0, 120000.0, 120000.0, 120000.0))
    check.equal(exp1.device, get_device_preset('pt_tio2'))
    check.equal(exp1.filter.n_taps, 6)
    check.equal(exp1.stimulus.f_s, exp1.filter.f_s)
    with pytest.raises(ConfigError):
        load_preset('paper-exp3')


def test_empty_file_is_default(tmp_path):
    check.equal(load_config(_write(tmp_path, '')), load_preset('paper-exp1'))
    check.equal(load_config(_write(tmp_path, ''), 'paper-exp2'), load_preset('paper-exp2'))


def test_file_overrides(tmp_path):
    cfg = load_config(_write(tmp_path, 'preset: paper-exp2\nseed: 7\ntune:\n  max_pulses: 50\ndevice:\n  r_off: 100000.0\n'))
    check.equal(cfg.preset, 'paper-exp2')
    check.equal(cfg.seed, 7)
    check.equal(cfg.variation.seed, 7)
    check.equal(cfg.tune.max_pulses, 50)
    check.equal(cfg.tune.v_start, 0.6)
    check.equal(cfg.device.r_off, 100000.0)
    check.equal(cfg.targets[3], 120000.0)


def test_argument_preset_wins(tmp_path):
    cfg = load_config(_write(tmp_path, 'preset: paper-exp2\n'), 'paper-exp1')
    check.equal(cfg.targets, (2000.0,) * 6)


def test_invalid_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'targets: [2000.0, 2000.0, 2000.0, 2000.0, 2000.0]\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'filter:\n  n_tapz: 6\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'colour: red\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'filter:\n  v_tap_max: 0.6\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'tune:\n  v_read: 0.7\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, 'filter:\n  sign_compensated: 1\n'))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, '- a\n- b\n'))
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / 'missing.yaml'))


def test_yaml_error_reports_line(tmp_path):
    with pytest.raises(ConfigError, match='line'):
        load_config(_write(tmp_path, 'seed: 1\ntargets: [1.0, 2.0\nfilter: {}\n'))


def test_overrides():
    cfg = load_preset('paper-exp1')
    changed = with_overrides(cfg, seed=11, output_dir='elsewhere')
    check.equal(changed.seed, 11)
    check.equal(changed.variation.seed, 11)
    check.equal(changed.output_dir, 'elsewhere')
    check.equal(with_overrides(cfg), cfg)


def test_config_hash():
    cfg = load_preset('paper-exp1')
    check.equal(cfg.config_hash, load_preset('paper-exp1').config_hash)
    check.not_equal(cfg.config_hash, with_overrides(cfg, seed=1).config_hash)
    check.not_equal(cfg.config_hash, replace(cfg, targets=(4000.0,) * 6).config_hash)


def test_config_hash_ignores_preset_name(tmp_path):
    from_file = load_config(_write(tmp_path, ''))
    check.is_none(from_file.preset)
    check.equal(from_file.config_hash, load_preset('paper-exp1').config_hash)
