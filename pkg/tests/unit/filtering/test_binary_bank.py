import itertools
from dataclasses import replace
import numpy as np
import pytest
import pytest_check as check
from impl.device import get_device_preset, device_at_memristance
from impl.filtering import FilterConfig, FilterState, Signal, UnsupportedSignError, CodeRangeError, weights_from_devices, build_binary_bank, code_bits, step_binary, run_binary, step, run, dequantize


PARAMS = get_device_preset('pt_tio2')
CFG = FilterConfig()


def test_bank_size():
    bank = build_binary_bank([0.17] * 6, CFG)
    check.equal(bank.g.shape, (6, 8))
    check.equal(bank.n_devices, 48)
    check.equal(bank.v_ref, CFG.v_tap_max)


def test_zero_weights():
    bank = build_binary_bank([0.0] * 6, CFG)
    check.equal(np.count_nonzero(bank.g), 0)
    check.equal(step_binary(bank, [127, -128, 5, 0, 1, -1], CFG.r_f), 0.0)


def test_binary_weighting():
    bank = build_binary_bank([0.1, 0.2, 0.05, 0.3, 0.0, 0.17], CFG)
    for row in bank.g:
        for b in range(bank.k_d):
            check.equal(row[b], 2 ** b * row[0])


def test_single_bit_ratio():
    cfg = replace(CFG, n_taps=1)
    bank = build_binary_bank([0.2], cfg)
    unit = step_binary(bank, [1], cfg.r_f)
    for b in range(cfg.k_d - 1):
        check.almost_equal(step_binary(bank, [2 ** b], cfg.r_f), 2 ** b * unit, rel=1e-12)


def test_code_bits():
    check.equal(code_bits(0, 4).tolist(), [0, 0, 0, 0])
    check.equal(code_bits(5, 4).tolist(), [1, 0, 1, 0])
    check.equal(code_bits(-1, 4).tolist(), [1, 1, 1, 1])
    check.equal(code_bits(-8, 4).tolist(), [0, 0, 0, 1])
    with pytest.raises(CodeRangeError):
        code_bits(8, 4)
    with pytest.raises(CodeRangeError):
        code_bits(-9, 4)


def test_invalid_banks():
    with pytest.raises(UnsupportedSignError):
        build_binary_bank([0.1, -0.1, 0.1, 0.1, 0.1, 0.1], CFG)
    with pytest.raises(ValueError):
        build_binary_bank([0.1] * 6, CFG, v_ref=0.6)
    with pytest.raises(ValueError):
        build_binary_bank([0.1] * 5, CFG)
    with pytest.raises(CodeRangeError):
        step_binary(build_binary_bank([0.1] * 6, CFG), [0] * 5, CFG.r_f)


@pytest.mark.parametrize('sign_compensated', [True, False])
def test_exhaustive_equivalence(sign_compensated: bool):
    cfg = FilterConfig(n_taps=2, k_d=4, sign_compensated=sign_compensated)
    taps = [device_at_memristance(PARAMS, 2000.0), device_at_memristance(PARAMS, 4700.0)]
    bank = build_binary_bank(weights_from_devices(taps, cfg), cfg)
    for newest, oldest in itertools.product(range(cfg.code_min, cfg.code_max + 1), repeat=2):
        state = FilterState(cfg, taps)
        step(state, dequantize(oldest, cfg))
        expected = step(state, dequantize(newest, cfg))
        check.equal(list(state.shift_reg), [newest, oldest])
        check.almost_equal(step_binary(bank, [newest, oldest], cfg.r_f), expected, abs=1e-12)


def test_run_binary_matches_pipeline():
    taps = [device_at_memristance(PARAMS, r) for r in [2000.0, 2000.0, 4000.0, 120000.0, 120000.0, 120000.0]]
    signal = Signal(np.random.default_rng(5).uniform(-1.5, 1.5, 2000), CFG.f_s)
    bank = build_binary_bank(weights_from_devices(taps, CFG), CFG)
    deviation = np.max(np.abs(run_binary(bank, CFG, signal).samples - run(FilterState(CFG, taps), signal).samples))
    check.less_equal(deviation, 1e-9)
