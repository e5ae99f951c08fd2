import numpy as np
import pytest
import pytest_check as check
from impl.filtering import FilterConfig, FilterConfigError, Signal, adc_convert, adc_quantize, dequantize, quantize_signal, dac_tap_voltage


CFG = FilterConfig()


def test_default_config():
    check.equal(CFG.n_taps, 6)
    check.equal(CFG.k_d, 8)
    check.equal(CFG.f_s, 15000.0)
    check.equal(CFG.r_f, 2200.0)
    check.almost_equal(CFG.alpha, 0.15625)
    check.almost_equal(CFG.lsb, 0.01)
    check.equal((CFG.code_min, CFG.code_max), (-128, 127))


def test_invalid_config():
    with pytest.raises(FilterConfigError):
        FilterConfig(n_taps=0)
    with pytest.raises(FilterConfigError):
        FilterConfig(k_d=0)
    with pytest.raises(FilterConfigError):
        FilterConfig(f_s=-1.0)
    with pytest.raises(FilterConfigError):
        FilterConfig(v_tap_max=0.0)


def test_adc_boundaries():
    check.equal(adc_quantize(0.0, CFG), 0)
    check.equal(adc_quantize(1.28, CFG), 127)
    check.equal(adc_quantize(5.0, CFG), 127)
    check.equal(adc_quantize(-1.28, CFG), -128)
    check.equal(adc_quantize(-5.0, CFG), -128)
    check.equal(adc_convert(5.0, CFG), (127, True))
    check.equal(adc_convert(0.5, CFG), (50, False))


def test_adc_rounds_half_away_from_zero():
    cfg = FilterConfig(k_d=3, adc_fullscale=1.0)  # lsb 0.25
    check.equal(adc_quantize(0.125, cfg), 1)
    check.equal(adc_quantize(-0.125, cfg), -1)
    check.equal(adc_quantize(0.375, cfg), 2)
    check.equal(adc_quantize(-0.375, cfg), -2)
    check.equal(adc_quantize(0.1, cfg), 0)


def test_adc_quantization_error():
    for v in np.linspace(-CFG.adc_fullscale, CFG.adc_fullscale, 20001):
        if v >= (CFG.code_max + 0.5) * CFG.lsb:
            continue  # clip zone
        check.less_equal(abs(v - dequantize(adc_quantize(float(v), CFG), CFG)), CFG.lsb / 2 + 1e-12)


def test_quantize_signal_matches_adc():
    samples = np.random.default_rng(0).uniform(-2.0, 2.0, 2000)
    quantized = quantize_signal(Signal(samples, CFG.f_s), CFG)
    expected = [dequantize(adc_quantize(float(v), CFG), CFG) for v in samples]
    check.equal(quantized.samples.tolist(), expected)
    check.equal(quantized.f_s, CFG.f_s)


def test_dac_tap_voltage():
    check.equal(dac_tap_voltage(0, CFG), 0.0)
    check.almost_equal(dac_tap_voltage(127, CFG), 0.1984375)
    check.less_equal(dac_tap_voltage(127, CFG), CFG.v_tap_max)
    check.almost_equal(dac_tap_voltage(-128, CFG), -CFG.v_tap_max)
    for a, b in [(3, 5), (-40, 17), (60, 60), (-64, -64)]:
        check.almost_equal(dac_tap_voltage(a + b, CFG), dac_tap_voltage(a, CFG) + dac_tap_voltage(b, CFG), abs=1e-15)


def test_dac_matches_gain_path():
    # the tap voltage of a code equals alpha times its dequantized input
    for code in range(CFG.code_min, CFG.code_max + 1):
        check.almost_equal(dac_tap_voltage(code, CFG), CFG.alpha * dequantize(code, CFG), abs=1e-15)


def test_signal():
    signal = Signal([0.0, 1.0, 2.0], 4.0)
    check.equal(len(signal), 3)
    check.equal(signal.times.tolist(), [0.0, 0.25, 0.5])
    check.equal(signal.duration, 0.75)
    check.equal(signal.units, 'V')
    with pytest.raises(ValueError):
        Signal([0.0], 0.0)
