import math
import numpy as np
import pytest
import pytest_check as check
from impl.device import get_device_preset, device_at_memristance
from impl.filtering import FilterConfig, FilterState
from impl.analysis import ResponseCurve, SaturationError, CutoffNotFoundError, response_at, frequency_response, measured_frequency_response, cutoff_frequency


F_S = 15000.0
AVERAGER = [1 / 6] * 6


def _averager_magnitude(freqs: np.ndarray) -> np.ndarray:
    theta = np.pi * freqs / F_S
    with np.errstate(invalid='ignore', divide='ignore'):
        magnitude = np.abs(np.sin(6 * theta) / (6 * np.sin(theta)))
    return np.where(theta == 0, 1.0, magnitude)


def _first_crossing(freqs: np.ndarray, magnitude: np.ndarray) -> float:
    idx = np.nonzero(magnitude < magnitude[0] / math.sqrt(2))[0][0]
    return float(freqs[idx])


def test_flat_response():
    curve = frequency_response([0.7], F_S, 101)
    check.almost_equal(curve.magnitude.tolist(), [0.7] * 101, rel=1e-12)
    check.equal(curve.freqs[0], 0.0)
    check.equal(curve.freqs[-1], F_S / 2)


def test_dc_gain():
    weights = [0.1, 0.3, 0.2, 0.05]
    check.almost_equal(frequency_response(weights, F_S, 11).magnitude[0], sum(weights), rel=1e-12)


def test_averager_nulls():
    check.almost_equal(response_at(AVERAGER, F_S, [2500.0, 5000.0, 7500.0]).tolist(), [0.0] * 3, abs=1e-12)
    freqs = np.linspace(0, F_S / 2, 301)
    check.almost_equal(response_at(AVERAGER, F_S, freqs).tolist(), _averager_magnitude(freqs).tolist(), abs=1e-12)


def test_homogeneity():
    weights = np.array([1.0, 1.0, 0.5])
    curve = frequency_response(weights, F_S, 4097)
    scaled = frequency_response(3.0 * weights, F_S, 4097)
    check.almost_equal(scaled.magnitude.tolist(), (3.0 * curve.magnitude).tolist(), rel=1e-12, abs=1e-15)
    check.almost_equal(cutoff_frequency(scaled), cutoff_frequency(curve), abs=1e-6)


def test_averager_cutoff():
    fine_freqs = np.linspace(0, F_S / 2, 10 ** 6 + 1)
    expected = _first_crossing(fine_freqs, _averager_magnitude(fine_freqs))
    cutoff = cutoff_frequency(frequency_response(AVERAGER, F_S, 4097))
    check.almost_equal(cutoff, expected, abs=1.0)
    check.almost_equal(cutoff, 1120.9, abs=1.0)


def test_three_tap_cutoff_ratio():
    cutoff1 = cutoff_frequency(frequency_response(AVERAGER, F_S, 4097))
    cutoff2 = cutoff_frequency(frequency_response([1.0, 1.0, 0.5], F_S, 4097))
    # |1 + e^-jt + 0.5 e^-2jt|^2 = 1.25 + 3 cos t + 2 cos^2 t meets half its DC value 3.125 at cos t = (-3 + sqrt(24)) / 4
    expected2 = math.acos((-3 + math.sqrt(24)) / 4) * F_S / (2 * math.pi)
    check.almost_equal(cutoff2, expected2, abs=1.0)
    check.almost_equal(cutoff2 / cutoff1, 2.292, abs=0.005)
    check.less_equal(abs(cutoff2 / cutoff1 - 2.0), 0.3)


def test_cutoff_not_found():
    with pytest.raises(CutoffNotFoundError):
        cutoff_frequency(frequency_response([1.0], F_S, 101))
    with pytest.raises(ValueError):
        cutoff_frequency(ResponseCurve(np.array([0.0, 1.0]), np.array([0.0, 0.0])))


def test_invalid_curves():
    with pytest.raises(ValueError):
        ResponseCurve(np.array([0.0, 2.0, 1.0]), np.array([1.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        ResponseCurve(np.array([0.0, 1.0]), np.array([1.0]))
    with pytest.raises(ValueError):
        frequency_response(AVERAGER, F_S, 1)


def _averaging_filter() -> FilterState:
    params = get_device_preset('pt_tio2')
    return FilterState(FilterConfig(), [device_at_memristance(params, 2000.0) for _ in range(6)])


def test_measured_matches_analytic():
    filter_state = _averaging_filter()
    freqs = [100.0, 500.0, 1000.0, 1500.0, 2000.0, 3500.0]
    measured = measured_frequency_response(filter_state, freqs, 1.0, 20)
    analytic = response_at(filter_state.weights, F_S, measured.freqs)
    check.equal(measured.freqs.tolist(), freqs)
    for m, a in zip(measured.magnitude, analytic):
        check.almost_equal(m, a, rel=0.02)


def test_measured_null_leakage():
    filter_state = _averaging_filter()
    measured = measured_frequency_response(filter_state, [2500.0, 5000.0], 1.0, 20)
    dc_gain = float(np.sum(filter_state.weights))
    check.is_true(all(m <= 0.02 * dc_gain for m in measured.magnitude))


def test_measured_sorts_frequencies():
    measured = measured_frequency_response(_averaging_filter(), [1000.0, 200.0], 1.0, 10)
    check.equal(measured.freqs.tolist(), [200.0, 1000.0])


def test_measured_invalid_probes():
    filter_state = _averaging_filter()
    with pytest.raises(ValueError):
        measured_frequency_response(filter_state, [1000.0], 0.0, 20)
    with pytest.raises(SaturationError):
        measured_frequency_response(filter_state, [1000.0], 1.3, 20)
    with pytest.raises(ValueError):
        measured_frequency_response(filter_state, [7500.0], 1.0, 20)
