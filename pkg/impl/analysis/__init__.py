from .stimulus import NoisySineSpec, noisy_sine
from .metrics import SineFit, NoiseReduction, MetricError, fit_sine, noise_reduction_factor
from .response import ResponseCurve, SaturationError, CutoffNotFoundError, response_at, frequency_response, measured_frequency_response, cutoff_frequency
