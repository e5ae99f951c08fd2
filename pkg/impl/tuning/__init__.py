from .tuner import TuneConfig, TunePulse, TuneReport, TargetRangeError, ReadDisturbError, measure_resistance, is_within_tolerance, tune, tune_bank
from .yield_study import YieldSummary, monte_carlo_yield
