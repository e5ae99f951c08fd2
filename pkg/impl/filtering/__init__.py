from .signal import Signal
from .converter import FilterConfig, FilterConfigError, adc_convert, adc_quantize, dequantize, quantize_signal, dac_tap_voltage
from .pipeline import FilterState, InvariantError, weights_from_devices, step, run
from .oracle import ideal_fir
from .binary_bank import ConductanceBank, UnsupportedSignError, CodeRangeError, build_binary_bank, code_bits, step_binary, run_binary
