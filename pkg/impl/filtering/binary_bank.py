"""Binary-weighted variant of the filter that merges the DAC into the weight network.

Every tap holds one device per code bit with conductances in powers of two. The bits of the delayed code
switch a fixed drive `v_ref` onto the devices, so each device only ever sees 0 or `v_ref`. Codes are two's
complement; the row of the sign bit is routed to the opposite input of the adder and therefore counts negative.
"""

from typing import Sequence
from collections import deque
from dataclasses import dataclass
import numpy as np
from impl.device import get_device_preset
from .converter import FilterConfig, adc_quantize
from .signal import Signal


class UnsupportedSignError(ValueError):
    pass


class CodeRangeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConductanceBank:
    g: np.ndarray  # siemens, shape (n_taps, k_d), column b holds bit b
    v_ref: float
    sign_compensated: bool = True

    @property
    def n_taps(self) -> int:
        return self.g.shape[0]

    @property
    def k_d(self) -> int:
        return self.g.shape[1]

    @property
    def n_devices(self) -> int:
        return self.g.size

    @property
    def bit_signs(self) -> np.ndarray:
        signs = np.ones(self.k_d)
        signs[-1] = -1.0
        return signs


def build_binary_bank(weights: Sequence[float], cfg: FilterConfig, v_ref: float = None, v_threshold: float = None) -> ConductanceBank:
    """Lay out the conductances reproducing the per-tap DAC filter with `weights` for every input code."""
    weights = np.asarray(weights, dtype=float)
    if len(weights) != cfg.n_taps:
        raise ValueError(f'Filter with {cfg.n_taps} taps got {len(weights)} weights.')
    if np.any(weights < 0):
        raise UnsupportedSignError(f'Binary-weighted banks support only non-negative weights, got {weights.tolist()}.')
    v_ref = cfg.v_tap_max if v_ref is None else v_ref
    v_threshold = get_device_preset().v_threshold if v_threshold is None else v_threshold
    if not 0 < v_ref <= v_threshold:
        raise ValueError(f'Drive level {v_ref} V must be positive and at most the device threshold {v_threshold} V.')
    g_unit = weights * cfg.adc_fullscale / (cfg.r_f * v_ref * 2 ** (cfg.k_d - 1))
    g = g_unit[:, np.newaxis] * 2.0 ** np.arange(cfg.k_d)[np.newaxis, :]
    return ConductanceBank(g, v_ref, cfg.sign_compensated)


def code_bits(code: int, k_d: int) -> np.ndarray:
    """Two's complement bits of `code`, least significant first."""
    if not -2 ** (k_d - 1) <= code < 2 ** (k_d - 1):
        raise CodeRangeError(f'Code {code} outside the {k_d}-bit range.')
    unsigned = code & (2 ** k_d - 1)
    return np.array([(unsigned >> b) & 1 for b in range(k_d)], dtype=float)


def step_binary(bank: ConductanceBank, codes: Sequence[int], r_f: float) -> float:
    if len(codes) != bank.n_taps:
        raise CodeRangeError(f'Bank with {bank.n_taps} taps got {len(codes)} codes.')
    bits = np.array([code_bits(int(code), bank.k_d) for code in codes])
    tap_current = bank.v_ref * np.sum(bits * bank.bit_signs * bank.g)
    y_raw = -r_f * tap_current
    return -y_raw if bank.sign_compensated else y_raw


def run_binary(bank: ConductanceBank, cfg: FilterConfig, signal: Signal) -> Signal:
    codes = deque([0] * bank.n_taps, maxlen=bank.n_taps)
    output = []
    for v in signal.samples:
        codes.appendleft(adc_quantize(v, cfg))
        output.append(step_binary(bank, codes, cfg.r_f))
    return Signal(np.array(output), signal.f_s, signal.units)
