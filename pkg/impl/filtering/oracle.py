from typing import Sequence
import numpy as np
from scipy import signal as sps
from .signal import Signal


def ideal_fir(weights: Sequence[float], signal: Signal) -> Signal:
    """Double-precision direct-form FIR with zero initial history."""
    weights = np.asarray(weights, dtype=float)
    if weights.size == 0:
        raise ValueError('Cannot filter without weights.')
    return Signal(sps.lfilter(weights, [1.0], signal.samples), signal.f_s, signal.units)
