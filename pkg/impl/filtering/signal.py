from dataclasses import dataclass, field
import numpy as np


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled waveform."""
    samples: np.ndarray
    f_s: float
    units: str = field(default='V')

    def __post_init__(self):
        if not self.f_s > 0:
            raise ValueError(f'Sample rate must be positive, got {self.f_s}.')
        object.__setattr__(self, 'samples', np.asarray(self.samples, dtype=float))

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.f_s

    @property
    def duration(self) -> float:
        return len(self.samples) / self.f_s
