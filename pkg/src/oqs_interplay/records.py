"""Trajectory records shared by all engines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

FIELDS = ("abscissa", "delta", "entropy", "sigma", "ergotropy")
QUBIT_ENTROPY_MAX = float(np.log(2.0))


@dataclass(frozen=True)
class QuantifierRecord:
    abscissa: float
    delta: float
    entropy: float
    sigma: float
    ergotropy: float

    def __post_init__(self):
        if self.delta < -1e-9:
            raise ValueError(f"delta = {self.delta} is negative")
        if not -1e-9 <= self.entropy <= QUBIT_ENTROPY_MAX + 1e-9:
            raise ValueError(f"qubit entropy {self.entropy} outside [0, ln 2]")
        if self.ergotropy < -1e-9:
            raise ValueError(f"ergotropy = {self.ergotropy} is negative")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in FIELDS)


@dataclass
class RunOutput:
    records: list[QuantifierRecord]
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.records:
            raise ValueError("a run must produce at least one record")
        x = [r.abscissa for r in self.records]
        if any(b <= a for a, b in zip(x, x[1:])):
            raise ValueError("record abscissae must be strictly increasing")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def series(self, name: str) -> np.ndarray:
        if name not in FIELDS:
            raise KeyError(name)
        return np.array([getattr(r, name) for r in self.records], dtype=float)


def corr(series_a: Sequence[float], series_b: Sequence[float]) -> float:
    """Pearson correlation coefficient."""
    a = np.asarray(series_a, dtype=float)
    b = np.asarray(series_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("series must be one-dimensional and of equal length")
    if a.size < 3:
        raise ValueError("need at least three samples")
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        raise ValueError("correlation undefined for a zero-variance series")
    da, db = a - a.mean(), b - b.mean()
    va, vb = float(da @ da), float(db @ db)
    return float(np.clip((da @ db) / np.sqrt(va * vb), -1.0, 1.0))
