"""Weight sequences and Lorentz norm parameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WeightSequence:
    """Non-increasing weights in [0, 1] with first entry exactly 1."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("weights must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(v)):
            raise ValueError("weights must be finite")
        if v[0] != 1.0:
            raise ValueError("first weight must equal 1 exactly")
        if np.any(v < 0.0) or np.any(v > 1.0):
            raise ValueError("weights must lie in [0, 1]")
        if np.any(np.diff(v) > 0.0):
            raise ValueError("weights must be non-increasing")

    @property
    def n(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class PowerWeights:
    """The power family w_i = i^(-r)."""

    r: float
    n: int

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r >= 0.0):
            raise ValueError("r must be a finite nonnegative real")
        if self.n < 1:
            raise ValueError("n must be at least 1")

    def materialize(self) -> WeightSequence:
        i = np.arange(1, self.n + 1, dtype=float)
        return WeightSequence(i ** (-self.r))


@dataclass(frozen=True)
class LorentzParams:
    """A (weights, p) pair defining a Lorentz norm (p >= 1) or quasi-norm (p < 1)."""

    weights: WeightSequence | PowerWeights
    p: float

    def __post_init__(self):
        if not (np.isfinite(self.p) and self.p > 0.0):
            raise ValueError("p must be a positive finite real")

    @property
    def n(self) -> int:
        return self.weights.n

    @property
    def is_norm(self) -> bool:
        return self.p >= 1.0

    @property
    def quasi_norm_constant(self) -> float:
        """Triangle-inequality constant: 1 for p >= 1, 2^(1/p) below."""
        return 1.0 if self.p >= 1.0 else 2.0 ** (1.0 / self.p)

    def weight_values(self) -> np.ndarray:
        if isinstance(self.weights, PowerWeights):
            return self.weights.materialize().values
        return self.weights.values


def power_params(r: float, p: float, n: int) -> LorentzParams:
    return LorentzParams(PowerWeights(r, n), p)
