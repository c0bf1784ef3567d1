"""Gaussian random-matrix embeddings and distortion measurement."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .norms import lorentz_norm_columns
from .params import LorentzParams
from .streams import RandomStream


@dataclass(frozen=True)
class GaussianMatrix:
    """An n x k matrix with i.i.d. standard normal entries, reproducible by seed."""

    n: int
    k: int
    entries: np.ndarray = field(repr=False)
    seed_info: tuple[int, int]

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (self.n, self.k):
            raise ValueError(f"entries shape {e.shape} does not match ({self.n}, {self.k})")
        object.__setattr__(self, "entries", e)


def sample_gaussian_matrix(n: int, k: int, stream: RandomStream) -> GaussianMatrix:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = stream.generator()
    entries = rng.standard_normal((n, k))
    return GaussianMatrix(n=n, k=k, entries=entries,
                          seed_info=(stream.master_seed, stream.stream_id))


def identity_injection(n: int, k: int) -> GaussianMatrix:
    """Deterministic canonical-injection matrix, used as a test override."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    entries = np.zeros((n, k))
    entries[:k, :k] = np.eye(k)
    return GaussianMatrix(n=n, k=k, entries=entries, seed_info=(0, 0))


def embed(G: GaussianMatrix, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (G.k,):
        raise ValueError(f"expected a length-{G.k} vector, got shape {x.shape}")
    return G.entries @ x


def test_directions(k: int, count: int, mode: str, stream: RandomStream | None = None) -> np.ndarray:
    """Unit test directions as a (k, count) matrix of columns.

    mode 'random_sphere' draws normalized Gaussians; mode 'grid2d' (k = 2 only)
    is the uniform angular grid starting at angle 0.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    if mode == "grid2d":
        if k != 2:
            raise ValueError("grid2d mode requires k = 2")
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.vstack([np.cos(angles), np.sin(angles)])
    if mode == "random_sphere":
        if stream is None:
            raise ValueError("random_sphere mode requires a stream")
        rng = stream.generator()
        raw = rng.standard_normal((k, count))
        return raw / np.linalg.norm(raw, axis=0)
    raise ValueError(f"mode must be 'random_sphere' or 'grid2d', got {mode!r}")


@dataclass(frozen=True)
class DistortionReport:
    M_used: float
    max_rel_dev: float
    quantiles: dict  # probability level -> deviation quantile
    direction_count: int
    test_mode: str
    rel_devs: np.ndarray = field(repr=False)
    norm_values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if any(q > self.max_rel_dev + 1e-15 for q in self.quantiles.values()):
            raise ValueError("quantile exceeds reported maximum")

    def to_dict(self) -> dict:
        return {
            "M_used": self.M_used,
            "max_rel_dev": self.max_rel_dev,
            "quantiles": {str(k): v for k, v in self.quantiles.items()},
            "direction_count": self.direction_count,
            "test_mode": self.test_mode,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write_csv(self, path: str):
        """One row per direction: direction_index, norm_value, rel_dev."""
        with open(path, "w", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["direction_index", "norm_value", "rel_dev"])
            for idx in range(self.direction_count):
                writer.writerow([idx, repr(self.norm_values[idx]), repr(self.rel_devs[idx])])


QUANTILE_LEVELS = (0.5, 0.9, 0.99)


def measure_distortion(
    G: GaussianMatrix,
    params: LorentzParams,
    M: float,
    directions: np.ndarray,
    test_mode: str = "random_sphere",
) -> DistortionReport:
    """Per-direction relative deviation | |G theta| / M - 1 | over unit columns."""
    if M <= 0.0:
        raise ValueError("M must be positive")
    directions = np.asarray(directions, dtype=float)
    if directions.ndim != 2 or directions.shape[0] != G.k:
        raise ValueError(f"expected a ({G.k}, m) direction matrix, got {directions.shape}")
    images = G.entries @ directions
    norms = lorentz_norm_columns(params, images)
    devs = np.abs(norms / M - 1.0)
    quantiles = {lv: float(np.quantile(devs, lv)) for lv in QUANTILE_LEVELS}
    return DistortionReport(
        M_used=M,
        max_rel_dev=float(np.max(devs)),
        quantiles=quantiles,
        direction_count=directions.shape[1],
        test_mode=test_mode,
        rel_devs=devs,
        norm_values=norms,
    )


def pushforward_norm(G: GaussianMatrix, M: float, y) -> float:
    """M |x| where G x = y, solved in least squares over the column span.

    Errors out when the residual exceeds 1e-6 |y| (y not in the range of G).
    """
    if M <= 0.0:
        raise ValueError("M must be positive")
    y = np.asarray(y, dtype=float)
    if y.shape != (G.n,):
        raise ValueError(f"expected a length-{G.n} vector, got shape {y.shape}")
    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return 0.0
    # normal equations on the k x k Gram matrix; k is small in all experiments
    gram = G.entries.T @ G.entries
    rhs = G.entries.T @ y
    x = np.linalg.solve(gram, rhs)
    residual = float(np.linalg.norm(G.entries @ x - y))
    if residual > 1e-6 * ynorm:
        raise ValueError(f"y is not in the range of G (relative residual {residual / ynorm:.3g})")
    return M * float(np.linalg.norm(x))
