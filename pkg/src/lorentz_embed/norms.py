"""Rearrangements, Lorentz norms, the psi potential and Lipschitz constants."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import LorentzParams


def _check_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("input must be a nonempty 1-d real vector")
    if np.any(np.isnan(x)):
        raise ValueError("input contains NaN")
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite entries")
    return x


def rearrange_desc(x) -> np.ndarray:
    """Non-increasing rearrangement of the absolute values of x."""
    x = _check_vector(x)
    return np.sort(np.abs(x))[::-1]


def sort_asc(x) -> np.ndarray:
    """Non-decreasing rearrangement of the coordinates of x (signs kept).

    As a map on R^n this is 1-Lipschitz for the Euclidean norm.
    """
    x = _check_vector(x)
    return np.sort(x)


def _check_dim(params: LorentzParams, x: np.ndarray):
    if x.size != params.n:
        raise ValueError(f"dimension mismatch: len(x)={x.size}, params.n={params.n}")


def lorentz_norm(params: LorentzParams, x) -> float:
    """(sum_i w_i x_[i]^p)^(1/p)."""
    x = _check_vector(x)
    _check_dim(params, x)
    w = params.weight_values()
    xs = np.sort(np.abs(x))[::-1]
    return float(np.dot(w, xs ** params.p) ** (1.0 / params.p))


def lorentz_norm_columns(params: LorentzParams, X: np.ndarray) -> np.ndarray:
    """Lorentz norm of each column of an (n, m) matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != params.n:
        raise ValueError(f"expected an ({params.n}, m) matrix, got shape {X.shape}")
    w = params.weight_values()
    if w[-1] == 1.0:
        # constant weights: rearrangement does not matter, skip the sort
        return np.sum(np.abs(X) ** params.p, axis=0) ** (1.0 / params.p)
    Xs = np.sort(np.abs(X), axis=0)[::-1, :]
    return (w @ Xs ** params.p) ** (1.0 / params.p)


def psi(params: LorentzParams, x) -> float:
    """The potential sum_i w_i x_[i]^p = lorentz_norm(params, x)^p."""
    x = _check_vector(x)
    _check_dim(params, x)
    w = params.weight_values()
    xs = np.sort(np.abs(x))[::-1]
    return float(np.dot(w, xs ** params.p))


def psi_columns(params: LorentzParams, X: np.ndarray) -> np.ndarray:
    """psi of each column of an (n, m) matrix."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != params.n:
        raise ValueError(f"expected an ({params.n}, m) matrix, got shape {X.shape}")
    w = params.weight_values()
    Xs = np.sort(np.abs(X), axis=0)[::-1, :]
    return w @ Xs ** params.p


@dataclass(frozen=True)
class GradientNormResult:
    value: float
    smooth_point: bool  # False at ties or zeros among |x_i| (a null set)


def psi_gradient_norm(params: LorentzParams, x) -> GradientNormResult:
    """Euclidean norm of the gradient of psi: p (sum_i w_i^2 x_[i]^(2(p-1)))^(1/2).

    The formula is valid where the coordinates have distinct nonzero absolute
    values.  At ties or zeros the formula is still evaluated but the result is
    flagged as a non-smooth point.
    """
    x = _check_vector(x)
    _check_dim(params, x)
    w = params.weight_values()
    ax = np.abs(x)
    xs = np.sort(ax)[::-1]
    smooth = bool(np.all(xs > 0.0) and np.all(np.diff(xs) < 0.0))
    q = 2.0 * (params.p - 1.0)
    # numpy evaluates 0**0 as 1, which is the convention wanted at p = 1
    value = params.p * float(np.sum(w ** 2 * xs ** q)) ** 0.5
    return GradientNormResult(value=value, smooth_point=smooth)


def lipschitz_constant(params: LorentzParams) -> float:
    """Exact supremum of the Lorentz norm over the Euclidean unit sphere.

    Equals (sum_i w_i^(2/(2-p)))^((2-p)/(2p)) for p in [1, 2) and 1 for p >= 2.
    """
    p = params.p
    if p < 1.0:
        raise ValueError("Lipschitz constant is only available for p >= 1")
    if p >= 2.0:
        return 1.0
    w = params.weight_values()
    return float(np.sum(w ** (2.0 / (2.0 - p))) ** ((2.0 - p) / (2.0 * p)))


def lipschitz_maximizer(params: LorentzParams) -> np.ndarray:
    """Unit vector achieving the supremum of the norm over the sphere.

    For p in [1, 2) this is theta_i = w_i^(1/(2-p)) normalized; for p >= 2 the
    supremum is achieved at e_1.
    """
    p = params.p
    if p < 1.0:
        raise ValueError("maximizer is only available for p >= 1")
    n = params.n
    if p >= 2.0:
        theta = np.zeros(n)
        theta[0] = 1.0
        return theta
    w = params.weight_values()
    theta = w ** (1.0 / (2.0 - p))
    return theta / np.linalg.norm(theta)
