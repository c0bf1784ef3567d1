"""Closed-form two-sided estimates: incomplete-gamma integrals, power/log sums,
power integrals, the xi1 envelope, order-statistic bounds and psi medians."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .constants import DEFAULT_LEDGER, ConstantLedger


@dataclass(frozen=True)
class TwoSidedBound:
    """Carrier for a c * expr <= quantity <= C * expr estimate."""

    lower: float
    upper: float
    shape_value: float
    constants_used: tuple[str, ...]

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")


def incomplete_gamma_bounds(
    b: float,
    q: float,
    sign: str,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> TwoSidedBound:
    """Two-sided bounds for int_0^b e^(-w) w^q dw (decay) or e^(+w) (growth).

    Shapes: min{1+q, b}^(1+q) for decay, e^b b^(1+q) / (1+q+b) for growth.
    The decay constants enter with exponent 1+q.
    """
    if b < 0.0 or q < 0.0:
        raise ValueError("b and q must be nonnegative")
    if sign == "decay":
        shape = min(1.0 + q, b) ** (1.0 + q)
        c = ledger.get("c_bound") ** (1.0 + q)
        C = ledger.get("C_bound") ** (1.0 + q)
    elif sign == "growth":
        shape = math.exp(b) * b ** (1.0 + q) / (1.0 + q + b)
        c = ledger.get("c_bound")
        C = ledger.get("C_bound")
    else:
        raise ValueError(f"sign must be 'decay' or 'growth', got {sign!r}")
    return TwoSidedBound(min(c, C) * shape, max(c, C) * shape, shape, ("c_bound", "C_bound"))


def power_log_sum_bounds(
    a: float,
    q: float,
    n: int,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> TwoSidedBound:
    """Two-sided bounds for sum_{i=1}^n i^(-a) (ln(n/i))^q, with 0^0 = 1 at i = n.

    For a in [0, 1]: shape n^(1-a) (1+q)^(1+q) (ln n)^(1+q) / ((1-a) ln n + 1 + q)^(1+q),
    constants with exponent 1+q.  For a >= 1: shape
    (ln n)^(1+q) / ((a-1) ln n + 1 + q) + (ln n)^q.  At a = 1 either branch works;
    this implementation uses the second.
    """
    if a < 0.0 or q < 0.0:
        raise ValueError("a and q must be nonnegative")
    if n < 2:
        raise ValueError("n must be at least 2")
    ln = math.log(n)
    if a < 1.0:
        shape = n ** (1.0 - a) * (1.0 + q) ** (1.0 + q) * ln ** (1.0 + q) \
            / ((1.0 - a) * ln + 1.0 + q) ** (1.0 + q)
        c = ledger.get("c_bound") ** (1.0 + q)
        C = ledger.get("C_bound") ** (1.0 + q)
    else:
        shape = ln ** (1.0 + q) / ((a - 1.0) * ln + 1.0 + q) + ln ** q
        c = ledger.get("c_bound")
        C = ledger.get("C_bound")
    return TwoSidedBound(min(c, C) * shape, max(c, C) * shape, shape, ("c_bound", "C_bound"))


def power_log_sum_exact(a: float, q: float, n: int) -> float:
    """Direct-summation oracle for sum_{i=1}^n i^(-a) (ln(n/i))^q with 0^0 = 1."""
    i = np.arange(1, n + 1, dtype=float)
    logs = np.log(n / i)
    logs[-1] = 0.0
    if q == 0.0:
        powq = np.ones_like(logs)  # 0^0 = 1 at i = n
    else:
        powq = logs ** q
    return float(np.sum(i ** (-a) * powq))


def power_integral_bounds(
    a: float,
    T: float,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> TwoSidedBound:
    """Two-sided bounds for int_1^T x^(-a) dx with shape
    (1 + T^(1-a)) ln(T) / (1 + |1-a| ln T)."""
    if T < 1.0:
        raise ValueError("T must be at least 1")
    lnT = math.log(T)
    shape = (1.0 + T ** (1.0 - a)) * lnT / (1.0 + abs(1.0 - a) * lnT)
    c, C = ledger.get("c_bound"), ledger.get("C_bound")
    return TwoSidedBound(min(c, C) * shape, max(c, C) * shape, shape, ("c_bound", "C_bound"))


def power_integral_exact(a: float, T: float) -> float:
    """Closed-form oracle for int_1^T x^(-a) dx."""
    if T < 1.0:
        raise ValueError("T must be at least 1")
    if a == 1.0:
        return math.log(T)
    return (T ** (1.0 - a) - 1.0) / (1.0 - a)


def xi1(t: float) -> float:
    """xi1(t) = e^t (1 - t), a decreasing bijection of [0, 1] onto itself."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("xi1 is defined on [0, 1]")
    return math.exp(t) * (1.0 - t)


def xi1_inv_upper(s: float) -> float:
    """Upper bound min{sqrt(2(1-s)), 1 - s/e} for the inverse of xi1."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("xi1_inv_upper is defined on [0, 1]")
    return min(math.sqrt(2.0 * (1.0 - s)), 1.0 - s / math.e)


def uniform_orderstat_upper(
    n: int,
    i: int,
    t: float,
    variant: str,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> float:
    """High-probability upper envelope for the i-th uniform order statistic.

    variant 'bottom' holds simultaneously over i with probability at least
    1 - (pi^2/3) e^(-t^2/2); variant 'renyi' with probability 1 - C e^(-t^2/2)
    (rate constant from the ledger).
    """
    if not 1 <= i <= n:
        raise ValueError("need 1 <= i <= n")
    if variant == "bottom":
        k = n - i + 1
        s = math.exp((-t ** 2 - 4.0 * math.log(k)) / (2.0 * k))
        return 1.0 - k / (n + 1.0) * (1.0 - xi1_inv_upper(s))
    if variant == "renyi":
        c = ledger.get("c_order")
        k = n - i + 1
        expo = c * max(
            (t + math.sqrt(math.log(i))) * math.sqrt(i) / math.sqrt(n * k),
            (t ** 2 + math.log(i)) / k,
        )
        return 1.0 - (n - i) / n * math.exp(-expo)
    raise ValueError(f"variant must be 'bottom' or 'renyi', got {variant!r}")


def uniform_orderstat_upper_all(
    n: int,
    t: float,
    variant: str,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> np.ndarray:
    """Vectorized envelope over all i = 1..n (same formulas as the scalar op)."""
    i = np.arange(1, n + 1, dtype=float)
    k = n - i + 1.0
    if variant == "bottom":
        s = np.exp((-t ** 2 - 4.0 * np.log(k)) / (2.0 * k))
        inv = np.minimum(np.sqrt(2.0 * (1.0 - s)), 1.0 - s / math.e)
        return 1.0 - k / (n + 1.0) * (1.0 - inv)
    if variant == "renyi":
        c = ledger.get("c_order")
        expo = c * np.maximum(
            (t + np.sqrt(np.log(i))) * np.sqrt(i) / np.sqrt(n * k),
            (t ** 2 + np.log(i)) / k,
        )
        return 1.0 - (n - i) / n * np.exp(-expo)
    raise ValueError(f"variant must be 'bottom' or 'renyi', got {variant!r}")


def normal_orderstat_envelope(
    n: int,
    i: int,
    t: float,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> float:
    """High-probability envelope C (ln(n/i) + t^2/i)^(1/2) for X_[i], i <= (n+1)/2."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if not 1 <= i <= (n + 1) / 2:
        raise ValueError("need 1 <= i <= (n+1)/2")
    return ledger.get("C_order") * math.sqrt(math.log(n / i) + t ** 2 / i)


def tx_deviation_bound(n: int, t: float, ledger: ConstantLedger = DEFAULT_LEDGER) -> float:
    """Envelope C min{t^2 / sqrt(ln n), t} for |TX - TY|_inf, T the sorting map."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return ledger.get("C_order") * min(t ** 2 / math.sqrt(math.log(n)), t)


def median_psi_bounds(
    r: float,
    p: float,
    n: int,
    ledger: ConstantLedger = DEFAULT_LEDGER,
) -> TwoSidedBound:
    """Two-sided bounds for the median of sum_i i^(-r) X_[i]^p, X standard normal.

    For r in [0, 1]: shape p^(p/2) n^(1-r) (ln n)^(1+p/2) / (p + (1-r) ln n)^(1+p/2);
    for r >= 1: shape (ln n)^(1+p/2) / (1 + (r-1) ln n) + (ln n)^(p/2).
    Constants enter with exponent p.
    """
    if r < 0.0 or p < 1.0:
        raise ValueError("need r >= 0 and p >= 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    ln = math.log(n)
    if r < 1.0:
        shape = p ** (p / 2.0) * n ** (1.0 - r) * ln ** (1.0 + p / 2.0) \
            / (p + (1.0 - r) * ln) ** (1.0 + p / 2.0)
    else:
        shape = ln ** (1.0 + p / 2.0) / (1.0 + (r - 1.0) * ln) + ln ** (p / 2.0)
    c = ledger.get("c_median_lower") ** p
    C = ledger.get("C_median_upper") ** p
    return TwoSidedBound(min(c, C) * shape, max(c, C) * shape, shape,
                         ("c_median_lower", "C_median_upper"))


def median_norm_shape(weights: np.ndarray, p: float, n: int) -> float:
    """Shape (sum_i w_i (ln(n/i))^(p/2))^(1/p) for the median of |X|_{w,p}."""
    w = np.asarray(weights, dtype=float)
    if w.size != n:
        raise ValueError("weights length must equal n")
    i = np.arange(1, n + 1, dtype=float)
    logs = np.log(n / i)
    logs[-1] = 0.0
    return float(np.sum(w * logs ** (p / 2.0)) ** (1.0 / p))


def inverse_normal_cdf(u) -> float | np.ndarray:
    """Standard normal quantile Phi^(-1)(u), u in (0, 1)."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise ValueError("argument must lie in (0, 1)")
    out = special.ndtri(u_arr)
    return float(out) if np.isscalar(u) or out.ndim == 0 else out
