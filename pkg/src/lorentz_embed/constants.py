"""Named stand-ins for the universal constants left unspecified by the theory.

Every bound in this package is computed in "shape form" (all constants equal
to 1) and in "ledger form" (shape multiplied by the relevant ledger entries).
Calibration routines in :mod:`lorentz_embed.montecarlo` fit ledger entries
empirically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

# Every constant name used anywhere in the package.  Unknown names are
# rejected so that typos cannot silently fall back to 1.0.
KNOWN_CONSTANTS = (
    "C_gauss",        # concentration width, classical Gaussian inequality
    "c_gauss",        # concentration decay rate
    "C_order",        # order-statistic envelopes
    "c_order",        # Renyi-type exponent rate
    "C_median_upper",  # upper median estimate for psi(X)
    "c_median_lower",  # lower median estimate for psi(X)
    "C_bound",        # generic upper constant in two-sided analytic bounds
    "c_bound",        # generic lower constant in two-sided analytic bounds
    "c_dim",          # embedding-dimension formulas (d, E, F, d_general)
    "c2_dim",         # secondary dimension constant (l_p corollary)
    "c_rp",           # the (r, p)-dependent coefficient in simplified tables
    "c2_ellinfty",    # dimension constant in the ell-infinity regime
    "C1_ellinfty",    # norm-equivalence constant in the ell-infinity regime
    "c_ellinfty_gate",  # applicability threshold for the ell-infinity regime
    "C_sharp",        # sharp-norm quantile constant S
)


@dataclass(frozen=True)
class ConstantLedger:
    """Positive named constants; defaults to 1.0 for every known name."""

    values: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, v in self.values.items():
            if name not in KNOWN_CONSTANTS:
                raise ValueError(f"unknown constant name: {name!r}")
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"constant {name!r} must be positive and finite, got {v}")

    def get(self, name: str) -> float:
        if name not in KNOWN_CONSTANTS:
            raise ValueError(f"unknown constant name: {name!r}")
        return self.values.get(name, 1.0)

    def replace(self, **updates: float) -> "ConstantLedger":
        merged = dict(self.values)
        merged.update(updates)
        return ConstantLedger(merged)

    def to_dict(self) -> dict[str, float]:
        return {name: self.get(name) for name in KNOWN_CONSTANTS}

    @classmethod
    def from_json(cls, path: str) -> "ConstantLedger":
        with open(path) as fh:
            return cls(json.load(fh))


DEFAULT_LEDGER = ConstantLedger()
