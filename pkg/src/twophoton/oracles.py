"""Closed-form coincidence curves for the Gaussian families (c = 1).

All curves are normalized to a unit large-|D| asymptote.  None of the
functions here touch the quadrature engine except
:func:`time_shift_identity_check`, whose purpose is to compare against it.

Derivation of the asymmetric case: for F = F1(w) F2(w~) with Gaussians of
common width sigma centered at W and W~, the exchange overlap is

    K(D) = N exp(-(W - W~)^2 / 2 sigma^2) exp(-sigma^2 D^2 / 2),

so R_c / 2N = 1 - exp(-sigma^2 D^2 / 2 - W^2 y^2 / 2 sigma^2) with
y = 1 - W~/W.  The detuning that enters is the center W, not a running
frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "GaussianOracleParams",
    "symmetric_gaussian_rc",
    "asymmetric_gaussian_rc",
    "time_shift_identity_check",
    "TIME_SHIFT_SIGN",
]

# R_c(shift, D) = R_c(0, D + TIME_SHIFT_SIGN * shift) for TimeShiftedProduct
TIME_SHIFT_SIGN = +1


@dataclass(frozen=True)
class GaussianOracleParams:
    center: float
    center2: float
    sigma: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")
        if not self.center > 0:
            raise DomainError("center must be positive")

    @property
    def y_asym(self) -> float:
        return 1.0 - self.center2 / self.center


def _check(sigma, center=1.0):
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if not center > 0:
        raise DomainError(f"center must be positive, got {center}")


def symmetric_gaussian_rc(sigma, D):
    """1 - exp(-D^2 sigma^2 / 2)."""
    _check(sigma)
    D = np.asarray(D, float)
    return -np.expm1(-0.5 * (D * sigma) ** 2)


def asymmetric_gaussian_rc(center, y_asym, sigma, D):
    """1 - exp(-sigma^2 D^2 / 2 - center^2 y_asym^2 / 2 sigma^2)."""
    _check(sigma, center)
    D = np.asarray(D, float)
    return -np.expm1(-0.5 * (D * sigma) ** 2 - 0.5 * (center * y_asym / sigma) ** 2)


def time_shift_identity_check(sigma, shift, D, center=10.0, tol=1e-10):
    """(engine rate for TimeShiftedProduct at D, oracle at D + TIME_SHIFT_SIGN * shift).

    Both sides are normalized to the unit asymptote.
    """
    from .biphoton import BiphotonSystem, rate_normalized
    from .spectra import TimeShiftedProduct

    _check(sigma, center)
    sys = BiphotonSystem(TimeShiftedProduct(center, sigma, shift), tol=tol)
    lhs = rate_normalized(sys, D)
    rhs = float(symmetric_gaussian_rc(sigma, D + TIME_SHIFT_SIGN * shift))
    return lhs, rhs
