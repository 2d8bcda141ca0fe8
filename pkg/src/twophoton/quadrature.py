"""Tensor-product Gauss-Legendre quadrature on truncated 2-D boxes.

Integrands are callables ``h(x, y)`` that receive broadcastable node arrays
of shapes (nx, 1) and (1, ny), the ``np.ogrid`` convention, and return
values that broadcast to (nx, ny).  Error estimates come from comparing
against the same rule at half resolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import ConfigurationError, NumericalDomainError
from .spectra import JointSpectrum

__all__ = [
    "QuadratureGrid",
    "QuadResult",
    "gauss_legendre",
    "integrate_2d",
    "fourier_2d",
    "auto_grid",
    "DEFAULT_TOL",
    "TRUNCATION_WIDTHS",
    "NODES_PER_PERIOD",
    "MIN_NODES",
]

DEFAULT_TOL = 1e-8
TRUNCATION_WIDTHS = 8.0
NODES_PER_PERIOD = 8.0
MIN_NODES = 64
MAX_NODES = 4096
# GL node spacing near the middle is ~ (pi/2) L/n; keep it below ~0.6 of the narrowest width
_NODES_PER_WIDTH = 2.5
_ROUNDOFF_FLOOR = 64 * np.finfo(float).eps


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]; cached and read-only."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _rule(lo, hi, n):
    x, w = gauss_legendre(n)
    half = 0.5 * (hi - lo)
    return half * x + 0.5 * (hi + lo), half * w


@dataclass(frozen=True)
class QuadratureGrid:
    x_lo: float
    x_hi: float
    nx: int
    y_lo: float
    y_hi: float
    ny: int
    rtol: float = DEFAULT_TOL

    def __post_init__(self):
        for lo, hi, n, axis in ((self.x_lo, self.x_hi, self.nx, "x"), (self.y_lo, self.y_hi, self.ny, "y")):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ConfigurationError(f"grid axis {axis} bounds must be finite", field="grid")
            if not lo < hi:
                raise ConfigurationError(f"grid axis {axis} needs lower < upper, got [{lo}, {hi}]", field="grid")
            if int(n) != n or n < 2:
                raise ConfigurationError(f"grid axis {axis} needs an integer node count >= 2, got {n}", field="grid")
        if not 0 < self.rtol < 1:
            raise ConfigurationError(f"rtol must lie in (0, 1), got {self.rtol}", field="tol")

    @classmethod
    def square(cls, lo, hi, n, rtol=DEFAULT_TOL) -> "QuadratureGrid":
        return cls(lo, hi, n, lo, hi, n, rtol)

    @property
    def is_square(self) -> bool:
        return (self.x_lo, self.x_hi, self.nx) == (self.y_lo, self.y_hi, self.ny)

    def x_rule(self):
        return _rule(self.x_lo, self.x_hi, self.nx)

    def y_rule(self):
        return _rule(self.y_lo, self.y_hi, self.ny)

    def half(self) -> "QuadratureGrid":
        return replace(self, nx=max(2, self.nx // 2), ny=max(2, self.ny // 2))

    def doubled(self) -> "QuadratureGrid":
        return replace(self, nx=2 * self.nx, ny=2 * self.ny)

    def describe(self) -> str:
        return (
            f"gauss-legendre x=[{self.x_lo!r},{self.x_hi!r}]/{self.nx} "
            f"y=[{self.y_lo!r},{self.y_hi!r}]/{self.ny} rtol={self.rtol!r}"
        )


class QuadResult(NamedTuple):
    value: complex
    error: float


def _evaluate(grid, integrand):
    x, wx = grid.x_rule()
    y, wy = grid.y_rule()
    vals = np.broadcast_to(np.asarray(integrand(x[:, None], y[None, :])), (x.size, y.size))
    if not np.all(np.isfinite(vals)):
        i, j = np.argwhere(~np.isfinite(vals))[0]
        node = (float(x[i]), float(y[j]))
        raise NumericalDomainError(f"non-finite integrand value at node {node}", node=node)
    weighted = vals * wx[:, None] * wy[None, :]
    # np.sum over a fixed-shape array is pairwise and deterministic
    return complex(np.sum(weighted)), float(np.sum(np.abs(weighted)))


def integrate_2d(grid: QuadratureGrid, integrand: Callable) -> QuadResult:
    """Tensor-product rule on ``grid`` with a half-resolution error estimate.

    The estimate is never below a round-off floor proportional to the
    integral of |integrand|.
    """
    value, magnitude = _evaluate(grid, integrand)
    coarse, _ = _evaluate(grid.half(), integrand)
    error = max(abs(value - coarse), _ROUNDOFF_FLOOR * magnitude)
    return QuadResult(value, error)


def fourier_2d(grid: QuadratureGrid, values, t1, t2) -> np.ndarray:
    """Batched transform sum_ij wx_i wy_j V_ij exp(-i (x_i t1_a + y_j t2_b)).

    ``values`` holds the integrand at the grid nodes, shape (nx, ny); the
    result has shape (len(t1), len(t2)).  Cost is two matrix products.
    """
    x, wx = grid.x_rule()
    y, wy = grid.y_rule()
    t1 = np.atleast_1d(np.asarray(t1, float))
    t2 = np.atleast_1d(np.asarray(t2, float))
    weighted = np.asarray(values) * wx[:, None] * wy[None, :]
    e1 = np.exp(-1j * np.multiply.outer(t1, x))
    e2 = np.exp(-1j * np.multiply.outer(y, t2))
    return e1 @ weighted @ e2


def _support(spec: JointSpectrum):
    bounds = spec.bounds
    if bounds is not None:
        (a, b), (c, d) = bounds
        if not all(math.isfinite(v) for v in (a, b, c, d)):
            raise ConfigurationError("tabulated spectrum has unbounded axes", field="spectrum")
        lo, hi = max(a, c), min(b, d)
        if not lo < hi:
            raise ConfigurationError(
                "tabulated axes do not overlap; exchange-symmetric integrals need a common range",
                field="spectrum",
            )
        return lo, hi
    centers = spec.centers
    reach = TRUNCATION_WIDTHS * spec.width
    return min(centers) - reach, max(centers) + reach


def auto_grid(
    spec: JointSpectrum, D_max: float = 0.0, tol: float = DEFAULT_TOL, max_nodes: int = MAX_NODES
) -> QuadratureGrid:
    """Square grid sized for ``spec`` and phases exp(+-i w D) with |D| <= D_max.

    Bounds cover +-8 widths around every center (tabulated spectra use the
    common range of their axes).  Nodes per axis::

        n = max(64, 8 L (|D_max| + delay) / 2pi, 2.5 L / resolution)

    with L the box length, scaled up by digits(tol)/8 for tolerances below
    1e-8.
    """
    if not 0 < tol < 1:
        raise ConfigurationError(f"tol must lie in (0, 1), got {tol}", field="tol")
    lo, hi = _support(spec)
    length = hi - lo
    phase_span = length * (abs(D_max) + spec.delay)
    n = max(
        float(MIN_NODES),
        NODES_PER_PERIOD * phase_span / (2.0 * math.pi),
        _NODES_PER_WIDTH * length / spec.resolution,
    )
    if spec.bounds is not None:
        n = max(n, 4.0 * max(np.size(spec.omega), np.size(spec.omega2)))
    n *= max(1.0, -math.log10(tol) / 8.0)
    n = int(math.ceil(n))
    n += n % 2
    if n > max_nodes:
        raise ConfigurationError(
            f"resolving {spec.describe()} with |D| <= {D_max} needs {n} nodes per axis "
            f"(limit {max_nodes}); widen narrow features or reduce the D range",
            field="spectrum",
        )
    return QuadratureGrid.square(lo, hi, n, rtol=tol)
