"""Two-photon wave packet and coincidence rate behind a beam splitter.

With detector-side mixing matrix M (see :func:`mix_amplitudes`) and the
input state int f(w, w~) a_A^+(w) a_B^+(w~) |0>, the effective wave
function is

    Psi(tau1p, tau2p) = int dw dw~ 2F(w, w~) [ M12 M21 exp(-i(w~ tau1p + w tau2p))
                                            + M11 M22 exp(-i(w tau1  + w~ tau2 )) ]

where F = g f g / 2, tau1 = tau1p + D and tau2 = tau2p - D.  For R = T = 1/2
the bracket is the familiar difference of the two exchange paths.

Writing Psi as a 2-D Fourier transform over (tau1p, tau2p) and applying
Parseval gives the rate used throughout (normalized by (2 pi)^2):

    R_c(D) = 4 (R^2 + T^2) N - 8 R T K(D)
    N    = int |F(w, w~)|^2
    K(D) = int F(w, w~) conj(F(w~, w)) exp(-i (w - w~) D)

K is real for every spectrum.  The large-|D| asymptote of the balanced case
is 2N, the normalization of every curve.  :func:`rate_timedomain`
integrates |Psi|^2 directly and serves as an independent check.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .curves import CoincidenceCurve
from .errors import (
    DomainError,
    NumericalConsistencyError,
    UnsupportedDecompositionError,
)
from .interferometer import BeamSplitter, Geometry, delays, mix_amplitudes
from .quadrature import (
    DEFAULT_TOL,
    NODES_PER_PERIOD,
    MIN_NODES,
    TRUNCATION_WIDTHS,
    QuadratureGrid,
    auto_grid,
    fourier_2d,
    integrate_2d,
)
from .spectra import UNIT_DENSITY, JointSpectrum, SpectralDensity, asymmetry_G, eval_F

__all__ = [
    "BiphotonSystem",
    "wavepacket",
    "wavepacket_at_times",
    "psi_split",
    "norm",
    "exchange_overlap",
    "rate_spectral",
    "rate_normalized",
    "rate_timedomain",
    "rate_decomposition",
    "component_rate",
    "basis_pair_wavepacket",
    "asymmetry_norm",
    "sweep",
]

NEGATIVE_SLACK = 1e-10
_TWO_PI_SQ = (2.0 * math.pi) ** 2


@dataclass(frozen=True)
class BiphotonSystem:
    """Spectrum, source density, splitter and the fixed detector arms s2, l2."""

    spectrum: JointSpectrum
    density: SpectralDensity = UNIT_DENSITY
    splitter: BeamSplitter = BeamSplitter()
    s2: float = 0.0
    l2: float = 0.0
    tol: float = DEFAULT_TOL

    def F(self, w, wt):
        return eval_F(self.spectrum, self.density, w, wt)

    def geometry(self, D: float) -> Geometry:
        return Geometry.for_path_difference(D, s2=self.s2, l2=self.l2)

    def grid(self, D_max: float = 0.0) -> QuadratureGrid:
        return auto_grid(self.spectrum, D_max, self.tol)

    def describe(self) -> str:
        parts = [self.spectrum.describe(), self.splitter.describe()]
        if not self.density.is_unit:
            parts.append(f"g={self.density.label}")
        return ";".join(parts)


def _path_weights(splitter: BeamSplitter):
    m = mix_amplitudes(splitter)
    # exchange: b -> D1, a -> D2 (primed delays); direct: a -> D1, b -> D2
    return m[0, 1] * m[1, 0], m[0, 0] * m[1, 1]


def _check_rate(value: float, scale: float) -> float:
    if value < -NEGATIVE_SLACK * scale:
        raise NumericalConsistencyError(
            f"coincidence rate {value!r} is negative beyond round-off (scale {scale!r})"
        )
    return max(value, 0.0)


def wavepacket(sys: BiphotonSystem, tau1p, tau2p, D, grid: Optional[QuadratureGrid] = None) -> complex:
    """Psi at the primed delays (tau1p, tau2p) for path difference D."""
    c_ex, c_dir = _path_weights(sys.splitter)
    tau1 = tau1p + D
    tau2 = tau2p - D
    if grid is None:
        grid = sys.grid(max(abs(tau1p), abs(tau2p)) + abs(D))

    def integrand(w, wt):
        return 2.0 * sys.F(w, wt) * (
            c_ex * np.exp(-1j * (wt * tau1p + w * tau2p))
            + c_dir * np.exp(-1j * (w * tau1 + wt * tau2))
        )

    return integrate_2d(grid, integrand).value


def wavepacket_at_times(sys: BiphotonSystem, geom: Geometry, t1: float, t2: float, grid=None) -> complex:
    """Psi(t1, t2) for an explicit geometry."""
    d = delays(geom, t1, t2)
    return wavepacket(sys, float(d.tau1p), float(d.tau2p), geom.D, grid)


def psi_split(sys: BiphotonSystem, tau1p, tau2p, D, grid=None):
    """Split Psi = Psi1 + Psi2 into an exchange-symmetric and an asymmetric part.

    Psi1 = int F exp(-i(w tau1p + w~ tau2p)) [1 - exp(-i(w - w~) D)]
    Psi2 = int G exp(-i(w tau2p + w~ tau1p)),   G(w, w~) = F(w, w~) - F(w~, w)

    Only defined for the balanced splitter.
    """
    if not sys.splitter.balanced:
        raise UnsupportedDecompositionError(
            f"the Psi1 + Psi2 split assumes R = T = 1/2, got {sys.splitter.describe()}"
        )
    if grid is None:
        grid = sys.grid(max(abs(tau1p), abs(tau2p)) + abs(D))

    def part1(w, wt):
        return (
            sys.F(w, wt)
            * np.exp(-1j * (w * tau1p + wt * tau2p))
            * (1.0 - np.exp(-1j * (w - wt) * D))
        )

    def part2(w, wt):
        return asymmetry_G(sys.spectrum, sys.density, w, wt) * np.exp(-1j * (w * tau2p + wt * tau1p))

    return integrate_2d(grid, part1).value, integrate_2d(grid, part2).value


def norm(sys: BiphotonSystem, grid=None) -> float:
    """N = int |F|^2."""
    grid = grid or sys.grid()
    return integrate_2d(grid, lambda w, wt: np.abs(sys.F(w, wt)) ** 2).value.real


def exchange_overlap(sys: BiphotonSystem, D: float, grid=None):
    """K(D) as a :class:`QuadResult`; the imaginary part is quadrature noise."""
    grid = grid or sys.grid(abs(D))

    def integrand(w, wt):
        return sys.F(w, wt) * np.conj(sys.F(wt, w)) * np.exp(-1j * (w - wt) * D)

    return integrate_2d(grid, integrand)


def _combine(splitter: BeamSplitter, n: float, k: float) -> float:
    r, t = splitter.R, splitter.T
    return 4.0 * (r * r + t * t) * n - 8.0 * r * t * k


def rate_spectral(sys: BiphotonSystem, D: float, grid=None, n=None) -> float:
    """Coincidence rate from the closed form 4(R^2+T^2) N - 8RT K(D).

    ``n`` may carry a precomputed N on the same grid.
    """
    grid = grid or sys.grid(abs(D))
    if n is None:
        n = norm(sys, grid)
    k = exchange_overlap(sys, D, grid).value.real
    return _check_rate(_combine(sys.splitter, n, k), 2.0 * n)


def rate_normalized(sys: BiphotonSystem, D: float, grid=None) -> float:
    """rate_spectral divided by the asymptote 2N."""
    grid = grid or sys.grid(abs(D))
    n = norm(sys, grid)
    return rate_spectral(sys, D, grid, n) / (2.0 * n)


def _time_box(sys: BiphotonSystem, D: float):
    spec = sys.spectrum
    reach = TRUNCATION_WIDTHS / spec.resolution
    span = abs(D) + spec.delay
    return -span - reach, span + reach


def _time_grids(sys: BiphotonSystem, D: float, freq_grid=None):
    lo, hi = _time_box(sys, D)
    fgrid = freq_grid or sys.grid(max(abs(lo), abs(hi)) + abs(D))
    span_w = max(fgrid.x_hi - fgrid.x_lo, fgrid.y_hi - fgrid.y_lo)
    n = max(MIN_NODES, int(math.ceil(NODES_PER_PERIOD * span_w * (hi - lo) / (2.0 * math.pi))))
    n += n % 2
    return fgrid, lo, hi, n


def rate_timedomain(
    sys: BiphotonSystem, D: float, geometry: Optional[Geometry] = None, freq_grid=None
) -> float:
    """Coincidence rate as the double integral of |Psi(t1, t2)|^2 / (2 pi)^2.

    Psi is computed from the frequency integral on ``freq_grid`` at every
    node of an outer Gauss-Legendre grid over detection times.  Slower than
    :func:`rate_spectral`; it exists to cross-check it.
    """
    geom = geometry or sys.geometry(D)
    if abs(geom.D - D) > 1e-12 * max(1.0, abs(D)):
        raise DomainError(f"geometry has D={geom.D!r}, requested D={D!r}")
    fgrid, lo, hi, n_t = _time_grids(sys, D, freq_grid)
    x, _ = fgrid.x_rule()
    y, _ = fgrid.y_rule()
    values = sys.F(x[:, None], y[None, :])
    c_ex, c_dir = _path_weights(sys.splitter)

    def intensity(t1, t2):
        d = delays(geom, t1[:, 0], t2[0, :])
        exchange = fourier_2d(fgrid, values, d.tau2p, d.tau1p).T
        direct = fourier_2d(fgrid, values, d.tau1, d.tau2)
        return np.abs(2.0 * (c_ex * exchange + c_dir * direct)) ** 2

    # the box is laid out in primed delays and shifted to detection times
    off1 = geom.l1 + geom.s2
    off2 = geom.s1 + geom.l2
    tgrid = QuadratureGrid(lo + off1, hi + off1, n_t, lo + off2, hi + off2, n_t, sys.tol)
    value = integrate_2d(tgrid, intensity).value.real / _TWO_PI_SQ
    n = norm(sys, fgrid)
    return _check_rate(value, 2.0 * n)


class RateTerms(NamedTuple):
    psi1: float
    psi2: float
    cross: complex

    @property
    def total(self) -> float:
        return self.psi1 + self.psi2 + 2.0 * self.cross.real


def rate_decomposition(sys: BiphotonSystem, D: float, freq_grid=None) -> RateTerms:
    """The three pieces of int |Psi1 + Psi2|^2 over (tau1p, tau2p), each / (2 pi)^2.

    ``psi1`` grows from zero as |D| leaves 0, ``psi2`` is D-independent and
    the cross term is what may suppress the growth of the total.
    """
    if not sys.splitter.balanced:
        raise UnsupportedDecompositionError("rate_decomposition assumes R = T = 1/2")
    fgrid, lo, hi, n_t = _time_grids(sys, D, freq_grid)
    x, _ = fgrid.x_rule()
    y, _ = fgrid.y_rule()
    fv = sys.F(x[:, None], y[None, :])
    gv = asymmetry_G(sys.spectrum, sys.density, x[:, None], y[None, :])

    def parts(t1, t2):
        t1, t2 = t1[:, 0], t2[0, :]
        psi1 = fourier_2d(fgrid, fv, t1, t2) - fourier_2d(fgrid, fv, t1 + D, t2 - D)
        psi2 = fourier_2d(fgrid, gv, t2, t1).T
        return psi1, psi2

    tgrid = QuadratureGrid.square(lo, hi, n_t, sys.tol)
    i11 = integrate_2d(tgrid, lambda a, b: np.abs(parts(a, b)[0]) ** 2).value.real
    i22 = integrate_2d(tgrid, lambda a, b: np.abs(parts(a, b)[1]) ** 2).value.real
    i12 = integrate_2d(tgrid, lambda a, b: np.conj(parts(a, b)[0]) * parts(a, b)[1]).value
    return RateTerms(i11 / _TWO_PI_SQ, i22 / _TWO_PI_SQ, i12 / _TWO_PI_SQ)


def component_rate(freq1: float, freq2: float, D):
    """Long-window rate of one basis component |S(W, W~)>: 1 - cos((W - W~) D).

    Zero at D = 0 and at D_k = 2 k pi / (W - W~).
    """
    return 1.0 - np.cos((freq1 - freq2) * np.asarray(D, float))


def basis_pair_wavepacket(freq1, freq2, tau1p, tau2p, D, density: SpectralDensity = UNIT_DENSITY):
    """Closed-form Psi of |S(W, W~)> behind the balanced splitter.

    Psi = (phi(W, W~) + phi(W~, W)) g(W) g(W~) / (2 sqrt 2) with
    phi(W, W~) = exp(-i(W~ tau1p + W tau2p)) - exp(-i(W tau1 + W~ tau2)).
    """
    tau1p = np.asarray(tau1p, float)
    tau2p = np.asarray(tau2p, float)
    tau1 = tau1p + D
    tau2 = tau2p - D

    def phi(a, b):
        return np.exp(-1j * (b * tau1p + a * tau2p)) - np.exp(-1j * (a * tau1 + b * tau2))

    g = density(freq1) * density(freq2)
    return (phi(freq1, freq2) + phi(freq2, freq1)) * g / (2.0 * math.sqrt(2.0))


def asymmetry_norm(sys: BiphotonSystem, grid=None) -> float:
    """int |G|^2, which equals the balanced-splitter rate at D = 0."""
    grid = grid or sys.grid()
    value = integrate_2d(
        grid, lambda w, wt: np.abs(asymmetry_G(sys.spectrum, sys.density, w, wt)) ** 2
    ).value.real
    return max(value, 0.0)


def sweep(
    sys: BiphotonSystem, D_values: Sequence[float], grid=None, workers: int = 1
) -> CoincidenceCurve:
    """rate_spectral over ascending D values on one shared grid."""
    D_values = [float(d) for d in D_values]
    if any(not b > a for a, b in zip(D_values, D_values[1:])):
        raise DomainError("D values must be strictly increasing")
    if grid is None:
        grid = sys.grid(max((abs(d) for d in D_values), default=0.0))
    n = norm(sys, grid)
    meta = {"spec": sys.describe(), "quadrature": grid.describe()}
    if not D_values:
        return CoincidenceCurve((), 2.0 * n, meta)

    def one(d):
        return rate_spectral(sys, d, grid, n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rates = list(pool.map(one, D_values))
    else:
        rates = [one(d) for d in D_values]
    return CoincidenceCurve(tuple(zip(D_values, rates)), 2.0 * n, meta)
