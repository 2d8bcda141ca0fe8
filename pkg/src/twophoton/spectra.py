"""Two-photon distribution functions f(w, w~) and spectral densities g(w).

Units are natural: c = 1 and frequencies are measured in units of a
reference width, so path differences come out in units of c/sigma.

Every spectrum is an immutable callable ``spec(w, wt)`` that broadcasts
like a numpy ufunc.  The first argument is the frequency of the photon in
path mode A, the second the frequency of the photon in mode B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError

__all__ = [
    "JointSpectrum",
    "SymmetricGaussianProduct",
    "AsymmetricGaussianProduct",
    "TimeShiftedProduct",
    "RegularizedSpdc",
    "SymmetricBasisPair",
    "Tabulated",
    "SpectralDensity",
    "UNIT_DENSITY",
    "eval_f",
    "eval_F",
    "asymmetry_G",
    "symmetrize",
    "load_tabulated",
    "save_tabulated",
]


def _gauss(x, center, width):
    return np.exp(-((x - center) ** 2) / (2.0 * width * width))


def _normal(x, width):
    return np.exp(-(x * x) / (2.0 * width * width)) / (math.sqrt(2.0 * math.pi) * width)


def _scalar_or_array(value):
    value = np.asarray(value)
    return value[()] if value.ndim == 0 else value


class JointSpectrum:
    """Common interface of all distribution-function families.

    Subclasses provide ``__call__`` plus the support information that the
    quadrature sizing needs:

    ``centers``
        frequencies around which the spectrum is concentrated;
    ``width``
        Gaussian width used for truncation (the box covers +-8 widths
        around every center);
    ``resolution``
        narrowest feature that the integration nodes must resolve;
    ``delay``
        extra time delay carried in the phase of f, which adds to the
        oscillation the grid has to follow.
    """

    kind: str = "abstract"
    symmetric: bool = False

    def __call__(self, w, wt):
        raise NotImplementedError

    @property
    def centers(self) -> tuple:
        raise NotImplementedError

    @property
    def width(self) -> float:
        raise NotImplementedError

    @property
    def resolution(self) -> float:
        return self.width

    @property
    def delay(self) -> float:
        return 0.0

    @property
    def bounds(self):
        """Finite support box ``((lo, hi), (lo2, hi2))``, or None if unbounded."""
        return None

    def describe(self) -> str:
        return self.kind


@dataclass(frozen=True)
class SymmetricGaussianProduct(JointSpectrum):
    """Two identical Gaussian pulses, f = f1(w) f1(w~)."""

    center: float
    sigma: float = 1.0

    kind = "symmetric_gaussian"
    symmetric = True

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def __call__(self, w, wt):
        return _scalar_or_array(
            _gauss(np.asarray(w, float), self.center, self.sigma)
            * _gauss(np.asarray(wt, float), self.center, self.sigma)
            + 0j
        )

    @property
    def centers(self):
        return (self.center,)

    @property
    def width(self):
        return self.sigma

    def describe(self):
        return f"symmetric_gaussian(center={self.center!r}, sigma={self.sigma!r})"


@dataclass(frozen=True)
class AsymmetricGaussianProduct(JointSpectrum):
    """Separable pair of Gaussians with different centers."""

    center: float
    center2: float
    sigma: float = 1.0

    kind = "asymmetric_gaussian"

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    @classmethod
    def from_asymmetry(cls, center, y_asym, sigma=1.0):
        """Build from the relative detuning ``y_asym = 1 - center2/center``."""
        return cls(center, center * (1.0 - y_asym), sigma)

    @property
    def symmetric(self):
        return self.center == self.center2

    def __call__(self, w, wt):
        return _scalar_or_array(
            _gauss(np.asarray(w, float), self.center, self.sigma)
            * _gauss(np.asarray(wt, float), self.center2, self.sigma)
            + 0j
        )

    @property
    def centers(self):
        return (self.center, self.center2)

    @property
    def width(self):
        return self.sigma

    def describe(self):
        return (
            f"asymmetric_gaussian(center={self.center!r}, center2={self.center2!r}, "
            f"sigma={self.sigma!r})"
        )


@dataclass(frozen=True)
class TimeShiftedProduct(JointSpectrum):
    """Identical pulses, the one in mode A created a time ``shift`` earlier.

    f = f1(w) f1(w~) exp(-i w shift)
    """

    center: float
    sigma: float = 1.0
    shift: float = 0.0

    kind = "time_shifted"

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    @property
    def symmetric(self):
        return self.shift == 0.0

    def __call__(self, w, wt):
        w = np.asarray(w, float)
        wt = np.asarray(wt, float)
        return _scalar_or_array(
            _gauss(w, self.center, self.sigma)
            * _gauss(wt, self.center, self.sigma)
            * np.exp(-1j * w * self.shift)
        )

    @property
    def centers(self):
        return (self.center,)

    @property
    def width(self):
        return self.sigma

    @property
    def delay(self):
        return abs(self.shift)

    def describe(self):
        return (
            f"time_shifted(center={self.center!r}, sigma={self.sigma!r}, "
            f"shift={self.shift!r})"
        )


@dataclass(frozen=True)
class RegularizedSpdc(JointSpectrum):
    """Down-conversion pair with the energy delta smeared to width ``epsilon``.

    f = N_eps(w + w~ - pump) * f1(w) f1(w~), where N_eps is a normalized
    Gaussian and f1 a Gaussian envelope of width ``sigma`` centered at
    pump/2.  ``epsilon`` defaults to sigma/100.
    """

    pump: float
    sigma: float = 1.0
    epsilon: Optional[float] = None

    kind = "spdc"
    symmetric = True

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", self.sigma / 100.0)
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")

    def __call__(self, w, wt):
        w = np.asarray(w, float)
        wt = np.asarray(wt, float)
        half = 0.5 * self.pump
        return _scalar_or_array(
            _normal(w + wt - self.pump, self.epsilon)
            * _gauss(w, half, self.sigma)
            * _gauss(wt, half, self.sigma)
            + 0j
        )

    @property
    def centers(self):
        return (0.5 * self.pump,)

    @property
    def width(self):
        return self.sigma

    @property
    def resolution(self):
        return min(self.sigma, self.epsilon)

    def describe(self):
        return f"spdc(pump={self.pump!r}, sigma={self.sigma!r}, epsilon={self.epsilon!r})"


@dataclass(frozen=True)
class SymmetricBasisPair(JointSpectrum):
    """Frequency-entangled basis state |S(W, W~)> as a narrow two-peak limit.

    Each delta is replaced by a normalized Gaussian of width ``peak_width``.
    The exact two-delta physics is available in closed form through
    :func:`twophoton.biphoton.basis_pair_wavepacket` and
    :func:`twophoton.biphoton.component_rate`.
    """

    freq1: float
    freq2: float
    peak_width: float = 0.05

    kind = "basis_pair"
    symmetric = True

    def __post_init__(self):
        if not self.peak_width > 0:
            raise DomainError(f"width must be positive, got {self.peak_width}")

    def __call__(self, w, wt):
        w = np.asarray(w, float)
        wt = np.asarray(wt, float)
        s = self.peak_width
        a = _normal(w - self.freq1, s) * _normal(wt - self.freq2, s)
        b = _normal(w - self.freq2, s) * _normal(wt - self.freq1, s)
        return _scalar_or_array((a + b) / math.sqrt(2.0) + 0j)

    @property
    def centers(self):
        return (self.freq1, self.freq2)

    @property
    def width(self):
        return self.peak_width

    def describe(self):
        return f"basis_pair(freq1={self.freq1!r}, freq2={self.freq2!r}, width={self.peak_width!r})"


@dataclass(frozen=True, eq=False)
class Tabulated(JointSpectrum):
    """Complex amplitudes on a rectangular grid, bilinearly interpolated.

    ``values[i, j]`` is f(omega[i], omega2[j]).
    """

    omega: np.ndarray
    omega2: np.ndarray
    values: np.ndarray
    label: str = "tabulated"

    kind = "tabulated"

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        omega2 = np.array(self.omega2, dtype=float)
        values = np.array(self.values, dtype=complex)
        for name, axis in (("omega", omega), ("omega2", omega2)):
            if axis.ndim != 1 or axis.size < 2:
                raise DomainError(f"axis {name} needs at least two points")
            if not np.all(np.isfinite(axis)):
                raise DomainError(f"axis {name} has non-finite bounds")
            if not np.all(np.diff(axis) > 0):
                raise DomainError(f"axis {name} must be strictly increasing")
        if values.shape != (omega.size, omega2.size):
            raise DomainError(
                f"values shape {values.shape} does not match axes "
                f"({omega.size}, {omega2.size})"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("tabulated values must be finite")
        for arr in (omega, omega2, values):
            arr.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "omega2", omega2)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "_interp", RegularGridInterpolator((omega, omega2), values, method="linear")
        )

    @property
    def square(self) -> bool:
        return self.omega.shape == self.omega2.shape and bool(np.all(self.omega == self.omega2))

    @property
    def symmetric(self):
        return self.square and bool(np.all(self.values == self.values.T))

    def __call__(self, w, wt):
        w, wt = np.broadcast_arrays(np.asarray(w, float), np.asarray(wt, float))
        for name, axis, q in (("omega", self.omega, w), ("omega2", self.omega2, wt)):
            bad = (q < axis[0]) | (q > axis[-1]) | ~np.isfinite(q)
            if np.any(bad):
                first = float(q[bad].flat[0])
                raise DomainError(
                    f"query {first!r} outside tabulated axis {name} "
                    f"[{axis[0]!r}, {axis[-1]!r}]"
                )
        out = self._interp(np.stack([w.ravel(), wt.ravel()], axis=-1)).reshape(w.shape)
        return _scalar_or_array(out)

    @property
    def bounds(self):
        return (
            (float(self.omega[0]), float(self.omega[-1])),
            (float(self.omega2[0]), float(self.omega2[-1])),
        )

    @property
    def centers(self):
        (a, b), (c, d) = self.bounds
        return (0.5 * (a + b), 0.5 * (c + d))

    @property
    def width(self):
        return float(min(np.min(np.diff(self.omega)), np.min(np.diff(self.omega2))))

    def describe(self):
        (a, b), (c, d) = self.bounds
        return (
            f"{self.label}(omega=[{a!r},{b!r}]x{self.omega.size}, "
            f"omega2=[{c!r},{d!r}]x{self.omega2.size})"
        )


@dataclass(frozen=True)
class SpectralDensity:
    """Mode density g(w) >= 0 of the source fields; defaults to 1."""

    func: Optional[Callable] = None
    label: str = "unit"

    def __call__(self, w):
        w = np.asarray(w, float)
        if self.func is None:
            return _scalar_or_array(np.ones_like(w))
        g = np.asarray(self.func(w), dtype=float)
        if np.any(g < 0) or not np.all(np.isfinite(g)):
            raise DomainError(f"spectral density {self.label} must be finite and nonnegative")
        return _scalar_or_array(np.broadcast_to(g, w.shape))

    @property
    def is_unit(self) -> bool:
        return self.func is None

    @classmethod
    def constant(cls, value: float) -> "SpectralDensity":
        if value < 0:
            raise DomainError("spectral density must be nonnegative")
        return cls(lambda w: np.full(np.shape(w), float(value)), f"constant({value!r})")

    @classmethod
    def gaussian(cls, center: float, width: float) -> "SpectralDensity":
        return cls(lambda w: _gauss(w, center, width), f"gaussian({center!r},{width!r})")


UNIT_DENSITY = SpectralDensity()


def eval_f(spec: JointSpectrum, w, wt):
    """Distribution function f(w, w~)."""
    return spec(w, wt)


def eval_F(spec: JointSpectrum, g: SpectralDensity, w, wt):
    """Combined amplitude F = g(w) f(w, w~) g(w~) / 2."""
    f = spec(w, wt)
    if g.is_unit:
        return 0.5 * f
    return 0.5 * g(w) * f * g(wt)


def asymmetry_G(spec: JointSpectrum, g: SpectralDensity, w, wt):
    """G(w, w~) = F(w, w~) - F(w~, w); vanishes identically for symmetric pairing."""
    return eval_F(spec, g, w, wt) - eval_F(spec, g, wt, w)


def symmetrize(spec: JointSpectrum, axis=None) -> Tabulated:
    """Project onto the symmetric subspace, f_s = (f(w, w~) + f(w~, w)) / 2.

    Parametric spectra are first sampled on ``axis`` (used for both
    frequencies); a Tabulated input must already be square.
    """
    if isinstance(spec, Tabulated):
        if axis is not None:
            raise DomainError("axis is only used to sample parametric spectra")
        if not spec.square:
            raise DomainError("symmetrize needs identical omega and omega2 axes")
        omega, values, label = spec.omega, spec.values, spec.label
    else:
        if axis is None:
            raise DomainError("a sampling axis is required for parametric spectra")
        omega = np.asarray(axis, float)
        values = spec(omega[:, None], omega[None, :])
        label = f"sampled[{spec.describe()}]"
    sym = 0.5 * (values + values.T)
    if not label.startswith("symmetrized"):
        label = f"symmetrized[{label}]"
    return Tabulated(omega, omega, sym, label=label)


def load_tabulated(path) -> Tabulated:
    """Read a grid file.

    Header ``# omega_min omega_max n_omega omega2_min omega2_max n_omega2``
    followed by ``n_omega * n_omega2`` lines of ``re im``, omega outer.
    """
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DomainError(f"{path}: missing '#' header line")
        parts = header[1:].split()
        if len(parts) != 6:
            raise DomainError(f"{path}: header needs 6 fields, got {len(parts)}")
        lo, hi, n, lo2, hi2, n2 = parts
        n, n2 = int(n), int(n2)
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (n * n2, 2):
        raise DomainError(f"{path}: expected {n * n2} rows of 're im', got {data.shape[0]}")
    values = (data[:, 0] + 1j * data[:, 1]).reshape(n, n2)
    omega = np.linspace(float(lo), float(hi), n)
    omega2 = np.linspace(float(lo2), float(hi2), n2)
    return Tabulated(omega, omega2, values, label=f"tabulated:{path}")


def save_tabulated(spec: Tabulated, path) -> None:
    """Write ``spec`` in the format read by :func:`load_tabulated` (uniform axes only)."""
    for name, axis in (("omega", spec.omega), ("omega2", spec.omega2)):
        if not np.allclose(np.diff(axis), (axis[-1] - axis[0]) / (axis.size - 1), rtol=1e-9):
            raise DomainError(f"axis {name} is not uniform; the grid file format needs uniform axes")
    (lo, hi), (lo2, hi2) = spec.bounds
    with open(path, "w") as fh:
        fh.write(f"# {lo!r} {hi!r} {spec.omega.size} {lo2!r} {hi2!r} {spec.omega2.size}\n")
        for z in spec.values.ravel():
            fh.write(f"{z.real:.17g} {z.imag:.17g}\n")
