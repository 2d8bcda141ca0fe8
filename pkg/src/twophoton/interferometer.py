"""Interferometer geometry, beam-splitter mixing and the delay coordinates.

Sources a and b feed the beam splitter along paths of length s1 (aO) and
l1 (bO); detectors D1 and D2 sit at distances s2 and l2 from it.  With
c = 1 the retarded times are

    tau1  = t1 - (s1 + s2)      tau2  = t2 - (l1 + l2)
    tau1p = t1 - (l1 + s2)      tau2p = t2 - (s1 + l2)

so that tau1 - tau1p = tau2p - tau2 = D = l1 - s1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidBeamSplitterError

__all__ = ["Geometry", "BeamSplitter", "DelayCoordinates", "delays", "mix_amplitudes"]

_UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class Geometry:
    s1: float = 0.0
    l1: float = 0.0
    s2: float = 0.0
    l2: float = 0.0

    def __post_init__(self):
        for name in ("s1", "l1", "s2", "l2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"path length {name} must be finite and nonnegative, got {value}")

    @property
    def D(self) -> float:
        """Optical path difference l1 - s1."""
        return self.l1 - self.s1

    @classmethod
    def for_path_difference(cls, D: float, s2: float = 0.0, l2: float = 0.0, base: float = 0.0):
        """Geometry with the requested D, keeping every length nonnegative."""
        s1 = base + max(0.0, -D)
        return cls(s1=s1, l1=s1 + D, s2=s2, l2=l2)


class DelayCoordinates(NamedTuple):
    tau1: np.ndarray
    tau1p: np.ndarray
    tau2: np.ndarray
    tau2p: np.ndarray


def delays(geom: Geometry, t1, t2) -> DelayCoordinates:
    """Retarded times of the four source-to-detector paths (c = 1)."""
    t1 = np.asarray(t1, float)
    t2 = np.asarray(t2, float)
    return DelayCoordinates(
        tau1=t1 - (geom.s1 + geom.s2),
        tau1p=t1 - (geom.l1 + geom.s2),
        tau2=t2 - (geom.l1 + geom.l2),
        tau2p=t2 - (geom.s1 + geom.l2),
    )


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless splitter with reflectivity R and transmissivity T (R + T = 1)."""

    R: float = 0.5
    T: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.R <= 1.0 and 0.0 <= self.T <= 1.0):
            raise InvalidBeamSplitterError(
                f"R and T must lie in [0, 1], got R={self.R}, T={self.T}", field="splitter"
            )
        if abs(self.R + self.T - 1.0) > _UNITARITY_TOL:
            raise InvalidBeamSplitterError(
                f"lossless splitter needs R + T = 1, got {self.R + self.T!r}", field="splitter"
            )

    @classmethod
    def from_imbalance(cls, imbalance: float) -> "BeamSplitter":
        """Splitter with T - R = ``imbalance``."""
        return cls(R=0.5 * (1.0 - imbalance), T=0.5 * (1.0 + imbalance))

    @property
    def balanced(self) -> bool:
        return self.R == 0.5 and self.T == 0.5

    def describe(self) -> str:
        return f"R={self.R!r},T={self.T!r}"


def mix_amplitudes(bs: BeamSplitter) -> np.ndarray:
    """Mixing matrix M with E_k = sum_j M[k, j] E_j for detectors k = 1, 2 and sources j = a, b.

    Reflection carries the factor i:

        E1 = i sqrt(R) Ea(tau1)  + sqrt(T) Eb(tau1p)
        E2 = sqrt(T)   Ea(tau2p) + i sqrt(R) Eb(tau2)
    """
    if abs(bs.R + bs.T - 1.0) > _UNITARITY_TOL:
        raise InvalidBeamSplitterError(f"R + T = {bs.R + bs.T!r} != 1", field="splitter")
    r = 1j * math.sqrt(bs.R)
    t = math.sqrt(bs.T) + 0j
    return np.array([[r, t], [t, r]])
