"""Polarization-entangled pairs in front of two linear analyzers.

Input state  int f(w, w~) [a_AH^+(w) a_BV^+(w~) + sign * a_AV^+(w) a_BH^+(w~)] / sqrt 2 |0>
on a balanced splitter.  The coincidence rate factorizes into an analyzer
factor and a path-difference factor, R_c = xi(A1, A2) * eta(D).  For the
singlet sign (-1) the frequency bracket carries a relative plus sign, so

    eta_singlet(D) = 2N + 2K(D)      (peak at D = 0)
    eta_triplet(D) = 2N - 2K(D)      (the scalar dip)

with N, K exactly as in :mod:`twophoton.biphoton`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .biphoton import BiphotonSystem, _check_rate, exchange_overlap, norm
from .curves import CoincidenceCurve, format_number
from .errors import DomainError, PreconditionError
from .spectra import UNIT_DENSITY, JointSpectrum, SpectralDensity, asymmetry_G

__all__ = [
    "SINGLET",
    "TRIPLET",
    "AnalyzerPair",
    "PolarizedBiphoton",
    "xi",
    "eta",
    "coincidence_rate_polarized",
    "eta_curvature_at_zero",
    "polar_sweep",
    "polar_csv",
    "read_polar_csv",
]

SINGLET = -1
TRIPLET = +1
CURVATURE_STEP = 1e-3


@dataclass(frozen=True)
class AnalyzerPair:
    """Linear analyzers at angles theta1, theta2 (radians) from e_H."""

    theta1: float
    theta2: float

    def vectors(self):
        """(A1.e_H, A1.e_V), (A2.e_H, A2.e_V)."""
        return (
            (math.cos(self.theta1), math.sin(self.theta1)),
            (math.cos(self.theta2), math.sin(self.theta2)),
        )


@dataclass(frozen=True)
class PolarizedBiphoton:
    spectrum: JointSpectrum
    sign: int = SINGLET
    density: SpectralDensity = UNIT_DENSITY
    tol: float = 1e-8

    def __post_init__(self):
        if self.sign not in (SINGLET, TRIPLET):
            raise DomainError(f"sign must be -1 (singlet) or +1 (triplet), got {self.sign!r}")

    @property
    def scalar(self) -> BiphotonSystem:
        """The polarization-free system with the same spectrum on a 50-50 splitter."""
        return BiphotonSystem(self.spectrum, self.density, tol=self.tol)

    @property
    def sign_name(self) -> str:
        return "singlet" if self.sign == SINGLET else "triplet"


def xi(pair: AnalyzerPair, sign: int = SINGLET) -> float:
    """Analyzer factor |A1.e_V A2.e_H + sign * A1.e_H A2.e_V|^2 / 8.

    For linear analyzers this is sin^2(theta1 - theta2)/8 for the singlet,
    invariant under a joint rotation of both analyzers, and
    sin^2(theta1 + theta2)/8 for the triplet sign.  The angle form is used
    because it is exact at parallel and crossed analyzers.
    """
    if sign not in (SINGLET, TRIPLET):
        raise DomainError(f"sign must be -1 (singlet) or +1 (triplet), got {sign!r}")
    angle = pair.theta1 + pair.theta2 if sign == TRIPLET else pair.theta1 - pair.theta2
    return math.sin(angle) ** 2 / 8.0


def _eta_from(sign: int, n: float, k: float) -> float:
    # same arithmetic as the scalar rate at R = T = 1/2 for the triplet
    return 2.0 * n - 2.0 * k if sign == TRIPLET else 2.0 * n + 2.0 * k


def eta(pb: PolarizedBiphoton, D: float, grid=None) -> float:
    """Path-difference factor, 2N - sign * 2K(D)."""
    sys = pb.scalar
    grid = grid or sys.grid(abs(D))
    n = norm(sys, grid)
    k = exchange_overlap(sys, D, grid).value.real
    return _check_rate(_eta_from(pb.sign, n, k), 2.0 * n)


def coincidence_rate_polarized(pb: PolarizedBiphoton, pair: AnalyzerPair, D: float, grid=None) -> float:
    return xi(pair, pb.sign) * eta(pb, D, grid)


def eta_curvature_at_zero(pb: PolarizedBiphoton, h: float = CURVATURE_STEP, grid=None):
    """Second central difference of eta at D = 0.

    Returns ``(curvature, slope)`` where slope is the first central
    difference.  Only defined for exchange-symmetric spectra.
    """
    sys = pb.scalar
    grid = grid or sys.grid(h)
    x, _ = grid.x_rule()
    g = asymmetry_G(pb.spectrum, pb.density, x[:, None], x[None, :])
    scale = np.max(np.abs(sys.F(x[:, None], x[None, :])))
    if not pb.spectrum.symmetric and np.max(np.abs(g)) > 1e-12 * scale:
        raise PreconditionError("the curvature statement needs f(w, w~) = f(w~, w)")
    plus, zero, minus = (eta(pb, d, grid) for d in (h, 0.0, -h))
    return (plus - 2.0 * zero + minus) / (h * h), (plus - minus) / (2.0 * h)


def polar_sweep(pb: PolarizedBiphoton, pairs: Sequence[AnalyzerPair], D_values, grid=None):
    """One CoincidenceCurve of xi * eta per analyzer pair, sharing a grid."""
    D_values = [float(d) for d in D_values]
    if any(not b > a for a, b in zip(D_values, D_values[1:])):
        raise DomainError("D values must be strictly increasing")
    sys = pb.scalar
    grid = grid or sys.grid(max((abs(d) for d in D_values), default=0.0))
    n = norm(sys, grid)
    etas = [eta(pb, d, grid) for d in D_values]
    curves = []
    for pair in pairs:
        x = xi(pair, pb.sign)
        meta = {
            "spec": f"{sys.describe()};sign={pb.sign_name}",
            "theta1": pair.theta1,
            "theta2": pair.theta2,
            "xi": x,
            "eta": etas,
            "quadrature": grid.describe(),
        }
        curves.append(CoincidenceCurve(tuple((d, x * e) for d, e in zip(D_values, etas)), 2.0 * n, meta))
    return curves


def polar_csv(curves) -> str:
    """CSV with columns D,rate,rate_normalized,theta1,theta2,xi,eta."""
    lines = ["D,rate,rate_normalized,theta1,theta2,xi,eta"]
    spec = curves[0].metadata["spec"] if curves else ""
    norm_value = curves[0].normalization if curves else float("nan")
    for c in curves:
        m = c.metadata
        for (d, r), rn, e in zip(c.points, c.rates_normalized, m["eta"]):
            lines.append(
                ",".join(
                    format_number(v) for v in (d, r, rn, m["theta1"], m["theta2"], m["xi"], e)
                )
            )
    lines.append(f"# normalization={format_number(norm_value)}")
    lines.append(f"# spec={spec}")
    return "\n".join(lines) + "\n"


def read_polar_csv(path) -> dict:
    """Parse :func:`polar_csv` output into {(theta1, theta2): CoincidenceCurve}."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != "D,rate,rate_normalized,theta1,theta2,xi,eta":
        raise DomainError(f"{path}: not a polar-sweep CSV")
    rows, meta, normalization = {}, {}, None
    for line in lines[1:]:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key == "normalization":
                normalization = float(value)
            else:
                meta[key] = value
            continue
        d, r, _, t1, t2, x, e = (float(v) for v in line.split(","))
        rows.setdefault((t1, t2), []).append((d, r, x, e))
    if normalization is None:
        raise DomainError(f"{path}: missing '# normalization=' line")
    out = {}
    for key, pts in rows.items():
        m = dict(meta, theta1=key[0], theta2=key[1], xi=pts[0][2], eta=[p[3] for p in pts])
        out[key] = CoincidenceCurve(tuple((p[0], p[1]) for p in pts), normalization, m)
    return out
