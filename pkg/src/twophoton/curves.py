"""Sampled coincidence curves and their CSV serialization."""

from __future__ import annotations

import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["CoincidenceCurve", "format_number", "write_atomic", "read_curve_csv"]


def format_number(x) -> str:
    """17 significant digits: round-trips every double."""
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class CoincidenceCurve:
    """Ordered (D, rate) samples.

    ``normalization`` is the large-|D| asymptote 2N of the balanced,
    exchange-symmetric case, so ``rate / normalization`` tends to 1 there.
    """

    points: tuple
    normalization: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        points = tuple((float(d), float(r)) for d, r in self.points)
        for (d0, _), (d1, _) in zip(points, points[1:]):
            if not d1 > d0:
                raise DomainError(f"curve points must be strictly increasing in D ({d0} then {d1})")
        for d, r in points:
            if not (math.isfinite(r) and r >= 0):
                raise DomainError(f"rate at D={d} must be finite and nonnegative, got {r}")
        if points and not self.normalization > 0:
            raise DomainError(f"normalization must be positive, got {self.normalization}")
        object.__setattr__(self, "points", points)

    def __len__(self):
        return len(self.points)

    @property
    def D(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def rates(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])

    @property
    def rates_normalized(self) -> np.ndarray:
        if not self.points:
            return np.array([])
        return self.rates / self.normalization

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("D,rate,rate_normalized\n")
        for (d, r), rn in zip(self.points, self.rates_normalized):
            out.write(f"{format_number(d)},{format_number(r)},{format_number(rn)}\n")
        out.write(f"# normalization={format_number(self.normalization)}\n")
        out.write(f"# spec={self.metadata.get('spec', '')}\n")
        return out.getvalue()


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_curve_csv(path) -> CoincidenceCurve:
    """Parse a curve written by :meth:`CoincidenceCurve.to_csv` (extra columns ignored)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DomainError(f"{path}: empty file")
    header = lines[0].split(",")
    try:
        i_d, i_r = header.index("D"), header.index("rate")
    except ValueError:
        raise DomainError(f"{path}: header needs D and rate columns, got {lines[0]!r}") from None
    points, meta, normalization = [], {}, None
    for line in lines[1:]:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            if key == "normalization":
                normalization = float(value)
            else:
                meta[key] = value
            continue
        cols = line.split(",")
        points.append((float(cols[i_d]), float(cols[i_r])))
    if normalization is None:
        raise DomainError(f"{path}: missing '# normalization=' line")
    return CoincidenceCurve(tuple(points), normalization, meta)
