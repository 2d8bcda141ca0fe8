"""Batch front-end.

    sim <mode> --config run.json [--out PATH] [--tol X]
        [--d-min X --d-max X --d-step X] [--R X --T X] [--sign singlet|triplet]

Modes: sweep, symmetry-check, polar-sweep, oracle-compare.  Flags override
the config file.  Exit codes: 0 success, 1 oracle comparison failed,
2 configuration error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import biphoton, oracles
from .curves import write_atomic
from .errors import (
    ConfigurationError,
    DomainError,
    NumericalConsistencyError,
    NumericalDomainError,
    TwoPhotonError,
)
from .interferometer import BeamSplitter
from .polarization import SINGLET, TRIPLET, AnalyzerPair, PolarizedBiphoton, polar_csv, polar_sweep
from .spectra import (
    AsymmetricGaussianProduct,
    RegularizedSpdc,
    SpectralDensity,
    SymmetricBasisPair,
    SymmetricGaussianProduct,
    TimeShiftedProduct,
    UNIT_DENSITY,
    load_tabulated,
)

MODES = ("sweep", "symmetry-check", "polar-sweep", "oracle-compare")
EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass
class RunConfig:
    mode: str
    spectrum: dict
    R: float = 0.5
    T: float = 0.5
    d_min: float = -5.0
    d_max: float = 5.0
    d_step: float = 0.1
    tol: float = 1e-8
    sign: str = "singlet"
    analyzers: list = field(default_factory=lambda: [[0.0, math.pi / 2]])
    density: Optional[dict] = None
    out: Optional[str] = None

    def validate(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}", "mode")
        for name in ("R", "T", "d_min", "d_max", "d_step", "tol"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
                raise ConfigurationError(f"{name} must be a finite number, got {value!r}", name)
        if not self.d_step > 0:
            raise ConfigurationError(f"D step must be positive, got {self.d_step}", "d_step")
        if self.d_max < self.d_min:
            raise ConfigurationError("D max must not be below D min", "d_max")
        if not 0 < self.tol <= 1e-2:
            raise ConfigurationError(f"tol must lie in (0, 1e-2], got {self.tol}", "tol")
        if self.sign not in ("singlet", "triplet"):
            raise ConfigurationError(f"sign must be singlet or triplet, got {self.sign!r}", "sign")
        if not isinstance(self.spectrum, dict) or "family" not in self.spectrum:
            raise ConfigurationError("spectrum needs a 'family' entry", "spectrum.family")
        return self

    def D_values(self):
        n = int(math.floor((self.d_max - self.d_min) / self.d_step + 1e-9))
        return [self.d_min + k * self.d_step for k in range(n + 1)]


_FAMILIES = {
    "symmetric_gaussian": (SymmetricGaussianProduct, ("center",), ("sigma",)),
    "asymmetric_gaussian": (AsymmetricGaussianProduct, ("center", "center2"), ("sigma",)),
    "time_shifted": (TimeShiftedProduct, ("center",), ("sigma", "shift")),
    "spdc": (RegularizedSpdc, ("pump",), ("sigma", "epsilon")),
    "basis_pair": (SymmetricBasisPair, ("freq1", "freq2"), ("peak_width",)),
}


def build_spectrum(cfg: dict):
    family = cfg.get("family")
    params = {k: v for k, v in cfg.items() if k != "family"}
    if family == "tabulated":
        if "path" not in params:
            raise ConfigurationError("tabulated spectrum needs 'path'", "spectrum.path")
        return load_tabulated(params["path"])
    if family == "asymmetric_gaussian" and "y_asym" in params:
        y = params.pop("y_asym")
        if "center" not in params:
            raise ConfigurationError("missing 'center'", "spectrum.center")
        params["center2"] = params["center"] * (1.0 - y)
    if family not in _FAMILIES:
        known = ", ".join(sorted(list(_FAMILIES) + ["tabulated"]))
        raise ConfigurationError(f"unknown spectrum family {family!r} (known: {known})", "spectrum.family")
    cls, required, optional = _FAMILIES[family]
    for key in params:
        if key not in required + optional:
            raise ConfigurationError(f"unexpected parameter {key!r} for {family}", f"spectrum.{key}")
    for key in required:
        if key not in params:
            raise ConfigurationError(f"missing {key!r} for {family}", f"spectrum.{key}")
    for key, value in params.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigurationError(f"{key} must be a number", f"spectrum.{key}")
    try:
        return cls(**params)
    except TwoPhotonError as exc:
        raise ConfigurationError(str(exc), "spectrum") from exc


def build_density(cfg: Optional[dict]):
    if cfg is None:
        return UNIT_DENSITY
    kind = cfg.get("kind")
    if kind == "unit":
        return UNIT_DENSITY
    if kind == "constant":
        return SpectralDensity.constant(float(cfg["value"]))
    if kind == "gaussian":
        return SpectralDensity.gaussian(float(cfg["center"]), float(cfg["width"]))
    raise ConfigurationError(f"unknown density kind {kind!r}", "density.kind")


def load_config(args) -> RunConfig:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config: {exc}", "config") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}", "config") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object", "config")
    if "spectrum" not in raw:
        raise ConfigurationError("missing spectrum section", "spectrum")
    splitter = raw.get("splitter", {})
    D = raw.get("D", {})
    cfg = RunConfig(
        mode=args.mode,
        spectrum=raw["spectrum"],
        R=splitter.get("R", 0.5),
        T=splitter.get("T", 0.5),
        d_min=D.get("min", -5.0),
        d_max=D.get("max", 5.0),
        d_step=D.get("step", 0.1),
        tol=raw.get("tol", 1e-8),
        sign=raw.get("sign", "singlet"),
        analyzers=raw.get("analyzers", [[0.0, math.pi / 2]]),
        density=raw.get("density"),
        out=raw.get("out"),
    )
    # flags win over the file
    for flag, name in (
        ("out", "out"), ("tol", "tol"), ("d_min", "d_min"), ("d_max", "d_max"),
        ("d_step", "d_step"), ("R", "R"), ("T", "T"), ("sign", "sign"),
    ):
        value = getattr(args, flag)
        if value is not None:
            setattr(cfg, name, value)
    if args.R is not None and args.T is None:
        cfg.T = 1.0 - args.R
    if args.T is not None and args.R is None:
        cfg.R = 1.0 - args.T
    return cfg.validate()


def _system(cfg: RunConfig):
    try:
        splitter = BeamSplitter(cfg.R, cfg.T)
    except ConfigurationError as exc:
        raise ConfigurationError(str(exc), "splitter") from exc
    return biphoton.BiphotonSystem(
        build_spectrum(cfg.spectrum), build_density(cfg.density), splitter, tol=cfg.tol
    )


def _emit(text: str, out: Optional[str]):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _report(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def run_sweep(cfg: RunConfig) -> int:
    curve = biphoton.sweep(_system(cfg), cfg.D_values())
    _emit(curve.to_csv(), cfg.out)
    return EXIT_OK


def run_symmetry_check(cfg: RunConfig) -> int:
    system = _system(cfg)
    grid = system.grid(0.0)
    n = biphoton.norm(system, grid)
    asym = biphoton.asymmetry_norm(system, grid)
    rate0 = biphoton.rate_spectral(system, 0.0, grid, n)
    symmetric = asym < cfg.tol * n and rate0 < cfg.tol * n
    _emit(
        _report(
            {
                "spec": system.describe(),
                "N": n,
                "normalization": 2.0 * n,
                "asymmetry_norm": asym,
                "rate0": rate0,
                "rate0_normalized": rate0 / (2.0 * n),
                "tol": cfg.tol,
                "verdict": "symmetric" if symmetric else "asymmetric",
            }
        ),
        cfg.out,
    )
    return EXIT_OK


def run_polar_sweep(cfg: RunConfig) -> int:
    pairs = []
    for i, pair in enumerate(cfg.analyzers):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ConfigurationError("each analyzer entry must be [theta1, theta2]", f"analyzers[{i}]")
        pairs.append(AnalyzerPair(float(pair[0]), float(pair[1])))
    if not (cfg.R == 0.5 and cfg.T == 0.5):
        raise ConfigurationError("the polarized setup is defined for R = T = 1/2 only", "splitter")
    system = _system(cfg)
    pb = PolarizedBiphoton(system.spectrum, SINGLET if cfg.sign == "singlet" else TRIPLET, system.density, cfg.tol)
    _emit(polar_csv(polar_sweep(pb, pairs, cfg.D_values())), cfg.out)
    return EXIT_OK


def _oracle_curve(system, D):
    spec = system.spectrum
    if isinstance(spec, SymmetricGaussianProduct):
        return oracles.symmetric_gaussian_rc(spec.sigma, D)
    if isinstance(spec, AsymmetricGaussianProduct):
        y = 1.0 - spec.center2 / spec.center
        return oracles.asymmetric_gaussian_rc(spec.center, y, spec.sigma, D)
    if isinstance(spec, TimeShiftedProduct):
        return oracles.symmetric_gaussian_rc(spec.sigma, D + oracles.TIME_SHIFT_SIGN * spec.shift)
    raise ConfigurationError(f"no closed form for {spec.kind}", "spectrum.family")


def run_oracle_compare(cfg: RunConfig) -> int:
    system = _system(cfg)
    if not system.splitter.balanced:
        raise ConfigurationError("closed forms exist for R = T = 1/2 only", "splitter")
    if not system.density.is_unit:
        raise ConfigurationError("closed forms assume a unit spectral density", "density")
    D = np.array(cfg.D_values())
    expected = _oracle_curve(system, D)
    curve = biphoton.sweep(system, D)
    deviation = np.abs(curve.rates_normalized - expected)
    worst = int(np.argmax(deviation)) if deviation.size else 0
    max_dev = float(deviation.max()) if deviation.size else 0.0
    passed = max_dev <= cfg.tol
    _emit(
        _report(
            {
                "spec": system.describe(),
                "points": int(D.size),
                "max_deviation": max_dev,
                "at_D": float(D[worst]) if D.size else None,
                "tol": cfg.tol,
                "passed": passed,
            }
        ),
        cfg.out,
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


RUNNERS = {
    "sweep": run_sweep,
    "symmetry-check": run_symmetry_check,
    "polar-sweep": run_polar_sweep,
    "oracle-compare": run_oracle_compare,
}


def run(cfg: RunConfig) -> int:
    return RUNNERS[cfg.mode](cfg)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sim", description="Two-photon interference coincidence-rate simulator")
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--tol", type=float)
    p.add_argument("--d-min", dest="d_min", type=float)
    p.add_argument("--d-max", dest="d_max", type=float)
    p.add_argument("--d-step", dest="d_step", type=float)
    p.add_argument("--R", type=float)
    p.add_argument("--T", type=float)
    p.add_argument("--sign", choices=("singlet", "triplet"))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(load_config(args))
    except ConfigurationError as exc:
        where = f" in field '{exc.field}'" if exc.field else ""
        print(f"sim: config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"sim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalConsistencyError, NumericalDomainError) as exc:
        print(f"sim: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
