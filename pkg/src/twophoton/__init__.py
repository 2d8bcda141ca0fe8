"""Coincidence-rate simulator for two-photon interference behind a beam splitter."""

from .biphoton import (
    BiphotonSystem,
    asymmetry_norm,
    component_rate,
    psi_split,
    rate_normalized,
    rate_spectral,
    rate_timedomain,
    sweep,
    wavepacket,
)
from .curves import CoincidenceCurve
from .interferometer import BeamSplitter, Geometry, delays, mix_amplitudes
from .polarization import (
    SINGLET,
    TRIPLET,
    AnalyzerPair,
    PolarizedBiphoton,
    coincidence_rate_polarized,
    eta,
    xi,
)
from .spectra import (
    AsymmetricGaussianProduct,
    RegularizedSpdc,
    SpectralDensity,
    SymmetricBasisPair,
    SymmetricGaussianProduct,
    Tabulated,
    TimeShiftedProduct,
)

__version__ = "0.1.0"
