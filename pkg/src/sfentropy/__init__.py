"""Shannon entropies of atomic structure factors for exactly solvable systems.

The package computes position- and momentum-space structure factors
(autocorrelation functions) of hydrogenic ions, the 1d harmonic
oscillator and a split-shell two-electron model, together with their
Shannon entropies, information distances and correlation measures, all
backed by certified adaptive quadrature and closed-form cross-checks.
"""

from .entropy import (
    EntropyReport,
    closed_form_entropy,
    compute_report,
    delta_measures,
    hydrogenic_b_constant,
    information_distance,
    mutual_information_densities,
    shannon_2d,
    shannon_radial,
)
from .errors import (
    ConfigError,
    DivergentNorm,
    InvalidModelParameters,
    NegativeDistribution,
    NonConvergent,
    NonFinite,
    SfentropyError,
)
from .factors import (
    PositivityReport,
    StructureFactor1D,
    StructureFactor2D,
    factor_B,
    factor_B2,
    factor_F,
    factor_F2,
    one_electron_B,
    one_electron_F,
    positivity_scan,
    two_electron_B,
    two_electron_F,
    unity_normalize,
)
from .models import HarmonicOscillator1D, HydrogenicAtom, SplitShellModel
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    bessel_j0_transform,
    fourier_cos_transform,
    integrate_2d_radial,
    integrate_radial,
)
from .variational import EnergyBreakdown, OptimizationResult, energy, optimize

__version__ = "0.1.0"

__all__ = [
    "EntropyReport",
    "closed_form_entropy",
    "compute_report",
    "delta_measures",
    "hydrogenic_b_constant",
    "information_distance",
    "mutual_information_densities",
    "shannon_2d",
    "shannon_radial",
    "ConfigError",
    "DivergentNorm",
    "InvalidModelParameters",
    "NegativeDistribution",
    "NonConvergent",
    "NonFinite",
    "SfentropyError",
    "PositivityReport",
    "StructureFactor1D",
    "StructureFactor2D",
    "factor_B",
    "factor_B2",
    "factor_F",
    "factor_F2",
    "one_electron_B",
    "one_electron_F",
    "positivity_scan",
    "two_electron_B",
    "two_electron_F",
    "unity_normalize",
    "HarmonicOscillator1D",
    "HydrogenicAtom",
    "SplitShellModel",
    "DEFAULT_SPEC",
    "IntegralResult",
    "QuadratureSpec",
    "bessel_j0_transform",
    "fourier_cos_transform",
    "integrate_2d_radial",
    "integrate_radial",
    "EnergyBreakdown",
    "OptimizationResult",
    "energy",
    "optimize",
]
