"""Shannon entropies of densities and structure factors, and the derived
correlation measures.

All entropies are in nats and refer to unity-normalized distributions.
The radial functionals are

    S[f] = -measure * int f(x) ln f(x) x^w dx          (one variable)
    S[f] = -(4 pi)^2 * int int f ln f x1^2 x2^2 dx dx  (two variables)

with (w, measure) = (2, 4 pi) for atomic systems and (0, 2) for the even
one-dimensional oscillator profiles.  The integrand f ln f is defined as
zero wherever f underflows, which is the exact x ln x -> 0 limit.

Derived quantities:

* information distances between a two-electron factor and the product of
  the one-electron ones, in each space.  The defining divergence integral
  is the primary form; the difference 2*S1 - S2 coincides with it only
  when the one-electron factor is the exact marginal of the two-electron
  one, which holds for pair densities but not for split-shell structure
  factors (see ``information_distance``).
* mutual informations of the pair densities, 2*S_rho - S_Gamma and
  2*S_pi - S_Pi, where the difference form is exact.
* delta measures against the hydrogenlike (equal-exponent) reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import factors as _factors
from .errors import NegativeDistribution
from .factors import (
    StructureFactor1D,
    StructureFactor2D,
    default_scan_grid,
    factor_B,
    factor_B2,
    factor_F,
    factor_F2,
    positivity_scan,
    unity_normalize,
)
from .models import HarmonicOscillator1D, HydrogenicAtom, SplitShellModel
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    dataclasses_replace,
    integrate_2d_radial,
    integrate_radial,
)

__all__ = [
    "EntropyReport",
    "shannon_radial",
    "shannon_2d",
    "factor_entropy",
    "closed_form_entropy",
    "hydrogenic_b_constant",
    "ONE_ELECTRON_ENTROPY_BOUND",
    "TWO_ELECTRON_ENTROPY_BOUND",
    "information_distance",
    "mutual_information_densities",
    "delta_measures",
    "density_entropy",
    "pair_density_entropy",
    "compute_report",
]

_PI = math.pi
_LN_PI = math.log(math.pi)
_LN_2 = math.log(2.0)
_UNDERFLOW = 1e-300

# Entropic uncertainty bounds for unity-normalized 3d densities.
ONE_ELECTRON_ENTROPY_BOUND = 3.0 * (1.0 + _LN_PI)
TWO_ELECTRON_ENTROPY_BOUND = 6.0 * (1.0 + _LN_PI)


def _neg_plogp(v: np.ndarray) -> np.ndarray:
    """-v ln v with the exact zero limit below the underflow threshold."""
    v = np.asarray(v, dtype=float)
    return np.where(v > _UNDERFLOW, -v * np.log(np.maximum(v, _UNDERFLOW)), 0.0)


def _screen(f, grid, abs_tol, what: str) -> None:
    report = positivity_scan(f, grid, abs_tol)
    if not report.is_positive:
        raise NegativeDistribution(
            f"{what} takes value {report.min_value:.3e} at {report.min_location}; "
            "its entropy is undefined"
        )


def shannon_radial(f, weight_power: int = 2, measure: float | None = None,
                   spec: QuadratureSpec = DEFAULT_SPEC, positivity_grid=None) -> float:
    """Entropy of a unity-normalized radial distribution.

    ``f`` is a vectorized callable; ``measure`` defaults to 4*pi for
    weight 2 and to 2 for weight 0.  The distribution is screened on a
    log grid first and NegativeDistribution is raised if it fails.
    """
    if measure is None:
        measure = 4.0 * _PI if weight_power == 2 else 2.0
    _screen(f, positivity_grid, spec.abs_tol, "radial distribution")
    value, _ = integrate_radial(lambda x: _neg_plogp(f(x)), weight_power, spec)
    return measure * value


def shannon_2d(f, spec: QuadratureSpec = DEFAULT_SPEC, positivity_grid=None) -> float:
    """Entropy of a unity-normalized two-variable radial distribution.

    The absolute tolerance is relaxed to 1e-10 for the nested integral;
    log-weighted 2d integrands are substantially costlier than 1d ones.
    """
    grid = positivity_grid if positivity_grid is not None else default_scan_grid()
    wrapped = StructureFactor2D("scan", f, None, "analytic")
    _screen(wrapped, grid, spec.abs_tol, "pair distribution")
    spec2 = dataclasses_replace(spec, abs_tol=max(spec.abs_tol, 1e-10))
    value, _ = integrate_2d_radial(lambda x1, x2: _neg_plogp(f(x1, x2)), spec2)
    return value


def factor_entropy(factor, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Entropy of a structure factor, normalizing it first if needed."""
    nf = unity_normalize(factor, spec)
    if isinstance(nf, StructureFactor2D):
        return shannon_2d(nf.evaluator, spec)
    return shannon_radial(nf.evaluator, nf.weight_power, nf.measure, spec)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def hydrogenic_b_constant(spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Additive constant in the hydrogenic B-entropy closed form.

    The B-side entropy only reduces to elementary terms up to a constant
    involving exponential-integral pieces, so the constant is pinned once
    per process by quadrature at Z = 1:  c = S_B(1) - (2 + ln pi + 6 ln 2).
    Its value is 0.036765...
    """
    b1 = unity_normalize(factor_B(HydrogenicAtom(1.0)), spec)
    s_b = shannon_radial(b1.evaluator, 2, 4.0 * _PI, spec)
    return s_b - (2.0 + _LN_PI + 6.0 * _LN_2)


def closed_form_entropy(kind: str, parameter: float) -> float:
    """Exact structure-factor entropies for the analytically solvable cases.

    kind is one of ``hydrogenic_F``, ``hydrogenic_B``, ``oscillator_F``,
    ``oscillator_B``; ``parameter`` is the nuclear charge Z or the
    oscillator frequency omega.
    """
    if parameter <= 0:
        raise ValueError(f"parameter must be positive, got {parameter}")
    ln_p = math.log(parameter)
    if kind == "hydrogenic_F":
        return 2.0 * (1.0 + _LN_PI) + 7.0 * _LN_2 + 3.0 * ln_p
    if kind == "hydrogenic_B":
        return 2.0 + _LN_PI + 6.0 * _LN_2 - 3.0 * ln_p + hydrogenic_b_constant()
    if kind == "oscillator_F":
        return 0.5 * (1.0 + _LN_PI) + _LN_2 + 0.5 * ln_p
    if kind == "oscillator_B":
        return 0.5 * (1.0 + _LN_PI) + _LN_2 - 0.5 * ln_p
    raise ValueError(f"unknown closed-form kind: {kind!r}")


def hydrogenic_entropy_sum() -> float:
    """Z-independent value of S_F + S_B across the hydrogenic series."""
    return closed_form_entropy("hydrogenic_F", 1.0) + closed_form_entropy("hydrogenic_B", 1.0)


def oscillator_entropy_sum() -> float:
    """Frequency-independent value of S_F + S_B for the 1d oscillator."""
    return (1.0 + _LN_PI) + 2.0 * _LN_2


# ---------------------------------------------------------------------------
# density entropies
# ---------------------------------------------------------------------------

def density_entropy(model, space: str, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Entropy of the unity-normalized one-electron density (rho or pi)."""
    n = model.n_electrons
    if isinstance(model, HarmonicOscillator1D):
        dens = model.position_density if space == "position" else model.momentum_density
        return shannon_radial(lambda x: dens(x) / n, 0, 2.0, spec)
    dens = model.charge_density if space == "position" else model.momentum_density
    return shannon_radial(lambda x: dens(x) / n, 2, 4.0 * _PI, spec)


def pair_density_entropy(model: SplitShellModel, space: str,
                         spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Entropy of the unity-normalized pair density (Gamma or Pi)."""
    pair = (model.pair_density_position if space == "position"
            else model.pair_density_momentum)
    npair = model.n_electrons * (model.n_electrons - 1)
    return shannon_2d(lambda x1, x2: pair(x1, x2) / npair, spec)


# ---------------------------------------------------------------------------
# correlation measures
# ---------------------------------------------------------------------------

def _normalized_factors(model, space: str, spec: QuadratureSpec):
    if space == "momentum":
        f1 = unity_normalize(factor_F(model), spec)
        f2 = unity_normalize(factor_F2(model), spec)
    elif space == "position":
        f1 = unity_normalize(factor_B(model), spec)
        f2 = unity_normalize(factor_B2(model), spec)
    else:
        raise ValueError(f"space must be 'position' or 'momentum', got {space!r}")
    return f1, f2


def information_distance(space: str, model: SplitShellModel,
                         spec: QuadratureSpec = DEFAULT_SPEC,
                         form: str = "kl") -> float:
    """Information distance of a two-electron structure factor from the
    product of the one-electron ones (I_B for position, I_F for momentum).

    form="kl" evaluates the defining divergence integral

        I = (4 pi)^2 int X2u(x1, x2) ln[ X2u(x1, x2) / (X1u(x1) X1u(x2)) ]
            x1^2 x2^2 dx1 dx2,

    which is non-negative by Gibbs' inequality and vanishes exactly for
    the non-interacting reference.  form="difference" returns 2*S1 - S2
    instead.  The two coincide only when X1u is the marginal of X2u; the
    split-shell factors do not satisfy that identity, and only the
    divergence form reproduces the expected ordering (position distance
    above momentum distance) across the series.
    """
    f1, f2 = _normalized_factors(model, space, spec)
    if form == "difference":
        s1 = shannon_radial(f1.evaluator, f1.weight_power, f1.measure, spec)
        s2 = shannon_2d(f2.evaluator, spec)
        return 2.0 * s1 - s2
    if form != "kl":
        raise ValueError(f"form must be 'kl' or 'difference', got {form!r}")

    ev1, ev2 = f1.evaluator, f2.evaluator

    def integrand(x1, x2):
        v = np.asarray(ev2(x1, x2), dtype=float)
        w = np.asarray(ev1(x1), dtype=float) * np.asarray(ev1(x2), dtype=float)
        ok = (v > _UNDERFLOW) & (w > _UNDERFLOW)
        ratio = np.log(np.maximum(v, _UNDERFLOW)) - np.log(np.maximum(w, _UNDERFLOW))
        # log ratios at the roundoff floor are noise, not signal; zeroing
        # them makes the factorizing reference vanish identically instead
        # of leaving an unintegrable noise field
        ok &= np.abs(ratio) > 1e-13
        return np.where(ok, v * ratio, 0.0)

    spec2 = dataclasses_replace(spec, abs_tol=max(spec.abs_tol, 1e-10))
    value, _ = integrate_2d_radial(integrand, spec2)
    return value


def mutual_information_densities(space: str, model: SplitShellModel,
                                 spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mutual information of the pair density: 2*S_rho - S_Gamma in position
    space, 2*S_pi - S_Pi in momentum space.

    For densities the one-electron distribution is the exact marginal of
    the pair distribution, so the difference form is the true mutual
    information and is non-negative.
    """
    if space not in ("position", "momentum"):
        raise ValueError(f"space must be 'position' or 'momentum', got {space!r}")
    s1 = density_entropy(model, space, spec)
    s2 = pair_density_entropy(model, space, spec)
    return 2.0 * s1 - s2


def delta_measures(model: SplitShellModel,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """Correlation-induced entropy shifts (delta_S_F, delta_S_B) against the
    hydrogenlike reference with both exponents equal to the nuclear charge."""
    f = unity_normalize(factor_F(model), spec)
    b = unity_normalize(factor_B(model), spec)
    s_f = shannon_radial(f.evaluator, 2, 4.0 * _PI, spec)
    s_b = shannon_radial(b.evaluator, 2, 4.0 * _PI, spec)
    return (
        s_f - closed_form_entropy("hydrogenic_F", model.Z),
        s_b - closed_form_entropy("hydrogenic_B", model.Z),
    )


# ---------------------------------------------------------------------------
# full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntropyReport:
    """Every entropic quantity of one model (None where not applicable).

    Invariants for a split-shell model: I_F, I_B, I_r, I_p >= 0;
    S_rho + S_pi >= 3(1 + ln pi); S_Gamma + S_Pi >= 6(1 + ln pi).
    """

    S_F: float
    S_B: float
    S_rho: float
    S_pi: float
    S_F2: float | None = None
    S_B2: float | None = None
    S_Gamma: float | None = None
    S_Pi: float | None = None
    I_F: float | None = None
    I_B: float | None = None
    I_r: float | None = None
    I_p: float | None = None
    delta_S_F: float | None = None
    delta_S_B: float | None = None
    model_params: dict | None = None


def compute_report(model, spec: QuadratureSpec = DEFAULT_SPEC) -> EntropyReport:
    """Assemble the full entropy report for a model via quadrature."""
    f1 = unity_normalize(factor_F(model), spec)
    b1 = unity_normalize(factor_B(model), spec)
    s_f = shannon_radial(f1.evaluator, f1.weight_power, f1.measure, spec)
    s_b = shannon_radial(b1.evaluator, b1.weight_power, b1.measure, spec)
    s_rho = density_entropy(model, "position", spec)
    s_pi = density_entropy(model, "momentum", spec)

    if isinstance(model, HydrogenicAtom):
        return EntropyReport(s_f, s_b, s_rho, s_pi, model_params={"Z": model.Z})
    if isinstance(model, HarmonicOscillator1D):
        return EntropyReport(s_f, s_b, s_rho, s_pi, model_params={"omega": model.omega})

    f2 = unity_normalize(factor_F2(model), spec)
    b2 = unity_normalize(factor_B2(model), spec)
    s_f2 = shannon_2d(f2.evaluator, spec)
    s_b2 = shannon_2d(b2.evaluator, spec)
    s_gamma = pair_density_entropy(model, "position", spec)
    s_pi2 = pair_density_entropy(model, "momentum", spec)
    d_f, d_b = delta_measures(model, spec)
    return EntropyReport(
        S_F=s_f,
        S_B=s_b,
        S_rho=s_rho,
        S_pi=s_pi,
        S_F2=s_f2,
        S_B2=s_b2,
        S_Gamma=s_gamma,
        S_Pi=s_pi2,
        I_F=information_distance("momentum", model, spec),
        I_B=information_distance("position", model, spec),
        I_r=2.0 * s_rho - s_gamma,
        I_p=2.0 * s_pi - s_pi2,
        delta_S_F=d_f,
        delta_S_B=d_b,
        model_params={
            "Z": model.Z,
            "Z1": model.Z1,
            "Z2": model.Z2,
            "C_N": model.C_N,
        },
    )
