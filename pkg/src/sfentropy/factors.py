"""One- and two-electron structure factors with dual evaluation paths.

F(k) is the spherically averaged Fourier transform of the charge density
(momentum-transfer space); B(s) is the transform of the momentum density
(the position-space autocorrelation).  Every factor is available through
two independent routes:

* ``analytic`` -- closed forms assembled from the models' exponential /
  Lorentzian term expansions (fast; used by the entropy pipeline), and
* ``numeric`` -- direct j0 (or cosine, for the 1d oscillator) transforms
  of the densities via adaptive quadrature.

The agreement of the two routes is the package's main defense against
quadrature and algebra bugs, so neither is ever expressed in terms of
the other.

Normalization conventions: one-electron factors satisfy F(0) = B(0) = N;
two-electron factors carry the pair-count normalization
F(0,0) = B(0,0) = N(N-1)/2 (= 1 for two electrons).  ``unity_normalize``
rescales either kind so its weighted integral is exactly one, which is
what the entropy functionals require.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import quadrature
from .errors import DivergentNorm, NonConvergent, NonFinite
from .models import HarmonicOscillator1D, HydrogenicAtom, SplitShellModel
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    bessel_j0_transform,
    fourier_cos_transform,
    integrate_2d_radial,
    integrate_radial,
)

__all__ = [
    "StructureFactor1D",
    "StructureFactor2D",
    "PositivityReport",
    "factor_F",
    "factor_B",
    "factor_F2",
    "factor_B2",
    "one_electron_F",
    "one_electron_B",
    "two_electron_F",
    "two_electron_B",
    "unity_normalize",
    "positivity_scan",
    "default_scan_grid",
    "pair_transform_F",
    "pair_transform_B",
]

_PI = math.pi


# ---------------------------------------------------------------------------
# closed-form building blocks
# ---------------------------------------------------------------------------

def pair_transform_F(a: float, b: float, k) -> np.ndarray:
    """j0 transform (with 4*pi weight) of the 1s orbital product phi_a*phi_b.

    Equals 8 (ab)^{3/2} (a+b) / ((a+b)^2 + k^2)^2; reduces to the familiar
    16 a^4 / (4a^2 + k^2)^2 when a = b.  Its norm constant against
    4*pi*k^2 dk is 8 pi^2 (ab)^{3/2}.
    """
    k = np.asarray(k, dtype=float)
    c = a + b
    return 8.0 * (a * b) ** 1.5 * c / ((c * c + k * k) ** 2)


def pair_transform_B(a: float, b: float, s) -> np.ndarray:
    """Position autocorrelation of the 1s orbital pair (a, b).

    This is the j0 transform of phi_hat_a * phi_hat_b.  For a = b it is
    exp(-a s) (1 + a s + (a s)^2 / 3); for distinct exponents it follows
    from the partial-fraction split of the momentum-space product:

        32 (ab)^{5/2} [ (e^{-bs} - e^{-as}) / (s D^3)
                        + (e^{-as}/a + e^{-bs}/b) / (4 D^2) ],   D = b^2 - a^2.

    Its norm constant against 4*pi*s^2 ds is 64 pi / (ab)^{3/2}.  The
    nearly-degenerate case falls back to the symmetric closed form at the
    mean exponent, exact to well below double precision.
    """
    s = np.asarray(s, dtype=float)
    lo, hi = min(a, b), max(a, b)
    if hi - lo <= 1e-9 * hi:
        m = 0.5 * (a + b)
        t = m * s
        return np.exp(-t) * (1.0 + t + t * t / 3.0)
    d = hi * hi - lo * lo
    safe = np.where(s == 0.0, 1.0, s)
    # e^{-hi s} - e^{-lo s}; expm1 keeps the difference accurate at small s
    diff_over_s = np.where(
        s == 0.0,
        lo - hi,
        np.exp(-lo * s) * np.expm1(-(hi - lo) * s) / safe,
    )
    second = (np.exp(-lo * s) / lo + np.exp(-hi * s) / hi) / (4.0 * d * d)
    return 32.0 * (lo * hi) ** 2.5 * (diff_over_s / d**3 + second)


def _norm_F_pair(a: float, b: float) -> float:
    return 8.0 * _PI**2 * (a * b) ** 1.5


def _norm_B_pair(a: float, b: float) -> float:
    return 64.0 * _PI / (a * b) ** 1.5


def _two_electron_terms(model: SplitShellModel):
    """Separable expansion shared by both two-electron factors:
    coefficients and exponent pairs such that
    X2(x1, x2) = sum_t c_t * T(pair1_t; x1) * T(pair2_t; x2)."""
    s = model.orbital_overlap
    h = 1.0 / (2.0 * (1.0 + s * s))
    z1, z2 = model.Z1, model.Z2
    return (
        (h, (z1, z1), (z2, z2)),
        (h, (z2, z2), (z1, z1)),
        (2.0 * h, (z1, z2), (z1, z2)),
    )


# ---------------------------------------------------------------------------
# factor containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureFactor1D:
    """A radial structure factor together with its normalization contract.

    space
        "momentum" for F(k), "position" for B(s).
    evaluator
        Vectorized function of the conjugate variable.
    norm_constant
        Value of the weighted integral (measure * int f x^w dx) used for
        unity normalization; None until computed on the numeric path.
    source
        "analytic" or "numeric".
    weight_power / measure
        Radial weight and full-space measure prefactor: (2, 4*pi) for the
        atomic systems, (0, 2) for the even 1d oscillator profiles.
    """

    space: str
    evaluator: Callable
    norm_constant: float | None
    source: str
    weight_power: int = 2
    measure: float = 4.0 * _PI
    is_normalized: bool = False

    def __call__(self, x):
        return self.evaluator(x)


@dataclass(frozen=True)
class StructureFactor2D:
    """A two-variable structure factor; always symmetric under swap."""

    space: str
    evaluator: Callable
    norm_constant: float | None
    source: str
    is_normalized: bool = False

    def __call__(self, x1, x2):
        return self.evaluator(x1, x2)


@dataclass(frozen=True)
class PositivityReport:
    min_value: float
    min_location: float | tuple[float, float]
    is_positive: bool


# ---------------------------------------------------------------------------
# factor factories
# ---------------------------------------------------------------------------

def factor_F(model, path: str = "analytic", spec: QuadratureSpec = DEFAULT_SPEC) -> StructureFactor1D:
    """Momentum-space structure factor F of a model, F(0) = N."""
    if isinstance(model, HarmonicOscillator1D):
        w = model.omega
        if path == "analytic":
            ev = lambda k: np.exp(-np.asarray(k, dtype=float) ** 2 / (4.0 * w))
            norm = 2.0 * math.sqrt(_PI * w)
        else:
            ev = _pointwise(lambda k: fourier_cos_transform(model.position_density, k, spec))
            norm = None
        return StructureFactor1D("momentum", ev, norm, path, weight_power=0, measure=2.0)

    if isinstance(model, HydrogenicAtom):
        if path == "analytic":
            z = model.Z
            ev = lambda k: pair_transform_F(z, z, k)
            return StructureFactor1D("momentum", ev, _norm_F_pair(z, z), "analytic")
    elif isinstance(model, SplitShellModel):
        if path == "analytic":
            pairs = model.orbital_pairs
            ev = lambda k: sum(c * pair_transform_F(a, b, k) for c, a, b in pairs)
            norm = sum(c * _norm_F_pair(a, b) for c, a, b in pairs)
            return StructureFactor1D("momentum", ev, norm, "analytic")
    else:
        raise TypeError(f"unsupported model: {model!r}")

    ev = _pointwise(lambda k: bessel_j0_transform(model.charge_density, k, spec))
    return StructureFactor1D("momentum", ev, None, "numeric")


def factor_B(model, path: str = "analytic", spec: QuadratureSpec = DEFAULT_SPEC) -> StructureFactor1D:
    """Position-space structure factor B of a model, B(0) = N."""
    if isinstance(model, HarmonicOscillator1D):
        w = model.omega
        if path == "analytic":
            ev = lambda s: np.exp(-w * np.asarray(s, dtype=float) ** 2 / 4.0)
            norm = 2.0 * math.sqrt(_PI / w)
        else:
            ev = _pointwise(lambda s: fourier_cos_transform(model.momentum_density, s, spec))
            norm = None
        return StructureFactor1D("position", ev, norm, path, weight_power=0, measure=2.0)

    if isinstance(model, HydrogenicAtom):
        if path == "analytic":
            z = model.Z
            ev = lambda s: pair_transform_B(z, z, s)
            return StructureFactor1D("position", ev, _norm_B_pair(z, z), "analytic")
    elif isinstance(model, SplitShellModel):
        if path == "analytic":
            pairs = model.orbital_pairs
            ev = lambda s: sum(c * pair_transform_B(a, b, s) for c, a, b in pairs)
            norm = sum(c * _norm_B_pair(a, b) for c, a, b in pairs)
            return StructureFactor1D("position", ev, norm, "analytic")
    else:
        raise TypeError(f"unsupported model: {model!r}")

    ev = _pointwise(lambda s: bessel_j0_transform(model.momentum_density, s, spec))
    return StructureFactor1D("position", ev, None, "numeric")


def factor_F2(model: SplitShellModel, path: str = "analytic",
              spec: QuadratureSpec = DEFAULT_SPEC) -> StructureFactor2D:
    """Two-electron momentum-space factor, F(0,0) = 1 for two electrons."""
    if path == "analytic":
        terms = _two_electron_terms(model)
        ev = lambda k1, k2: sum(
            c * pair_transform_F(*p1, k1) * pair_transform_F(*p2, k2)
            for c, p1, p2 in terms
        )
        norm = sum(c * _norm_F_pair(*p1) * _norm_F_pair(*p2) for c, p1, p2 in terms)
        return StructureFactor2D("momentum", ev, norm, "analytic")
    ev = _pointwise2(lambda k1, k2: _nested_transform(
        model.pair_density_position, k1, k2, spec))
    return StructureFactor2D("momentum", ev, None, "numeric")


def factor_B2(model: SplitShellModel, path: str = "analytic",
              spec: QuadratureSpec = DEFAULT_SPEC) -> StructureFactor2D:
    """Two-electron position-space factor, B(0,0) = 1 for two electrons."""
    if path == "analytic":
        terms = _two_electron_terms(model)
        ev = lambda s1, s2: sum(
            c * pair_transform_B(*p1, s1) * pair_transform_B(*p2, s2)
            for c, p1, p2 in terms
        )
        norm = sum(c * _norm_B_pair(*p1) * _norm_B_pair(*p2) for c, p1, p2 in terms)
        return StructureFactor2D("position", ev, norm, "analytic")
    ev = _pointwise2(lambda s1, s2: _nested_transform(
        model.pair_density_momentum, s1, s2, spec))
    return StructureFactor2D("position", ev, None, "numeric")


def _pointwise(g: Callable[[float], float]) -> Callable:
    """Lift a per-point numeric transform to a vectorized evaluator."""

    def ev(x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([g(float(v)) for v in arr])
        return out if np.ndim(x) else float(out[0])

    return ev


def _pointwise2(g: Callable[[float, float], float]) -> Callable:
    def ev(x1, x2):
        a1 = np.atleast_1d(np.asarray(x1, dtype=float))
        a2 = np.atleast_1d(np.asarray(x2, dtype=float))
        a1, a2 = np.broadcast_arrays(a1, a2)
        out = np.array([g(float(u), float(v)) for u, v in zip(a1.ravel(), a2.ravel())])
        out = out.reshape(a1.shape)
        return out if (np.ndim(x1) or np.ndim(x2)) else float(out.ravel()[0])

    return ev


_INNER_CHUNK = 256  # outer nodes per vectorized inner transform


def _nested_transform(pair_density, x1: float, x2: float, spec: QuadratureSpec) -> float:
    """Numeric two-electron factor: outer j0 transform of the inner one.

    The inner transform over the second coordinate is evaluated for all
    nodes the outer quadrature requests in chunked vectorized passes; the
    pair density enters with the pair-count normalization (density / 2).
    The outer error estimator cannot see below the inner tolerance, so
    the outer runs at a few-1e-9 target while the inner runs three
    decades tighter; a 10-decade envelope cutoff keeps the momentum-space
    half-period count affordable.  The dual-path contract for nested
    factors is 1e-6, leaving two orders of headroom.
    """
    outer_spec = replace(
        spec,
        rel_tol=max(spec.rel_tol, 1e-8),
        abs_tol=max(spec.abs_tol, 1e-9),
        tail_cutoff_decades=min(spec.tail_cutoff_decades, 10.0),
    )
    inner_spec = replace(
        outer_spec,
        rel_tol=1e-3 * outer_spec.rel_tol,
        abs_tol=1e-5 * outer_spec.abs_tol,
    )

    def inner_profile(r1: np.ndarray) -> np.ndarray:
        pieces = []
        for j in range(0, len(r1), _INNER_CHUNK):
            block = r1[j:j + _INNER_CHUNK]

            def fvec(r2: np.ndarray) -> np.ndarray:
                return 0.5 * np.asarray(
                    pair_density(block[:, None], r2[None, :]), dtype=float
                )

            vals, _ = quadrature._bessel_j0_transform_vector(fvec, x2, inner_spec)
            pieces.append(vals)
        return np.concatenate(pieces)

    return bessel_j0_transform(inner_profile, x1, outer_spec)


# ---------------------------------------------------------------------------
# point operations
# ---------------------------------------------------------------------------

def one_electron_F(model, k, path: str = "analytic", spec: QuadratureSpec = DEFAULT_SPEC):
    """F(k) for any model; ``path`` selects the analytic or numeric route."""
    return factor_F(model, path, spec)(k)


def one_electron_B(model, s, path: str = "analytic", spec: QuadratureSpec = DEFAULT_SPEC):
    """B(s) for any model."""
    return factor_B(model, path, spec)(s)


def two_electron_F(model: SplitShellModel, k1, k2, path: str = "analytic",
                   spec: QuadratureSpec = DEFAULT_SPEC):
    """F(k1, k2) for a split-shell model; symmetric, F(0,0) = 1."""
    return factor_F2(model, path, spec)(k1, k2)


def two_electron_B(model: SplitShellModel, s1, s2, path: str = "analytic",
                   spec: QuadratureSpec = DEFAULT_SPEC):
    """B(s1, s2) for a split-shell model; symmetric, B(0,0) = 1."""
    return factor_B2(model, path, spec)(s1, s2)


# ---------------------------------------------------------------------------
# normalization and screening
# ---------------------------------------------------------------------------

def unity_normalize(factor, spec: QuadratureSpec = DEFAULT_SPEC):
    """Rescale a factor so its weighted integral equals one.

    Analytic factors carry their norm constants already; numeric ones have
    the norm integral evaluated here, which is only feasible when every
    pointwise transform the tail scan requests converges (the entropy
    pipeline always normalizes analytic factors).  Raises DivergentNorm
    if the integral cannot be computed or is not positive and finite.
    """
    if factor.is_normalized:
        return factor

    norm = factor.norm_constant
    if norm is None:
        try:
            if isinstance(factor, StructureFactor2D):
                norm = integrate_2d_radial(factor.evaluator, spec).value
            else:
                norm = factor.measure * integrate_radial(
                    factor.evaluator, factor.weight_power, spec
                ).value
        except (NonConvergent, NonFinite) as exc:
            raise DivergentNorm(f"normalization integral failed: {exc}") from exc
    if not (math.isfinite(norm) and norm > 0.0):
        raise DivergentNorm(f"normalization integral is {norm}")

    ev = factor.evaluator
    if isinstance(factor, StructureFactor2D):
        scaled = lambda x1, x2, _n=norm: ev(x1, x2) / _n
    else:
        scaled = lambda x, _n=norm: ev(x) / _n
    return replace(factor, evaluator=scaled, norm_constant=norm, is_normalized=True)


def default_scan_grid(lo: float = 1e-3, hi: float = 30.0, n: int = 200) -> np.ndarray:
    """Log-spaced screening abscissas covering all visible factor structure."""
    return np.logspace(math.log10(lo), math.log10(hi), n)


def positivity_scan(factor, grid=None, abs_tol: float | None = None) -> PositivityReport:
    """Scan a factor (or bare callable) for negative values on a grid.

    2d factors are scanned on the tensor product of the grid with itself.
    ``is_positive`` tolerates values above -abs_tol, so that roundoff-level
    excursions do not disqualify a manifestly positive distribution.
    """
    if grid is None:
        grid = default_scan_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("scan grid must be non-empty")
    if abs_tol is None:
        abs_tol = DEFAULT_SPEC.abs_tol

    if isinstance(factor, StructureFactor2D):
        vals = np.asarray(factor.evaluator(grid[:, None], grid[None, :]), dtype=float)
        flat = int(np.argmin(vals))
        i, j = np.unravel_index(flat, vals.shape)
        m = float(vals[i, j])
        return PositivityReport(m, (float(grid[i]), float(grid[j])), m > -abs_tol)

    ev = factor.evaluator if isinstance(factor, StructureFactor1D) else factor
    vals = np.asarray(ev(grid), dtype=float)
    i = int(np.argmin(vals))
    m = float(vals[i])
    return PositivityReport(m, float(grid[i]), m > -abs_tol)
