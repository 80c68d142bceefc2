"""Exactly evaluable model systems and their one- and two-electron densities.

Three families are covered, all in hartree atomic units:

* ``HydrogenicAtom`` -- one electron bound to a point charge Z.
* ``HarmonicOscillator1D`` -- ground state of a one-dimensional oscillator.
* ``SplitShellModel`` -- two electrons in a symmetrized product of 1s
  orbitals with independent exponents Z1, Z2 (a minimal model of radial
  electron correlation in a helium-like ion).

The split-shell wavefunction is

    Psi(r1, r2) = C_N * (exp(-Z1 r1) exp(-Z2 r2) + exp(-Z2 r1) exp(-Z1 r2)),

normalized to one.  All of its densities expand into short sums of
exponential (position) or Lorentzian-squared (momentum) terms, which are
set up once at construction so that downstream quadrature never nests.

Conventions: one-electron densities integrate to the electron count N;
pair densities to N(N-1).  Models are immutable and all evaluators are
pure and numpy-vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidModelParameters

__all__ = [
    "HydrogenicAtom",
    "HarmonicOscillator1D",
    "SplitShellModel",
    "overlap_1s",
    "momentum_orbital",
    "DEGENERATE_EXPONENT_TOL",
]

_PI = math.pi

# Relative |Z1 - Z2| below which the split-shell expansion switches to the
# symmetric-limit branch to avoid 0/0 in the cross-term coefficients.
DEGENERATE_EXPONENT_TOL = 1e-9


def overlap_1s(a: float, b: float) -> float:
    """Overlap of two unit-normalized 1s orbitals with exponents a and b."""
    return 8.0 * (a * b) ** 1.5 / (a + b) ** 3


def momentum_orbital(zeta: float, p) -> np.ndarray:
    """Momentum-space profile of a unit 1s orbital with exponent zeta.

    phi_hat(p) = sqrt(8 zeta^5) / (pi (zeta^2 + p^2)^2); its square
    integrates to one against 4*pi*p^2 dp.
    """
    if zeta <= 0:
        raise InvalidModelParameters(f"orbital exponent must be positive, got {zeta}")
    p = np.asarray(p, dtype=float)
    return math.sqrt(8.0 * zeta**5) / (_PI * (zeta * zeta + p * p) ** 2)


@dataclass(frozen=True)
class HydrogenicAtom:
    """One-electron ion with nuclear charge Z."""

    Z: float
    n_electrons: int = 1

    def __post_init__(self) -> None:
        if self.Z <= 0:
            raise InvalidModelParameters(f"nuclear charge must be positive, got {self.Z}")

    def charge_density(self, r) -> np.ndarray:
        """rho(r) = (Z^3/pi) exp(-2 Z r), normalized to one electron."""
        r = np.asarray(r, dtype=float)
        return (self.Z**3 / _PI) * np.exp(-2.0 * self.Z * r)

    def momentum_density(self, p) -> np.ndarray:
        """pi(p) = 8 Z^5 / (pi^2 (Z^2 + p^2)^4), normalized to one electron."""
        p = np.asarray(p, dtype=float)
        return 8.0 * self.Z**5 / (_PI**2 * (self.Z**2 + p * p) ** 4)


@dataclass(frozen=True)
class HarmonicOscillator1D:
    """Ground state of a 1d harmonic oscillator with frequency omega.

    The position and momentum densities are unit-normalized Gaussians of
    variance 1/(2 omega) and omega/2.  Profiles are given on [0, inf)
    with full-line integrals equal to twice the half-line ones.
    """

    omega: float
    n_electrons: int = 1

    def __post_init__(self) -> None:
        if self.omega <= 0:
            raise InvalidModelParameters(f"frequency must be positive, got {self.omega}")

    def position_density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return math.sqrt(self.omega / _PI) * np.exp(-self.omega * x * x)

    def momentum_density(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return np.exp(-p * p / self.omega) / math.sqrt(_PI * self.omega)

    # alias so generic density code can treat x as the radial coordinate
    charge_density = position_density


@dataclass(frozen=True)
class SplitShellModel:
    """Two-electron ion with a split-shell (two-exponent) 1s^2 wavefunction.

    Setting Z1 = Z2 = Z gives the non-interacting reference whose
    densities are exactly twice the hydrogenic ones for charge Z.
    """

    Z: float
    Z1: float
    Z2: float
    n_electrons: int = 2

    def __post_init__(self) -> None:
        if min(self.Z, self.Z1, self.Z2) <= 0:
            raise InvalidModelParameters(
                f"charge and exponents must be positive, got Z={self.Z}, "
                f"Z1={self.Z1}, Z2={self.Z2}"
            )

    # -- derived constants -------------------------------------------------

    @cached_property
    def orbital_overlap(self) -> float:
        return overlap_1s(self.Z1, self.Z2)

    @cached_property
    def C_N(self) -> float:
        """Normalization constant of the raw exponential-product wavefunction."""
        return (self.Z1 * self.Z2) ** 1.5 / (
            _PI * math.sqrt(2.0 * (1.0 + self.orbital_overlap**2))
        )

    @cached_property
    def is_degenerate(self) -> bool:
        return abs(self.Z1 - self.Z2) <= DEGENERATE_EXPONENT_TOL * max(self.Z1, self.Z2)

    @cached_property
    def position_terms(self) -> tuple[tuple[float, float], ...]:
        """Exponential expansion of rho: pairs (weight, decay) with
        rho(r) = sum_j weight_j * exp(-decay_j * r), integrating to N=2."""
        s = self.orbital_overlap
        den = 1.0 + s * s
        return (
            (self.Z1**3 / (_PI * den), 2.0 * self.Z1),
            (self.Z2**3 / (_PI * den), 2.0 * self.Z2),
            (2.0 * s * (self.Z1 * self.Z2) ** 1.5 / (_PI * den), self.Z1 + self.Z2),
        )

    @cached_property
    def orbital_pairs(self) -> tuple[tuple[float, float, float], ...]:
        """Pair expansion (coefficient, a, b) shared by the momentum density
        and both pair densities: each term is a product of 1s orbitals with
        exponents a and b (coefficients sum patterns differ per quantity)."""
        s = self.orbital_overlap
        den = 1.0 + s * s
        return (
            (1.0 / den, self.Z1, self.Z1),
            (1.0 / den, self.Z2, self.Z2),
            (2.0 * s / den, self.Z1, self.Z2),
        )

    def non_interacting_reference(self) -> "SplitShellModel":
        """The Z1 = Z2 = Z member used as the hydrogenlike reference."""
        return SplitShellModel(self.Z, self.Z, self.Z)

    # -- wavefunction and densities ----------------------------------------

    def wavefunction(self, r1, r2) -> np.ndarray:
        """Psi(r1, r2); broadcasts over its arguments."""
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        return self.C_N * (
            np.exp(-self.Z1 * r1 - self.Z2 * r2) + np.exp(-self.Z2 * r1 - self.Z1 * r2)
        )

    def charge_density(self, r) -> np.ndarray:
        """One-electron charge density, normalized to N = 2."""
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for w, decay in self.position_terms:
            out += w * np.exp(-decay * r)
        return out

    def _orbital(self, zeta: float, p) -> np.ndarray:
        return momentum_orbital(zeta, p)

    def momentum_density(self, p) -> np.ndarray:
        """One-electron momentum density, normalized to N = 2."""
        p = np.asarray(p, dtype=float)
        ph1 = self._orbital(self.Z1, p)
        ph2 = self._orbital(self.Z2, p)
        s = self.orbital_overlap
        return (ph1 * ph1 + ph2 * ph2 + 2.0 * s * ph1 * ph2) / (1.0 + s * s)

    def pair_density_position(self, r1, r2) -> np.ndarray:
        """Gamma(r1, r2) = 2 |Psi|^2, normalized to N(N-1) = 2 and symmetric."""
        psi = self.wavefunction(r1, r2)
        return 2.0 * psi * psi

    def pair_density_momentum(self, p1, p2) -> np.ndarray:
        """Pi(p1, p2), the momentum-space twin of the position pair density."""
        p1 = np.asarray(p1, dtype=float)
        p2 = np.asarray(p2, dtype=float)
        s = self.orbital_overlap
        a1, b1 = self._orbital(self.Z1, p1), self._orbital(self.Z2, p1)
        a2, b2 = self._orbital(self.Z1, p2), self._orbital(self.Z2, p2)
        return (a1 * a1 * b2 * b2 + b1 * b1 * a2 * a2 + 2.0 * a1 * b1 * a2 * b2) / (
            1.0 + s * s
        )
