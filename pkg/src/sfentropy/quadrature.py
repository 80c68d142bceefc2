"""Adaptive quadrature for semi-infinite radial integrals and j0 transforms.

All integrals here are of the form  I = int_0^inf g(x) dx  where g is a
radial integrand (a density or structure factor times a power of x, and
optionally an oscillatory kernel).  The strategy is:

1. Sample the envelope |f(x) x^w| on a fixed log grid to locate the point
   where it has fallen ``tail_cutoff_decades`` below its peak, then extend
   the cutoff until the analytic tail bound is small against the requested
   tolerance.  Entropy integrands of Lorentzian-type factors decay only
   like log(x)/x^2, so cutoffs of 1e10 and beyond are routine; the dyadic
   panelization makes large domains cheap.
2. Cover [0, R] with geometric Gauss-Legendre panels (for oscillatory
   kernels: one or more panels per half-period, split at the kernel
   zeros), estimate the error of each panel from an embedded lower-order
   rule, and bisect failing panels in batched refinement waves until the
   summed error meets max(rel_tol*|I|, abs_tol).

Integrands must be numpy-vectorized (accept a 1d array, return an array
of the same shape).  Vector-valued integrands are supported internally so
that nested 2d integrals can share panel evaluations across the nodes of
an outer panel.

Everything is a pure function of its inputs: no shared mutable state,
safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace as dataclasses_replace
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .errors import NonConvergent, NonFinite

__all__ = [
    "QuadratureSpec",
    "IntegralResult",
    "DEFAULT_SPEC",
    "integrate_radial",
    "bessel_j0_transform",
    "fourier_cos_transform",
    "integrate_2d_radial",
]

# Fixed envelope-sampling grid: 40 points per decade over [1e-6, 1e15].
_ENVELOPE_GRID = np.logspace(-6.0, 15.0, 21 * 40 + 1)
_EPS = np.finfo(float).eps
_UNDERFLOW = 1e-300
_MAX_WAVES = 64


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and panel limits governing every numerical integral.

    rel_tol / abs_tol
        Target for the reported error estimate: on success the estimate
        satisfies err <= max(rel_tol*|value|, abs_tol).
    panel_order
        Gauss-Legendre node count per panel; the embedded error estimate
        compares against a rule of roughly half the order.
    max_panels
        Hard cap on the total panel count of one 1d integral.
    tail_cutoff_decades
        How far (in factors of 10) the envelope must fall below its peak
        before the semi-infinite tail may be truncated.
    oscillatory_panels_per_period
        Panels placed between consecutive kernel zeros (one half-period).
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    panel_order: int = 15
    max_panels: int = 40000
    tail_cutoff_decades: float = 16.0
    oscillatory_panels_per_period: int = 1

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.panel_order < 2:
            raise ValueError("panel_order must be at least 2")
        if self.max_panels < 1:
            raise ValueError("max_panels must be at least 1")
        if self.tail_cutoff_decades <= 0:
            raise ValueError("tail_cutoff_decades must be positive")
        if self.oscillatory_panels_per_period < 1:
            raise ValueError("oscillatory_panels_per_period must be at least 1")


DEFAULT_SPEC = QuadratureSpec()


class IntegralResult(NamedTuple):
    value: float
    error: float


@lru_cache(maxsize=32)
def _gauss_rule(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


def _as_vector_integrand(f: Callable) -> Callable:
    """Wrap a scalar integrand so it returns shape (1, n) float arrays."""

    def fvec(x: np.ndarray) -> np.ndarray:
        out = np.asarray(f(x), dtype=float)
        if out.ndim == 0:
            out = np.full(x.shape, float(out))
        return out.reshape(1, -1)

    return fvec


def _eval_panels(fvec, a, b, spec, ncomp):
    """Evaluate high- and embedded low-order rules on panels [a_i, b_i].

    Returns (I_hi, err) with shape (ncomp, npanels).  A single integrand
    call covers both rules and every panel in the batch.
    """
    order = spec.panel_order
    lo_order = max(2, (order + 1) // 2)
    xh, wh = _gauss_rule(order)
    xl, wl = _gauss_rule(lo_order)

    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = np.concatenate(
        [
            mid[:, None] + half[:, None] * xh[None, :],
            mid[:, None] + half[:, None] * xl[None, :],
        ],
        axis=1,
    )  # (P, order + lo_order)

    vals = fvec(nodes.ravel())
    if vals.shape != (ncomp, nodes.size):
        raise ValueError(
            f"integrand returned shape {vals.shape}, expected {(ncomp, nodes.size)}"
        )
    if not np.all(np.isfinite(vals)):
        raise NonFinite("integrand produced NaN or Inf")

    vals = vals.reshape(ncomp, len(a), order + lo_order)
    i_hi = (vals[:, :, :order] * wh[None, None, :]).sum(axis=2) * half[None, :]
    i_lo = (vals[:, :, order:] * wl[None, None, :]).sum(axis=2) * half[None, :]
    return i_hi, np.abs(i_hi - i_lo)


def _refine_to_tolerance(fvec, edges, spec, ncomp, tail_bound, primary, l1_slack=0.0):
    """Batched adaptive bisection over an initial panelization.

    ``primary`` selects the components whose accuracy drives acceptance
    and refinement; the remaining components (used to carry error
    densities of nested integrals) are integrated on the same panels
    without influencing them.  ``l1_slack`` adds a tolerance floor
    proportional to the L1 norm of each component's panel contributions;
    the public entry points keep it at zero (strict contract), while
    nested inner integrals use it so that components whose integral
    cancels to zero stay achievable -- their raw error is still reported
    and carried into the enclosing integral's estimate.
    """
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    keep = b > a
    a, b = a[keep], b[keep]
    if len(a) == 0:
        return np.zeros(ncomp), np.zeros(ncomp)
    if len(a) > spec.max_panels:
        raise NonConvergent(
            f"initial panelization needs {len(a)} panels (max_panels={spec.max_panels})"
        )

    i_hi, err = _eval_panels(fvec, a, b, spec, ncomp)
    total_width = float(np.sum(b - a))

    for _ in range(_MAX_WAVES):
        value = i_hi.sum(axis=1)
        total_err = err.sum(axis=1) + tail_bound
        tau = np.maximum(spec.rel_tol * np.abs(value), spec.abs_tol)
        if l1_slack > 0.0:
            tau = np.maximum(tau, l1_slack * np.abs(i_hi).sum(axis=1))
        if np.all(total_err[primary] <= tau[primary]):
            if ncomp <= 4:  # compensated summation for the scalar paths
                value = np.array([math.fsum(i_hi[c]) for c in range(ncomp)])
            return value, total_err

        # Width-proportional per-component error budgets; panels whose
        # estimate sits at the roundoff floor of their own magnitude are
        # not refinable.
        share = (b - a) / total_width
        budget = tau[primary, None] * share[None, :]
        floor = 32.0 * _EPS * np.abs(i_hi[primary])
        bad = np.any(err[primary] > np.maximum(budget, floor), axis=0)
        n_bad = int(bad.sum())
        worst = float(np.max(total_err[primary] / tau[primary]))
        if n_bad == 0:
            raise NonConvergent(
                f"error estimate stalled at the roundoff floor ({worst:.2f}x over tolerance)"
            )
        if len(a) + n_bad > spec.max_panels:
            raise NonConvergent(
                f"max_panels={spec.max_panels} exhausted ({worst:.2f}x over tolerance)"
            )

        mid = 0.5 * (a[bad] + b[bad])
        new_a = np.concatenate([a[~bad], a[bad], mid])
        new_b = np.concatenate([b[~bad], mid, b[bad]])
        i_new, e_new = _eval_panels(fvec, np.concatenate([a[bad], mid]),
                                    np.concatenate([mid, b[bad]]), spec, ncomp)
        i_hi = np.concatenate([i_hi[:, ~bad], i_new], axis=1)
        err = np.concatenate([err[:, ~bad], e_new], axis=1)
        a, b = new_a, new_b

    raise NonConvergent("refinement did not converge within the wave limit")


def _locate_tail(fvec, weight_power, spec, ncomp):
    """Find the truncation point R and a bound on the discarded tail.

    The envelope max_c |f_c(x)| * x^w is sampled on the fixed log grid;
    R starts where the envelope has dropped ``tail_cutoff_decades`` below
    its peak and is pushed outward (in whole decades) until the tail
    bound 2*g(R)*R is small against the expected tolerance.  The bound
    is valid for envelopes decaying at least as fast as 1/x^2, which the
    integrand preconditions guarantee.
    """
    x = _ENVELOPE_GRID
    vals = fvec(x)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("integrand produced NaN or Inf on the envelope grid")
    env = np.abs(vals).max(axis=0) * x**weight_power

    peak = float(env.max())
    if peak <= _UNDERFLOW:
        return None, 0.0  # identically negligible integrand

    # Crude magnitude estimate for the relative-tolerance scale:
    # int g dx = int g(x) x dln(x), trapezoid in log space.
    dlnx = math.log(x[1] / x[0])
    i_est = float(np.sum(env * x) * dlnx)

    threshold = peak * 10.0 ** (-spec.tail_cutoff_decades)
    above = np.nonzero(env > threshold)[0]
    idx = min(int(above[-1]) + 1, len(x) - 1)

    tol = 0.25 * max(spec.rel_tol * i_est, spec.abs_tol)
    per_decade = 40
    while idx < len(x) - 1 and 2.0 * env[idx] * x[idx] > tol:
        idx = min(idx + per_decade, len(x) - 1)
    return float(x[idx]), 2.0 * float(env[idx] * x[idx])


def _geometric_edges(cutoff: float) -> np.ndarray:
    """Dyadic breakpoints [0, R*2^-60, ..., R/2, R] covering all scales."""
    levels = 60
    edges = cutoff * 2.0 ** np.arange(-levels, 1.0)
    return np.concatenate([[0.0], edges])


def _integrate_semi_infinite(fvec, weight_power, spec, ncomp, primary=None):
    if primary is None:
        primary = np.arange(ncomp)
    cutoff, tail_bound = _locate_tail(fvec, weight_power, spec, ncomp)
    if cutoff is None:
        return np.zeros(ncomp), np.zeros(ncomp)

    def weighted(xs):
        return fvec(xs) * xs**weight_power

    edges = _geometric_edges(cutoff)
    return _refine_to_tolerance(weighted, edges, spec, ncomp, tail_bound, primary)


def integrate_radial(f, weight_power: int, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Compute int_0^inf f(x) x^weight_power dx with a certified estimate.

    Parameters
    ----------
    f : callable
        Vectorized integrand, finite and integrable against x^w on
        [0, inf).
    weight_power : int
        Radial weight exponent, 0 or 2.
    spec : QuadratureSpec
        Tolerances and panel limits.

    Returns
    -------
    IntegralResult
        ``value`` and an ``error`` estimate satisfying
        err <= max(rel_tol*|value|, abs_tol).

    Raises
    ------
    NonConvergent
        Panel budget exhausted before the tolerance was met.
    NonFinite
        The integrand produced NaN or Inf.
    """
    if weight_power not in (0, 2):
        raise ValueError("weight_power must be 0 or 2")
    value, err = _integrate_semi_infinite(_as_vector_integrand(f), weight_power, spec, 1)
    return IntegralResult(float(value[0]), float(err[0]))


def _kernel_zero_edges(cutoff, first_zero, period, spec):
    """Panel edges splitting [0, cutoff] at the kernel zeros."""
    n_zeros = int(math.floor((cutoff - first_zero) / period)) + 1 if cutoff > first_zero else 0
    if n_zeros * spec.oscillatory_panels_per_period > spec.max_panels:
        raise NonConvergent(
            f"oscillatory partition needs {n_zeros} half-periods (max_panels={spec.max_panels})"
        )
    zeros = first_zero + period * np.arange(n_zeros)
    edges = np.concatenate([[0.0], zeros, [cutoff]])
    edges = np.unique(edges[edges <= cutoff])
    if spec.oscillatory_panels_per_period > 1:
        sub = np.linspace(0.0, 1.0, spec.oscillatory_panels_per_period + 1)[1:-1]
        a, b = edges[:-1], edges[1:]
        extra = (a[:, None] + (b - a)[:, None] * sub[None, :]).ravel()
        edges = np.sort(np.concatenate([edges, extra]))
    return edges


def _oscillatory_transform(fvec, q, kernel, weight_power, spec, ncomp, primary=None):
    """Core of the j0 / cosine transforms: int_0^inf f(x) kernel(qx) x^w dx.

    The domain is split at consecutive kernel zeros so that cancellation
    between half-periods is resolved panel by panel; panel contributions
    are accumulated with compensated summation.
    """
    if primary is None:
        primary = np.arange(ncomp)
    cutoff, tail_bound = _locate_tail(fvec, weight_power, spec, ncomp)
    if cutoff is None:
        return np.zeros(ncomp), np.zeros(ncomp)

    if kernel == "j0":
        kern = lambda xs: np.sinc(q * xs / math.pi)
        first_zero = math.pi / q
    else:  # cos
        kern = lambda xs: np.cos(q * xs)
        first_zero = 0.5 * math.pi / q
    period = math.pi / q

    # Alternating-sign tail: the remainder is bounded by one half-period
    # of the envelope; keep the cruder monotone bound if it is smaller.
    tail_bound = min(tail_bound, tail_bound * period / max(cutoff, period))

    def weighted(xs):
        return fvec(xs) * kern(xs) * xs**weight_power

    if first_zero >= cutoff:
        edges = _geometric_edges(cutoff)
    else:
        edges = _kernel_zero_edges(cutoff, first_zero, period, spec)
        # keep dyadic resolution near the origin where x^w curvature lives
        edges = np.unique(np.concatenate([edges, _geometric_edges(edges[1])]))

    value, err = _refine_to_tolerance(weighted, edges, spec, ncomp, tail_bound, primary)
    return value, err


def bessel_j0_transform(f, conjugate_value: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Zero-order spherical Bessel transform 4*pi*int f(x) j0(qx) x^2 dx.

    j0(t) = sin(t)/t with j0(0) = 1.  At q = 0 this reduces exactly to
    4*pi*integrate_radial(f, 2).  The integrand must decay at least
    exponentially or as an inverse power >= 4.
    """
    q = float(conjugate_value)
    if q < 0:
        raise ValueError("conjugate value must be non-negative")
    fvec = _as_vector_integrand(f)
    if q == 0.0:
        value, _ = _integrate_semi_infinite(fvec, 2, spec, 1)
    else:
        value, _ = _oscillatory_transform(fvec, q, "j0", 2, spec, 1)
    return 4.0 * math.pi * float(value[0])


def _bessel_j0_transform_vector(fvec, q, spec):
    """j0 transform of a vector-valued integrand; returns (values, errors).

    ``fvec(x)`` must return shape (ncomp, len(x)).  Used by nested
    two-variable transforms to evaluate the inner transform on all outer
    panel nodes at once.
    """
    probe = fvec(_ENVELOPE_GRID[:1])
    ncomp = probe.shape[0]
    if q == 0.0:
        vals, errs = _integrate_semi_infinite(fvec, 2, spec, ncomp)
    else:
        vals, errs = _oscillatory_transform(fvec, float(q), "j0", 2, spec, ncomp)
    return 4.0 * math.pi * vals, 4.0 * math.pi * errs


def fourier_cos_transform(f, q: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Full-line Fourier transform of an even profile: 2*int_0^inf f(x) cos(qx) dx."""
    q = float(q)
    if q < 0:
        raise ValueError("conjugate value must be non-negative")
    fvec = _as_vector_integrand(f)
    if q == 0.0:
        value, _ = _integrate_semi_infinite(fvec, 0, spec, 1)
    else:
        value, _ = _oscillatory_transform(fvec, q, "cos", 0, spec, 1)
    return 2.0 * float(value[0])


def _tail_cutoff_2d(f2, spec):
    """Per-axis truncation points for a two-variable radial integrand.

    The integrand magnitude is tabulated on a coarse log-log grid and
    collapsed into the two marginal envelopes

        E_i(x) = x^2 * int |f| x_other^2 dx_other,

    so that the discarded strip beyond a cutoff R obeys the same
    2*E(R)*R tail bound as the 1d case.  Returns (R1, R2, strip_bound).
    """
    x = _ENVELOPE_GRID[::2]  # 20 points per decade
    dlnx = math.log(x[1] / x[0])
    mag = np.abs(np.asarray(f2(x[:, None], x[None, :]), dtype=float))
    if not np.all(np.isfinite(mag)):
        raise NonFinite("integrand produced NaN or Inf on the envelope grid")
    if float(mag.max()) <= _UNDERFLOW:
        return None, None, 0.0

    # log-grid rectangle rule: int g(x) x^2 dx = sum g x^3 dln(x)
    weights = x**3 * dlnx
    env2 = (mag * weights[:, None]).sum(axis=0) * x**2  # envelope in x2
    env1 = (mag * weights[None, :]).sum(axis=1) * x**2  # envelope in x1
    i_est = float((env1 * x).sum() * dlnx)
    tol = 0.2 * max(spec.rel_tol * i_est, spec.abs_tol)

    def axis_cutoff(env):
        pk = float(env.max())
        if pk <= _UNDERFLOW:
            return float(x[0]), 0.0
        thr = pk * 10.0 ** (-spec.tail_cutoff_decades)
        above = np.nonzero(env > thr)[0]
        idx = min(int(above[-1]) + 1, len(x) - 1)
        while idx < len(x) - 1 and 2.0 * env[idx] * x[idx] > tol:
            idx = min(idx + 20, len(x) - 1)
        return float(x[idx]), 2.0 * float(env[idx] * x[idx])

    r1, bound1 = axis_cutoff(env1)
    r2, bound2 = axis_cutoff(env2)
    return r1, r2, bound1 + bound2


def integrate_2d_radial(f, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Compute (4*pi)^2 * double-int f(x1, x2) x1^2 x2^2 dx1 dx2.

    Nested adaptive quadrature: the outer integral over x1 treats the
    inner integral over x2 (evaluated for all nodes of an outer panel in
    a single vectorized pass) as its integrand.  Inner error estimates
    are integrated alongside the values so the reported error covers
    both nesting levels.

    ``f`` must broadcast: f(x1[:, None], x2[None, :]) -> (len(x1), len(x2)).
    """
    r1, r2, strip_bound = _tail_cutoff_2d(f, spec)
    scale = (4.0 * math.pi) ** 2
    if r1 is None:
        return IntegralResult(0.0, 0.0)

    # The outer error estimator cannot certify below the noise level of
    # the inner integrals, so the inner runs two decades tighter and the
    # outer keeps a margin of the total budget for the carried-along
    # inner error integral.
    inner_spec = dataclasses_replace(
        spec, rel_tol=max(1e-2 * spec.rel_tol, 1e-13), abs_tol=_UNDERFLOW
    )
    outer_spec = dataclasses_replace(
        spec, rel_tol=0.9 * spec.rel_tol, abs_tol=0.9 * spec.abs_tol
    )
    inner_edges = _geometric_edges(r2)
    chunk = 64  # outer nodes per inner refinement pass, bounds memory

    def outer_integrand(x1: np.ndarray) -> np.ndarray:
        out = np.empty((2, len(x1)))
        for j in range(0, len(x1), chunk):
            block = x1[j:j + chunk]

            def inner(x2: np.ndarray) -> np.ndarray:
                return np.asarray(f(block[:, None], x2[None, :]), dtype=float) * x2[None, :] ** 2

            vals, errs = _refine_to_tolerance(
                inner, inner_edges, inner_spec, len(block), 0.0,
                np.arange(len(block)), l1_slack=inner_spec.rel_tol,
            )
            out[0, j:j + chunk] = vals
            out[1, j:j + chunk] = errs
        return out

    # Two components: the inner values and their error density.  Only the
    # first drives refinement and acceptance of the outer integral.
    def outer_vec(x1: np.ndarray) -> np.ndarray:
        return outer_integrand(x1) * x1[None, :] ** 2

    outer_edges = _geometric_edges(r1)
    totals, errors = _refine_to_tolerance(
        outer_vec, outer_edges, outer_spec, 2, strip_bound, np.array([0])
    )
    value = scale * float(totals[0])
    err = scale * float(errors[0] + abs(totals[1]))
    return IntegralResult(value, err)
