"""Radial pair-interaction potentials and structural probes.

A potential here is a radial profile W: [0, inf) -> R union {+inf} evaluated
on pair distances.  Four families are provided:

* :class:`PowerLaw` -- attractive/repulsive power tails ``r**a/a - r**r/r``,
* :class:`Morse` -- ``exp(-r) - G*exp(-r/L)``,
* :class:`GaussianMix` -- sums of Gaussian bumps ``A*exp(-(r/w)**2)``,
* :class:`Tabulated` -- piecewise-linear profiles from sampled data.

:func:`probe_hypotheses` audits a profile numerically: local integrability of
``|W(|x|)|`` near the origin, the behaviour of the tail (growth to +inf,
decay to 0, or neither) and the infimum of the profile over (0, inf).  Those
three facts drive which stability criteria downstream modules may apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from .errors import NonDifferentiable, QuadratureFailure
from .geometry import check_dimension, unit_sphere_area

__all__ = [
    "RadialPotential",
    "PowerLaw",
    "Morse",
    "GaussianMix",
    "Tabulated",
    "HypothesisReport",
    "probe_hypotheses",
]

# Nested cutoffs 10**-2 .. 10**-10 for the near-origin integrability probe;
# growth above 10% over the final decade is declared divergent.
_CUTOFF_DECADES = range(2, 11)
_DIVERGENCE_GROWTH = 0.10

_TAIL_PROBE_RADII = (1e2, 1e3, 1e4, 1e5, 1e6)
_TAIL_DECAY_TOL = 1e-8

_INFIMUM_GRID_SPAN = (1e-8, 1e8)
_INFIMUM_GRID_POINTS = 10_000


class RadialPotential:
    """Base class: a radial profile with optional derivative model.

    Subclasses set ``family`` and implement ``_profile`` (vectorised) plus,
    when differentiable, ``_profile_derivative``.

    Attributes:
        dimension: ambient dimension N of the space the profile acts on
            (1, 2 or 3; distances are Euclidean).
    """

    family = "abstract"
    differentiable = False

    def __init__(self, dimension: int):
        self.dimension = check_dimension(dimension)

    # -- evaluation ------------------------------------------------------

    def _profile(self, radii: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _profile_derivative(self, radii: np.ndarray) -> np.ndarray:
        raise NonDifferentiable(
            f"{self.family} potential has no derivative model")

    def __call__(self, radii):
        """Evaluate W at one radius or an array of radii (values may be +inf)."""
        arr = np.asarray(radii, dtype=float)
        if np.any(arr < 0):
            raise ValueError("radii must be nonnegative")
        out = self._profile(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def derivative(self, radii):
        """Evaluate dW/dr at strictly positive radii."""
        arr = np.asarray(radii, dtype=float)
        if np.any(arr <= 0):
            raise ValueError("derivative is evaluated at radii > 0")
        out = self._profile_derivative(np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    # -- structure -------------------------------------------------------

    @property
    def value_at_zero(self) -> float:
        """W(0); +inf for profiles singular at contact."""
        return float(self(0.0))

    @property
    def tail_class(self):
        """Closed-form tail behaviour if known: 'H3a', 'H3b' or None."""
        return None

    @property
    def label(self) -> str:
        return f"{self.family}(N={self.dimension})"

    def __repr__(self):
        return self.label


class PowerLaw(RadialPotential):
    """W(s) = s**a / a - s**r / r with -N < r < a and a, r nonzero.

    The ``a`` term dominates the tail (growth for a > 0), the ``r`` term
    dominates near contact (W(0) = +inf when r < 0).  Exponent zero is
    rejected because the profile divides by the exponent.
    """

    family = "powerlaw"
    differentiable = True

    def __init__(self, a: float, r: float, dimension: int):
        super().__init__(dimension)
        a = float(a)
        r = float(r)
        if not (-self.dimension < r < a):
            raise ValueError(
                f"powerlaw exponents must satisfy -N < r < a, "
                f"got a={a}, r={r}, N={self.dimension}")
        if a == 0.0 or r == 0.0:
            raise ValueError("powerlaw exponents must be nonzero")
        self.a = a
        self.r = r

    def _profile(self, radii):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = radii ** self.a / self.a - radii ** self.r / self.r
        at_zero = radii == 0.0
        if np.any(at_zero):
            out[at_zero] = math.inf if self.r < 0 else 0.0
        return out

    def _profile_derivative(self, radii):
        return radii ** (self.a - 1.0) - radii ** (self.r - 1.0)

    @property
    def value_at_zero(self):
        return math.inf if self.r < 0 else 0.0

    @property
    def tail_class(self):
        return "H3a" if self.a > 0 else "H3b"

    @property
    def label(self):
        return f"powerlaw(a={self.a:g},r={self.r:g},N={self.dimension})"


class Morse(RadialPotential):
    """W(s) = exp(-s) - G * exp(-s/L) with G >= 0 and L > 0.

    Unit-range repulsion against attraction of strength G and range L.  The
    space integral of W over R^N is S_{N-1} * Gamma(N) * (1 - G * L**N), so
    the sign of 1 - G * L**N separates the aggregating regime from the
    spreading one.
    """

    family = "morse"
    differentiable = True

    def __init__(self, G: float, L: float, dimension: int):
        super().__init__(dimension)
        G = float(G)
        L = float(L)
        if G < 0:
            raise ValueError(f"morse strength G must be >= 0, got {G}")
        if L <= 0:
            raise ValueError(f"morse range L must be > 0, got {L}")
        self.G = G
        self.L = L

    def _profile(self, radii):
        return np.exp(-radii) - self.G * np.exp(-radii / self.L)

    def _profile_derivative(self, radii):
        return -np.exp(-radii) + (self.G / self.L) * np.exp(-radii / self.L)

    @property
    def value_at_zero(self):
        return 1.0 - self.G

    @property
    def tail_class(self):
        return "H3b"

    @property
    def label(self):
        return f"morse(G={self.G:g},L={self.L:g},N={self.dimension})"


class GaussianMix(RadialPotential):
    """W(s) = sum_k A_k * exp(-(s/w_k)**2) for terms (A_k, w_k), w_k > 0."""

    family = "gaussmix"
    differentiable = True

    def __init__(self, terms: Sequence[tuple], dimension: int):
        super().__init__(dimension)
        cleaned = [(float(amp), float(width)) for amp, width in terms]
        if not cleaned:
            raise ValueError("gaussmix needs at least one (amplitude, width) term")
        for _, width in cleaned:
            if width <= 0:
                raise ValueError(f"gaussmix widths must be > 0, got {width}")
        self.terms = tuple(cleaned)

    def _profile(self, radii):
        out = np.zeros_like(radii)
        for amp, width in self.terms:
            out += amp * np.exp(-((radii / width) ** 2))
        return out

    def _profile_derivative(self, radii):
        out = np.zeros_like(radii)
        for amp, width in self.terms:
            out += amp * (-2.0 * radii / width**2) * np.exp(-((radii / width) ** 2))
        return out

    @property
    def value_at_zero(self):
        return float(sum(amp for amp, _ in self.terms))

    @property
    def tail_class(self):
        return "H3b"

    @property
    def label(self):
        body = ",".join(f"{a:g}:{w:g}" for a, w in self.terms)
        return f"gaussmix([{body}],N={self.dimension})"

    def space_integral(self) -> float:
        """Closed form of the integral of W(|x|) over R^N."""
        n = self.dimension
        return float(sum(amp * (math.sqrt(math.pi) * width) ** n
                         for amp, width in self.terms))

    def fourier_transform(self, frequencies):
        """Closed form of the Fourier transform (convention: integral of
        W(|x|) * exp(-i xi.x) dx)."""
        xi = np.asarray(frequencies, dtype=float)
        out = np.zeros_like(xi, dtype=float)
        for amp, width in self.terms:
            out += (amp * (math.sqrt(math.pi) * width) ** self.dimension
                    * np.exp(-(width**2) * xi**2 / 4.0))
        return out


class Tabulated(RadialPotential):
    """Piecewise-linear profile through (radius, value) knots.

    Below the first knot the profile is held constant at the first value;
    beyond the last knot it is identically zero.  No derivative model is
    attached, so particle descent refuses tabulated profiles.
    """

    family = "tabulated"
    differentiable = False

    def __init__(self, radii: Sequence[float], values: Sequence[float],
                 dimension: int):
        super().__init__(dimension)
        r = np.asarray(radii, dtype=float)
        v = np.asarray(values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise ValueError("tabulated profile needs matching 1-d arrays "
                             "with at least two knots")
        if r[0] < 0 or np.any(np.diff(r) <= 0):
            raise ValueError("knot radii must be nonnegative and strictly "
                             "increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("knot values must be finite")
        self.knot_radii = r.copy()
        self.knot_values = v.copy()
        self.knot_radii.flags.writeable = False
        self.knot_values.flags.writeable = False

    def _profile(self, radii):
        return np.interp(radii, self.knot_radii, self.knot_values, right=0.0)

    @property
    def value_at_zero(self):
        return float(self._profile(np.array([0.0]))[0])

    @property
    def continuous_tail_junction(self) -> bool:
        """Whether the zero tail joins the last knot without a jump."""
        return bool(abs(self.knot_values[-1]) == 0.0)

    @property
    def label(self):
        return (f"tabulated({self.knot_radii.size} knots,"
                f"N={self.dimension})")


@dataclass(frozen=True)
class HypothesisReport:
    """Outcome of the structural probes on one potential.

    Attributes:
        lower_semicontinuity: 'holds-by-construction' for the analytic
            families and for tabulated profiles whose zero tail joins
            continuously; 'not-checked' otherwise.
        local_integrability: 'holds' | 'fails' | 'inconclusive' for the
            integral of |W(|x|)| over the unit ball.
        local_integral: S_{N-1} * int_0^1 |W(r)| r**(N-1) dr at the tightest
            cutoff reached (meaningful when local_integrability == 'holds').
        decade_estimates: the nested-cutoff estimates backing the verdict.
        tail_class: 'H3a' (grows to +inf), 'H3b' (decays to 0) or 'neither'.
        tail_probes: (radius, W(radius)) pairs sampled in the far field.
        profile_infimum: inf of W over (0, inf) located on a log grid and
            polished; every probed value sits above it (up to tolerance).
        infimum_radius: radius at which the infimum estimate was found.
    """

    lower_semicontinuity: str
    local_integrability: str
    local_integral: float
    decade_estimates: tuple
    tail_class: str
    tail_probes: tuple
    profile_infimum: float
    infimum_radius: float

    def to_dict(self) -> dict:
        return {
            "lower_semicontinuity": self.lower_semicontinuity,
            "local_integrability": self.local_integrability,
            "local_integral": self.local_integral,
            "decade_estimates": list(self.decade_estimates),
            "tail_class": self.tail_class,
            "tail_probes": [list(p) for p in self.tail_probes],
            "profile_infimum": self.profile_infimum,
            "infimum_radius": self.infimum_radius,
        }


def _near_origin_decades(potential, quad_tol):
    """Nested-cutoff estimates of int_cut^1 |W(r)| r**(N-1) dr.

    Returns (estimates, clean); estimates[k] corresponds to cutoff
    10**-(k+2).  clean is False when some segment quadrature failed.
    """
    n = potential.dimension

    def integrand(r):
        return abs(float(potential(r))) * r ** (n - 1)

    estimates = []
    total = 0.0
    clean = True
    upper = 1.0
    for decade in _CUTOFF_DECADES:
        lower = 10.0 ** (-decade)
        try:
            piece, err = quad(integrand, lower, upper, limit=200,
                              epsabs=quad_tol, epsrel=quad_tol)
        except Exception:
            clean = False
            break
        if not math.isfinite(piece):
            clean = False
            break
        if abs(err) > max(quad_tol, 1e-6 * abs(piece)) * 1e3:
            clean = False
            break
        total += piece
        estimates.append(total)
        upper = lower
    return estimates, clean


def _tail_probe_class(probes):
    """Classify the far field from sampled values alone."""
    values = [v for _, v in probes]
    if all(abs(v) < _TAIL_DECAY_TOL for v in values):
        return "H3b"
    beyond = [v for r, v in probes if r >= 1e3]
    growing = all(b > a for a, b in zip(beyond, beyond[1:]))
    if growing and beyond[-1] > beyond[0] and beyond[-1] > 0:
        return "H3a"
    return "neither"


def _locate_infimum(potential):
    """Minimum of the profile over a log grid on (0, inf), then polished."""
    lo, hi = _INFIMUM_GRID_SPAN
    grid = np.logspace(math.log10(lo), math.log10(hi), _INFIMUM_GRID_POINTS)
    values = potential(grid)
    finite = np.where(np.isfinite(values), values, math.inf)
    idx = int(np.argmin(finite))
    best_r = float(grid[idx])
    best_v = float(finite[idx])

    left = float(grid[max(idx - 1, 0)])
    right = float(grid[min(idx + 1, grid.size - 1)])
    if right > left:
        result = minimize_scalar(
            lambda r: float(potential(r)), bounds=(left, right),
            method="bounded", options={"xatol": 1e-12})
        if result.success and math.isfinite(result.fun) and result.fun < best_v:
            best_r = float(result.x)
            best_v = float(result.fun)
    return best_v, best_r


def probe_hypotheses(potential: RadialPotential,
                     quad_tol: float = 1e-8) -> HypothesisReport:
    """Audit a potential's structure: contact integrability, tail, infimum.

    Args:
        potential: profile to probe.
        quad_tol: tolerance passed to the segment quadratures.

    Returns:
        A :class:`HypothesisReport`.  Raises :class:`QuadratureFailure` only
        when the near-origin refinement cannot produce a single finite
        estimate.
    """
    estimates, clean = _near_origin_decades(potential, quad_tol)
    if not estimates:
        raise QuadratureFailure(
            f"near-origin quadrature produced no estimate for "
            f"{potential.label}")

    area = unit_sphere_area(potential.dimension)
    if not clean:
        verdict = "inconclusive"
    elif len(estimates) >= 2:
        prev, last = estimates[-2], estimates[-1]
        growth = (last - prev) / prev if prev > 0 else 0.0
        verdict = "fails" if growth > _DIVERGENCE_GROWTH else "holds"
    else:
        verdict = "inconclusive"
    local_integral = area * estimates[-1]

    probes = tuple((r, float(potential(r))) for r in _TAIL_PROBE_RADII)
    tail = potential.tail_class or _tail_probe_class(probes)

    infimum, inf_radius = _locate_infimum(potential)

    lsc = "holds-by-construction"
    if isinstance(potential, Tabulated) and not potential.continuous_tail_junction:
        lsc = "not-checked"

    return HypothesisReport(
        lower_semicontinuity=lsc,
        local_integrability=verdict,
        local_integral=float(local_integral),
        decade_estimates=tuple(area * e for e in estimates),
        tail_class=tail,
        tail_probes=probes,
        profile_infimum=infimum,
        infimum_radius=inf_radius,
    )
