"""Quadratic interaction energy of a measure under a radial potential.

The energy of a measure is the double integral of W(|x - y|) against the
product measure.  For atomic measures this is a double sum; the diagonal
terms contribute W(0) times the sum of squared weights and can be included
or dropped via a flag (self-interaction is physical for diffuse measures,
spurious for particle systems).  For grid densities the double integral is
evaluated cell-pairwise at cell centers, with the self-cell term replaced by
a fixed-seed Monte Carlo average of W over intra-cell displacements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve
from scipy.spatial.distance import cdist, pdist

from .errors import QuadratureFailure
from .measures import GridDensity, PointCloudMeasure
from .potentials import RadialPotential

__all__ = ["EnergyReport", "energy_pointcloud", "energy_grid",
           "bilinear_form"]

_SELF_CELL_SEED = 170512
_SELF_CELL_PAIRS = 512


@dataclass(frozen=True)
class EnergyReport:
    """Value of one energy evaluation plus its bookkeeping.

    ``value`` may be +inf (atoms sitting on a singularity of W); that is the
    infinite-energy signal, no exception is raised for it.
    """

    value: float
    diagonal_contribution: float
    pair_count: int
    potential_label: str
    mode: str

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "diagonal_contribution": self.diagonal_contribution,
            "pair_count": self.pair_count,
            "potential_label": self.potential_label,
            "mode": self.mode,
        }


def energy_pointcloud(potential: RadialPotential, mu: PointCloudMeasure,
                      include_diagonal: bool = True) -> EnergyReport:
    """Double sum of W over atom pairs.

    Off-diagonal pairs contribute 2 * w_i * w_j * W(|x_i - x_j|); the
    diagonal, when included, adds W(0) * sum_i w_i**2.  The sums use
    numpy's pairwise accumulation, so the value is reproducible across atom
    orderings to around 1e-12 relative.
    """
    if potential.dimension != mu.dimension:
        raise ValueError("potential and measure dimensions differ")
    n = mu.size
    off = 0.0
    if n > 1:
        dists = pdist(mu.points)
        pair_w = (mu.weights[:, None] * mu.weights[None, :])[
            np.triu_indices(n, 1)]
        off = 2.0 * float(np.dot(pair_w, potential(dists)))

    diagonal = 0.0
    if include_diagonal:
        w0 = potential.value_at_zero
        sq = float(np.dot(mu.weights, mu.weights))
        if math.isfinite(w0):
            diagonal = w0 * sq
        elif sq > 0.0:
            diagonal = math.inf * (1.0 if w0 > 0 else -1.0)
    value = off + diagonal
    return EnergyReport(
        value=float(value),
        diagonal_contribution=float(diagonal),
        pair_count=n * (n - 1) // 2,
        potential_label=potential.label,
        mode="pointcloud",
    )


def bilinear_form(potential: RadialPotential, mu: PointCloudMeasure,
                  nu: PointCloudMeasure) -> float:
    """Cross term 2 * sum_ij wmu_i * wnu_j * W(|x_i - y_j|).

    Satisfies energy(mu + nu) = energy(mu) + energy(nu) + bilinear_form(mu,
    nu) with diagonal-inclusive energies, and bilinear_form(mu, mu) equals
    twice the energy of mu.
    """
    if mu.dimension != nu.dimension:
        raise ValueError("measures live in different dimensions")
    if potential.dimension != mu.dimension:
        raise ValueError("potential and measure dimensions differ")
    dists = cdist(mu.points, nu.points)
    contributions = (mu.weights[:, None] * nu.weights[None, :]
                     * potential(dists))
    return 2.0 * float(contributions.sum())


def _self_cell_average(potential, cell_width, dimension) -> float:
    """Mean of W over displacements between two uniform points of one cell."""
    rng = np.random.default_rng(_SELF_CELL_SEED)
    u = rng.uniform(0.0, cell_width, size=(_SELF_CELL_PAIRS, dimension))
    v = rng.uniform(0.0, cell_width, size=(_SELF_CELL_PAIRS, dimension))
    samples = potential(np.linalg.norm(u - v, axis=1))
    if not np.all(np.isfinite(samples)):
        raise QuadratureFailure(
            "self-cell average hit a non-finite potential value")
    half = _SELF_CELL_PAIRS // 2
    first, second = samples[:half].mean(), samples[half:].mean()
    scale = 0.5 * (abs(first) + abs(second))
    if abs(first - second) > 0.5 * scale + 1e-12:
        raise QuadratureFailure(
            f"self-cell Monte Carlo did not stabilize "
            f"(half-sample means {first:.3e} vs {second:.3e})")
    return float(samples.mean())


def energy_grid(potential: RadialPotential, rho: GridDensity,
                quad_mode: str = "direct") -> EnergyReport:
    """Energy of a piecewise-constant density.

    Modes:
        direct: all cell-center pair distances evaluated explicitly.
        radial_fast: cell-pair masses grouped by lattice offset through an
            FFT autocorrelation, so W is evaluated once per distinct offset.

    Both modes share the Monte Carlo self-cell average and agree to
    around 1e-12 relative.
    """
    if potential.dimension != rho.dimension:
        raise ValueError("potential and density dimensions differ")
    if quad_mode not in ("direct", "radial_fast"):
        raise ValueError(f"unknown quad_mode {quad_mode!r}")

    h = rho.cell_width
    dim = rho.dimension
    masses = rho.values * rho.cell_volume
    self_avg = _self_cell_average(potential, h, dim)
    diagonal = float(np.sum(masses**2)) * self_avg

    if quad_mode == "direct":
        flat = masses.ravel()
        centers = rho.cell_centers()
        dists = cdist(centers, centers)
        kernel = potential(dists)
        np.fill_diagonal(kernel, 0.0)
        off = float(flat @ kernel @ flat)
        pair_count = flat.size * (flat.size - 1) // 2
    else:
        flipped = np.flip(masses)
        corr = fftconvolve(masses, flipped, mode="full")
        offsets = np.meshgrid(
            *[np.arange(-(e - 1), e) for e in masses.shape], indexing="ij")
        radii = h * np.sqrt(sum(o.astype(float)**2 for o in offsets))
        kernel = potential(radii)
        center = tuple(e - 1 for e in masses.shape)
        kernel[center] = 0.0
        off = float(np.sum(corr * kernel))
        pair_count = masses.size * (masses.size - 1) // 2

    return EnergyReport(
        value=off + diagonal,
        diagonal_contribution=diagonal,
        pair_count=pair_count,
        potential_label=potential.label,
        mode=f"grid-{quad_mode}",
    )
