"""End-to-end checks of the package's headline guarantees.

Each test covers one numbered item and reports a PASS/FAIL line in the
terminal summary through the hook in conftest.  Tolerances are fixed
here on purpose; loosening them is not an option when a check fails.
"""

import math
import time

import numpy as np
import pytest
from conftest import criterion_report

from groundlab import (GaussianMix, Morse, PointCloudMeasure, PowerLaw,
                       bilinear_form, classify_trace, combine,
                       empirical_approximation, energy_grid,
                       energy_pointcloud, gaussian_criterion,
                       integral_criterion, levy_prokhorov_upper,
                       minimize_particles, ruc_search, uniform_ball_density,
                       unit_sphere_area)
from groundlab.groundstate import _energy, _energy_and_gradient


def test_criterion_01_space_integral_closed_form_and_boundary():
    with criterion_report(1, "exp-pair space integrals match the closed "
                             "form; sign boundary located by bisection"):
        start = time.perf_counter()
        rng = np.random.default_rng(20260823)
        for _ in range(50):
            strength = rng.uniform(0.2, 3.0)
            width = rng.uniform(0.3, 3.0)
            dim = int(rng.integers(1, 4))
            got = integral_criterion(Morse(strength, width, dim),
                                     build_witness=False).numeric_value
            closed = (unit_sphere_area(dim) * math.gamma(dim)
                      * (1.0 - strength * width**dim))
            assert got == pytest.approx(closed, rel=1e-6)
        # at fixed width the integral changes sign at strength*width^N = 1
        width, dim = 1.3, 2
        lo, hi = 0.2, 3.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            value = integral_criterion(Morse(mid, width, dim),
                                       build_witness=False).numeric_value
            if value > 0.0:
                lo = mid
            else:
                hi = mid
        assert 0.5 * (lo + hi) == pytest.approx(width**-dim, abs=1e-6)
        assert time.perf_counter() - start < 10.0


def test_criterion_02_weighted_integral_small_p_limit():
    cases = [
        Morse(1.0, 2.0, 1), Morse(1.0, 2.0, 2), Morse(2.0, 1.0, 1),
        Morse(0.25, 1.0, 1), Morse(0.5, 1.0, 2), Morse(0.5, 1.5, 2),
        GaussianMix([(1.0, 1.0)], 1), GaussianMix([(1.0, 1.0)], 2),
        GaussianMix([(-1.0, 1.0)], 1),
        GaussianMix([(1.0, 1.0), (-1.5, 2.0)], 1),
    ]
    with criterion_report(2, "gaussian-weighted integral at p=1e-3 "
                             "reproduces the plain space integral"):
        for potential in cases:
            plain = integral_criterion(potential,
                                       build_witness=False).numeric_value
            weighted = gaussian_criterion(potential, p_grid=[1e-3],
                                          build_witness=False).numeric_value
            assert weighted == pytest.approx(plain, rel=1e-4)


def test_criterion_03_certificates_are_sound(regression_verdicts):
    with criterion_report(3, "every HE verdict ships a witness with "
                             "independently recomputed negative energy"):
        checked = 0
        for potential, _, verdicts in regression_verdicts:
            fourier_outcome = verdicts["fourier"].outcome
            for verdict in verdicts.values():
                if verdict.outcome != "HE_satisfied":
                    continue
                certificate = verdict.certificate
                assert certificate is not None
                assert certificate.measure is not None
                report = energy_grid(potential, certificate.measure,
                                     quad_mode="radial_fast")
                assert report.value < 0.0
                # a genuinely nonnegative transform would imply E >= 0
                # for every measure, contradicting this witness
                assert fourier_outcome != "stable_indication"
                checked += 1
        assert checked == 33


def test_criterion_04_energy_identities():
    with criterion_report(4, "scaling, translation and two-measure "
                             "splitting identities at 1e-12"):
        rng = np.random.default_rng(4)
        for trial in range(100):
            dim = int(rng.integers(1, 4))
            if trial % 2:
                potential = Morse(1.3, 0.7, dim)
            else:
                potential = GaussianMix([(0.8, 1.2), (-0.4, 0.6)], dim)
            n_mu = int(rng.integers(2, 9))
            n_nu = int(rng.integers(2, 7))
            mu = PointCloudMeasure(rng.normal(size=(n_mu, dim)),
                                   rng.uniform(0.1, 1.0, n_mu))
            nu = PointCloudMeasure(rng.normal(size=(n_nu, dim)),
                                   rng.uniform(0.1, 1.0, n_nu))
            e_mu = energy_pointcloud(potential, mu).value
            e_nu = energy_pointcloud(potential, nu).value

            factor = rng.uniform(0.2, 3.0)
            scaled = energy_pointcloud(potential,
                                       mu.scaled_mass(factor)).value
            assert scaled == pytest.approx(factor**2 * e_mu, rel=1e-12)

            shift = rng.normal(size=dim) * 10.0
            moved = energy_pointcloud(potential, mu.translated(shift)).value
            assert moved == pytest.approx(e_mu, rel=1e-12)

            pairing = bilinear_form(potential, mu, nu)
            total = energy_pointcloud(potential, combine(mu, nu)).value
            assert total == pytest.approx(e_mu + e_nu + pairing, rel=1e-12,
                                          abs=1e-13)


def test_criterion_05_spreading_ball_energy_decay():
    with criterion_report(5, "uniform balls of radius n: energy decay "
                             "matches the closed form, 2n*E -> sqrt(pi)"):
        start = time.perf_counter()
        gauss = GaussianMix([(1.0, 1.0)], 1)
        energies = []
        deviations = []
        for n in (8, 16, 32, 64):
            rho = uniform_ball_density(float(n), 1, cells_per_radius=500)
            value = energy_grid(gauss, rho).value
            closed = (2.0 * n * math.sqrt(math.pi) * math.erf(2.0 * n)
                      - (1.0 - math.exp(-4.0 * n * n))) / (4.0 * n * n)
            assert value == pytest.approx(closed, rel=0.02)
            assert value > 0.0
            energies.append(value)
            deviation = abs(2.0 * n * value - math.sqrt(math.pi))
            assert deviation <= 1.15 / (2.0 * n)
            deviations.append(deviation)
        assert all(a > b for a, b in zip(energies, energies[1:]))
        assert all(a > b for a, b in zip(deviations, deviations[1:]))
        assert time.perf_counter() - start < 30.0


def test_criterion_06_empirical_approximation_distance():
    rng = np.random.default_rng(6)
    w8 = rng.uniform(0.2, 1.0, 8)
    w6 = rng.uniform(0.2, 1.0, 6)
    targets = [
        PointCloudMeasure([[0.0], [1.0], [2.5]], [0.2, 0.3, 0.5]),
        PointCloudMeasure([[-0.5], [0.5]], [0.5, 0.5]),
        PointCloudMeasure(rng.uniform(0.0, 1.5, (8, 1)), w8 / w8.sum()),
        PointCloudMeasure([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
                          [0.25] * 4),
        PointCloudMeasure(rng.uniform(0.0, 1.2, (6, 2)), w6 / w6.sum()),
    ]
    with criterion_report(6, "empirical stand-ins certified within the "
                             "requested metric distance"):
        for target in targets:
            for eps in (0.05, 0.1, 0.2):
                approx = empirical_approximation(target, eps, seed=0)
                bound = levy_prokhorov_upper(target, approx, [eps])
                assert bound <= eps


def _staged_grid_minimum(potential, n):
    """Global minimum over sorted configurations with the first particle
    at the origin; nested grids over the n-1 gaps, final step 1e-3."""

    def batch_energy(gaps):
        positions = np.concatenate(
            [np.zeros((gaps.shape[0], 1)), np.cumsum(gaps, axis=1)], axis=1)
        total = np.zeros(gaps.shape[0])
        for i in range(n):
            for j in range(i + 1, n):
                total += potential(positions[:, j] - positions[:, i])
        return (2.0 / n**2) * total

    def grid_min(axes):
        mesh = np.meshgrid(*axes, indexing="ij")
        gaps = np.stack([m.ravel() for m in mesh], axis=1)
        values = batch_energy(gaps)
        best = int(np.argmin(values))
        return float(values[best]), gaps[best]

    ladder = {2: [1e-3], 3: [0.04, 5e-3, 1e-3], 4: [0.08, 1e-2, 1e-3]}[n]
    axes = [np.arange(0.0, 4.0 + 1e-12, ladder[0])] * (n - 1)
    value, gaps = grid_min(axes)
    for prev, step in zip(ladder, ladder[1:]):
        axes = [np.arange(max(0.0, g - 2.5 * prev), g + 2.5 * prev + step / 2,
                          step) for g in gaps]
        value, gaps = grid_min(axes)
    return value


def test_criterion_07_small_n_brute_force_agreement():
    with criterion_report(7, "descent energies for n in {2,3,4} match "
                             "staged brute-force grid search"):
        for potential in (PowerLaw(2.0, 1.0, 1), Morse(2.0, 1.0, 1)):
            for n in (2, 3, 4):
                brute = _staged_grid_minimum(potential, n)
                descended = min(
                    minimize_particles(potential, n, seed=seed,
                                       max_iter=3000).energies[-1]
                    for seed in (0, 1))
                assert abs(descended - brute) <= 1e-4


def test_criterion_08_descent_phase_behaviour():
    with criterion_report(8, "phases: confining tails stay tight, the "
                             "stable gaussian vanishes, deep wells bind"):
        start = time.perf_counter()

        for potential in (PowerLaw(2.0, 1.0, 2), PowerLaw(4.0, 2.0, 2),
                          PowerLaw(2.0, -0.5, 2)):
            labels = [
                classify_trace(minimize_particles(potential, 16, seed=seed,
                                                  max_iter=400))
                for seed in range(5)]
            assert labels.count("tight") >= 3

        spreading = GaussianMix([(1.0, 1.0)], 2)
        vanish_count = 0
        for seed in range(5):
            trace = minimize_particles(spreading, 64, seed=seed,
                                       max_iter=10_000)
            if classify_trace(trace) == "vanishing":
                vanish_count += 1
                assert 0.0 <= trace.energies[-1] <= 1e-3
        assert vanish_count >= 3

        binding = Morse(0.5, 2.0, 2)  # strength * width^N = 2
        tight_count = 0
        for seed in range(5):
            trace = minimize_particles(binding, 16, seed=seed, max_iter=600)
            if classify_trace(trace) == "tight":
                tight_count += 1
                assert trace.energies[-1] < 0.0
        assert tight_count >= 3

        assert time.perf_counter() - start < 300.0


def test_criterion_09_forces_match_finite_differences():
    cases = [PowerLaw(2.0, 1.0, 2), Morse(1.5, 1.2, 2),
             GaussianMix([(1.0, 1.0), (-0.7, 1.8)], 2)]
    with criterion_report(9, "analytic forces agree with central "
                             "differences on random configurations"):
        h = 1e-6
        for index, potential in enumerate(cases):
            rng = np.random.default_rng(900 + index)
            for _ in range(50):
                config = rng.normal(size=(5, 2)) * 1.4
                _, grad = _energy_and_gradient(potential, config, clamp=True)
                numeric = np.zeros_like(config)
                for i in range(5):
                    for d in range(2):
                        bumped = config.copy()
                        bumped[i, d] += h
                        up = _energy(potential, bumped, clamp=True)
                        bumped[i, d] -= 2 * h
                        down = _energy(potential, bumped, clamp=True)
                        numeric[i, d] = (up - down) / (2 * h)
                np.testing.assert_allclose(grad, numeric, rtol=1e-5,
                                           atol=1e-8)


def test_criterion_10_pair_minimum_asymptotics():
    with criterion_report(10, "scaled pair minima: deep well catastrophic, "
                              "shallow well stable"):
        deep = ruc_search(Morse(2.0, 1.0, 1))
        assert deep.outcome == "HE_satisfied"
        assert deep.details["fit_c"] < -0.01

        shallow = ruc_search(Morse(0.25, 1.0, 1))
        assert shallow.outcome == "stable_indication"
        assert abs(shallow.details["fit_c"]) < 1e-3
