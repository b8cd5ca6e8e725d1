import math

import numpy as np
import pytest

from groundlab import (GaussianMix, Morse, PointCloudMeasure, PowerLaw,
                       ball_witness, check_ruc, energy_grid,
                       energy_pointcloud, fourier_criterion,
                       gaussian_criterion, integral_criterion,
                       radial_fourier_transform, ruc_search, space_integral,
                       unit_sphere_area, weighted_space_integral)
from groundlab.errors import (NotAbsolutelyIntegrable, NotSquareIntegrable,
                              WitnessFailed)
from conftest import CRITERION_ORDER, HE


def closed_form_morse_integral(G, L, N):
    return unit_sphere_area(N) * math.gamma(N) * (1.0 - G * L**N)


def test_space_integral_morse_reference_value():
    got = space_integral(Morse(1.0, 2.0, 2))
    assert got == pytest.approx(-6.0 * math.pi, rel=1e-9)


def test_space_integral_matches_morse_closed_form():
    rng = np.random.default_rng(21)
    for _ in range(5):
        G = float(rng.uniform(0.2, 3.0))
        L = float(rng.uniform(0.4, 2.5))
        N = int(rng.integers(1, 4))
        got = space_integral(Morse(G, L, N))
        assert got == pytest.approx(closed_form_morse_integral(G, L, N),
                                    rel=1e-8, abs=1e-8)


def test_space_integral_matches_gaussmix_closed_form():
    w = GaussianMix([(2.0, 0.7), (-1.2, 1.4)], 3)
    assert space_integral(w) == pytest.approx(w.space_integral(), rel=1e-8)


def test_space_integral_rejects_growing_or_heavy_tails():
    with pytest.raises(NotAbsolutelyIntegrable):
        space_integral(PowerLaw(2.0, 1.0, 1))
    # negative leading exponent still decays too slowly to integrate
    with pytest.raises(NotAbsolutelyIntegrable):
        space_integral(PowerLaw(-0.5, -0.9, 1))


def test_weighted_integral_closed_form_single_gaussian():
    # W = -exp(-s^2) in dimension 1: the p-weighted space integral is
    # -sqrt(pi / (1 + p^2))
    w = GaussianMix([(-1.0, 1.0)], 1)
    for p in (0.1, 1.0, 5.0):
        got = weighted_space_integral(w, p)
        assert got == pytest.approx(-math.sqrt(math.pi / (1.0 + p * p)),
                                    rel=1e-8)
    with pytest.raises(ValueError):
        weighted_space_integral(w, 0.0)


def test_weighted_integral_closed_form_mixture():
    terms = [(1.0, 0.5), (-0.4, 2.0)]
    w = GaussianMix(terms, 1)
    p = 0.8
    expect = sum(amp * math.sqrt(math.pi / (1.0 / width**2 + p * p))
                 for amp, width in terms)
    assert weighted_space_integral(w, p) == pytest.approx(expect, rel=1e-8)


def test_integral_criterion_three_outcomes():
    he = integral_criterion(Morse(1.0, 2.0, 2))
    assert he.outcome == "HE_satisfied"
    assert he.numeric_value == pytest.approx(-6.0 * math.pi, rel=1e-9)
    assert he.certificate is not None
    assert he.certificate.kind == "integral_value"

    stable = integral_criterion(GaussianMix([(1.0, 1.0)], 1))
    assert stable.outcome == "stable_indication"
    assert stable.numeric_value == pytest.approx(math.sqrt(math.pi),
                                                 rel=1e-9)
    assert stable.certificate is None

    border = integral_criterion(Morse(1.0, 1.0, 1))
    assert border.outcome == "inconclusive"
    assert abs(border.numeric_value) <= 1e-6


def test_integral_criterion_materializes_ball_density():
    verdict = integral_criterion(Morse(1.0, 2.0, 2), build_witness=True)
    cert = verdict.certificate
    assert cert.kind == "ball_density"
    assert cert.measure is not None
    assert cert.energy_report.value < 0.0
    # re-evaluating the stored density reproduces the certified energy
    again = energy_grid(Morse(1.0, 2.0, 2), cert.measure,
                        quad_mode="radial_fast")
    assert again.value == pytest.approx(cert.energy_report.value, rel=1e-9)


def test_ball_witness_reference_configuration():
    density, report = ball_witness(Morse(1.0, 2.0, 2), R=20.0, n_scale=8)
    assert report.value < 0.0
    assert density.total_mass == pytest.approx(1.0, abs=1e-12)


def test_ball_witness_refuses_nonnegative_profiles():
    with pytest.raises(WitnessFailed):
        ball_witness(GaussianMix([(1.0, 1.0)], 1), R=4.0, n_scale=4)


def test_gaussian_criterion_values_match_closed_form():
    w = GaussianMix([(-1.0, 1.0)], 1)
    verdict = gaussian_criterion(w, p_grid=[0.5, 1.0, 2.0],
                                 build_witness=False)
    assert verdict.outcome == "HE_satisfied"
    ps = verdict.details["p_values"]
    vals = verdict.details["weighted_integrals"]
    for p, v in zip(ps, vals):
        assert v == pytest.approx(-math.sqrt(math.pi / (1.0 + p * p)),
                                  rel=1e-8)


def test_gaussian_criterion_witness_energy_tracks_weighted_value():
    # the witness energy equals p^N / pi^{N/2} times the weighted integral
    # at the achieving p, up to grid truncation; for the single attractive
    # bump at p=1 both sides come to -1/sqrt(2)
    w = GaussianMix([(-1.0, 1.0)], 1)
    verdict = gaussian_criterion(w, p_grid=[1.0], build_witness=True)
    cert = verdict.certificate
    assert cert.kind == "gaussian_density"
    p = cert.info["p"]
    predicted = p / math.sqrt(math.pi) * weighted_space_integral(w, p)
    assert cert.energy_report.value == pytest.approx(predicted, rel=1e-2)
    assert cert.energy_report.value == pytest.approx(-1.0 / math.sqrt(2.0),
                                                     rel=1e-2)


def test_fourier_transform_matches_gaussmix_closed_form():
    xi = np.array([0.0, 0.7, 1.9, 4.0])
    for dim in (1, 2, 3):
        w = GaussianMix([(1.5, 1.0), (-0.6, 1.8)], dim)
        got = radial_fourier_transform(w, xi)
        np.testing.assert_allclose(got, w.fourier_transform(xi), rtol=1e-6,
                                   atol=1e-9)


def test_fourier_transform_scalar_input_gives_scalar_output():
    w = GaussianMix([(1.0, 1.0)], 1)
    got = radial_fourier_transform(w, 2.0)
    assert np.asarray(got).shape == ()
    assert float(got) == pytest.approx(
        float(w.fourier_transform(np.array([2.0]))[0]), rel=1e-8)


def test_fourier_criterion_stable_for_positive_transform():
    verdict = fourier_criterion(GaussianMix([(1.0, 1.0)], 1))
    assert verdict.outcome == "stable_indication"
    assert verdict.certificate.kind == "transform_minimum"


def test_fourier_criterion_certifies_dip_with_modulated_density():
    w = GaussianMix([(4.0, 2.0), (-7.0, 1.0)], 1)
    verdict = fourier_criterion(w)
    assert verdict.outcome == "HE_satisfied"
    cert = verdict.certificate
    assert cert.kind == "modulated_density"
    assert cert.energy_report.value < 0.0
    # the dip sits near 1.42; the probed transform there is close to its
    # closed form
    xi_star = cert.info["xi"]
    assert 1.2 < xi_star < 1.7
    assert verdict.numeric_value == pytest.approx(
        float(w.fourier_transform(np.array([xi_star]))[0]), rel=1e-6)


def test_fourier_criterion_unverifiable_dip_stays_inconclusive():
    # same mixture in the plane: the transform dips below zero but no
    # witness verifies, so no verdict stronger than inconclusive is allowed
    verdict = fourier_criterion(GaussianMix([(4.0, 2.0), (-7.0, 1.0)], 2))
    assert verdict.outcome == "inconclusive"
    assert verdict.certificate is None
    assert verdict.numeric_value < 0.0
    assert "witness_note" in verdict.details


def test_fourier_criterion_requires_square_integrability():
    with pytest.raises(NotSquareIntegrable):
        fourier_criterion(PowerLaw(2.0, 1.0, 1))


def test_check_ruc_holds_for_nonnegative_profiles():
    w = GaussianMix([(1.0, 1.0)], 1)
    config = PointCloudMeasure.empirical([[0.0], [0.5], [1.2]])
    result = check_ruc(w, config, B=0.0)
    assert result.holds
    assert result.n == 3


def test_check_ruc_detects_collapse_violation():
    w = GaussianMix([(-1.0, 1.0)], 1)
    pts = np.arange(8.0)[:, None] * 1e-6
    result = check_ruc(w, PointCloudMeasure.empirical(pts), B=1.0)
    # 28 pairs at W ~ -1 give about -0.4375, far below -1/8
    assert not result.holds
    assert result.value == pytest.approx(-28.0 / 64.0, rel=1e-4)
    assert result.bound == pytest.approx(-1.0 / 8.0)


def test_check_ruc_input_guards():
    w = GaussianMix([(1.0, 1.0)], 1)
    with pytest.raises(ValueError):
        check_ruc(w, PointCloudMeasure([[0.0], [1.0]], [0.3, 0.7]), B=1.0)
    with pytest.raises(ValueError):
        check_ruc(w, PointCloudMeasure.empirical([[0.0], [0.0]]), B=1.0)


def test_ruc_search_flags_catastrophic_attraction():
    verdict = ruc_search(Morse(2.0, 1.0, 1), n_list=(8, 16, 32),
                         seeds=(0, 1), optimizer_budget=300)
    assert verdict.outcome == "HE_satisfied"
    assert verdict.numeric_value < -0.01
    cert = verdict.certificate
    assert cert.kind == "point_configuration"
    assert cert.energy_report.value < 0.0
    # certified configuration re-evaluates to the stored energy
    again = energy_pointcloud(Morse(2.0, 1.0, 1), cert.measure)
    assert again.value == pytest.approx(cert.energy_report.value, rel=1e-12)


def test_ruc_search_bounded_for_weak_attraction():
    # with the default sizes and budget the fitted asymptote is tiny; a
    # truncated scan (fewer sizes, budget 300) drifts up to about 1e-3
    verdict = ruc_search(Morse(0.25, 1.0, 1))
    assert verdict.outcome == "stable_indication"
    assert abs(verdict.numeric_value) < 1e-3
    assert verdict.certificate is None


def test_ruc_search_more_budget_never_hurts():
    short = ruc_search(Morse(2.0, 1.0, 1), n_list=(8, 16), seeds=(0,),
                       optimizer_budget=40)
    long = ruc_search(Morse(2.0, 1.0, 1), n_list=(8, 16), seeds=(0,),
                      optimizer_budget=400)
    for a, b in zip(long.details["per_pair_minima"],
                    short.details["per_pair_minima"]):
        assert a <= b + 1e-12


def test_verdict_serialization():
    verdict = integral_criterion(Morse(1.0, 2.0, 2), build_witness=True)
    data = verdict.to_dict(certificate_path="certificate_integral.json")
    assert data["criterion"] == "integral"
    assert data["outcome"] == "HE_satisfied"
    assert data["certificate"]["kind"] == "ball_density"
    assert data["certificate_path"] == "certificate_integral.json"
    # json-safe: no numpy scalars or arrays anywhere
    import json
    json.dumps(data)


def test_regression_battery_outcomes(regression_verdicts):
    problems = []
    for potential, expected, verdicts in regression_verdicts:
        for name, want in zip(CRITERION_ORDER, expected):
            got = verdicts[name].outcome
            if got != want:
                problems.append(f"{potential.label} {name}: {got} != {want}")
    assert not problems, "\n".join(problems)


def test_regression_battery_certificates_are_sound(regression_verdicts):
    for potential, _, verdicts in regression_verdicts:
        for name in CRITERION_ORDER:
            verdict = verdicts[name]
            if verdict.outcome != HE:
                continue
            cert = verdict.certificate
            assert cert is not None, f"{potential.label} {name}"
            assert cert.measure is not None, f"{potential.label} {name}"
            assert cert.energy_report.value < 0.0, \
                f"{potential.label} {name}"


def test_regression_battery_verdicts_never_contradict(regression_verdicts):
    # a certified negative-energy measure must never coexist with a
    # stability indication from the transform criterion on the same
    # potential
    for potential, _, verdicts in regression_verdicts:
        has_witness = any(
            verdicts[name].outcome == HE
            and verdicts[name].certificate is not None
            and verdicts[name].certificate.measure is not None
            for name in CRITERION_ORDER)
        if has_witness:
            assert verdicts["fourier"].outcome != "stable_indication", \
                potential.label
