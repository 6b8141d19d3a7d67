"""Smoke tests of the python surface over the compiled core."""

import math

import pytest

import returnstat as rs


def test_pmf_families_agree():
    assert rs.poisson_pmf(1.0, 0) == pytest.approx(math.exp(-1.0), rel=1e-14)
    assert rs.polya_aeppli_pmf(2.0, 0.5, 0) == pytest.approx(math.exp(-2.0), rel=1e-14)
    for k in range(30):
        assert rs.polya_aeppli_pmf(1.0, 0.0, k) == pytest.approx(
            rs.poisson_pmf(1.0, k), rel=1e-12
        )
        assert rs.polya_aeppli_pmf(1.0, 0.4, k) == pytest.approx(
            rs.compound_poisson_geo_pmf(1.0, 0.4, k, tol=1e-14), abs=1e-10
        )
    with pytest.raises(rs.ParameterError):
        rs.polya_aeppli_pmf(1.0, 1.0, 1)


def test_words_and_cluster_constants():
    assert rs.period([0, 1, 0, 1]) == 2
    assert rs.period([0, 0, 1]) == 3
    assert rs.periodic_extension([0, 1], 5) == [0, 1, 0, 1, 0]
    assert rs.kappa(6, d=[2, 3]) == 6
    assert rs.cluster_exponent(1, d=[1, 2]) == (3, 1)


def test_bernoulli_model_roundtrip():
    model = rs.make_model({"model": "bernoulli", "probs": [0.6, 0.4]})
    assert model.cylinder_prob([0, 1, 0]) == pytest.approx(0.6 * 0.4 * 0.6, rel=1e-13)
    assert rs.beta(model, [0], 7) == pytest.approx(0.6, rel=1e-13)
    assert rs.rho(model, [0, 0, 0], 1.0, [1, 2]) == pytest.approx(0.216, rel=1e-12)
    assert rs.predicted_rho(model, [0], 1.0, [1, 2]) == pytest.approx(0.216, rel=1e-12)
    path = model.sample_path(50, seed=9)
    assert len(path) == 50
    assert set(path) <= {0, 1}


def test_gauss_golden_ratio():
    gauss = rs.make_model({"model": "gauss"})
    assert gauss.cylinder_prob([1]) == pytest.approx(math.log2(4.0 / 3.0), rel=1e-12)
    limit = (3.0 - math.sqrt(5.0)) / 2.0
    assert rs.beta(gauss, [1], 25) == pytest.approx(limit, abs=1e-8)
    assert rs.predicted_rho(gauss, [1], 1.0, [1]) == pytest.approx(limit, rel=1e-12)


def test_exact_law_and_simulation():
    fair = rs.make_model({"model": "bernoulli", "probs": [0.5, 0.5]})
    masses, tail = rs.exact_count_masses(fair, [0], 1.5, [1])
    assert masses == pytest.approx([0.125, 0.375, 0.375, 0.125])
    assert tail == pytest.approx(0.0, abs=1e-15)

    counts = rs.simulate_counts(fair, [0], 1.5, [1], m=50000, seed=3)
    empirical = [counts.count(k) / len(counts) for k in range(4)]
    assert rs.total_variation(empirical, list(masses)) < 0.01

    same = rs.simulate_counts(fair, [0], 1.5, [1], m=2000, seed=3, workers=1)
    again = rs.simulate_counts(fair, [0], 1.5, [1], m=2000, seed=3, workers=2)
    assert same == again


def test_convergence_experiment_report():
    model = rs.make_model({"model": "bernoulli", "probs": [0.6, 0.4]})
    report = rs.convergence_experiment(
        model, [0], 1.0, [1], n_list=[5], samples=5000, seed=11
    )
    assert report["kind"] == "converge"
    (cell,) = report["cells"]
    assert cell["rho_pred"] == pytest.approx(0.6, rel=1e-12)
    assert cell["tv"] < 0.2
    diag = rs.tightness(report)
    assert diag["pass"] is True


def test_error_mapping():
    with pytest.raises(rs.DomainError):
        model = rs.make_model(
            {
                "model": "gibbs",
                "adjacency": [[1, 1], [1, 0]],
                "potential": [[0.0, 0.0], [0.0, 0.0]],
            }
        )
        rs.trials_count(model, [1, 1], 1.0, [1])
    with pytest.raises(rs.CapacityError):
        fair = rs.make_model({"model": "bernoulli", "probs": [0.5, 0.5]})
        rs.exact_count_masses(fair, [0] * 10, 1.0, [1])
