import numpy as np
import pytest

from acls.problems import (DistributionKind, constants, excess_risk,
                           make_gaussian_problem, make_one_hot_problem,
                           sample, sample_chunk)


def test_gaussian_benchmark_spectrum_and_optimum():
    p = make_gaussian_problem(50, 4.0, 1.0, 0.02, seed=7)
    eigvals = np.sort(np.linalg.eigvalsh(p.covariance))[::-1]
    expected = 1.0 / np.arange(1, 51) ** 4
    assert np.allclose(eigvals, expected, rtol=1e-10)
    assert abs(np.linalg.norm(p.optimum) - 1.0) < 1e-12
    # equal projection on every eigenvector
    _, basis = np.linalg.eigh(p.covariance)
    proj = np.abs(basis.T @ p.optimum)
    assert np.allclose(proj, 1.0 / np.sqrt(50), atol=1e-8)


def test_gaussian_one_dimensional_identity():
    p = make_gaussian_problem(1, 0.0, 1.0, 0.0, seed=0)
    assert np.allclose(p.covariance, [[1.0]])
    assert np.allclose(np.abs(p.optimum), [1.0])


def test_gaussian_trace_matches_spectrum_sum():
    p = make_gaussian_problem(3, 4.0, 1.0, 0.0, seed=1)
    expected = 1.0 + 1.0 / 16.0 + 1.0 / 81.0
    assert abs(np.trace(p.covariance) - expected) < 1e-12


def test_gaussian_rejects_bad_arguments():
    with pytest.raises(ValueError):
        make_gaussian_problem(0, 4.0, 1.0, 0.0, seed=0)
    with pytest.raises(ValueError):
        make_gaussian_problem(3, 4.0, 1.0, -0.1, seed=0)
    with pytest.raises(ValueError):
        make_gaussian_problem(3, -1.0, 1.0, 0.0, seed=0)


def test_one_hot_uniform_construction():
    p = make_one_hot_problem(4, "uniform")
    assert np.allclose(p.covariance, np.eye(4) / 4)
    assert np.allclose(p.optimum, 0.5 * np.ones(4))
    assert abs(np.dot(p.optimum, p.optimum) - 1.0) < 1e-12


def test_one_hot_single_atom():
    p = make_one_hot_problem(1, [1.0])
    assert np.allclose(p.covariance, [[1.0]])
    assert np.allclose(p.optimum, [1.0])


def test_one_hot_rejects_bad_probabilities():
    with pytest.raises(ValueError):
        make_one_hot_problem(2, [0.6, 0.6])
    with pytest.raises(ValueError):
        make_one_hot_problem(2, [1.2, -0.2])


def test_one_hot_start_offset():
    start = np.array([1.0, -2.0])
    p = make_one_hot_problem(2, "uniform", start=start)
    assert abs(np.dot(p.optimum - start, p.optimum - start) - 1.0) < 1e-12


def test_constants_one_hot():
    for d in (2, 5, 10):
        c = constants(make_one_hot_problem(d, "uniform"))
        assert c.r_squared == 1.0
        assert c.stat_condition == d
        assert c.kurtosis == d
        assert abs(c.l_smooth - 1.0 / d) < 1e-12


def test_constants_one_hot_skewed():
    c = constants(make_one_hot_problem(2, [0.9, 0.1]))
    assert abs(c.stat_condition - 10.0) < 1e-12


def test_constants_gaussian():
    p = make_gaussian_problem(6, 2.0, 1.0, 0.1, seed=2)
    c = constants(p)
    trace = np.trace(p.covariance)
    top = np.linalg.eigvalsh(p.covariance)[-1]
    assert abs(c.r_squared - (trace + 2 * top)) < 1e-10
    assert c.stat_condition == 8.0
    assert c.kurtosis == 3.0
    assert abs(c.noise_var - 0.01) < 1e-15


def test_constants_stat_condition_at_least_dimension():
    for p in (make_gaussian_problem(7, 1.0, 2.0, 0.0, seed=3),
              make_one_hot_problem(7, "uniform"),
              make_one_hot_problem(3, [0.5, 0.3, 0.2])):
        assert constants(p).stat_condition >= p.dimension


def test_gaussian_fourth_moment_identity():
    # E[|a|^2 a a^T] = 2 H^2 + tr(H) H for Gaussian features, so the bound
    # with R^2 = tr H + 2 L holds with a zero eigenvalue at the top
    # eigenvector
    p = make_gaussian_problem(4, 2.0, 1.0, 0.0, seed=5)
    H = p.covariance
    rng = np.random.default_rng(11)
    feats, _ = sample_chunk(p, rng, 400_000)
    wnorm = (feats ** 2).sum(axis=1)
    emp = (feats * wnorm[:, None]).T @ feats / len(feats)
    exact = 2 * H @ H + np.trace(H) * H
    assert np.abs(emp - exact).max() < 0.05
    c = constants(p)
    gap = c.r_squared * H - exact
    eigs = np.linalg.eigvalsh(0.5 * (gap + gap.T))
    assert eigs[0] > -1e-10
    assert abs(eigs[0]) < 1e-10  # tight on the top eigenvector


def test_sampling_covariance_matches_h():
    p = make_gaussian_problem(5, 1.0, 1.0, 0.0, seed=4)
    rng = np.random.default_rng(0)
    n = 200_000
    feats, _ = sample_chunk(p, rng, n)
    emp = feats.T @ feats / n
    tol = 10 * p.dimension / np.sqrt(n)
    assert np.linalg.norm(emp - p.covariance) < tol


def test_one_hot_empirical_covariance():
    p = make_one_hot_problem(3, "uniform")
    rng = np.random.default_rng(1)
    feats, _ = sample_chunk(p, rng, 1_000_000)
    emp = feats.T @ feats / len(feats)
    assert np.abs(emp - np.eye(3) / 3).max() < 5e-3


def test_one_hot_fourth_moment_equals_h_exactly():
    # every atom has unit norm, so E[|a|^2 a a^T] = H as a finite sum
    p = make_one_hot_problem(5, [0.1, 0.2, 0.3, 0.25, 0.15])
    total = np.zeros((5, 5))
    for i, pi in enumerate(p.probabilities):
        e = np.zeros(5)
        e[i] = 1.0
        total += pi * np.outer(e, e)  # |e_i|^2 == 1
    assert np.array_equal(total, p.covariance)


def test_noiseless_samples_interpolate():
    p = make_one_hot_problem(4, "uniform")
    rng = np.random.default_rng(3)
    for _ in range(20):
        s = sample(p, rng)
        assert s.response == pytest.approx(s.features @ p.optimum, abs=0)


def test_second_moment_of_response():
    p = make_gaussian_problem(2, 0.0, 1.0, 0.3, seed=6)
    rng = np.random.default_rng(2)
    _, resp = sample_chunk(p, rng, 300_000)
    expected = np.dot(p.optimum, p.optimum) + 0.09
    assert abs(np.mean(resp ** 2) - expected) < 0.02


def test_sampling_deterministic_given_state():
    p = make_gaussian_problem(3, 1.0, 1.0, 0.1, seed=8)
    a = sample_chunk(p, np.random.default_rng(42), 100)
    b = sample_chunk(p, np.random.default_rng(42), 100)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_excess_risk_values():
    p = make_gaussian_problem(2, 4.0, 1.0, 0.0, seed=9)
    assert excess_risk(p, p.optimum) == 0.0
    # diag(1, 1/16) spectrum with offset (1, 1) along the eigenbasis
    _, basis = np.linalg.eigh(p.covariance)
    offset = basis @ np.ones(2)
    assert excess_risk(p, p.optimum + offset) == pytest.approx(
        0.5 * (1 + 1 / 16), abs=1e-12)

    ph = make_one_hot_problem(4, "uniform")
    assert excess_risk(ph, np.zeros(4)) == pytest.approx(0.125, abs=1e-15)


def test_excess_risk_dimension_mismatch():
    p = make_one_hot_problem(3, "uniform")
    with pytest.raises(ValueError):
        excess_risk(p, np.zeros(4))


def test_excess_risk_convexity():
    p = make_gaussian_problem(5, 2.0, 1.0, 0.0, seed=10)
    rng = np.random.default_rng(0)
    for _ in range(50):
        x1 = rng.standard_normal(5)
        x2 = rng.standard_normal(5)
        t = rng.random()
        lhs = excess_risk(p, t * x1 + (1 - t) * x2)
        rhs = t * excess_risk(p, x1) + (1 - t) * excess_risk(p, x2)
        assert lhs <= rhs + 1e-12


def test_problem_arrays_are_frozen():
    p = make_one_hot_problem(3, "uniform")
    with pytest.raises(ValueError):
        p.covariance[0, 0] = 2.0


def test_kind_enum_round_trip():
    p = make_gaussian_problem(2, 1.0, 1.0, 0.0, seed=0)
    assert p.distribution_kind is DistributionKind.GAUSSIAN
    assert p.describe()["kind"] == "gaussian"
