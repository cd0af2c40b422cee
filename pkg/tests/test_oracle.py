import math

import numpy as np
import pytest

from blochmle.core import CountRecord, InvalidInputError, temporal_estimate
from blochmle.oracle import (
    OracleConfig,
    _minimize_on_sphere,
    empirical_kl,
    negative_log_likelihood,
    oracle_mle,
    sphere_nll_minimizer,
)
from blochmle.projector import project_mle

EQUAL = np.array([1 / 3, 1 / 3, 1 / 3])


def test_config_validation():
    with pytest.raises(InvalidInputError):
        OracleConfig(coarse_grid=4)
    with pytest.raises(InvalidInputError):
        OracleConfig(tolerance=0.0)
    with pytest.raises(InvalidInputError):
        OracleConfig(refine_shrink=1.0)


def test_interior_returned_unchanged():
    xi = np.array([0.3, -0.1, 0.2])
    np.testing.assert_array_equal(oracle_mle(xi, EQUAL), xi)


def test_symmetric_case():
    x = oracle_mle(np.array([0.8, 0.8, 0.8]), EQUAL)
    np.testing.assert_allclose(x, np.full(3, 1 / math.sqrt(3)), atol=1e-5)


def test_agreement_with_projector_equal_weights():
    xi = np.array([0.9, 0.8, 0.5])
    gap = np.max(np.abs(oracle_mle(xi, EQUAL) - project_mle(xi, EQUAL).xi_star))
    assert gap < 1e-4


def test_agreement_with_projector_weighted():
    xi = np.array([0.9, 0.8, 0.5])
    s = np.array([0.25, 0.5, 0.25])
    weighted = oracle_mle(xi, s)
    gap = np.max(np.abs(weighted - project_mle(xi, s).xi_star))
    assert gap < 1e-4
    # unequal weights must actually move the answer
    equal_answer = oracle_mle(xi, EQUAL)
    assert np.max(np.abs(weighted - equal_answer)) > 1e-3


def test_monotone_refinement():
    history = []
    xi = np.array([0.9, 0.8, 0.5])
    _minimize_on_sphere(lambda pts: empirical_kl(xi, EQUAL, pts), OracleConfig(), history)
    assert all(b <= a + 1e-15 for a, b in zip(history, history[1:]))


def test_boundary_empirical_component():
    # xi_hat with a +-1 entry exercises the 0 log 0 convention
    x = oracle_mle(np.array([1.0, 0.3, 0.0]), EQUAL)
    gap = np.max(np.abs(x - project_mle(np.array([1.0, 0.3, 0.0]), EQUAL).xi_star))
    assert gap < 1e-4


class TestNegativeLogLikelihood:
    def test_interior_minimizer_is_empirical(self):
        counts = CountRecord((80, 50, 65), (20, 50, 35))
        xi_hat, _ = temporal_estimate(counts)
        base = negative_log_likelihood(xi_hat, counts)
        for delta in np.eye(3) * 1e-3:
            assert negative_log_likelihood(xi_hat + delta, counts) > base
            assert negative_log_likelihood(xi_hat - delta, counts) > base

    def test_projected_beats_random_sphere_points(self):
        counts = CountRecord((95, 90, 80), (5, 10, 20))
        xi_hat, s_hat = temporal_estimate(counts)
        x_star = project_mle(xi_hat, s_hat).xi_star
        best = negative_log_likelihood(x_star, counts)
        rng = np.random.default_rng(37)
        for _ in range(200):
            r = rng.normal(size=3)
            r /= np.linalg.norm(r)
            assert best <= negative_log_likelihood(r, counts) + 1e-9

    def test_domain_violation(self):
        counts = CountRecord((10, 10, 10), (0, 10, 10))
        with pytest.raises(InvalidInputError):
            negative_log_likelihood(np.array([0.0, 1.0, 0.0]), counts)
        # axis 1 has no spin-down counts, so xi_1 = 1 is fine
        assert np.isfinite(negative_log_likelihood(np.array([1.0, 0.0, 0.0]), counts))

    def test_count_shift_moves_minimizer_continuously(self):
        counts = CountRecord((95, 90, 80), (5, 10, 20))
        shifted = CountRecord((105, 100, 90), (15, 20, 30))
        a = sphere_nll_minimizer(counts)
        b = sphere_nll_minimizer(shifted)
        assert 0.0 < np.max(np.abs(a - b)) < 0.5


def test_objective_formulations_agree():
    # minimizing the weighted-KL objective and the raw likelihood must pick
    # the same sphere point; they differ by constants only
    counts = CountRecord((95, 90, 80), (5, 10, 20))
    xi_hat, s_hat = temporal_estimate(counts)
    from_kl = oracle_mle(xi_hat, s_hat)
    from_nll = sphere_nll_minimizer(counts)
    assert np.max(np.abs(from_kl - from_nll)) < 1e-6


def test_oracle_projector_agreement_battery():
    rng = np.random.default_rng(41)
    worst = 0.0
    for _ in range(30):
        xi = rng.uniform(-1.0, 1.0, 3)
        if np.dot(xi, xi) <= 1.0:
            continue
        w = rng.uniform(0.1, 1.0, 3)
        w /= w.sum()
        gap = np.max(np.abs(oracle_mle(xi, w) - project_mle(xi, w).xi_star))
        worst = max(worst, gap)
    assert worst < 1e-4
