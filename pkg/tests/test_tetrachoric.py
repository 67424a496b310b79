import math

import numpy as np
import pytest

import oracles
from bindep.core import ContingencyTable, DomainError, JointBinaryDistribution
from bindep.tetrachoric import bvn_cdf, norm_cdf, norm_ppf, tetrachoric, tetrachoric_array


def test_independent_medians():
    assert bvn_cdf(0.0, 0.0, 0.0) == pytest.approx(0.25, abs=1e-15)


@pytest.mark.parametrize("rho", [-0.9, -0.5, 0.3, 0.5, 0.9])
def test_orthant_closed_form(rho):
    assert bvn_cdf(0.0, 0.0, rho) == pytest.approx(oracles.orthant(rho), abs=1e-14)
    assert oracles.bvn_cdf_plackett(0.0, 0.0, rho) == pytest.approx(oracles.orthant(rho), abs=1e-12)


def test_against_quadrature_oracle():
    rng = np.random.default_rng(5)
    for _ in range(300):
        h, k = rng.uniform(-3.5, 3.5, 2)
        rho = rng.uniform(-0.99, 0.99)
        assert bvn_cdf(h, k, rho) == pytest.approx(oracles.bvn_cdf_plackett(h, k, rho), abs=1e-10)


def test_vectorised_matches_scalar():
    rng = np.random.default_rng(6)
    h, k = rng.normal(size=(2, 200))
    rho = rng.uniform(-1, 1, 200)
    vec = bvn_cdf(h, k, rho)
    assert np.allclose(vec, [bvn_cdf(*t) for t in zip(h, k, rho)], atol=1e-15, rtol=0)


def test_marginalisation_and_degenerate_rho():
    assert bvn_cdf(0.7, math.inf, 0.4) == pytest.approx(norm_cdf(0.7), abs=1e-14)
    assert bvn_cdf(0.7, -0.2, 1.0) == pytest.approx(norm_cdf(-0.2), abs=1e-14)
    assert bvn_cdf(0.7, -0.2, -1.0) == pytest.approx(max(0.0, norm_cdf(0.7) + norm_cdf(-0.2) - 1), abs=1e-14)
    with pytest.raises(DomainError):
        bvn_cdf(0.0, 0.0, 1.5)


def test_norm_helpers():
    assert norm_ppf(0.975) == pytest.approx(1.959963984540054, abs=1e-14)
    assert norm_cdf(-30.0) == pytest.approx(4.906713927148187e-198, rel=1e-12)


class TestTetrachoric:
    def test_smallpox(self):
        tc = tetrachoric(ContingencyTable(197, 2, 139, 19).to_distribution())
        assert tc == pytest.approx(0.61, abs=0.01)
        assert tc == pytest.approx(0.6118106679826234, abs=1e-9)

    def test_inverts_orthant(self):
        assert tetrachoric(JointBinaryDistribution(0.5, 0.5, 0.375)) == pytest.approx(math.sqrt(0.5), abs=1e-10)

    @pytest.mark.parametrize("triple,expected", [((0.3, 0.7, 0.3), 1.0), ((0.3, 0.7, 0.0), -1.0), ((0.4, 0.6, 0.24), 0.0)])
    def test_boundaries(self, triple, expected):
        assert tetrachoric(JointBinaryDistribution(*triple)) == expected

    def test_against_bisection_oracle(self):
        rng = np.random.default_rng(8)
        for _ in range(40):
            p, q = rng.uniform(0.05, 0.95, 2)
            lo, hi = max(0.0, p + q - 1), min(p, q)
            r = lo + rng.uniform(0.05, 0.95) * (hi - lo)
            tc = tetrachoric(JointBinaryDistribution(p, q, r))
            assert tc == pytest.approx(oracles.tetrachoric_bisect(p, q, r), abs=1e-9)
            assert bvn_cdf(norm_ppf(p), norm_ppf(q), tc) == pytest.approx(r, abs=1e-12)

    def test_array(self):
        out = tetrachoric_array([0.5, 0.3], [0.5, 0.7], [0.375, 0.3])
        assert out == pytest.approx([math.sqrt(0.5), 1.0], abs=1e-10)


def test_round_trip_recovers_rho():
    rng = np.random.default_rng(9)
    for _ in range(300):
        p, q = rng.uniform(0.02, 0.98, 2)
        rho = rng.uniform(-0.98, 0.98)
        r = bvn_cdf(norm_ppf(p), norm_ppf(q), rho)
        # extreme marginals with high |rho| round onto a bound, where rho is not identifiable
        if min(min(p, q) - r, r - max(0.0, p + q - 1)) < 1e-9:
            continue
        assert tetrachoric(JointBinaryDistribution(p, q, r)) == pytest.approx(rho, abs=1e-7)
