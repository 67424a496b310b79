import numpy as np
import pytest

import oracles
from bindep.core import ContingencyTable, DomainError
from bindep.estimation import (
    BoundaryError,
    LongRunCovariance,
    MomentEstimates,
    OmegaSource,
    PairedBinarySample,
    SampleMode,
    SingularityError,
    bartlett_weights,
    default_bandwidth,
    jacobians,
    omega_for,
    omega_hac,
    omega_iid,
    omega_iid_matrix,
)

SMALLPOX = ContingencyTable(197, 2, 139, 19)
FROZEN_OMEGA = np.array(
    [
        [0.2467026, 0.02718735, 0.24422318],
        [0.02718735, 0.05536332, 0.03246004],
        [0.24422318, 0.03246004, 0.24731461],
    ]
)


def _markov_pair(n, seed, stay=0.7):
    rng = np.random.default_rng(seed)
    x = np.empty(n, dtype=np.int8)
    x[0] = 1
    for i in range(1, n):
        x[i] = x[i - 1] if rng.random() < stay else rng.integers(0, 2)
    y = np.where(rng.random(n) < 0.8, x, 1 - x)
    return PairedBinarySample(x, y, SampleMode.TIME_SERIES)


class TestSample:
    def test_validation(self):
        with pytest.raises(DomainError):
            PairedBinarySample([0, 1, 2], [0, 1, 1])
        with pytest.raises(DomainError):
            PairedBinarySample([0, 1], [0])
        with pytest.raises(DomainError):
            PairedBinarySample([], [])

    def test_round_trip_table(self):
        s = PairedBinarySample.from_table(SMALLPOX)
        assert s.n == 357 and s.table() == SMALLPOX
        assert not s.x.flags.writeable


class TestMoments:
    def test_smallpox(self):
        m = MomentEstimates.from_table(SMALLPOX)
        assert (m.p_hat, m.q_hat, m.r_hat) == (199 / 357, 336 / 357, 197 / 357)
        assert m.sigma_hat == pytest.approx(55 / 2023, abs=1e-16)
        assert m.m_plus_hat == pytest.approx(199 / 357 - 199 * 336 / 357**2, abs=1e-15)
        assert m.is_interior

    @pytest.mark.parametrize(
        "counts,flags",
        [((5, 0, 3, 2), ("zero_cell",)), ((5, 5, 0, 0), ("p_hat_degenerate",)), ((0, 4, 0, 6), ("q_hat_degenerate",))],
    )
    def test_boundary_flags(self, counts, flags):
        m = MomentEstimates.from_table(ContingencyTable(*counts))
        assert m.boundary_flags == flags
        with pytest.raises(BoundaryError):
            m.require_interior()
        with pytest.raises(BoundaryError):
            jacobians(m)

    def test_swap(self):
        m = MomentEstimates.from_table(SMALLPOX).swap()
        assert (m.p_hat, m.q_hat) == (336 / 357, 199 / 357)
        assert m.counts == (197, 139, 2, 19)


class TestOmega:
    def test_iid_frozen_and_bruteforce(self):
        m = MomentEstimates.from_table(SMALLPOX)
        om = omega_iid(m).omega
        np.testing.assert_allclose(om, FROZEN_OMEGA, atol=5e-9)
        s = PairedBinarySample.from_table(SMALLPOX)
        np.testing.assert_allclose(om, oracles.omega_bruteforce(s.x, s.y), atol=1e-14)

    def test_iid_matrix_random(self):
        rng = np.random.default_rng(31)
        x = rng.integers(0, 2, 500)
        y = rng.integers(0, 2, 500)
        m = MomentEstimates.from_sample(PairedBinarySample(x, y))
        np.testing.assert_allclose(omega_iid_matrix(m.p_hat, m.q_hat, m.r_hat), oracles.omega_bruteforce(x, y), atol=1e-14)

    def test_hac_lag_zero_is_empirical(self):
        s = _markov_pair(400, 1)
        w = s.w_matrix()
        c = w - w.mean(axis=0)
        assert np.array_equal(omega_hac(s, 0).omega, c.T @ c / s.n)
        np.testing.assert_allclose(omega_hac(s, 0).omega, np.cov(w, rowvar=False, bias=True), atol=1e-15)
        np.testing.assert_allclose(omega_hac(s, 0).omega, oracles.omega_bruteforce(s.x, s.y), atol=1e-15)

    @pytest.mark.parametrize("m_n", [1, 3, 8])
    def test_hac_matches_double_loop(self, m_n):
        s = _markov_pair(300, 2)
        np.testing.assert_allclose(omega_hac(s, m_n).omega, oracles.hac_double_loop(s.x, s.y, m_n), atol=1e-13)

    def test_hac_iid_consistency(self):
        rng = np.random.default_rng(33)
        x = (rng.random(100_000) < 0.4).astype(np.int8)
        y = np.where(rng.random(100_000) < 0.7, x, (rng.random(100_000) < 0.5)).astype(np.int8)
        s = PairedBinarySample(x, y, SampleMode.TIME_SERIES)
        m = MomentEstimates.from_sample(s)
        np.testing.assert_allclose(omega_hac(s).omega, omega_iid(m).omega, atol=0.01)

    def test_bandwidth(self):
        assert default_bandwidth(5000) == int(1.3 * 5000**0.2)
        assert default_bandwidth(2) == 1
        np.testing.assert_allclose(bartlett_weights(3), [0.75, 0.5, 0.25])
        s = _markov_pair(10, 3)
        with pytest.raises(DomainError):
            omega_hac(s, 10)
        with pytest.raises(DomainError):
            omega_hac(s, 2, weights=[1.0])

    def test_omega_for(self):
        s = _markov_pair(200, 4)
        m = MomentEstimates.from_sample(s)
        assert omega_for(m, s, mode="timeseries").source is OmegaSource.HAC
        assert omega_for(m).source is OmegaSource.IID_PLUGIN
        with pytest.raises(DomainError):
            omega_for(m, None, mode="timeseries")

    def test_long_run_covariance_checks(self):
        with pytest.raises(DomainError):
            LongRunCovariance(np.eye(2))
        with pytest.raises(DomainError):
            LongRunCovariance(np.array([[1, 0.5, 0], [0, 1, 0], [0, 0, 1.0]]))
        with pytest.raises(SingularityError):
            LongRunCovariance(np.diag([1.0, 1.0, -1.0])).sqrt()
        lr = LongRunCovariance(FROZEN_OMEGA)
        s = lr.sqrt()
        np.testing.assert_allclose(s @ s, FROZEN_OMEGA, atol=1e-12)
        sw = lr.swap().omega
        assert sw[0, 0] == FROZEN_OMEGA[1, 1] and sw[0, 2] == FROZEN_OMEGA[1, 2]


class TestJacobians:
    def test_finite_differences(self):
        worst = oracles.jacobian_fd_errors(100, seed=41)
        assert max(worst.values()) < 1e-4, worst

    def test_shapes_and_readonly(self):
        J = jacobians(MomentEstimates.from_table(SMALLPOX))
        assert J.J_g.shape == (3,) and J.J_h_plus.shape == (2, 3) and J.J_f.shape == (4, 3)
        assert not J.J_g.flags.writeable
        np.testing.assert_array_equal(J.Delta, [-336 / 357, -199 / 357, 1.0])
