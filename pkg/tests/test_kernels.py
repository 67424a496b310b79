import os
import subprocess
import sys

import numpy as np
import pytest

import oracles
from bindep import _accel, kernels


@pytest.fixture(scope="module")
def bvn_points():
    rng = np.random.default_rng(21)
    n = 2000
    h = rng.uniform(-4, 4, n)
    k = rng.uniform(-4, 4, n)
    r = rng.uniform(-1, 1, n)
    r[:20] = np.array([-1.0, 1.0] * 10)
    r[20:40] = 0.0
    r[40:60] = rng.choice([-0.999, 0.999, -0.95, 0.95], 20)
    return h, k, r


def test_bvn_backends_agree(bvn_points):
    h, k, r = bvn_points
    np.testing.assert_allclose(kernels.bvn_upper_nb(h, k, r), kernels.bvn_upper_np(h, k, r), atol=1e-15, rtol=0)


def test_bvn_against_quadrature(bvn_points):
    h, k, r = bvn_points
    sel = np.abs(r) < 0.999
    up = kernels.bvn_upper_np(h[sel][:200], k[sel][:200], r[sel][:200])
    ref = [oracles.bvn_cdf_plackett(-a, -b, c) for a, b, c in zip(h[sel][:200], k[sel][:200], r[sel][:200])]
    np.testing.assert_allclose(up, ref, atol=1e-10, rtol=0)


def test_bvn_scalar_matches_array():
    for args in [(0.3, -0.2, 0.6), (-1.0, 2.0, -0.95), (0.0, 0.0, 0.0)]:
        assert kernels.bvn_upper_scalar(*args) == pytest.approx(float(kernels.bvn_upper(*map(np.array, args))), abs=1e-16)


def test_bvn_broadcast_shape():
    out = kernels.bvn_upper(np.zeros((2, 3)), 0.0, 0.5)
    assert out.shape == (2, 3)
    np.testing.assert_allclose(out, oracles.orthant(0.5), atol=1e-15)


def test_hac_backends_and_oracle():
    rng = np.random.default_rng(22)
    x = rng.integers(0, 2, 300)
    y = (x ^ (rng.random(300) < 0.3)).astype(int)
    w = np.column_stack([x, y, x * y]).astype(float)
    wc = w - w.mean(axis=0)
    for m in (0, 1, 4, 9):
        wts = 1 - np.arange(1, m + 1) / (m + 1)
        ref = oracles.hac_double_loop(x, y, m)
        np.testing.assert_allclose(kernels.hac_lag_sum_nb(wc, wts), ref, atol=1e-13)
        np.testing.assert_allclose(kernels.hac_lag_sum_np(wc, wts), ref, atol=1e-13)


def test_draw_cells_backends_agree():
    rng = np.random.default_rng(23)
    u = rng.random(10_000)
    cum = np.array([0.2, 0.5, 0.5])  # an empty third cell
    a, b = kernels.draw_cells_nb(u, cum), kernels.draw_cells_np(u, cum)
    assert np.array_equal(a, b)
    assert not np.any(a == 2)
    assert a.dtype == np.int8
    # boundary uniforms land in the upper cell, as for side="right"
    assert list(kernels.draw_cells_nb(np.array([0.0, 0.2, 0.5]), cum)) == [0, 1, 3]


@pytest.mark.parametrize("negative", [False, True])
def test_cole_limit_draws_backends_agree(negative):
    rng = np.random.default_rng(24)
    z = rng.standard_normal((5000, 3))
    b = rng.standard_normal((4, 3))
    a = kernels.cole_limit_draws_nb(z, b, 1.7, -0.4, negative)
    c = kernels.cole_limit_draws_np(z, b, 1.7, -0.4, negative)
    np.testing.assert_allclose(a, c, atol=1e-13)


def test_env_flag_selects_numpy():
    env = dict(os.environ, BINDEP_DISABLE_NUMBA="1")
    code = "from bindep import _accel; print(_accel.backend())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    assert _accel.backend() in {"numba", "numpy"}
