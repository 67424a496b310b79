"""Bivariate normal probabilities and the tetrachoric correlation."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import ndtri

from . import kernels
from .core import CELL_TOL, DomainError, JointBinaryDistribution

RHO_EPS = 1e-12
_SQRT1_2 = 1.0 / math.sqrt(2.0)


def norm_cdf(x):
    """Standard normal CDF via ``erfc`` (full relative accuracy in the lower tail)."""
    if np.ndim(x) == 0:
        return 0.5 * math.erfc(-float(x) * _SQRT1_2)
    from scipy.special import ndtr

    return ndtr(np.asarray(x, dtype=np.float64))


def norm_ppf(u):
    """Standard normal quantile function."""
    out = ndtri(u)
    return float(out) if np.ndim(out) == 0 else out


def bvn_cdf(h, k, rho):
    """``P(X <= h, Y <= k)`` for a standard bivariate normal with correlation ``rho``.

    Accepts scalars or broadcastable arrays. ``rho = ±1`` is handled exactly.
    """
    rho_a = np.asarray(rho, dtype=np.float64)
    if np.any(np.abs(rho_a) > 1.0) or np.any(np.isnan(rho_a)):
        raise DomainError("correlation must lie in [-1, 1]")
    if np.ndim(h) == 0 and np.ndim(k) == 0 and np.ndim(rho) == 0:
        return kernels.bvn_upper_scalar(-float(h), -float(k), float(rho))
    return kernels.bvn_upper(-np.asarray(h, dtype=np.float64), -np.asarray(k, dtype=np.float64), rho_a)


def tetrachoric(d: JointBinaryDistribution, *, xtol: float = 1e-12, maxiter: int = 200) -> float:
    """Correlation of the latent bivariate normal reproducing ``d``.

    Solves ``bvn_cdf(Φ⁻¹(p), Φ⁻¹(q), ρ) = r`` by Brent's method. Triples on a
    Fréchet–Hoeffding bound give exactly ±1.
    """
    p, q, r = d.p, d.q, d.r
    lo, hi = d.bounds
    if r - lo <= CELL_TOL:
        return -1.0
    if hi - r <= CELL_TOL:
        return 1.0
    h = norm_ppf(p)
    k = norm_ppf(q)
    if r == p * q:
        return 0.0

    def f(rho: float) -> float:
        return kernels.bvn_upper_scalar(-h, -k, rho) - r

    a, b = -1.0 + RHO_EPS, 1.0 - RHO_EPS
    fa, fb = f(a), f(b)
    if fa >= 0.0:
        return a
    if fb <= 0.0:
        return b
    return float(brentq(f, a, b, xtol=xtol, maxiter=maxiter))


def tetrachoric_array(p, q, r) -> np.ndarray:
    """Elementwise :func:`tetrachoric` over broadcastable arrays."""
    p, q, r = np.broadcast_arrays(np.asarray(p, float), np.asarray(q, float), np.asarray(r, float))
    out = np.empty(p.shape)
    for idx in np.ndindex(p.shape):
        out[idx] = tetrachoric(JointBinaryDistribution(p[idx], q[idx], r[idx]))
    return out
