"""Hot numerical kernels, each with a numba implementation and a numpy twin.

The public entry points (``bvn_upper``, ``hac_lag_sum``, ``draw_cells``,
``cole_limit_draws``) dispatch on :data:`bindep._accel.USE_NUMBA`. The
``*_nb`` / ``*_np`` functions are importable directly for testing and
benchmarking both paths in one process.
"""

import math

import numpy as np

from . import _accel
from ._accel import njit

_TWO_PI = 2.0 * math.pi
_SQRT_TWO_PI = math.sqrt(_TWO_PI)
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _gl_nodes(half_x, half_w):
    x = np.asarray(half_x, dtype=np.float64)
    w = np.asarray(half_w, dtype=np.float64)
    return np.concatenate([1.0 - x, 1.0 + x]), np.concatenate([w, w])


# Gauss-Legendre nodes on [0, 2] for 6, 12 and 20 points (Genz's BVNU tables).
_X6, _W6 = _gl_nodes(
    [0.9324695142031522, 0.6612093864662647, 0.2386191860831970],
    [0.1713244923791705, 0.3607615730481384, 0.4679139345726904],
)
_X12, _W12 = _gl_nodes(
    [0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
     0.5873179542866171, 0.3678314989981802, 0.1252334085114692],
    [0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
     0.2031674267230659, 0.2334925365383547, 0.2491470458134029],
)
_X20, _W20 = _gl_nodes(
    [0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
     0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
     0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
     0.07652652113349733],
    [0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
     0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
     0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
     0.1527533871307259],
)
for _arr in (_X6, _W6, _X12, _W12, _X20, _W20):
    _arr.setflags(write=False)


# ---------------------------------------------------------------------------
# Bivariate normal upper orthant P(X > h, Y > k), Drezner-Wesolowsky / Genz
# ---------------------------------------------------------------------------

@njit
def _phid_nb(z):
    return 0.5 * math.erfc(-z * _INV_SQRT2)


@njit
def _bvnu_scalar_nb(dh, dk, r):
    inf = math.inf
    if dh == inf or dk == inf:
        return 0.0
    if dh == -inf:
        if dk == -inf:
            return 1.0
        return _phid_nb(-dk)
    if dk == -inf:
        return _phid_nb(-dh)
    if r == 0.0:
        return _phid_nb(-dh) * _phid_nb(-dk)

    ar = abs(r)
    if ar < 0.3:
        x = _X6
        w = _W6
    elif ar < 0.75:
        x = _X12
        w = _W12
    else:
        x = _X20
        w = _W20

    h = dh
    k = dk
    hk = h * k
    bvn = 0.0
    if ar < 0.925:
        hs = (h * h + k * k) / 2.0
        asr = math.asin(r) / 2.0
        s = 0.0
        for i in range(x.shape[0]):
            sn = math.sin(asr * x[i])
            s += w[i] * math.exp((sn * hk - hs) / (1.0 - sn * sn))
        bvn = s * asr / _TWO_PI + _phid_nb(-h) * _phid_nb(-k)
    else:
        if r < 0.0:
            k = -k
            hk = -hk
        if ar < 1.0:
            as_ = (1.0 - ar) * (1.0 + ar)
            a = math.sqrt(as_)
            bs = (h - k) * (h - k)
            asr = -(bs / as_ + hk) / 2.0
            c = (4.0 - hk) / 8.0
            d = (12.0 - hk) / 80.0
            if asr > -100.0:
                bvn = a * math.exp(asr) * (
                    1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_
                )
            if hk > -100.0:
                b = math.sqrt(bs)
                sp = _SQRT_TWO_PI * _phid_nb(-b / a)
                bvn = bvn - math.exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0)
            a = a / 2.0
            s = 0.0
            for i in range(x.shape[0]):
                xs = (a * x[i]) ** 2
                asr_i = -(bs / xs + hk) / 2.0
                if asr_i > -100.0:
                    sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs)
                    rs = math.sqrt(1.0 - xs)
                    ep = math.exp(-(hk / 2.0) * xs / ((1.0 + rs) ** 2)) / rs
                    s += w[i] * math.exp(asr_i) * (sp - ep)
            bvn = (a * s - bvn) / _TWO_PI
        if r > 0.0:
            bvn = bvn + _phid_nb(-max(h, k))
        elif h >= k:
            bvn = -bvn
        else:
            if h < 0.0:
                lo = _phid_nb(k) - _phid_nb(h)
            else:
                lo = _phid_nb(-h) - _phid_nb(-k)
            bvn = lo - bvn
    return min(1.0, max(0.0, bvn))


@njit
def bvn_upper_nb(h, k, r):
    out = np.empty(h.shape[0])
    for i in range(h.shape[0]):
        out[i] = _bvnu_scalar_nb(h[i], k[i], r[i])
    return out


def _phid_np(z):
    from scipy.special import ndtr

    return ndtr(z)


def bvn_upper_np(h, k, r):
    """Vectorised numpy version of the upper-orthant kernel (1-d inputs)."""
    h = np.asarray(h, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros(h.shape)

    fin = np.isfinite(h) & np.isfinite(k)
    pinf = (h == np.inf) | (k == np.inf)
    both_ninf = (h == -np.inf) & (k == -np.inf)
    h_ninf = (h == -np.inf) & ~both_ninf & ~pinf
    k_ninf = (k == -np.inf) & ~both_ninf & ~pinf
    out[both_ninf] = 1.0
    out[h_ninf] = _phid_np(-k[h_ninf])
    out[k_ninf] = _phid_np(-h[k_ninf])

    ar = np.abs(r)
    zero = fin & (r == 0.0)
    out[zero] = _phid_np(-h[zero]) * _phid_np(-k[zero])

    for lo, hi, x, w in ((0.0, 0.3, _X6, _W6), (0.3, 0.75, _X12, _W12), (0.75, 0.925, _X20, _W20)):
        m = fin & (r != 0.0) & (ar >= lo) & (ar < hi)
        if not m.any():
            continue
        hh, kk, rr = h[m], k[m], r[m]
        hk = hh * kk
        hs = (hh * hh + kk * kk) / 2.0
        asr = np.arcsin(rr) / 2.0
        sn = np.sin(asr[:, None] * x[None, :])
        s = np.exp((sn * hk[:, None] - hs[:, None]) / (1.0 - sn * sn)) @ w
        out[m] = s * asr / _TWO_PI + _phid_np(-hh) * _phid_np(-kk)

    m = fin & (ar >= 0.925)
    if m.any():
        hh, kk, rr = h[m], k[m].copy(), r[m]
        aar = np.abs(rr)
        hk = hh * kk
        neg = rr < 0.0
        kk[neg] = -kk[neg]
        hk[neg] = -hk[neg]
        bvn = np.zeros(hh.shape)
        inner = aar < 1.0
        if inner.any():
            hi_, ki, hki, ai = hh[inner], kk[inner], hk[inner], aar[inner]
            as_ = (1.0 - ai) * (1.0 + ai)
            a = np.sqrt(as_)
            bs = (hi_ - ki) ** 2
            asr = -(bs / as_ + hki) / 2.0
            c = (4.0 - hki) / 8.0
            d = (12.0 - hki) / 80.0
            with np.errstate(under="ignore"):
                t1 = np.where(
                    asr > -100.0,
                    a * np.exp(np.maximum(asr, -700.0))
                    * (1.0 - c * (bs - as_) * (1.0 - d * bs) / 3.0 + c * d * as_ * as_),
                    0.0,
                )
                b = np.sqrt(bs)
                sp = _SQRT_TWO_PI * _phid_np(-b / a)
                t2 = np.where(
                    hki > -100.0,
                    np.exp(np.minimum(-hki / 2.0, 700.0)) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0),
                    0.0,
                )
                v = t1 - t2
                a2 = a / 2.0
                xs = (a2[:, None] * _X20[None, :]) ** 2
                asr_i = -(bs[:, None] / xs + hki[:, None]) / 2.0
                spi = 1.0 + c[:, None] * xs * (1.0 + 5.0 * d[:, None] * xs)
                rs = np.sqrt(1.0 - xs)
                ep = np.exp(-(hki[:, None] / 2.0) * xs / (1.0 + rs) ** 2) / rs
                terms = np.where(asr_i > -100.0, np.exp(np.maximum(asr_i, -700.0)) * (spi - ep), 0.0)
            bvn[inner] = (a2 * (terms @ _W20) - v) / _TWO_PI
        pos = rr > 0.0
        bvn[pos] = bvn[pos] + _phid_np(-np.maximum(hh[pos], kk[pos]))
        ge = ~pos & (hh >= kk)
        bvn[ge] = -bvn[ge]
        lt = ~pos & (hh < kk)
        lo = np.where(
            hh[lt] < 0.0,
            _phid_np(kk[lt]) - _phid_np(hh[lt]),
            _phid_np(-hh[lt]) - _phid_np(-kk[lt]),
        )
        bvn[lt] = lo - bvn[lt]
        out[m] = bvn
    return np.clip(out, 0.0, 1.0)


def bvn_upper(h, k, r):
    """P(X > h, Y > k) for standard bivariate normal with correlation ``r``.

    Arguments are broadcast together; the result has the broadcast shape.
    """
    h, k, r = np.broadcast_arrays(
        np.asarray(h, dtype=np.float64), np.asarray(k, dtype=np.float64), np.asarray(r, dtype=np.float64)
    )
    shape = h.shape
    flat = (np.ascontiguousarray(h).ravel(), np.ascontiguousarray(k).ravel(), np.ascontiguousarray(r).ravel())
    if _accel.USE_NUMBA:
        out = bvn_upper_nb(*flat)
    else:
        out = bvn_upper_np(*flat)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# HAC: Bartlett-weighted sum of symmetrised lag autocovariances
# ---------------------------------------------------------------------------

@njit
def hac_lag_sum_nb(wc, weights):
    n, d = wc.shape
    out = np.zeros((d, d))
    for i in range(n):
        for a in range(d):
            for b in range(d):
                out[a, b] += wc[i, a] * wc[i, b]
    for j in range(1, weights.shape[0] + 1):
        wj = weights[j - 1]
        g = np.zeros((d, d))
        for i in range(j, n):
            for a in range(d):
                for b in range(d):
                    g[a, b] += wc[i, a] * wc[i - j, b]
        for a in range(d):
            for b in range(d):
                out[a, b] += wj * (g[a, b] + g[b, a])
    return out / n


def hac_lag_sum_np(wc, weights):
    n = wc.shape[0]
    out = wc.T @ wc
    for j, wj in enumerate(weights, start=1):
        g = wc[j:].T @ wc[:-j]
        out = out + wj * (g + g.T)
    return out / n


def hac_lag_sum(wc, weights):
    """Lag-0 outer-product sum plus weighted symmetrised lags, divided by n."""
    wc = np.ascontiguousarray(wc, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if _accel.USE_NUMBA:
        return hac_lag_sum_nb(wc, weights)
    return hac_lag_sum_np(wc, weights)


# ---------------------------------------------------------------------------
# Inverse-CDF assignment of uniforms to the four table cells
# ---------------------------------------------------------------------------

@njit
def draw_cells_nb(u, cum):
    out = np.empty(u.shape[0], dtype=np.int8)
    for i in range(u.shape[0]):
        c = 0
        while c < 3 and u[i] >= cum[c]:
            c += 1
        out[i] = c
    return out


def draw_cells_np(u, cum):
    return np.searchsorted(cum, u, side="right").astype(np.int8)


def draw_cells(u, cum):
    """Map uniforms to cell codes 0=(1,1), 1=(1,0), 2=(0,1), 3=(0,0).

    ``cum`` holds the three interior cumulative thresholds.
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    cum = np.ascontiguousarray(cum, dtype=np.float64)
    if _accel.USE_NUMBA:
        return draw_cells_nb(u, cum)
    return draw_cells_np(u, cum)


# ---------------------------------------------------------------------------
# Cole's C limit functionals at the kinks of m+ / m-
# ---------------------------------------------------------------------------

@njit
def cole_limit_draws_nb(z, b, lam0, lam1, negative):
    n = z.shape[0]
    out = np.empty(n)
    for i in range(n):
        v1 = b[0, 0] * z[i, 0] + b[0, 1] * z[i, 1] + b[0, 2] * z[i, 2]
        v2 = b[1, 0] * z[i, 0] + b[1, 1] * z[i, 1] + b[1, 2] * z[i, 2]
        v3 = b[2, 0] * z[i, 0] + b[2, 1] * z[i, 1] + b[2, 2] * z[i, 2]
        v4 = b[3, 0] * z[i, 0] + b[3, 1] * z[i, 1] + b[3, 2] * z[i, 2]
        if negative:
            s = v1 + v2
            m = v3 - s if s > 0.0 else v3
        else:
            m = (v1 - v3) - (v1 - v2) if v1 > v2 else v1 - v3
        out[i] = lam0 * v4 + lam1 * m
    return out


def cole_limit_draws_np(z, b, lam0, lam1, negative):
    v = z @ b.T
    v1, v2, v3, v4 = v[:, 0], v[:, 1], v[:, 2], v[:, 3]
    if negative:
        s = v1 + v2
        m = np.where(s > 0.0, v3 - s, v3)
    else:
        m = np.where(v1 > v2, (v1 - v3) - (v1 - v2), v1 - v3)
    return lam0 * v4 + lam1 * m


def cole_limit_draws(z, b, lam0, lam1, negative):
    """Evaluate ``lam . (V4, kink term)`` with ``V = b @ z_i`` for each row of ``z``.

    ``negative=False`` gives the p = q functional ``[V1 - V3] - 1{V1 > V2}[V1 - V2]``;
    ``negative=True`` gives the p = 1 - q functional ``V3 - 1{V1 > -V2}[V1 + V2]``.
    """
    z = np.ascontiguousarray(z, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if _accel.USE_NUMBA:
        return cole_limit_draws_nb(z, b, float(lam0), float(lam1), bool(negative))
    return cole_limit_draws_np(z, b, float(lam0), float(lam1), bool(negative))


def bvn_upper_scalar(h: float, k: float, r: float) -> float:
    """Scalar form of :func:`bvn_upper` without array allocation on the numba path."""
    if _accel.USE_NUMBA:
        return _bvnu_scalar_nb(float(h), float(k), float(r))
    return float(bvn_upper_np(np.array([h], dtype=np.float64), np.array([k], dtype=np.float64), np.array([r], dtype=np.float64))[0])
