"""Population dependence measures for two events.

Scalar functions take a :class:`~bindep.core.JointBinaryDistribution`; the
``*_array`` variants take broadcastable ``p, q, r`` arrays that are assumed to
be valid triples and are used for grids and property checks.

Measures with a value fixed by perfect dependence (C, Q, Q_g, φ where
attainable) return exactly ±1 when a cell probability is within
:data:`~bindep.core.CELL_TOL` of zero, instead of evaluating a 0/0 form.
"""

from __future__ import annotations

import enum
import math

import numpy as np

from .core import CELL_TOL, DomainError, JointBinaryDistribution, PerfectDependence, fh_bounds, is_perfectly_dependent


class MeasureKind(str, enum.Enum):
    COVARIANCE = "covariance"
    PHI = "phi"
    COLE = "cole"
    YULE_Q = "yule_q"
    YULE_G = "yule_g"
    ODDS_RATIO = "odds_ratio"
    MSC = "msc"
    CRAMERS_V = "cramers_v"
    TSCHUPROW_T = "tschuprow_t"
    PEARSON_CC = "pearson_cc"
    DISTANCE_COR = "distance_cor"
    CHATTERJEE_XI = "chatterjee_xi"
    UNCERTAINTY = "uncertainty"
    TETRACHORIC = "tetrachoric"


def _cells(p, q, r):
    return r, p - r, q - r, 1.0 - p - q + r


def _boundary_masks(p, q, r, tol=CELL_TOL):
    a, b, c, d = _cells(p, q, r)
    pos = (b <= tol) | (c <= tol)
    neg = ~pos & ((a <= tol) | (d <= tol))
    return pos, neg


def _as_arrays(p, q, r):
    return np.broadcast_arrays(
        np.asarray(p, dtype=np.float64), np.asarray(q, dtype=np.float64), np.asarray(r, dtype=np.float64)
    )


# --- array kernels ---------------------------------------------------------

def covariance_array(p, q, r):
    p, q, r = _as_arrays(p, q, r)
    return r - p * q


def phi_array(p, q, r):
    p, q, r = _as_arrays(p, q, r)
    out = (r - p * q) / np.sqrt(p * (1.0 - p) * q * (1.0 - q))
    pos, neg = _boundary_masks(p, q, r)
    out = np.where(pos & (np.abs(p - q) <= CELL_TOL), 1.0, out)
    out = np.where(neg & (np.abs(p + q - 1.0) <= CELL_TOL), -1.0, out)
    return np.clip(out, -1.0, 1.0)


def cole_array(p, q, r):
    p, q, r = _as_arrays(p, q, r)
    pq = p * q
    s = r - pq
    m_plus = np.minimum(p, q) - pq
    m_minus = pq - np.maximum(0.0, p + q - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s >= 0.0, s / m_plus, s / m_minus)
    pos, neg = _boundary_masks(p, q, r)
    out = np.where(pos, 1.0, np.where(neg, -1.0, out))
    return np.clip(out, -1.0, 1.0)


def yule_g_array(p, q, r, g=1.0):
    """Generalised Yule coefficient ``((ad)^g - (bc)^g) / ((ad)^g + (bc)^g)``.

    Evaluated as ``tanh(g/2 * log1p(σ/bc))``, which is algebraically identical
    and keeps ``sign(Q_g) = sign(r - pq)`` exact in floating point.
    """
    g = float(g)
    if not (0.0 < g <= 1.0):
        raise DomainError(f"exponent g must lie in (0, 1], got {g!r}")
    p, q, r = _as_arrays(p, q, r)
    a, b, c, d = _cells(p, q, r)
    s = r - p * q
    bc = b * c
    pos, neg = _boundary_masks(p, q, r)
    safe_bc = np.where(pos | neg, 1.0, bc)
    if g == 1.0:
        out = s / np.where(pos | neg, 1.0, a * d + bc)
    else:
        z = np.where(pos | neg, 0.0, s / safe_bc)
        out = np.tanh(0.5 * g * np.log1p(z))
    out = np.where(pos, 1.0, np.where(neg, -1.0, out))
    return np.clip(out, -1.0, 1.0)


def yule_q_array(p, q, r):
    return yule_g_array(p, q, r, 1.0)


def odds_ratio_array(p, q, r):
    p, q, r = _as_arrays(p, q, r)
    a, b, c, d = _cells(p, q, r)
    ad = np.maximum(a, 0.0) * np.maximum(d, 0.0)
    bc = np.maximum(b, 0.0) * np.maximum(c, 0.0)
    pos, neg = _boundary_masks(p, q, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ad / bc
    return np.where(pos, np.inf, np.where(neg, 0.0, out))


def _xlogx(v):
    v = np.asarray(v, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v > 0.0, v * np.log(np.where(v > 0.0, v, 1.0)), 0.0)


def uncertainty_array(p, q, r):
    """Symmetric uncertainty coefficient with natural-log entropies."""
    p, q, r = _as_arrays(p, q, r)
    a, b, c, d = _cells(p, q, r)
    hx = -(_xlogx(p) + _xlogx(1.0 - p))
    hy = -(_xlogx(q) + _xlogx(1.0 - q))
    hxy = -(_xlogx(np.maximum(a, 0.0)) + _xlogx(np.maximum(b, 0.0)) + _xlogx(np.maximum(c, 0.0)) + _xlogx(np.maximum(d, 0.0)))
    return np.clip(2.0 * (hx + hy - hxy) / (hx + hy), 0.0, 1.0)


# --- scalar API ------------------------------------------------------------

def _f(x) -> float:
    return float(np.asarray(x).item())


def covariance(d: JointBinaryDistribution) -> float:
    return d.r - d.p * d.q


def phi(d: JointBinaryDistribution) -> float:
    return _f(phi_array(d.p, d.q, d.r))


def phi_bounds(p: float, q: float) -> tuple[float, float]:
    """Values of φ under perfect negative and perfect positive dependence."""
    lo, hi = fh_bounds(p, q)
    sd = math.sqrt(p * (1.0 - p) * q * (1.0 - q))
    lower = -1.0 if abs(p + q - 1.0) <= CELL_TOL else (lo - p * q) / sd
    upper = 1.0 if abs(p - q) <= CELL_TOL else (hi - p * q) / sd
    return lower, upper


def cole(d: JointBinaryDistribution) -> float:
    return _f(cole_array(d.p, d.q, d.r))


def yule_q(d: JointBinaryDistribution) -> float:
    return _f(yule_q_array(d.p, d.q, d.r))


def yule_g(d: JointBinaryDistribution, g: float) -> float:
    return _f(yule_g_array(d.p, d.q, d.r, g))


def yule_y(d: JointBinaryDistribution) -> float:
    """Yule's coefficient of colligation, ``Q_{0.5}``."""
    return yule_g(d, 0.5)


def odds_ratio(d: JointBinaryDistribution) -> float:
    """Cross-product ratio; ``math.inf`` under perfect positive dependence."""
    return _f(odds_ratio_array(d.p, d.q, d.r))


def or_to_q(odds: float) -> float:
    if odds < 0 or math.isnan(odds):
        raise DomainError(f"odds ratio must lie in [0, inf], got {odds!r}")
    if math.isinf(odds):
        return 1.0
    return (odds - 1.0) / (odds + 1.0)


def q_to_or(qv: float) -> float:
    if not (-1.0 <= qv <= 1.0):
        raise DomainError(f"Q must lie in [-1, 1], got {qv!r}")
    if qv == 1.0:
        return math.inf
    return (1.0 + qv) / (1.0 - qv)


def contingency_coefficients(d: JointBinaryDistribution) -> dict[str, float]:
    """MSC, Cramér's V, Tschuprow's T and Pearson's contingency coefficient."""
    ph = phi(d)
    msc = ph * ph
    return {
        "msc": msc,
        "cramers_v": abs(ph),
        "tschuprow_t": abs(ph),
        "pearson_cc": math.sqrt(msc / (1.0 + msc)),
    }


def further_measures(d: JointBinaryDistribution) -> dict[str, float]:
    """Distance correlation, Chatterjee's ξ and the uncertainty coefficient."""
    ph = phi(d)
    return {
        "distance_cor": abs(ph),
        "chatterjee_xi": ph * ph,
        "uncertainty": _f(uncertainty_array(d.p, d.q, d.r)),
    }


def all_measures(d: JointBinaryDistribution, *, include_tetrachoric: bool = True) -> dict[str, float]:
    """Every point measure for ``d`` keyed by :class:`MeasureKind` value."""
    out = {
        "covariance": covariance(d),
        "phi": phi(d),
        "cole": cole(d),
        "yule_q": yule_q(d),
        "yule_y": yule_y(d),
        "odds_ratio": odds_ratio(d),
    }
    out.update(contingency_coefficients(d))
    out.update(further_measures(d))
    if include_tetrachoric:
        from .tetrachoric import tetrachoric

        out["tetrachoric"] = tetrachoric(d)
    return out


__all__ = [
    "MeasureKind",
    "PerfectDependence",
    "all_measures",
    "cole",
    "cole_array",
    "contingency_coefficients",
    "covariance",
    "covariance_array",
    "further_measures",
    "is_perfectly_dependent",
    "odds_ratio",
    "odds_ratio_array",
    "or_to_q",
    "phi",
    "phi_array",
    "phi_bounds",
    "q_to_or",
    "uncertainty_array",
    "yule_g",
    "yule_g_array",
    "yule_q",
    "yule_q_array",
    "yule_y",
]
