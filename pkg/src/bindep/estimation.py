"""Sample moments, long-run covariance of ``W = (X, Y, XY)`` and delta-method Jacobians."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import ContingencyTable, DomainError, JointBinaryDistribution

#: Eigenvalues of Ω above ``-PSD_TOL`` are clipped to zero; anything lower is an error.
PSD_TOL = 1e-10


class BoundaryError(DomainError):
    """Moment estimates on the boundary of the domain (a zero cell or degenerate margin)."""


class SingularityError(ArithmeticError):
    pass


class SampleMode(str, enum.Enum):
    IID = "iid"
    TIME_SERIES = "timeseries"


@dataclass(frozen=True)
class PairedBinarySample:
    """Observed pairs ``(x_i, y_i)`` in {0, 1}², in time order for time-series mode."""

    x: np.ndarray
    y: np.ndarray
    mode: SampleMode = SampleMode.IID

    def __post_init__(self) -> None:
        x = np.asarray(self.x)
        y = np.asarray(self.y)
        if x.ndim != 1 or x.shape != y.shape:
            raise DomainError("x and y must be 1-d arrays of equal length")
        if x.size < 1:
            raise DomainError("sample must contain at least one pair")
        if not (np.isin(x, (0, 1)).all() and np.isin(y, (0, 1)).all()):
            raise DomainError("sample values must be 0 or 1")
        x = x.astype(np.int8)
        y = y.astype(np.int8)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mode", SampleMode(self.mode))

    @property
    def n(self) -> int:
        return int(self.x.size)

    def table(self) -> ContingencyTable:
        return ContingencyTable.from_pairs(self.x, self.y)

    def w_matrix(self) -> np.ndarray:
        """The ``n x 3`` matrix with rows ``(x_i, y_i, x_i y_i)``."""
        x = self.x.astype(np.float64)
        y = self.y.astype(np.float64)
        return np.column_stack([x, y, x * y])

    @classmethod
    def from_table(cls, table: ContingencyTable) -> "PairedBinarySample":
        """Expand counts to pairs in cell order (1,1), (1,0), (0,1), (0,0)."""
        x = np.repeat(np.array([1, 1, 0, 0], dtype=np.int8), table.counts)
        y = np.repeat(np.array([1, 0, 1, 0], dtype=np.int8), table.counts)
        return cls(x, y, SampleMode.IID)


@dataclass(frozen=True)
class MomentEstimates:
    """Plug-in estimates ``(p̂, q̂, r̂)`` with derived ``σ̂, m̂⁺, m̂⁻``.

    When built from counts, ``sigma_hat`` is computed in integer arithmetic
    and divided once, so its sign is exact.
    """

    p_hat: float
    q_hat: float
    r_hat: float
    n: int
    sigma_hat: float = field(default=math.nan)
    counts: tuple[int, int, int, int] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("sample size must be at least 1")
        if math.isnan(self.sigma_hat):
            object.__setattr__(self, "sigma_hat", self.r_hat - self.p_hat * self.q_hat)

    @classmethod
    def from_table(cls, table: ContingencyTable) -> "MomentEstimates":
        n = table.n
        n11, n10, n01, _ = table.counts
        np_, nq = n11 + n10, n11 + n01
        sigma = (n11 * n - np_ * nq) / (n * n)
        return cls(np_ / n, nq / n, n11 / n, n, sigma, table.counts)

    @classmethod
    def from_sample(cls, sample: PairedBinarySample) -> "MomentEstimates":
        return cls.from_table(sample.table())

    @classmethod
    def from_probabilities(cls, p: float, q: float, r: float, n: int) -> "MomentEstimates":
        """Population triple dressed as estimates, for evaluating limit laws at true values."""
        JointBinaryDistribution(p, q, r)
        return cls(float(p), float(q), float(r), int(n))

    @property
    def m_plus_hat(self) -> float:
        return min(self.p_hat, self.q_hat) - self.p_hat * self.q_hat

    @property
    def m_minus_hat(self) -> float:
        return self.p_hat * self.q_hat - max(0.0, self.p_hat + self.q_hat - 1.0)

    @property
    def cells(self) -> tuple[float, float, float, float]:
        p, q, r = self.p_hat, self.q_hat, self.r_hat
        if self.counts is not None:
            n = self.n
            return tuple(c / n for c in self.counts)  # type: ignore[return-value]
        return (r, p - r, q - r, 1.0 - p - q + r)

    @property
    def boundary_flags(self) -> tuple[str, ...]:
        """Reasons the estimates are unusable for asymptotic inference (empty if none)."""
        flags = []
        if not (0.0 < self.p_hat < 1.0):
            flags.append("p_hat_degenerate")
        if not (0.0 < self.q_hat < 1.0):
            flags.append("q_hat_degenerate")
        if not flags:
            if self.counts is not None:
                zero = min(self.counts) == 0
            else:
                zero = min(self.cells) <= 1e-12
            if zero:
                flags.append("zero_cell")
        return tuple(flags)

    @property
    def is_interior(self) -> bool:
        return not self.boundary_flags

    def distribution(self) -> JointBinaryDistribution:
        return JointBinaryDistribution(self.p_hat, self.q_hat, self.r_hat)

    def swap(self) -> "MomentEstimates":
        counts = None
        if self.counts is not None:
            n11, n10, n01, n00 = self.counts
            counts = (n11, n01, n10, n00)
        return MomentEstimates(self.q_hat, self.p_hat, self.r_hat, self.n, self.sigma_hat, counts)

    def require_interior(self) -> None:
        if self.boundary_flags:
            raise BoundaryError("moment estimates on the domain boundary: " + ", ".join(self.boundary_flags))


def estimate_moments(sample: PairedBinarySample) -> MomentEstimates:
    return MomentEstimates.from_sample(sample)


class OmegaSource(str, enum.Enum):
    IID_PLUGIN = "iid_plugin"
    HAC = "hac"


@dataclass(frozen=True)
class LongRunCovariance:
    """Symmetric PSD 3x3 covariance of ``W = (X, Y, XY)``."""

    omega: np.ndarray
    source: OmegaSource = OmegaSource.IID_PLUGIN
    bandwidth: int | None = None

    def __post_init__(self) -> None:
        om = np.array(self.omega, dtype=np.float64)
        if om.shape != (3, 3):
            raise DomainError("omega must be 3x3")
        if np.max(np.abs(om - om.T)) > 1e-12:
            raise DomainError("omega must be symmetric")
        om = 0.5 * (om + om.T)
        om.setflags(write=False)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "source", OmegaSource(self.source))

    def sqrt(self) -> np.ndarray:
        """Symmetric square root via eigendecomposition; small negative eigenvalues are zeroed."""
        vals, vecs = np.linalg.eigh(self.omega)
        if vals.min() < -PSD_TOL * max(1.0, abs(vals.max())):
            raise SingularityError(f"omega is not positive semi-definite (min eigenvalue {vals.min():.3e})")
        vals = np.clip(vals, 0.0, None)
        return (vecs * np.sqrt(vals)) @ vecs.T

    def quad(self, v) -> float:
        v = np.asarray(v, dtype=np.float64)
        return float(v @ self.omega @ v)

    def swap(self) -> "LongRunCovariance":
        """Ω for the pair with X and Y exchanged."""
        perm = [1, 0, 2]
        return LongRunCovariance(self.omega[np.ix_(perm, perm)], self.source, self.bandwidth)


def omega_iid_matrix(p: float, q: float, r: float) -> np.ndarray:
    return np.array(
        [
            [p * (1.0 - p), r - p * q, r * (1.0 - p)],
            [r - p * q, q * (1.0 - q), r * (1.0 - q)],
            [r * (1.0 - p), r * (1.0 - q), r * (1.0 - r)],
        ]
    )


def omega_iid(m: MomentEstimates, *, allow_boundary: bool = False) -> LongRunCovariance:
    """Plug-in ``Var(W_i)`` for independent observations."""
    if not allow_boundary:
        m.require_interior()
    return LongRunCovariance(omega_iid_matrix(m.p_hat, m.q_hat, m.r_hat), OmegaSource.IID_PLUGIN)


def default_bandwidth(n: int) -> int:
    """``floor(1.3 n^{1/5})``, capped at ``n - 1``."""
    return max(0, min(n - 1, int(math.floor(1.3 * n ** 0.2))))


def bartlett_weights(m_n: int) -> np.ndarray:
    j = np.arange(1, m_n + 1, dtype=np.float64)
    return 1.0 - j / (m_n + 1.0)


def omega_hac(sample: PairedBinarySample, m_n: int | None = None, *, weights=None) -> LongRunCovariance:
    """Newey–West estimate of the long-run covariance of ``W``.

    ``m_n`` defaults to :func:`default_bandwidth`. Custom lag weights may be
    passed as an array of length ``m_n``; Bartlett weights are used otherwise.
    """
    n = sample.n
    if m_n is None:
        m_n = default_bandwidth(n)
    m_n = int(m_n)
    if m_n < 0 or m_n >= n:
        raise DomainError(f"bandwidth must satisfy 0 <= m_n < n (got m_n={m_n}, n={n})")
    w = sample.w_matrix()
    wc = w - w.mean(axis=0)
    wts = bartlett_weights(m_n) if weights is None else np.asarray(weights, dtype=np.float64)
    if wts.shape != (m_n,):
        raise DomainError("weights must have length m_n")
    if m_n == 0:
        # the plain lag-0 covariance, a Gram matrix and hence PSD by construction
        return LongRunCovariance(wc.T @ wc / n, OmegaSource.HAC, 0)
    om = kernels.hac_lag_sum(wc, wts)
    om = 0.5 * (om + om.T)
    vals, vecs = np.linalg.eigh(om)
    if vals.min() < 0.0:
        if vals.min() < -PSD_TOL:
            raise SingularityError(f"HAC estimate not PSD (min eigenvalue {vals.min():.3e})")
        om = (vecs * np.clip(vals, 0.0, None)) @ vecs.T
    return LongRunCovariance(om, OmegaSource.HAC, m_n)


def omega_for(m: MomentEstimates, sample: PairedBinarySample | None = None, *, mode=SampleMode.IID, bandwidth: int | None = None) -> LongRunCovariance:
    """Pick the Ω estimator appropriate for ``mode``."""
    if SampleMode(mode) is SampleMode.TIME_SERIES:
        if sample is None:
            raise DomainError("time-series mode needs the raw sample, not only counts")
        m.require_interior()
        return omega_hac(sample, bandwidth)
    return omega_iid(m)


@dataclass(frozen=True)
class JacobianSet:
    """Delta-method Jacobians evaluated at ``(p, q, r)``.

    ``J_g`` is for Q, ``J_h`` for ``Z(Q)``, ``J_l`` for φ, ``J_h_plus`` and
    ``J_h_minus`` map to ``(σ, m^±)``, ``J_f`` to ``(p, q, pq, σ)`` and
    ``Lambda_plus``/``Lambda_minus`` are the gradients of ``σ/m^±``.
    """

    J_g: np.ndarray
    J_l: np.ndarray
    J_h: np.ndarray
    J_h_plus: np.ndarray
    J_h_minus: np.ndarray
    J_f: np.ndarray
    Lambda_plus: np.ndarray
    Lambda_minus: np.ndarray
    Delta: np.ndarray


def jacobians(m: MomentEstimates, *, singular_tol: float = 1e-14) -> JacobianSet:
    m.require_interior()
    p, q, r = m.p_hat, m.q_hat, m.r_hat
    sigma = r - p * q

    den = p * (q - 2.0 * r) + r * (1.0 - 2.0 * q + 2.0 * r)
    if abs(den) < singular_tol:
        raise SingularityError("J_g denominator vanishes")
    J_g = 2.0 / den ** 2 * np.array([(q - 1.0) * r * (q - r), (p - 1.0) * r * (p - r), -(p * p * q + p * q * (-1.0 + q - 2.0 * r) + r * r)])

    d00 = 1.0 - p - q + r
    J_h = -1.0 / (2.0 * (p - r) * (q - r)) * np.array([q - r, p - r, 2.0 * r - p - q]) - 1.0 / (2.0 * d00) * np.array(
        [1.0, 1.0, -(1.0 - p - q + 2.0 * r) / r]
    )

    v = p * (1.0 - p) * q * (1.0 - q)
    J_l = (1.0 / math.sqrt(v)) * (
        np.array([-q, -p, 1.0])
        + (p * q - r) / (2.0 * v) * np.array([(1.0 - p) * q * (1.0 - q) - p * q * (1.0 - q), p * (1.0 - p) * (1.0 - q) - p * (1.0 - p) * q, 0.0])
    )

    delta = np.array([-q, -p, 1.0])
    J_h_plus = np.array([delta, [float(p < q) - q, float(q < p) - p, 0.0]])
    ind = float(p + q > 1.0)
    J_h_minus = np.array([delta, [q - ind, p - ind, 0.0]])
    J_f = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [q, p, 0.0], [-q, -p, 1.0]])

    m_plus = min(p, q) - p * q
    m_minus = p * q - max(0.0, p + q - 1.0)
    lam_plus = np.array([1.0 / m_plus, -sigma / m_plus ** 2])
    lam_minus = np.array([1.0 / m_minus, -sigma / m_minus ** 2])

    out = JacobianSet(J_g, J_l, J_h, J_h_plus, J_h_minus, J_f, lam_plus, lam_minus, delta)
    for name in out.__dataclass_fields__:
        arr = getattr(out, name)
        if not np.all(np.isfinite(arr)):
            raise SingularityError(f"non-finite entry in {name}")
        arr.setflags(write=False)
    return out
