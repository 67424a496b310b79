"""Asymptotic laws, hypothesis tests and confidence intervals for Q, φ and C.

Q and φ have Gaussian limits and get closed-form Wald intervals, optionally
on the Fisher (arctanh) scale. Cole's C has a non-standard limit: Gaussian
away from the kinks of its normalisation, a two-sided half-normal mixture at
σ = 0, and non-Gaussian functionals at p = q (σ > 0) or p = 1 - q (σ < 0).
Intervals for C are therefore obtained by inverting a combined test over a
grid of candidate values.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from scipy.special import ndtr, ndtri

from . import kernels
from .core import DomainError
from .estimation import LongRunCovariance, MomentEstimates, jacobians
from .measures import cole_array, phi_array, yule_q_array

DEFAULT_N_MC = 100_000
DEFAULT_GRID_STEP = 0.001


class Method(str, enum.Enum):
    STANDARD = "standard"
    FISHER = "fisher"


class Strategy(str, enum.Enum):
    """Ways of combining the elementary tests for ``C = c``."""

    FULL = "full"
    NO_SIGMA = "no_sigma"
    NO_PQ = "no_pq"
    BASIC = "basic"

    @classmethod
    def parse(cls, s: "str | Strategy") -> "Strategy":
        if isinstance(s, Strategy):
            return s
        key = s.strip().lower().replace("σ", "sigma").replace(",", "").replace("-", "_").replace(" ", "_")
        aliases = {"no_sigma_test": "no_sigma", "no_pq_test": "no_pq"}
        return cls(aliases.get(key, key))


class EmptyAcceptanceWarning(UserWarning):
    pass


def fisher(z):
    """``arctanh``; raises for ``|z| >= 1``."""
    za = np.asarray(z, dtype=np.float64)
    if np.any(np.abs(za) >= 1.0):
        raise DomainError("Fisher transform needs |z| < 1")
    out = np.arctanh(za)
    return float(out) if out.ndim == 0 else out


def fisher_inv(x):
    out = np.tanh(np.asarray(x, dtype=np.float64))
    return float(out) if out.ndim == 0 else out


def _two_sided(z):
    out = 2.0 * ndtr(-np.abs(np.asarray(z, dtype=np.float64)))
    return np.minimum(out, 1.0)


def _z_crit(level: float) -> float:
    if not (0.0 < level < 1.0):
        raise DomainError(f"level must lie in (0, 1), got {level!r}")
    return float(ndtri(0.5 + level / 2.0))


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticLaw:
    """Approximate distribution of ``estimate - truth`` at sample size ``n``.

    ``kind`` is ``"gaussian"`` (uses ``variance``), ``"half_normal_mix"``
    (``base_sd * Z / m^+`` for ``Z > 0`` and ``base_sd * Z / m^-`` otherwise,
    stored as ``scale_plus = 1/m^+`` and ``scale_minus = 1/m^-``, times
    ``factor``) or ``"monte_carlo"`` (sorted ``draws``).
    """

    kind: str
    n: int
    variance: float | None = None
    scale_plus: float | None = None
    scale_minus: float | None = None
    base_sd: float | None = None
    draws: np.ndarray | None = field(default=None, repr=False)
    factor: float = 1.0

    @property
    def sd(self) -> float:
        if self.kind == "gaussian":
            return math.sqrt(self.variance)
        if self.kind == "half_normal_mix":
            # variance of a two-piece half-normal mixture
            a = self.factor * self.base_sd * self.scale_plus
            b = self.factor * self.base_sd * self.scale_minus
            mean = (a - b) / math.sqrt(2.0 * math.pi)
            return math.sqrt(0.5 * (a * a + b * b) - mean * mean)
        return float(np.std(self.draws))

    def cdf(self, x):
        """``P(L <= x)``."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "gaussian":
            return ndtr(x / math.sqrt(self.variance))
        if self.kind == "half_normal_mix":
            up = self.factor * self.base_sd * self.scale_plus
            lo = self.factor * self.base_sd * self.scale_minus
            return np.where(x >= 0.0, ndtr(x / up), ndtr(x / lo))
        return np.searchsorted(self.draws, x, side="right") / self.draws.size

    def sf_closed(self, x):
        """``P(L >= x)``."""
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "monte_carlo":
            return 1.0 - np.searchsorted(self.draws, x, side="left") / self.draws.size
        return 1.0 - self.cdf(x)

    def two_sided_p(self, x):
        """``2 min(P(L <= x), P(L >= x))`` clipped to 1."""
        return np.minimum(1.0, 2.0 * np.minimum(self.cdf(x), self.sf_closed(x)))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(size) * math.sqrt(self.variance)
        if self.kind == "half_normal_mix":
            z = rng.standard_normal(size)
            return self.factor * self.base_sd * np.where(z > 0.0, z * self.scale_plus, z * self.scale_minus)
        return rng.choice(self.draws, size=size, replace=True)

    def scaled(self, factor: float) -> "AsymptoticLaw":
        """The law of ``factor * L`` (``factor > 0``)."""
        if factor <= 0:
            raise DomainError("scale factor must be positive")
        if self.kind == "gaussian":
            return AsymptoticLaw("gaussian", self.n, variance=self.variance * factor * factor)
        if self.kind == "half_normal_mix":
            return AsymptoticLaw(
                "half_normal_mix", self.n, scale_plus=self.scale_plus, scale_minus=self.scale_minus,
                base_sd=self.base_sd, factor=self.factor * factor,
            )
        return AsymptoticLaw("monte_carlo", self.n, draws=self.draws * factor)


def _gauss(var: float, n: int) -> AsymptoticLaw:
    if not (var > 0.0) or not math.isfinite(var):
        raise DomainError(f"degenerate asymptotic variance {var!r}")
    return AsymptoticLaw("gaussian", n, variance=var)


def law_q(m: MomentEstimates, omega: LongRunCovariance) -> AsymptoticLaw:
    """Gaussian law of ``Q̂ - Q`` with variance ``J_g Ω J_g' / n``."""
    return _gauss(omega.quad(jacobians(m).J_g) / m.n, m.n)


def law_zq(m: MomentEstimates, omega: LongRunCovariance) -> AsymptoticLaw:
    """Gaussian law of ``Z(Q̂) - Z(Q)`` with variance ``J_h Ω J_h' / n``."""
    return _gauss(omega.quad(jacobians(m).J_h) / m.n, m.n)


def gamma_factor(v: float) -> float:
    """Derivative of arctanh at ``v``: ``1 / (1 - v^2)``."""
    if abs(v) >= 1.0:
        raise DomainError("gamma factor undefined for |v| >= 1")
    return 1.0 / (1.0 - v * v)


def law_phi(m: MomentEstimates, omega: LongRunCovariance, *, fisher_scale: bool = False) -> AsymptoticLaw:
    law = _gauss(omega.quad(jacobians(m).J_l) / m.n, m.n)
    if fisher_scale:
        law = law.scaled(gamma_factor(_phi_hat(m)))
    return law


def _phi_hat(m: MomentEstimates) -> float:
    return float(phi_array(m.p_hat, m.q_hat, m.r_hat))


def _q_hat(m: MomentEstimates) -> float:
    return float(yule_q_array(m.p_hat, m.q_hat, m.r_hat))


def c_hat(m: MomentEstimates) -> float:
    """Ĉ with the ``σ̂ >= 0`` branch using ``m̂⁺``."""
    if not m.is_interior:
        return float(cole_array(m.p_hat, m.q_hat, m.r_hat))
    s = m.sigma_hat
    return s / m.m_plus_hat if s >= 0.0 else s / m.m_minus_hat


def sigma_sd(m: MomentEstimates, omega: LongRunCovariance, J=None) -> float:
    J = J or jacobians(m)
    return math.sqrt(max(omega.quad(J.Delta), 0.0) / m.n)


def _c_gauss_var(m: MomentEstimates, omega: LongRunCovariance, negative: bool, J=None) -> float:
    J = J or jacobians(m)
    jh = J.J_h_minus if negative else J.J_h_plus
    lam = J.Lambda_minus if negative else J.Lambda_plus
    g = lam @ jh
    return omega.quad(g) / m.n


def _mc_seed_sequence(seed: int, branch: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, 0xC01E, branch])


def _c_mc_draws(m: MomentEstimates, omega: LongRunCovariance, negative: bool, n_mc: int, seed: int, J=None, cache=None) -> np.ndarray:
    key = (negative, int(n_mc), int(seed))
    if cache is not None and key in cache:
        return cache[key]
    J = J or jacobians(m)
    b = J.J_f @ omega.sqrt()
    lam = J.Lambda_minus if negative else J.Lambda_plus
    rng = np.random.Generator(np.random.Philox(_mc_seed_sequence(seed, 1 if negative else 0)))
    z = rng.standard_normal((int(n_mc), 3))
    draws = kernels.cole_limit_draws(z, b, lam[0], lam[1], negative) / math.sqrt(m.n)
    draws.sort()
    if cache is not None:
        cache[key] = draws
    return draws


def law_c(
    m: MomentEstimates,
    omega: LongRunCovariance,
    sign_hint: str = "auto",
    *,
    marginals: str = "auto",
    n_mc: int = DEFAULT_N_MC,
    seed: int = 0,
    fisher_scale: bool = False,
) -> AsymptoticLaw:
    """Law of ``Ĉ - C`` (or of ``Z(Ĉ) - Z(C)`` when ``fisher_scale``).

    ``sign_hint`` picks the case for σ: ``auto`` uses the sign of ``σ̂``.
    ``marginals`` selects the kink law (``equal``: p = q for σ > 0,
    p = 1 - q for σ < 0) or the Gaussian law (``distinct``); ``auto`` checks
    the estimates for exact equality.
    """
    m.require_interior()
    if sign_hint == "auto":
        sign_hint = "zero" if m.sigma_hat == 0.0 else ("positive" if m.sigma_hat > 0 else "negative")
    if sign_hint not in ("zero", "positive", "negative"):
        raise DomainError(f"unknown sign_hint {sign_hint!r}")
    if sign_hint == "zero":
        law = AsymptoticLaw(
            "half_normal_mix", m.n, scale_plus=1.0 / m.m_plus_hat, scale_minus=1.0 / m.m_minus_hat, base_sd=sigma_sd(m, omega)
        )
    else:
        negative = sign_hint == "negative"
        if marginals == "auto":
            tie = (m.p_hat + m.q_hat == 1.0) if negative else (m.p_hat == m.q_hat)
            marginals = "equal" if tie else "distinct"
        if marginals == "equal":
            law = AsymptoticLaw("monte_carlo", m.n, draws=_c_mc_draws(m, omega, negative, n_mc, seed))
        elif marginals == "distinct":
            law = _gauss(_c_gauss_var(m, omega, negative), m.n)
        else:
            raise DomainError(f"unknown marginals option {marginals!r}")
    if fisher_scale:
        law = law.scaled(gamma_factor(c_hat(m)))
    return law


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    hypothesis: str
    components: dict[str, float] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def test_sigma_sign(m: MomentEstimates, omega: LongRunCovariance, direction: str = "nonnegative", *, _J=None) -> TestResult:
    """Gaussian test on σ: ``nonnegative`` (H: σ >= 0), ``nonpositive`` or ``zero`` (two-sided)."""
    sd = sigma_sd(m, omega, _J)
    s = m.sigma_hat
    if sd > 0.0:
        z = s / sd
    else:
        z = 0.0 if s == 0.0 else math.copysign(math.inf, s)
    if direction == "nonnegative":
        p = float(ndtr(z))
        hyp = "sigma >= 0"
    elif direction == "nonpositive":
        p = float(ndtr(-z))
        hyp = "sigma <= 0"
    elif direction == "zero":
        p = float(_two_sided(z))
        hyp = "sigma = 0"
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return TestResult(z, p, hyp)


def test_pq(m: MomentEstimates, omega: LongRunCovariance, variant: str = "equal") -> TestResult:
    """Two-sided test of ``p = q`` (``equal``) or ``p = 1 - q`` (``complement``)."""
    om = omega.omega
    if variant == "equal":
        stat = m.p_hat - m.q_hat
        var = om[0, 0] - 2.0 * om[0, 1] + om[1, 1]
        hyp = "p = q"
    elif variant == "complement":
        stat = m.p_hat + m.q_hat - 1.0
        var = om[0, 0] + 2.0 * om[0, 1] + om[1, 1]
        hyp = "p = 1 - q"
    else:
        raise DomainError(f"unknown variant {variant!r}")
    sd = math.sqrt(max(var, 0.0) / m.n)
    if stat == 0.0:
        return TestResult(0.0, 1.0, hyp)
    z = stat / sd if sd > 0.0 else math.copysign(math.inf, stat)
    return TestResult(z, float(_two_sided(z)), hyp)


def _canonical(m: MomentEstimates, omega: LongRunCovariance) -> tuple[MomentEstimates, LongRunCovariance]:
    """Order (X, Y) canonically so results are exactly invariant to swapping them."""
    om = omega.omega
    key_x = (m.p_hat, om[0, 0], om[0, 2])
    key_y = (m.q_hat, om[1, 1], om[1, 2])
    if key_y < key_x:
        return m.swap(), omega.swap()
    return m, omega


@dataclass
class CGridPValues:
    """Elementary and combined p-values for ``H: C = c`` over a vector of ``c``."""

    grid: np.ndarray
    p_eq: np.ndarray
    p_neq: np.ndarray
    p_pq: np.ndarray
    p_sigma: np.ndarray
    statistic: np.ndarray

    def combined(self, strategy: Strategy | str = Strategy.FULL) -> np.ndarray:
        s = Strategy.parse(strategy)
        zero = self.grid == 0.0
        # at c = 0 the kink laws collapse into the half-normal mixture held in p_eq
        if s is Strategy.FULL:
            inner = np.maximum(np.minimum(1.0, 2.0 * np.minimum(self.p_eq, self.p_pq)), self.p_neq)
            out = np.minimum(1.0, 2.0 * np.minimum(inner, self.p_sigma))
        elif s is Strategy.NO_SIGMA:
            out = np.maximum(np.minimum(1.0, 2.0 * np.minimum(self.p_eq, self.p_pq)), self.p_neq)
        elif s is Strategy.NO_PQ:
            out = np.minimum(1.0, 2.0 * np.minimum(np.maximum(self.p_eq, self.p_neq), self.p_sigma))
        else:
            out = np.maximum(self.p_eq, self.p_neq)
        if zero.any():
            if s in (Strategy.FULL, Strategy.NO_PQ):
                z0 = np.minimum(1.0, 2.0 * np.minimum(self.p_eq, self.p_sigma))
            else:
                z0 = self.p_eq
            out = np.where(zero, z0, out)
        return out


def c_grid_pvalues(
    m: MomentEstimates,
    omega: LongRunCovariance,
    grid,
    method: Method | str = Method.FISHER,
    *,
    n_mc: int = DEFAULT_N_MC,
    seed: int = 0,
    skip_eq_below: float | None = None,
    draw_cache: dict | None = None,
) -> CGridPValues:
    """All elementary p-values for ``H: C = c`` at each ``c`` in ``grid``.

    For ``c = 0`` the ``p_eq`` slot holds the half-normal-mixture test and
    ``p_sigma`` the two-sided test of ``σ = 0``.

    ``skip_eq_below`` lets interval construction skip the Monte Carlo law on
    a side of the grid whose ``p_pq`` is below the given value (``p_eq`` is
    then reported as 0). With a threshold of ``alpha / 4`` this cannot change
    acceptance under the strategies that combine ``p_eq`` with ``p_pq``.
    """
    method = Method(method)
    m.require_interior()
    m, omega = _canonical(m, omega)
    J = jacobians(m)
    if draw_cache is not None:
        draw_cache = draw_cache.setdefault((m.p_hat, m.q_hat, m.r_hat, omega.omega.tobytes()), {})
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(np.abs(grid) >= 1.0):
        raise DomainError("hypothesised values of C must lie in (-1, 1)")
    ch = c_hat(m)
    fisher_mode = method is Method.FISHER
    if fisher_mode:
        if abs(ch) >= 1.0:
            raise DomainError("Fisher method needs |Ĉ| < 1")
        gam = gamma_factor(ch)
        stat = math.atanh(ch) - np.arctanh(grid)
    else:
        gam = 1.0
        stat = ch - grid

    shape = grid.shape
    p_eq = np.ones(shape)
    p_neq = np.ones(shape)
    p_pq = np.ones(shape)
    p_sigma = np.ones(shape)

    pos = grid > 0.0
    neg = grid < 0.0
    zero = grid == 0.0
    for side, negative, variant, direction in ((pos, False, "equal", "nonnegative"), (neg, True, "complement", "nonpositive")):
        if not side.any():
            continue
        sd = math.sqrt(_c_gauss_var(m, omega, negative, J)) * gam
        p_neq[side] = _two_sided(stat[side] / sd)
        ppq = test_pq(m, omega, variant).p_value
        p_pq[side] = ppq
        p_sigma[side] = test_sigma_sign(m, omega, direction, _J=J).p_value
        if skip_eq_below is not None and ppq < skip_eq_below:
            p_eq[side] = 0.0
        else:
            draws = _c_mc_draws(m, omega, negative, n_mc, seed, J, draw_cache)
            law = AsymptoticLaw("monte_carlo", m.n, draws=draws * gam)
            p_eq[side] = law.two_sided_p(stat[side])
    if zero.any():
        law = law_c(m, omega, "zero").scaled(gam)
        p_eq[zero] = law.two_sided_p(stat[zero])
        p_neq[zero] = p_eq[zero]
        p_sigma[zero] = test_sigma_sign(m, omega, "zero", _J=J).p_value
    return CGridPValues(grid, p_eq, p_neq, p_pq, p_sigma, stat)


def test_c(
    m: MomentEstimates,
    omega: LongRunCovariance,
    c0: float,
    method: Method | str = Method.FISHER,
    *,
    strategy: Strategy | str = Strategy.FULL,
    n_mc: int = DEFAULT_N_MC,
    seed: int = 0,
) -> TestResult:
    """Combined test of ``H: C = c0``; components are reported alongside."""
    g = c_grid_pvalues(m, omega, np.array([float(c0)]), method, n_mc=n_mc, seed=seed)
    p = float(g.combined(strategy)[0])
    comps = {"p_eq": float(g.p_eq[0]), "p_neq": float(g.p_neq[0]), "p_pq": float(g.p_pq[0]), "p_sigma": float(g.p_sigma[0])}
    if c0 == 0.0:
        comps = {"p_halfnormal": comps["p_eq"], "p_sigma": comps["p_sigma"]}
    return TestResult(float(g.statistic[0]), p, f"C = {c0:g}", comps)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalEstimate:
    measure: str
    point: float
    lower: float
    upper: float
    level: float
    method: str
    construction: str = "closed_form"
    grid_step: float | None = None
    non_interval_flag: bool = False
    n_mc: int | None = None
    seed: int | None = None
    n: int | None = None
    strategy: str | None = None
    diagnostics: tuple[str, ...] = ()

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["diagnostics"] = list(self.diagnostics)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "IntervalEstimate":
        d = dict(d)
        d["diagnostics"] = tuple(d.get("diagnostics", ()))
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self, digits: int = 6) -> str:
        f = f"{{:.{digits}g}}"
        s = f"{self.measure} = {f.format(self.point)}  [{f.format(self.lower)}, {f.format(self.upper)}]  level={self.level:g} method={self.method}"
        if self.non_interval_flag:
            s += "  (acceptance set not convex)"
        return s


def ci(
    measure: str,
    m: MomentEstimates,
    omega: LongRunCovariance,
    level: float = 0.9,
    method: Method | str = Method.FISHER,
) -> IntervalEstimate:
    """Wald interval for ``q`` or ``phi``; the Fisher method maps the Z-scale interval back with tanh."""
    method = Method(method)
    z = _z_crit(level)
    m.require_interior()
    if measure == "q":
        point = _q_hat(m)
        if method is Method.STANDARD:
            sd = law_q(m, omega).sd
            lo, hi = point - z * sd, point + z * sd
        else:
            sd = law_zq(m, omega).sd
            zc = math.atanh(point)
            lo, hi = math.tanh(zc - z * sd), math.tanh(zc + z * sd)
    elif measure == "phi":
        point = _phi_hat(m)
        if method is Method.STANDARD:
            sd = law_phi(m, omega).sd
            lo, hi = point - z * sd, point + z * sd
        else:
            sd = law_phi(m, omega, fisher_scale=True).sd
            zc = math.atanh(point)
            lo, hi = math.tanh(zc - z * sd), math.tanh(zc + z * sd)
    else:
        raise DomainError(f"closed-form intervals exist only for 'q' and 'phi', not {measure!r}")
    return IntervalEstimate(measure, point, lo, hi, level, method.value, n=m.n)


def c_grid(grid_step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """Candidate values ``k * step`` strictly inside (-1, 1)."""
    if not (0.0 < grid_step < 1.0):
        raise DomainError("grid_step must lie in (0, 1)")
    kmax = int(math.ceil(1.0 / grid_step - 1e-9)) - 1
    k = np.arange(-kmax, kmax + 1)
    return k * grid_step


def interval_from_acceptance(grid: np.ndarray, accepted: np.ndarray) -> tuple[float, float, bool] | None:
    idx = np.flatnonzero(accepted)
    if idx.size == 0:
        return None
    lo, hi = idx[0], idx[-1]
    non_convex = bool(idx.size != hi - lo + 1)
    return float(grid[lo]), float(grid[hi]), non_convex


def ci_c(
    m: MomentEstimates,
    omega: LongRunCovariance,
    level: float = 0.9,
    method: Method | str = Method.FISHER,
    grid_step: float = DEFAULT_GRID_STEP,
    *,
    strategy: Strategy | str = Strategy.FULL,
    n_mc: int = DEFAULT_N_MC,
    seed: int = 0,
) -> IntervalEstimate:
    """Interval for Cole's C by inverting :func:`test_c` over a grid."""
    return ci_c_strategies(m, omega, level, method, grid_step, strategies=(strategy,), n_mc=n_mc, seed=seed)[
        Strategy.parse(strategy)
    ]


def ci_c_strategies(
    m: MomentEstimates,
    omega: LongRunCovariance,
    level: float = 0.9,
    method: Method | str = Method.FISHER,
    grid_step: float = DEFAULT_GRID_STEP,
    *,
    strategies=tuple(Strategy),
    n_mc: int = DEFAULT_N_MC,
    seed: int = 0,
    draw_cache: dict | None = None,
) -> dict[Strategy, IntervalEstimate]:
    """Intervals for several combination strategies from one set of elementary p-values."""
    method = Method(method)
    alpha = 1.0 - level
    _z_crit(level)
    grid = c_grid(grid_step)
    strategies = [Strategy.parse(s) for s in strategies]
    uses_pq = all(s in (Strategy.FULL, Strategy.NO_SIGMA) for s in strategies)
    pv = c_grid_pvalues(
        m, omega, grid, method, n_mc=n_mc, seed=seed, skip_eq_below=alpha / 4.0 if uses_pq else None, draw_cache=draw_cache
    )
    point = c_hat(m)
    out = {}
    for s in strategies:
        s = Strategy.parse(s)
        acc = pv.combined(s) >= alpha
        hull = interval_from_acceptance(grid, acc)
        diags: list[str] = []
        if hull is None:
            msg = f"no grid value accepted for C at level {level:g} ({s.value}); returning a degenerate interval"
            warnings.warn(msg, EmptyAcceptanceWarning, stacklevel=2)
            diags.append(msg)
            lo = hi = point
            flag = False
        else:
            lo, hi, flag = hull
            if flag:
                diags.append("acceptance set is not convex; reporting its convex hull")
        out[s] = IntervalEstimate(
            "c", point, lo, hi, level, method.value, "grid_inversion", grid_step, flag, n_mc, seed, m.n, s.value, tuple(diags)
        )
    return out


def report_text(intervals, digits: int = 6) -> str:
    return "\n".join(iv.to_text(digits) for iv in intervals)


def report_json(intervals, **meta) -> str:
    doc = dict(meta)
    doc["intervals"] = [iv.to_dict() for iv in intervals]
    return json.dumps(doc, sort_keys=True, indent=2)
