"""Random binary pairs, coverage experiments, limit-law replication and comparison surfaces.

Every random stream is a Philox generator keyed by ``(seed, cell, replication)``
so results do not depend on the order in which work is scheduled.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .core import DomainError, JointBinaryDistribution
from .estimation import LongRunCovariance, MomentEstimates, PairedBinarySample, SampleMode, omega_hac, omega_iid, omega_iid_matrix
from .inference import AsymptoticLaw, Method, Strategy, ci, ci_c_strategies, c_hat, law_c
from .measures import cole_array, phi_array, yule_q_array

DEFAULT_PAIRS: tuple[tuple[float, float], ...] = ((0.05, 0.5), (0.1, 0.9), (0.2, 0.2), (0.3, 0.7), (0.4, 0.8))
DEFAULT_SAMPLE_SIZES: tuple[int, ...] = (100, 500, 2000)


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for the stream identified by ``(seed, *keys)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def derived_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(1, np.uint32)[0])


def _cell_cum(d: JointBinaryDistribution) -> np.ndarray:
    a, b, c, _ = d.cells
    return np.array([a, a + b, a + b + c])


def _cells_to_sample(cells: np.ndarray, mode: SampleMode) -> PairedBinarySample:
    x = ((cells == 0) | (cells == 1)).astype(np.int8)
    y = ((cells == 0) | (cells == 2)).astype(np.int8)
    return PairedBinarySample(x, y, mode)


def sample_joint(d: JointBinaryDistribution, n: int, seed: int, cell: int = 0, rep: int = 0) -> PairedBinarySample:
    """``n`` independent pairs from ``d`` by inverse-CDF over the four cells."""
    if n < 1:
        raise DomainError("n must be at least 1")
    u = rng_for(seed, cell, rep).random(int(n))
    return _cells_to_sample(kernels.draw_cells(u, _cell_cum(d)), SampleMode.IID)


def sample_markov_joint(
    d: JointBinaryDistribution, n: int, persistence: float, seed: int, cell: int = 0, rep: int = 0
) -> PairedBinarySample:
    """Stationary chain with marginal law ``d``: each pair repeats its predecessor
    with probability ``persistence`` and is redrawn from ``d`` otherwise.

    The long-run covariance of ``W`` is ``Ω (1 + ρ) / (1 - ρ)`` with ``ρ = persistence``.
    """
    if not (0.0 <= persistence < 1.0):
        raise DomainError("persistence must lie in [0, 1)")
    rng = rng_for(seed, cell, rep)
    fresh = kernels.draw_cells(rng.random(int(n)), _cell_cum(d))
    stay = rng.random(int(n)) < persistence
    stay[0] = False
    idx = np.maximum.accumulate(np.where(stay, 0, np.arange(n)))
    return _cells_to_sample(fresh[idx], SampleMode.TIME_SERIES)


# ---------------------------------------------------------------------------
# Coverage experiments
# ---------------------------------------------------------------------------

def r_grid(p: float, q: float, count: int = 39, inset_fraction: float = 1 / 20) -> np.ndarray:
    """``count`` equally spaced joint probabilities strictly inside the bounds.

    The inset at each end is ``inset_fraction`` of the bound width.
    """
    lo = max(0.0, p + q - 1.0)
    hi = min(p, q)
    inset = inset_fraction * (hi - lo)
    if count == 1:
        return np.array([(lo + hi) / 2])
    return np.linspace(lo + inset, hi - inset, count)


@dataclass(frozen=True)
class CoverageConfig:
    marginal_pairs: tuple[tuple[float, float], ...] = DEFAULT_PAIRS
    r_count: int = 39
    inset_fraction: float = 1 / 20
    sample_sizes: tuple[int, ...] = DEFAULT_SAMPLE_SIZES
    replications: int = 1000
    level: float = 0.9
    measures: tuple[str, ...] = ("q", "c", "phi")
    methods: tuple[str, ...] = ("standard", "fisher")
    seed: int = 0
    strategies: tuple[str, ...] = ("full",)
    n_mc: int = 10_000
    grid_step: float = 0.001
    persistence: float = 0.0
    omega: str = "iid"
    hac_bandwidth: int | None = None
    r_indices: tuple[int, ...] | None = None
    retention_threshold: float = 0.5

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if not (0.0 < self.inset_fraction < 0.5):
            raise DomainError("inset_fraction must lie in (0, 1/2)")
        if self.omega not in ("iid", "hac"):
            raise DomainError("omega must be 'iid' or 'hac'")
        for m in self.measures:
            if m not in ("q", "c", "phi"):
                raise DomainError(f"unknown measure {m!r}")
        for m in self.methods:
            Method(m)
        for s in self.strategies:
            Strategy.parse(s)
        for p, q in self.marginal_pairs:
            JointBinaryDistribution(p, q, p * q)

    def cells(self) -> list[tuple[int, float, float, float, int]]:
        """``(cell_index, p, q, r, n)`` for every configured cell, in a fixed order."""
        out = []
        idx = 0
        for p, q in self.marginal_pairs:
            rs = r_grid(p, q, self.r_count, self.inset_fraction)
            for j, r in enumerate(rs):
                for n in self.sample_sizes:
                    if self.r_indices is None or j in self.r_indices:
                        out.append((idx, float(p), float(q), float(r), int(n)))
                    idx += 1
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CoverageConfig":
        d = dict(d)
        for key in ("marginal_pairs",):
            if key in d:
                d[key] = tuple(tuple(map(float, v)) for v in d[key])
        for key in ("sample_sizes", "measures", "methods", "strategies", "r_indices"):
            if key in d and d[key] is not None:
                d[key] = tuple(d[key])
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise DomainError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)


@dataclass
class CoverageCell:
    p: float
    q: float
    r: float
    n: int
    measure: str
    method: str
    strategy: str | None
    true_value: float
    replications: int
    retained: int = 0
    covered: int = 0
    below: int = 0
    above: int = 0
    length_sum: float = 0.0
    missing: bool = False

    @property
    def retained_fraction(self) -> float:
        return self.retained / self.replications

    def _rate(self, k: int) -> float:
        return k / self.retained if self.retained and not self.missing else math.nan

    @property
    def coverage(self) -> float:
        return self._rate(self.covered)

    @property
    def lower_violation(self) -> float:
        """Share of retained runs whose interval lies entirely above the truth."""
        return self._rate(self.below)

    @property
    def upper_violation(self) -> float:
        return self._rate(self.above)

    @property
    def mean_length(self) -> float:
        return self.length_sum / self.retained if self.retained and not self.missing else math.nan

    def row(self) -> dict:
        return {
            "p": self.p, "q": self.q, "r": self.r, "n": self.n, "measure": self.measure, "method": self.method,
            "strategy": self.strategy or "", "true_value": self.true_value, "replications": self.replications,
            "retained_fraction": self.retained_fraction, "coverage": self.coverage,
            "lower_violation": self.lower_violation, "upper_violation": self.upper_violation,
            "mean_length": self.mean_length,
        }


@dataclass
class CoverageReport:
    config: CoverageConfig
    cells: list[CoverageCell] = field(default_factory=list)

    def select(self, **kw) -> list[CoverageCell]:
        return [c for c in self.cells if all(getattr(c, k) == v for k, v in kw.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        rows = [c.row() for c in self.cells]
        if not rows:
            return ""
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: ("" if isinstance(v, float) and math.isnan(v) else v) for k, v in row.items()})
        return buf.getvalue()

    def to_json(self) -> str:
        def clean(v):
            return None if isinstance(v, float) and math.isnan(v) else v

        doc = {"config": asdict(self.config), "cells": [{k: clean(v) for k, v in c.row().items()} for c in self.cells]}
        return json.dumps(doc, sort_keys=True, indent=2)


def _true_value(measure: str, p: float, q: float, r: float) -> float:
    f = {"q": yule_q_array, "c": cole_array, "phi": phi_array}[measure]
    return float(f(p, q, r))


def _run_cell(cfg: CoverageConfig, cell_index: int, p: float, q: float, r: float, n: int) -> list[CoverageCell]:
    d = JointBinaryDistribution(p, q, r)
    strategies = [Strategy.parse(s) for s in cfg.strategies]
    out: dict[tuple, CoverageCell] = {}
    for meas in cfg.measures:
        tv = _true_value(meas, p, q, r)
        for meth in cfg.methods:
            strats = strategies if meas == "c" else [None]
            for s in strats:
                key = (meas, meth, s)
                out[key] = CoverageCell(p, q, r, n, meas, meth, s.value if s else None, tv, cfg.replications)
    lengths: dict[tuple, list[float]] = {k: [] for k in out}
    for rep in range(cfg.replications):
        if cfg.persistence > 0.0:
            sample = sample_markov_joint(d, n, cfg.persistence, cfg.seed, cell_index, rep)
        else:
            sample = sample_joint(d, n, cfg.seed, cell_index, rep)
        m = MomentEstimates.from_sample(sample)
        if not m.is_interior:
            continue
        if cfg.omega == "hac":
            om = omega_hac(sample, cfg.hac_bandwidth)
        else:
            om = omega_iid(m)
        mc_seed = derived_seed(cfg.seed, cell_index, rep, 1)
        cache: dict = {}
        for meas in cfg.measures:
            for meth in cfg.methods:
                if meas == "c":
                    ivs = ci_c_strategies(m, om, cfg.level, meth, cfg.grid_step, strategies=strategies, n_mc=cfg.n_mc, seed=mc_seed, draw_cache=cache)
                    items = [((meas, meth, s), ivs[s]) for s in strategies]
                else:
                    items = [((meas, meth, None), ci(meas, m, om, cfg.level, meth))]
                for key, iv in items:
                    cell = out[key]
                    cell.retained += 1
                    if iv.lower > cell.true_value:
                        cell.below += 1
                    elif iv.upper < cell.true_value:
                        cell.above += 1
                    else:
                        cell.covered += 1
                    lengths[key].append(iv.upper - iv.lower)
    for key, cell in out.items():
        cell.length_sum = math.fsum(lengths[key])
        cell.missing = cell.retained == 0 or cell.retained < cfg.retention_threshold * cfg.replications
    return list(out.values())


def _run_cell_star(args):
    return _run_cell(*args)


def run_coverage(cfg: CoverageConfig, workers: int = 1) -> CoverageReport:
    """Run every configured cell; ``workers > 1`` distributes cells over processes.

    Output is identical for any worker count.
    """
    jobs = [(cfg, *cell) for cell in cfg.cells()]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_cell_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_cell_star(j) for j in jobs]
    report = CoverageReport(cfg)
    for cells in results:
        report.cells.extend(cells)
    return report


def default_workers() -> int:
    return max(1, (os.cpu_count() or 1))


# ---------------------------------------------------------------------------
# Limit-law replication
# ---------------------------------------------------------------------------

def r_from_cole(p: float, q: float, c: float) -> float:
    pq = p * q
    if c >= 0:
        return pq + c * (min(p, q) - pq)
    return pq + c * (pq - max(0.0, p + q - 1.0))


@dataclass
class LimitLawReplication:
    p: float
    q: float
    c_true: float
    r: float
    n: int
    estimates: np.ndarray
    law: AsymptoticLaw
    law_samples: np.ndarray
    case: str

    def histogram(self, bins: int = 60, *, of: str = "estimates") -> tuple[np.ndarray, np.ndarray]:
        data = self.estimates if of == "estimates" else self.law_samples
        counts, edges = np.histogram(data, bins=bins)
        return (edges[:-1] + edges[1:]) / 2.0, counts

    def histogram_csv(self, bins: int = 60) -> str:
        centers, counts = self.histogram(bins)
        lines = ["bin_center,count"] + [f"{c!r},{k}" for c, k in zip(centers, counts)]
        return "\n".join(lines) + "\n"


def replicate_limit_law(
    p: float, q: float, c_true: float, n: int = 2000, M: int = 10_000, seed: int = 0, *, n_mc: int = 100_000
) -> LimitLawReplication:
    """Simulate ``M`` estimates ``Ĉ`` and draws from the matching limit law of ``Ĉ - C``."""
    if not (-1.0 < c_true < 1.0):
        raise DomainError("C must lie in (-1, 1)")
    r = r_from_cole(p, q, c_true)
    d = JointBinaryDistribution(p, q, r)
    lo, hi = d.bounds
    if not (lo < r < hi):
        raise DomainError(f"(p, q, C) = ({p}, {q}, {c_true}) does not map to an interior joint probability")
    est = np.empty(M)
    for i in range(M):
        s = sample_joint(d, n, seed, 0, i)
        t = s.table()
        est[i] = c_hat(MomentEstimates.from_table(t))
    m = MomentEstimates(p, q, r, n, sigma_hat=0.0 if c_true == 0 else r - p * q)
    om = LongRunCovariance(omega_iid_matrix(p, q, r))
    if c_true == 0:
        law = law_c(m, om, "zero")
        case = "sigma_zero"
    elif c_true > 0:
        eq = abs(p - q) <= 1e-12
        law = law_c(m, om, "positive", marginals="equal" if eq else "distinct", n_mc=n_mc, seed=seed)
        case = "positive_equal_margins" if eq else "positive_gaussian"
    else:
        eq = abs(p + q - 1.0) <= 1e-12
        law = law_c(m, om, "negative", marginals="equal" if eq else "distinct", n_mc=n_mc, seed=seed)
        case = "negative_complementary_margins" if eq else "negative_gaussian"
    law_samples = c_true + law.sample(rng_for(seed, 1, 0), M)
    return LimitLawReplication(p, q, c_true, r, n, est, law, law_samples, case)


# ---------------------------------------------------------------------------
# Comparison surfaces
# ---------------------------------------------------------------------------

def invert_measure(kind: str, p, q, value: float):
    """Joint probability giving ``measure(p, q, r) = value``; NaN where impossible."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    pq = p * q
    lo = np.maximum(0.0, p + q - 1.0)
    hi = np.minimum(p, q)
    v = float(value)
    if kind == "cole":
        r = pq + v * (hi - pq) if v >= 0 else pq + v * (pq - lo)
    elif kind == "phi":
        r = pq + v * np.sqrt(p * (1.0 - p) * q * (1.0 - q))
    elif kind == "yule_q":
        if v == 0.0:
            r = pq.copy()
        else:
            theta = (1.0 + v) / (1.0 - v)
            s = 1.0 + (p + q) * (theta - 1.0)
            r = (s - np.sqrt(s * s - 4.0 * theta * (theta - 1.0) * pq)) / (2.0 * (theta - 1.0))
    else:
        raise DomainError(f"cannot invert measure {kind!r}")
    r = np.asarray(r, dtype=np.float64)
    ok = (r >= lo - 1e-12) & (r <= hi + 1e-12)
    return np.where(ok, np.clip(r, lo, hi), np.nan)


def comparison_surface(kind: str, value: float, grid: int = 99) -> np.ndarray:
    """Rows ``(p, q, r, Q, φ, C)`` over ``p, q ∈ {i / (grid + 1)}`` with ``measure = value`` held fixed.

    Cells where the fixed value is not attainable are dropped.
    """
    if not (-1.0 < value < 1.0):
        raise DomainError("fixed value must lie in (-1, 1)")
    g = np.arange(1, grid + 1) / (grid + 1.0)
    P, Q = np.meshgrid(g, g, indexing="ij")
    P = P.ravel()
    Q = Q.ravel()
    R = invert_measure(kind, P, Q, value)
    keep = ~np.isnan(R)
    P, Q, R = P[keep], Q[keep], R[keep]
    return np.column_stack([P, Q, R, yule_q_array(P, Q, R), phi_array(P, Q, R), cole_array(P, Q, R)])


SURFACE_COLUMNS = ("p", "q", "r", "yule_q", "phi", "cole")


# ---------------------------------------------------------------------------
# Synthetic multi-column binary data
# ---------------------------------------------------------------------------

SYNTHETIC_COLUMNS = ("alcohol", "cigarettes", "marijuana", "inhalants", "amphetamines", "cocaine")


def synthetic_drug_dataset(n: int = 2000, seed: int = 20240101) -> tuple[tuple[str, ...], np.ndarray]:
    """Binary lifetime-use indicators with per-column missingness (NaN).

    Columns come from thresholding a correlated Gaussian factor model at
    decreasing prevalences; missing rates grow with column index.
    """
    rng = rng_for(seed, 0, 0)
    k = len(SYNTHETIC_COLUMNS)
    prevalence = np.array([0.6, 0.4, 0.35, 0.1, 0.08, 0.05])
    loading = np.array([0.6, 0.7, 0.8, 0.6, 0.7, 0.75])
    factor = rng.standard_normal(n)
    noise = rng.standard_normal((n, k))
    latent = factor[:, None] * loading + noise * np.sqrt(1.0 - loading ** 2)
    from scipy.special import ndtri

    thresh = ndtri(1.0 - prevalence)
    data = (latent > thresh).astype(np.float64)
    miss_rate = np.linspace(0.02, 0.25, k)
    data[rng.random((n, k)) < miss_rate] = np.nan
    return SYNTHETIC_COLUMNS, data
