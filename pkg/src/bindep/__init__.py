"""Dependence measures and asymptotic inference for two binary events."""

__version__ = "0.1.0"

from ._accel import backend
from .core import (
    ContingencyTable,
    DomainError,
    FrechetBounds,
    JointBinaryDistribution,
    PerfectDependence,
    complement_b,
    compare_dependence,
    fh_bounds,
    is_negatively_dependent,
    is_perfectly_dependent,
    is_positively_dependent,
)
from .estimation import (
    BoundaryError,
    JacobianSet,
    LongRunCovariance,
    MomentEstimates,
    PairedBinarySample,
    SampleMode,
    SingularityError,
    estimate_moments,
    jacobians,
    omega_hac,
    omega_iid,
)
from .inference import (
    AsymptoticLaw,
    IntervalEstimate,
    Method,
    Strategy,
    TestResult,
    ci,
    ci_c,
    ci_c_strategies,
    fisher,
    fisher_inv,
    law_c,
    law_phi,
    law_q,
    law_zq,
    test_c,
    test_pq,
    test_sigma_sign,
)
from .measures import (
    MeasureKind,
    all_measures,
    cole,
    contingency_coefficients,
    covariance,
    further_measures,
    odds_ratio,
    or_to_q,
    phi,
    phi_bounds,
    q_to_or,
    yule_g,
    yule_q,
    yule_y,
)
from .tetrachoric import bvn_cdf, tetrachoric
