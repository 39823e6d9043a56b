"""Pseudo lack-of-memory bivariate distributions built from T-norm generators."""
from .characterization import (
    MinDiffLaw,
    n_law,
    n_u_independence_check,
    reconstruct_from_uv,
    u_survival,
    uv_joint,
    uw_joint,
)
from .core import (
    MOTypeDistribution,
    PseudoStrongDistribution,
    PseudoWeakDistribution,
    ValidityReport,
    atom_mass,
    atom_tail,
    density_weak,
    mo_type,
    strong_copula,
    survival_strong,
    survival_weak,
    total_mass,
    validate,
    weak_copula,
)
from .dependence import (
    KendallCurve,
    TailDep,
    kendall_analytic,
    kendall_empirical,
    kendall_function,
    kendall_tau,
    kendall_tau_analytic,
    kendall_tau_empirical,
    taildep_base,
    taildep_distorted,
    taildep_numeric,
)
from .generators import (
    CustomGenerator,
    ExpComplement,
    ExpRatio,
    Generator,
    Identity,
    Power,
    PowerExpRatio,
    RecipExp,
    TanComplement,
    exp_h,
    generators_equivalent,
    induced_generator,
    log_concavity_check,
    make_generator,
    mcneil_neslehova_check,
    pseudo_product,
)
from .marginals import (
    CustomSurvival,
    Exponential,
    GompertzLogistic,
    ParetoII,
    PseudoExponentialMarginal,
    UnivariateSurvival,
    distort,
    make_marginal,
    undistort,
)
from .numerics import Bracket, Tolerance, integrate, invert_monotone, mixed_partial
from .sampling import RngState, SampleBatch, Tag, sample, sample_conditional, sample_strong, sample_structural

__version__ = "0.1.0"
