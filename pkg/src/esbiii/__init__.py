"""Epsilon-skew Burr III distributions.

Evaluation, sampling, moments and entropies, maximum-likelihood fitting,
robustness diagnostics and goodness-of-fit reporting for a five-parameter
heavy-tailed family built from a Burr III kernel and a two-point
sign-scale mixture.
"""

from .burr3 import (
    Burr3Params,
    RNG_ALGORITHM,
    ShapeClass,
    burr3_cdf,
    burr3_pdf,
    burr3_quantile,
    burr3_sample,
    burr3_shape_class,
)
from .distribution import (
    CfSpec,
    EntropySpec,
    ModeStructure,
    MomentSpec,
    Params,
    ShapeStats,
    cdf,
    cf_partial_sum,
    logpdf,
    mean,
    mode_structure,
    pdf,
    quantile,
    raw_moment,
    renyi_entropy,
    sample,
    shape_stats,
    variance,
)
from .errors import (
    BracketError,
    DegenerateDataError,
    DensityLimitWarning,
    DomainError,
    EsbError,
    MomentDoesNotExistError,
    NoBracketError,
    NonConvergenceError,
    ParseError,
    SmallSampleError,
)
from .fit import (
    FitConfig,
    FitResult,
    StandardizedSample,
    fit_ml,
    loglik,
    moment_init,
    score,
    solve_coordinate,
    standardize,
)
from .gof import (
    Dataset,
    GofReport,
    ModelFit,
    aic,
    compare_models,
    ecdf,
    ks_pvalue,
    ks_statistic,
)
from .robustness import (
    HeavyTailReport,
    PsiLimit,
    RedescendResult,
    RhoConditions,
    ScoreReport,
    build_score_report,
    heavy_tail_check,
    psi,
    psi_limits,
    redescend_point,
    rho_conditions,
)
from .special_math import (
    QuadratureResult,
    RootResult,
    beta_fn,
    find_root,
    finite_diff,
    integrate,
    ln_gamma,
)

__version__ = "0.1.0"
