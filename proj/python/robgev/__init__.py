"""Robust GEV fitting by minimum density power divergence."""

from ._core import (
    FitResult,
    GevParams,
    MdpdConfig,
    RobgevError,
    SandwichCovariance,
    cdf,
    compute_ujk,
    fit,
    fit_mdpd,
    fit_ml,
    generate_sample,
    influence,
    influence_at_level,
    information,
    load_series,
    log_pdf,
    mdpd_objective,
    pdf,
    quantile,
    sample,
    score,
    wasserstein1,
)

__version__ = "0.1.0"

__all__ = [
    "FitResult",
    "GevParams",
    "MdpdConfig",
    "RobgevError",
    "SandwichCovariance",
    "cdf",
    "compute_ujk",
    "fit",
    "fit_mdpd",
    "fit_ml",
    "generate_sample",
    "influence",
    "influence_at_level",
    "information",
    "load_series",
    "log_pdf",
    "mdpd_objective",
    "pdf",
    "quantile",
    "sample",
    "score",
    "wasserstein1",
]
