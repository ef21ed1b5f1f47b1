"""Finite-rate feedback for multi-access MIMO: Grassmann quantization,
random-matrix helpers and sum-rate Monte Carlo."""

from .errors import (
    ConfigError,
    ConvergenceFailure,
    DegenerateBeamforming,
    DegenerateManifold,
    GrassfeedError,
    InvalidParams,
    NoRoot,
    NotHermitian,
    RankDeficient,
    ShapeMismatch,
    UnsupportedOrder,
)
from .cgmatrix import LogdetBounds, LogdetQuery
from .extreme_stats import ExtremeParams
from .grassmann import Codebook, CompositePoint, DrfBounds
from .sumrate import SumRateResult, SystemParams
from .wishart_cond import WishartShape

__version__ = "0.1.0"

__all__ = [
    "Codebook", "CompositePoint", "ConfigError", "ConvergenceFailure", "DegenerateBeamforming",
    "DegenerateManifold", "DrfBounds", "ExtremeParams", "GrassfeedError", "InvalidParams",
    "LogdetBounds", "LogdetQuery", "NoRoot", "NotHermitian", "RankDeficient", "ShapeMismatch",
    "SumRateResult", "SystemParams", "UnsupportedOrder", "WishartShape",
]
