"""singular-kernels - Lauricella F_A and fundamental solutions of singular
elliptic equations."""

__version__ = "0.1.0"
__author__ = "singular-kernels"
__description__ = (
    "Lauricella F_A evaluation and fundamental solutions with singular coefficients"
)

from .models import (
    DeltaVector,
    EvalResult,
    GaussParams,
    LauricellaParams,
    MultiIndexGrid,
    ProblemConfig,
)

__all__ = [
    "DeltaVector",
    "EvalResult",
    "GaussParams",
    "LauricellaParams",
    "MultiIndexGrid",
    "ProblemConfig",
]
