"""Boundedness of Forelli-Rudin type operators on products of unit balls:
criteria, Schur-test weights and numerical probes."""

__version__ = "0.1.0"

from .core import INF, BallPoint, OperatorParams, ProductPoint, exponent_extremes, holder_conjugate, inner_product
from .criteria import ClassificationResult, classify, classify_bergman, classify_berezin
from .errors import AccuracyError, ConfigError, DomainError, EvaluationError, InfeasibleError
from .special import beta_fn, gamma_fn, norm_const

__all__ = [
    "INF", "BallPoint", "OperatorParams", "ProductPoint", "exponent_extremes", "holder_conjugate",
    "inner_product", "ClassificationResult", "classify", "classify_bergman", "classify_berezin",
    "AccuracyError", "ConfigError", "DomainError", "EvaluationError", "InfeasibleError",
    "beta_fn", "gamma_fn", "norm_const",
]
