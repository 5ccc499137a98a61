"""Gamma, Beta and the weighted-volume normalisation on the ball."""

import math

import numpy as np
from scipy import special as sps

from .errors import DomainError


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_fn is only used on positive reals, got {x}")
    return float(sps.gamma(x))


def log_gamma(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("log_gamma needs positive arguments")
    out = sps.gammaln(x)
    return float(out) if out.ndim == 0 else out


def beta_fn(x: float, y: float) -> float:
    """B(x, y) through log-gamma, so large arguments do not overflow."""
    if not (x > 0 and y > 0):
        raise DomainError(f"beta_fn needs positive arguments, got ({x}, {y})")
    return math.exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y))


def norm_const(theta: float, n: int) -> float:
    """c_theta = Gamma(n + theta + 1) / (n! Gamma(theta + 1)).

    Makes (1 - |z|^2)^theta dv a probability measure on the unit ball of C^n.
    """
    if not theta > -1:
        raise DomainError(f"weight exponent must exceed -1, got {theta}")
    if n < 1:
        raise DomainError(f"dimension must be positive, got {n}")
    return math.exp(log_gamma(n + theta + 1.0) - log_gamma(n + 1.0) - log_gamma(theta + 1.0))


def radial_moment(t: float, n: int) -> float:
    """Unnormalised weighted volume: integral of (1 - |z|^2)^t dv = n B(n, t + 1)."""
    return n * beta_fn(n, t + 1.0)
