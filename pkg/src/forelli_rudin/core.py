"""Basic objects: exponents, weights, ball points and operator parameters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from typing import Any, Sequence

import numpy as np

from .errors import ConfigError, DomainError

BOUNDARY_MARGIN = 1e-14


class _Infinity:
    """Tagged infinite exponent.

    Deliberately not a float: arithmetic on it raises, so 1/p style
    formulas must go through :func:`reciprocal` or :func:`holder_conjugate`.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __float__(self):
        raise TypeError("infinite exponent has no float value")

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("forelli_rudin.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_infinite(p) -> bool:
    return p is INF


def parse_exponent(value, field: str = "p"):
    """Accept a number or the strings 'inf'/'infinity' and return a valid exponent."""
    if value is INF:
        return INF
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return INF
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(field, f"not a number: {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
        raise ConfigError(field, f"expected a number, got {type(value).__name__}")
    value = float(value)
    if math.isinf(value) and value > 0:
        return INF
    if not math.isfinite(value) or value < 1.0:
        raise ConfigError(field, f"exponent must lie in [1, inf], got {value}")
    return value


def reciprocal(p) -> float:
    return 0.0 if p is INF else 1.0 / p


def holder_conjugate(p):
    """p' with 1/p + 1/p' = 1. Maps 1 to INF and INF to 1."""
    if p is INF:
        return 1.0
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"Holder conjugate needs p >= 1, got {p}")
    if p == 1.0:
        return INF
    return p / (p - 1.0)


def exponent_extremes(pair) -> tuple:
    """(min, max) of an exponent pair, INF-aware."""
    a, b = pair
    if a is INF:
        return (b, a)
    if b is INF:
        return (a, b)
    return (min(a, b), max(a, b))


def check_weight(value, field: str = "alpha") -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}") from None
    if not math.isfinite(value) or value <= -1.0:
        raise ConfigError(field, f"weight exponent must exceed -1, got {value}")
    return value


def _real(value, field):
    if isinstance(value, bool):
        raise ConfigError(field, "expected a number, got bool")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ConfigError(field, f"must be finite, got {value}")
    return value


# -- points -----------------------------------------------------------------


def as_coords(z, n: int | None = None) -> np.ndarray:
    """Coerce a point (BallPoint, complex, sequence) to a complex vector."""
    if isinstance(z, BallPoint):
        arr = z.array
    else:
        arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.ndim != 1:
        raise DomainError(f"a single point must be a vector, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise DomainError(f"point has dimension {arr.shape[0]}, expected {n}")
    return arr


@dataclass(frozen=True)
class BallPoint:
    """A point of the open unit ball of C^n, kept away from the sphere."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(complex(c) for c in np.atleast_1d(np.asarray(self.coords, dtype=complex)))
        if not coords:
            raise DomainError("a ball point needs at least one coordinate")
        object.__setattr__(self, "coords", coords)
        r = math.sqrt(sum(abs(c) ** 2 for c in coords))
        if not r < 1.0 - BOUNDARY_MARGIN:
            raise DomainError(f"|z| = {r!r} is not inside the ball (limit 1 - {BOUNDARY_MARGIN})")

    @classmethod
    def of(cls, z) -> "BallPoint":
        return z if isinstance(z, BallPoint) else cls(tuple(as_coords(z)))

    @classmethod
    def on_axis(cls, radius: float, n: int = 1) -> "BallPoint":
        return cls((complex(radius),) + (0j,) * (n - 1))

    @property
    def n(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    @property
    def norm_sq(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coords))

    @property
    def one_minus_norm_sq(self) -> float:
        r = math.sqrt(self.norm_sq)
        return (1.0 - r) * (1.0 + r)

    def to_json(self):
        return [[c.real, c.imag] for c in self.coords]


@dataclass(frozen=True)
class ProductPoint:
    z: BallPoint
    w: BallPoint

    @classmethod
    def of(cls, pt) -> "ProductPoint":
        if isinstance(pt, ProductPoint):
            return pt
        z, w = pt
        return cls(BallPoint.of(z), BallPoint.of(w))


def inner_product(z, u):
    """<z, u> = sum_k z_k conj(u_k) along the last axis."""
    z = np.asarray(z, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if z.ndim == 0 and u.ndim == 0:
        return complex(z * np.conj(u))
    return np.sum(z * np.conj(u), axis=-1)


def norm_sq(z):
    z = np.asarray(z, dtype=complex)
    return np.sum(z.real ** 2 + z.imag ** 2, axis=-1)


# -- parameters ---------------------------------------------------------------

_PAIR_FIELDS = ("a", "b", "c", "alpha", "beta", "p", "q")


def _pair(value, field, conv):
    if isinstance(value, (str, bytes)) or not isinstance(value, Sequence) and not isinstance(value, np.ndarray):
        raise ConfigError(field, "expected a list of two entries")
    if len(value) != 2:
        raise ConfigError(field, f"expected two entries, got {len(value)}")
    return tuple(conv(v, f"{field}[{i}]") for i, v in enumerate(value))


@dataclass(frozen=True)
class OperatorParams:
    """Exponents of T_{a,b,c} / S_{a,b,c} and of the source and target spaces."""

    n: int
    a: tuple
    b: tuple
    c: tuple
    alpha: tuple
    beta: tuple
    p: tuple
    q: tuple

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ConfigError("n", f"dimension must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _pair(getattr(self, name), name, _real))
        for name in ("alpha", "beta"):
            object.__setattr__(self, name, _pair(getattr(self, name), name, check_weight))
        for name in ("p", "q"):
            object.__setattr__(self, name, _pair(getattr(self, name), name, parse_exponent))

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorParams":
        if not isinstance(data, dict):
            raise ConfigError("params", "expected a JSON object")
        missing = [k for k in ("n",) + _PAIR_FIELDS if k not in data]
        if missing:
            raise ConfigError(missing[0], "missing field")
        return cls(**{k: data[k] for k in ("n",) + _PAIR_FIELDS})

    @classmethod
    def from_json(cls, text: str) -> "OperatorParams":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("params", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"n": self.n}
        for name in _PAIR_FIELDS:
            out[name] = [("inf" if v is INF else v) for v in getattr(self, name)]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def with_(self, **changes) -> "OperatorParams":
        return replace(self, **changes)

    def swapped(self) -> "OperatorParams":
        """Exchange the roles of the two variables."""
        return replace(self, **{f.name: tuple(reversed(getattr(self, f.name)))
                                for f in fields(self) if f.name != "n"})

    def shifted(self) -> "OperatorParams":
        """Move the output weight into the target measure: a -> 0, beta -> beta + a q."""
        beta = []
        for i in range(2):
            if self.a[i] == 0.0:
                beta.append(self.beta[i])
                continue
            if self.q[i] is INF:
                raise DomainError("cannot absorb the output weight for q = inf")
            shifted = self.beta[i] + self.a[i] * self.q[i]
            if shifted <= -1.0:
                raise DomainError(f"beta{i + 1} + a{i + 1} q{i + 1} = {shifted} is not > -1")
            beta.append(shifted)
        return replace(self, a=(0.0, 0.0), beta=tuple(beta))
