"""Distributions over nonnegative top-of-block values.

A :class:`ValueDistribution` is an immutable description (family tag plus
parameters) with vectorised ``cdf``/``pdf``/``quantile`` and sampling from a
caller-owned ``numpy.random.Generator``. Only families the model needs are
provided: ``exponential`` (rate) and ``uniform`` (on ``[0, upper]``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import QuadratureError, integrate

__all__ = [
    "ParameterError",
    "ValueDistribution",
    "make_exponential",
    "make_uniform",
    "from_config",
    "fosd_dominates",
    "integrate",
    "QuadratureError",
    "TAIL_MASS",
    "DEFAULT_FOSD_GRID",
]

TAIL_MASS = 1e-10
DEFAULT_FOSD_GRID = 10_000
FOSD_SLACK = 1e-12


class ParameterError(ValueError):
    """A parameter lies outside its domain."""


def _positive_finite(name, value):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ParameterError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value) or value <= 0:
        raise ParameterError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ValueDistribution:
    kind: str
    params: dict = field(hash=False)
    support_hint: float

    def cdf(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind == "exponential":
            out = -np.expm1(-self.params["rate"] * np.maximum(v, 0.0))
        else:
            out = np.clip(v / self.params["upper"], 0.0, 1.0)
        out = np.where(v < 0, 0.0, out)
        return out if out.ndim else float(out)

    def pdf(self, v):
        v = np.asarray(v, dtype=float)
        if self.kind == "exponential":
            rate = self.params["rate"]
            out = np.where(v < 0, 0.0, rate * np.exp(-rate * np.maximum(v, 0.0)))
        else:
            upper = self.params["upper"]
            out = np.where((v >= 0) & (v <= upper), 1.0 / upper, 0.0)
        return out if out.ndim else float(out)

    def quantile(self, q):
        q = np.asarray(q, dtype=float)
        if np.any((q < 0) | (q > 1)):
            raise ParameterError("quantile level must lie in [0, 1]")
        if self.kind == "exponential":
            out = -np.log1p(-q) / self.params["rate"]
        else:
            out = q * self.params["upper"]
        return out if out.ndim else float(out)

    def sample(self, rng, size):
        """Draw ``size`` values using the caller's generator."""
        if self.kind == "exponential":
            return rng.exponential(1.0 / self.params["rate"], size)
        return rng.uniform(0.0, self.params["upper"], size)

    def mean(self):
        if self.kind == "exponential":
            return 1.0 / self.params["rate"]
        return 0.5 * self.params["upper"]

    def to_config(self):
        return {"family": self.kind, **self.params}


def make_exponential(rate):
    rate = _positive_finite("rate", rate)
    return ValueDistribution(
        "exponential", {"rate": rate}, -math.log(TAIL_MASS) / rate
    )


def make_uniform(upper):
    upper = _positive_finite("upper", upper)
    return ValueDistribution("uniform", {"upper": upper}, upper)


def from_config(cfg):
    """Build a distribution from ``{"family": "exponential", "rate": ...}``."""
    try:
        family = cfg["family"]
    except (KeyError, TypeError):
        raise ParameterError(f"distribution config needs a 'family' key: {cfg!r}") from None
    if family == "exponential":
        extra = set(cfg) - {"family", "rate"}
        if extra or "rate" not in cfg:
            raise ParameterError(f"exponential config takes exactly 'rate': {cfg!r}")
        return make_exponential(cfg["rate"])
    if family == "uniform":
        if set(cfg) != {"family", "upper"}:
            raise ParameterError(f"uniform config takes exactly 'upper': {cfg!r}")
        return make_uniform(cfg["upper"])
    raise ParameterError(f"unknown distribution family {family!r}")


def fosd_dominates(f, g, grid_points=DEFAULT_FOSD_GRID):
    """True if ``f`` weakly first-order dominates ``g`` (F <= G) on a uniform grid."""
    if int(grid_points) != grid_points or grid_points < 2:
        raise ParameterError(f"grid_points must be an integer >= 2, got {grid_points!r}")
    grid = np.linspace(0.0, max(f.support_hint, g.support_hint), int(grid_points))
    return bool(np.all(f.cdf(grid) <= g.cdf(grid) + FOSD_SLACK))
