"""Moments, cross-products, covariance and Pearson correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from .dataset import Dataset, Series
from .errors import LengthMismatch, TooFewObservations, UnknownVariable, ZeroVariance
from .inference import correlation_p

SIGNIFICANCE_LEVEL = 0.01

Numbers = Union[Series, Sequence[float]]


def _values(x: Numbers) -> Sequence[float]:
    return x.values if isinstance(x, Series) else [float(v) for v in x]


def _name(x: Numbers, default: str) -> str:
    return x.name if isinstance(x, Series) else default


@dataclass(frozen=True)
class MomentSummary:
    n: int
    mean: float
    sum_sq_dev: float

    @property
    def variance(self) -> float:
        if self.n < 2:
            raise TooFewObservations(f"sample variance needs n >= 2, got n={self.n}")
        return self.sum_sq_dev / (self.n - 1)

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


def moments(x: Numbers) -> MomentSummary:
    """Mean and sum of squared deviations in one pass (Welford's update)."""
    values = _values(x)
    if len(values) < 1:
        raise TooFewObservations("moments need at least one observation")
    mean = 0.0
    m2 = 0.0
    for k, v in enumerate(values, start=1):
        delta = v - mean
        mean += delta / k
        m2 += delta * (v - mean)
    return MomentSummary(len(values), mean, max(m2, 0.0))


def _deviations(values):
    mean = math.fsum(values) / len(values)
    return [v - mean for v in values]


def sscp(x: Numbers, y: Numbers) -> float:
    """Sum of cross-products of deviations, sum((x - mean_x) * (y - mean_y))."""
    xv, yv = _values(x), _values(y)
    if len(xv) != len(yv):
        raise LengthMismatch(f"series lengths differ: {len(xv)} vs {len(yv)}")
    if not xv:
        raise TooFewObservations("sscp needs at least one observation")
    dx, dy = _deviations(xv), _deviations(yv)
    return math.fsum(a * b for a, b in zip(dx, dy))


@dataclass(frozen=True)
class CorrelationCell:
    r: float
    p_two_tailed: float
    sscp: float
    covariance: float
    n: int

    @property
    def significant_01(self) -> bool:
        return self.p_two_tailed < SIGNIFICANCE_LEVEL

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "p_two_tailed": self.p_two_tailed,
            "sscp": self.sscp,
            "covariance": self.covariance,
            "n": self.n,
            "significant_01": self.significant_01,
        }


def pearson(x: Numbers, y: Numbers) -> CorrelationCell:
    """Pearson product-moment correlation with its two-tailed t-test p-value."""
    xv, yv = _values(x), _values(y)
    if len(xv) != len(yv):
        raise LengthMismatch(f"series lengths differ: {len(xv)} vs {len(yv)}")
    n = len(xv)
    if n < 3:
        raise TooFewObservations(f"correlation test needs n >= 3, got n={n}")
    dx, dy = _deviations(xv), _deviations(yv)
    ssx = math.fsum(a * a for a in dx)
    ssy = math.fsum(b * b for b in dy)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    if ssx == 0.0:
        raise ZeroVariance(_name(x, "x"))
    if ssy == 0.0:
        raise ZeroVariance(_name(y, "y"))
    r = sxy / math.sqrt(ssx * ssy)
    r = max(-1.0, min(1.0, r))
    return CorrelationCell(r, correlation_p(r, n), sxy, sxy / (n - 1), n)


@dataclass(frozen=True)
class CorrelationMatrix:
    variable_names: tuple
    cells: tuple

    def index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise UnknownVariable(name, self.variable_names) from None

    def cell(self, a: str, b: str) -> CorrelationCell:
        return self.cells[self.index(a)][self.index(b)]

    def r(self, a: str, b: str) -> float:
        return self.cell(a, b).r

    def pairs(self):
        """Yield ``(i, j)`` for each unordered off-diagonal pair, in order."""
        k = len(self.variable_names)
        for i in range(k):
            for j in range(i + 1, k):
                yield i, j

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "cells": [[c.to_dict() for c in row] for row in self.cells],
        }


def correlation_matrix(ds: Dataset, names: Sequence[str]) -> CorrelationMatrix:
    """All pairwise correlations among ``names`` (each pair computed once)."""
    names = tuple(names)
    if len(names) < 2:
        raise ValueError("a correlation matrix needs at least two variables")
    series = [ds.column(nm) for nm in names]
    k = len(names)
    grid = [[None] * k for _ in range(k)]
    for i, s in enumerate(series):
        m = moments(s)
        if m.sum_sq_dev == 0.0:
            raise ZeroVariance(s.name, context="correlation matrix")
        if m.n < 3:
            raise TooFewObservations(f"correlation test needs n >= 3, got n={m.n}")
        grid[i][i] = CorrelationCell(1.0, 0.0, m.sum_sq_dev, m.variance, m.n)
    for i in range(k):
        for j in range(i + 1, k):
            try:
                c = pearson(series[i], series[j])
            except ZeroVariance as exc:
                raise ZeroVariance(exc.name, context=f"pair ({names[i]}, {names[j]})") from exc
            grid[i][j] = grid[j][i] = c
    return CorrelationMatrix(names, tuple(tuple(row) for row in grid))
