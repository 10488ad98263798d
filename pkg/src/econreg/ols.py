"""Ordinary least squares with an intercept.

The fit centres the predictors, scales each column to unit length and
solves the least-squares problem through a Householder QR factorisation of
that matrix. The normal matrix is never formed or inverted; standard errors
come from ``R^-1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .dataset import Dataset, Series
from .errors import (
    ConstantPredictor,
    DatasetMismatch,
    MissingPredictor,
    RankDeficient,
    TooFewObservations,
    ZeroVariance,
)
from .formatting import spss
from .inference import f_sf, t_two_tailed

CONSTANT = "(Constant)"
CONDITION_WARN_LIMIT = 1e10
_RANK_TOL = 1e-10


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Coefficient:
    name: str
    b: float
    std_error: float
    beta: Optional[float]
    t: float
    p: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "b": self.b,
            "std_error": self.std_error,
            "beta": self.beta,
            "t": self.t,
            "p": self.p,
        }


@dataclass(frozen=True)
class ModelSummary:
    r: float
    r_square: float
    adj_r_square: float
    std_error_estimate: float

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "r_square": self.r_square,
            "adj_r_square": self.adj_r_square,
            "std_error_estimate": self.std_error_estimate,
        }


@dataclass(frozen=True)
class AnovaBlock:
    ss_regression: float
    ss_residual: float
    ss_total: float
    df_regression: int
    df_residual: int
    df_total: int
    ms_regression: float
    ms_residual: float
    f: float
    p_value: float

    def to_dict(self) -> dict:
        return {
            "ss_regression": self.ss_regression,
            "ss_residual": self.ss_residual,
            "ss_total": self.ss_total,
            "df_regression": self.df_regression,
            "df_residual": self.df_residual,
            "df_total": self.df_total,
            "ms_regression": self.ms_regression,
            "ms_residual": self.ms_residual,
            "f": self.f,
            "p_value": self.p_value,
        }


@dataclass(frozen=True)
class RegressionModel:
    dependent: str
    predictors: tuple
    n: int
    coefficients: tuple
    summary: ModelSummary
    anova: AnovaBlock
    condition_number: Optional[float] = None

    @property
    def constant(self) -> Coefficient:
        return self.coefficients[0]

    @property
    def slopes(self) -> tuple:
        return self.coefficients[1:]

    def coefficient(self, name: str) -> Coefficient:
        for c in self.coefficients:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "predictors": list(self.predictors),
            "n": self.n,
            "coefficients": [c.to_dict() for c in self.coefficients],
            "summary": self.summary.to_dict(),
            "anova": self.anova.to_dict(),
            "condition_number": self.condition_number,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RegressionModel":
        return cls(
            dependent=d["dependent"],
            predictors=tuple(d["predictors"]),
            n=int(d["n"]),
            coefficients=tuple(Coefficient(**c) for c in d["coefficients"]),
            summary=ModelSummary(**d["summary"]),
            anova=AnovaBlock(**d["anova"]),
            condition_number=d.get("condition_number"),
        )


def _t_and_p(b: float, se: float, df: int):
    b, se = float(b), float(se)
    if se > 0:
        t = b / se
    elif b == 0:
        t = 0.0
    else:
        t = math.copysign(math.inf, b)
    return t, t_two_tailed(t, df)


def _dependent_columns(R: np.ndarray, j: int, names: Sequence[str]) -> list:
    """Columns that column ``j`` is (numerically) a combination of."""
    if j == 0:
        return [names[0]]
    # R[:j, j] expresses column j in the basis of the earlier columns.
    w = np.linalg.solve(R[:j, :j], R[:j, j])
    involved = [names[i] for i in range(j) if abs(w[i]) > 1e-8]
    return involved + [names[j]]


def fit(ds: Dataset, dependent: str, predictors: Sequence[str]) -> RegressionModel:
    """Least-squares fit of ``dependent`` on ``predictors`` plus an intercept."""
    predictors = tuple(predictors)
    p = len(predictors)
    if p < 1:
        raise ValueError("at least one predictor is required")
    if dependent in predictors:
        raise ValueError(f"{dependent!r} cannot be both dependent and predictor")
    if len(set(predictors)) != p:
        raise ValueError("predictor names must be unique")
    y = ds.column(dependent).array
    X = ds.matrix(predictors)
    n = len(y)
    if n < p + 2:
        raise TooFewObservations(
            f"{p} predictor(s) need at least {p + 2} observations, got {n}"
        )

    x_mean = X.mean(axis=0)
    Xc = X - x_mean
    # Re-centre once more; removes the rounding left by a large mean.
    Xc -= Xc.mean(axis=0)
    norms = np.sqrt((Xc**2).sum(axis=0))
    for name, nrm, col in zip(predictors, norms, X.T):
        if nrm == 0.0 or np.all(col == col[0]):
            raise ConstantPredictor(f"predictor {name!r} is constant")
    y_mean = float(y.mean())
    yc = y - y_mean
    yc -= yc.mean()
    ss_total = float(np.sum(yc**2))
    if ss_total == 0.0:
        raise ZeroVariance(dependent, context="dependent variable")

    Q, R = np.linalg.qr(Xc / norms)
    diag = np.abs(np.diag(R))
    if diag.min() <= _RANK_TOL * max(diag.max(), 1.0):
        j = int(np.argmin(diag > _RANK_TOL * max(diag.max(), 1.0)))
        raise RankDeficient(_dependent_columns(R, j, predictors))

    qty = Q.T @ yc
    scaled_b = np.linalg.solve(R, qty)
    slopes = scaled_b / norms
    intercept = float(y_mean - x_mean @ slopes)

    fitted_c = Xc @ slopes
    resid = yc - fitted_c
    ss_residual = float(np.sum(resid**2))
    ss_regression = float(np.sum((fitted_c - fitted_c.mean()) ** 2))

    df_reg, df_res, df_tot = p, n - p - 1, n - 1
    ms_reg = ss_regression / df_reg
    ms_res = ss_residual / df_res
    if ms_res > 0:
        f = ms_reg / ms_res
    else:
        f = math.inf
    f_p = f_sf(f, df_reg, df_res)

    r_square = min(1.0, max(0.0, ss_regression / ss_total))
    adj = 1.0 - (1.0 - r_square) * df_tot / df_res
    see = math.sqrt(ms_res)

    # Unscaled covariance of the centred slopes: (Xc'Xc)^-1 = D^-1 R^-1 R^-T D^-1.
    Rinv = np.linalg.solve(R, np.eye(p))
    unscaled = (Rinv @ Rinv.T) / np.outer(norms, norms)
    var_slopes = np.diag(unscaled) * ms_res
    var_intercept = ms_res * (1.0 / n + float(x_mean @ unscaled @ x_mean))
    se_slopes = np.sqrt(np.maximum(var_slopes, 0.0))
    se_intercept = math.sqrt(max(var_intercept, 0.0))

    sd_y = math.sqrt(ss_total / df_tot)
    sd_x = norms / math.sqrt(df_tot)

    coefs = []
    t0, p0 = _t_and_p(intercept, se_intercept, df_res)
    coefs.append(Coefficient(CONSTANT, intercept, se_intercept, None, t0, p0))
    for name, b, se, sx in zip(predictors, slopes, se_slopes, sd_x):
        t, pv = _t_and_p(float(b), float(se), df_res)
        coefs.append(Coefficient(name, float(b), float(se), float(b * sx / sd_y), t, pv))

    design = np.column_stack([np.ones(n), X])
    cond = float(np.linalg.cond(design) ** 2)
    if cond > CONDITION_WARN_LIMIT:
        warnings.warn(
            f"{dependent} ~ {' + '.join(predictors)}: cross-product condition "
            f"number {cond:.3g} exceeds {CONDITION_WARN_LIMIT:.0e}",
            IllConditionedWarning,
            stacklevel=2,
        )

    return RegressionModel(
        dependent=dependent,
        predictors=predictors,
        n=n,
        coefficients=tuple(coefs),
        summary=ModelSummary(math.sqrt(r_square), r_square, adj, see),
        anova=AnovaBlock(
            ss_regression, ss_residual, ss_total, df_reg, df_res, df_tot, ms_reg, ms_res, f, f_p
        ),
        condition_number=cond,
    )


def predict(model: RegressionModel, inputs: Mapping[str, float]) -> float:
    """Evaluate the fitted equation at one point."""
    total = model.constant.b
    for c in model.slopes:
        if c.name not in inputs:
            raise MissingPredictor(c.name)
        total += c.b * float(inputs[c.name])
    return total


def fitted_values(model: RegressionModel, ds: Dataset) -> np.ndarray:
    missing = [nm for nm in (model.dependent, *model.predictors) if nm not in ds]
    if missing:
        raise DatasetMismatch(f"dataset lacks model variables: {', '.join(missing)}")
    if ds.n != model.n:
        raise DatasetMismatch(f"model was fitted on n={model.n}, dataset has n={ds.n}")
    X = ds.matrix(model.predictors)
    return model.constant.b + X @ np.array([c.b for c in model.slopes])


def residuals(model: RegressionModel, ds: Dataset) -> Series:
    """Observed minus fitted values of the dependent variable, per year."""
    yhat = fitted_values(model, ds)
    y = ds.column(model.dependent).array
    return Series(f"{model.dependent} residual", ds.years, y - yhat)


def equation_string(
    model: RegressionModel,
    decimals: int = 3,
    labels: Optional[Mapping[str, str]] = None,
) -> str:
    """Render ``DEP = b0 + b1 * X1 ...`` with a second line of slope SEs,
    e.g. ``TB3 = 4.278 - .005 * SP500 + .037 * CPI-U`` / ``(.002) (.012)``."""
    labels = labels or {}

    def label(name):
        return labels.get(name, name)

    parts = [f"{label(model.dependent)} = {spss(model.constant.b, decimals)}"]
    for c in model.slopes:
        # sign follows the displayed value, so -1e-17 prints as "+ .000"
        sign = "-" if round(c.b, decimals) < 0 else "+"
        parts.append(f"{sign} {spss(abs(c.b), decimals)} * {label(c.name)}")
    ses = " ".join(f"({spss(c.std_error, decimals)})" for c in model.slopes)
    return " ".join(parts) + "\n" + ses
