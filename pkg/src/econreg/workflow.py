"""The four-stage GPDI model-building procedure and its hypothesis tests.

Stage order is fixed: screen the stock indices by correlation, link the
best index to consumer prices, model the T-bill rate, then model GPDI.
Each stage consumes the selections of the ones before it, and every
selection is written to the stage's decision log.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, fields
from typing import List, Mapping, Optional

from .consistency import Published
from .dataset import Dataset
from .descriptive import correlation_matrix
from .errors import EconRegError, StageError
from .formatting import spss
from .inference import StatisticKind, TestVerdict, f_sf, t_two_tailed, verdict
from .ols import AnovaBlock, CONSTANT, Coefficient, ModelSummary, RegressionModel, fit


@dataclass(frozen=True)
class PaperVariables:
    """Column names of the six series the staged analysis needs."""

    gpdi: str = "GPDI"
    nyse: str = "NYSE"
    dj: str = "DJ"
    sp500: str = "SP500"
    cpiu: str = "CPIU"
    tb3: str = "TB3"

    @property
    def indices(self) -> tuple:
        return (self.nyse, self.dj, self.sp500)

    @property
    def all(self) -> tuple:
        return (self.gpdi, self.nyse, self.dj, self.sp500, self.cpiu, self.tb3)

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str]) -> "PaperVariables":
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"unknown role(s): {', '.join(sorted(unknown))}")
        return cls(**dict(mapping))


class StageId(str, enum.Enum):
    INDEX_SCREEN = "IndexScreen"
    PRICE_LINK = "PriceLink"
    RATE_MODEL = "RateModel"
    GPDI_MODEL = "GpdiModel"


@dataclass(frozen=True)
class StagePlan:
    stage_id: StageId
    inputs: tuple
    selection_rule: str
    outputs: tuple


@dataclass(frozen=True)
class StageResult:
    plan: StagePlan
    correlations: tuple = ()
    model: Optional[RegressionModel] = None
    selected: tuple = ()
    decisions: tuple = ()
    tie: bool = False

    def to_dict(self) -> dict:
        return {
            "stage": self.plan.stage_id.value,
            "inputs": list(self.plan.inputs),
            "selection_rule": self.plan.selection_rule,
            "selected": list(self.selected),
            "tie": self.tie,
            "decisions": list(self.decisions),
            "correlations": [m.to_dict() for m in self.correlations],
            "model": self.model.to_dict() if self.model else None,
        }


def _is_tie(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-15)


def _pick_max(candidates):
    """``candidates`` is an ordered list of ``(key, |r|)``; first maximum wins.

    Returns the winning key and the keys tied with it.
    """
    best_key, best = candidates[0]
    for key, value in candidates[1:]:
        if value > best and not _is_tie(value, best):
            best_key, best = key, value
    tied = [key for key, value in candidates if _is_tie(value, best)]
    return best_key, tied


def _run(stage: StageId, fn):
    try:
        return fn()
    except EconRegError as exc:
        raise StageError(stage.value, exc) from exc


def run_staged_analysis(
    ds: Dataset, config: Optional[PaperVariables] = None
) -> List[StageResult]:
    """Run the four stages on ``ds`` and return their results in order."""
    v = config or PaperVariables()
    results = []

    # Stage 1: strongest pair among the three stock indices
    plan1 = StagePlan(
        StageId.INDEX_SCREEN, v.indices,
        "pair of indices with the largest |r|; ties go to the earlier configured pair",
        ("correlation matrix", "selected index pair"),
    )
    m1 = _run(StageId.INDEX_SCREEN, lambda: correlation_matrix(ds, v.indices))
    cands = [((m1.variable_names[i], m1.variable_names[j]), abs(m1.cells[i][j].r)) for i, j in m1.pairs()]
    pair, tied = _pick_max(cands)
    r1 = m1.r(*pair)
    log = [f"r({a},{b}) = {spss(m1.r(a, b))}" for (a, b), _ in cands]
    if len(tied) > 1:
        log.append(
            f"tie: |r| = {spss(abs(r1))} shared by "
            + ", ".join(f"({a},{b})" for a, b in tied)
            + f"; broken by configured order -> ({pair[0]},{pair[1]})"
        )
    else:
        log.append(f"selected ({pair[0]},{pair[1]}) with the largest |r| = {spss(abs(r1))}")
    results.append(StageResult(plan1, (m1,), None, pair, tuple(log), len(tied) > 1))

    # Stage 2: which selected index tracks CPI-U more closely; regress CPI-U on it
    plan2 = StagePlan(
        StageId.PRICE_LINK, (*pair, v.cpiu),
        "index with the larger |r| against CPI-U; ties go to the configured order",
        ("two correlation matrices", "simple regression of CPI-U"),
    )
    mats = tuple(
        _run(StageId.PRICE_LINK, lambda idx=idx: correlation_matrix(ds, (idx, v.cpiu)))
        for idx in pair
    )
    cands = [(idx, abs(m.r(idx, v.cpiu))) for idx, m in zip(pair, mats)]
    chosen, tied = _pick_max(cands)
    log = [f"r({idx},{v.cpiu}) = {spss(m.r(idx, v.cpiu))}" for idx, m in zip(pair, mats)]
    if len(tied) > 1:
        log.append(f"tie between {', '.join(tied)}; broken by configured order -> {chosen}")
    else:
        log.append(f"selected {chosen}: largest |r| with {v.cpiu}")
    model2 = _run(StageId.PRICE_LINK, lambda: fit(ds, v.cpiu, [chosen]))
    log.append(f"fitted {v.cpiu} ~ {chosen}")
    results.append(StageResult(plan2, mats, model2, (chosen,), tuple(log), len(tied) > 1))

    # Stage 3: T-bill rate on the chosen index and CPI-U
    preds3 = (chosen, v.cpiu)
    plan3 = StagePlan(
        StageId.RATE_MODEL, (v.tb3, *preds3), "fixed: both predictors enter",
        ("two-predictor regression of TB3",),
    )
    model3 = _run(StageId.RATE_MODEL, lambda: fit(ds, v.tb3, preds3))
    results.append(
        StageResult(plan3, (), model3, preds3, (f"fitted {v.tb3} ~ {' + '.join(preds3)}",))
    )

    # Stage 4: GPDI on all three
    preds4 = (chosen, v.cpiu, v.tb3)
    plan4 = StagePlan(
        StageId.GPDI_MODEL, (v.gpdi, *preds4), "fixed: all three predictors enter",
        ("three-predictor regression of GPDI",),
    )
    model4 = _run(StageId.GPDI_MODEL, lambda: fit(ds, v.gpdi, preds4))
    results.append(
        StageResult(plan4, (), model4, preds4, (f"fitted {v.gpdi} ~ {' + '.join(preds4)}",))
    )
    return results


def verdict_report(model: RegressionModel, alpha: float = 0.05) -> List[TestVerdict]:
    """Overall F test followed by a t test for every coefficient."""
    a = model.anova
    out = [
        verdict(a.f, StatisticKind.F, a.df_regression, a.df_residual, alpha,
                label=f"F test, all slopes of {model.dependent} zero")
    ]
    for c in model.coefficients:
        out.append(verdict(c.t, StatisticKind.T, a.df_residual, 0, alpha, label=f"t test, {c.name}"))
    return out


def published_model(pub: Published, key: str) -> RegressionModel:
    """Rebuild one published regression from its printed table values.

    Printed Sig. values are replaced by p-values recomputed from the printed
    statistics so that a model built here behaves like a fitted one.
    """
    spec = pub.models[key]
    val = lambda k: pub.value(f"{key}.{k}")
    df_reg = int(val("anova.df_regression"))
    df_res = int(val("anova.df_residual"))
    df_tot = int(val("anova.df_total"))
    coefs = []
    for name in ["CONST", *spec["predictors"]]:
        c = f"coef.{name}"
        t = val(f"{c}.t")
        coefs.append(
            Coefficient(
                CONSTANT if name == "CONST" else name,
                val(f"{c}.b"),
                val(f"{c}.se"),
                None if name == "CONST" else val(f"{c}.beta"),
                t,
                t_two_tailed(t, df_res),
            )
        )
    f = val("anova.f")
    anova = AnovaBlock(
        val("anova.ss_regression"), val("anova.ss_residual"), val("anova.ss_total"),
        df_reg, df_res, df_tot, val("anova.ms_regression"), val("anova.ms_residual"),
        f, f_sf(f, df_reg, df_res),
    )
    summary = ModelSummary(
        val("summary.r"), val("summary.r_square"), val("summary.adj_r_square"), val("summary.see")
    )
    return RegressionModel(
        spec["dependent"], tuple(spec["predictors"]), df_tot + 1, tuple(coefs), summary, anova
    )
