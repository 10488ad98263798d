"""SPSS-style report tables.

A :class:`ReportTable` holds only formatted strings, so it renders the same
way as text, as tab-delimited lines or as JSON. ``plain=True`` on any
renderer swaps the 3-decimal display style for full precision.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from . import formatting
from .descriptive import CorrelationMatrix
from .ols import RegressionModel

SIG_MARK = "**"
SIG_FOOTNOTE = "** Correlation is significant at the 0.01 level (2-tailed)."
_TITLE_MARK = re.compile(r"\^([a-z])")

CORRELATION_ROWS = {
    "r": "Pearson Correlation",
    "sig": "Sig. (2-tailed)",
    "sscp": "Sum of Squares and Cross-products",
    "cov": "Covariance",
    "n": "N",
}


@dataclass(frozen=True)
class ReportTable:
    """A layout-ready table.

    ``header_groups`` is an optional upper header tier of ``(label, span)``
    pairs whose spans cover the leaf ``headers`` exactly.
    """

    title: str
    headers: tuple
    rows: tuple
    footnotes: tuple = ()
    header_groups: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "headers", tuple(self.headers))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        object.__setattr__(self, "footnotes", tuple(self.footnotes))
        object.__setattr__(self, "header_groups", tuple(tuple(g) for g in self.header_groups))
        width = len(self.headers)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"{self.title}: row {i} has {len(row)} cells, expected {width}")
        if self.header_groups and sum(span for _, span in self.header_groups) != width:
            raise ValueError(f"{self.title}: header group spans do not cover {width} columns")
        markers = set(_TITLE_MARK.findall(self.title))
        for row in self.rows:
            for cell in row:
                if cell.endswith(SIG_MARK):
                    markers.add(SIG_MARK)
        for m in markers:
            prefix = SIG_MARK if m == SIG_MARK else f"{m}."
            if not any(f.startswith(prefix) for f in self.footnotes):
                raise ValueError(f"{self.title}: marker {m!r} has no footnote")

    @property
    def plain_title(self) -> str:
        return _TITLE_MARK.sub("", self.title)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "header_groups": [list(g) for g in self.header_groups],
            "headers": list(self.headers),
            "rows": [list(r) for r in self.rows],
            "footnotes": list(self.footnotes),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ReportTable":
        return cls(
            d["title"],
            d["headers"],
            d["rows"],
            d.get("footnotes", ()),
            tuple(tuple(g) for g in d.get("header_groups", ())),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def _header_lines(self):
        lines = []
        if self.header_groups:
            top = []
            for label, span in self.header_groups:
                top += [label] + [""] * (span - 1)
            lines.append(top)
        lines.append(list(self.headers))
        return lines

    def to_delimited(self, sep: str = "\t") -> str:
        out = [self.title]
        for line in self._header_lines() + [list(r) for r in self.rows]:
            out.append(sep.join(line))
        out += list(self.footnotes)
        return "\n".join(out) + "\n"

    def to_text(self) -> str:
        """Column-aligned rendering for terminals."""
        grid = self._header_lines() + [list(r) for r in self.rows]
        widths = [max(len(line[i]) for line in grid) for i in range(len(self.headers))]
        n_head = len(self._header_lines())
        out = [self.title, ""]
        for k, line in enumerate(grid):
            cells = []
            for i, (cell, w) in enumerate(zip(line, widths)):
                # text columns left-aligned, numbers right-aligned
                numeric = k >= n_head and _looks_numeric(cell)
                cells.append(cell.rjust(w) if numeric else cell.ljust(w))
            out.append("  ".join(cells).rstrip())
            if k == n_head - 1:
                out.append("  ".join("-" * w for w in widths))
        if self.footnotes:
            out.append("")
            out += list(self.footnotes)
        return "\n".join(out) + "\n"


def _looks_numeric(cell: str) -> bool:
    return bool(re.fullmatch(r"-?[\d.]+(\*\*)?|\.|inf|-inf", cell))


def _fmt(plain: bool):
    return formatting.plain if plain else formatting.spss


def render_correlation_table(
    m: CorrelationMatrix,
    labels: Optional[Mapping[str, str]] = None,
    statistics: Sequence[str] = ("r", "sig", "sscp", "cov", "n"),
    plain: bool = False,
    title: str = "Correlations",
) -> ReportTable:
    """One block of statistic rows per variable, as in an SPSS correlation table."""
    labels = labels or {}
    fmt = _fmt(plain)
    names = m.variable_names
    shown = [labels.get(nm, nm) for nm in names]
    rows = []
    flagged = False
    for i, name in enumerate(names):
        for k, stat in enumerate(statistics):
            row = [shown[i] if k == 0 else "", CORRELATION_ROWS[stat]]
            for j in range(len(names)):
                c = m.cells[i][j]
                diag = i == j
                if stat == "r":
                    if diag:
                        cell = "1"
                    else:
                        cell = fmt(c.r)
                        if c.significant_01:
                            cell += SIG_MARK
                            flagged = True
                elif stat == "sig":
                    cell = "." if diag else fmt(c.p_two_tailed)
                elif stat == "sscp":
                    cell = fmt(c.sscp)
                elif stat == "cov":
                    cell = fmt(c.covariance)
                else:
                    cell = formatting.count(c.n)
                row.append(cell)
            rows.append(row)
    footnotes = (SIG_FOOTNOTE,) if flagged else ()
    return ReportTable(title, ["", "", *shown], rows, footnotes)


def predictors_footnote(model: RegressionModel, labels: Mapping[str, str]) -> str:
    # SPSS lists the predictors in reverse order of entry
    names = [labels.get(p, p) for p in reversed(model.predictors)]
    return "a. Predictors: (Constant), " + ", ".join(names)


def render_regression_tables(
    model: RegressionModel,
    labels: Optional[Mapping[str, str]] = None,
    plain: bool = False,
    dependent_label: Optional[str] = None,
):
    """Return the (Model Summary, ANOVA, Coefficients) tables for ``model``."""
    labels = labels or {}
    fmt = _fmt(plain)
    dep = dependent_label or labels.get(model.dependent, model.dependent)
    preds_note = predictors_footnote(model, labels)
    s, a = model.summary, model.anova
    see = formatting.plain(s.std_error_estimate) if plain else formatting.spss(s.std_error_estimate, 4)

    summary = ReportTable(
        "Model Summary",
        ["Model", "R", "R Square", "Adjusted R Square", "Std. Error of the Estimate"],
        [["1", fmt(s.r), fmt(s.r_square), fmt(s.adj_r_square), see]],
        (preds_note, f"b. Dependent Variable: {dep}"),
    )
    anova = ReportTable(
        "ANOVA^b",
        ["Model", "", "Sum of Squares", "df", "Mean Square", "F", "Sig."],
        [
            ["1", "Regression", fmt(a.ss_regression), str(a.df_regression),
             fmt(a.ms_regression), fmt(a.f), fmt(a.p_value)],
            ["", "Residual", fmt(a.ss_residual), str(a.df_residual), fmt(a.ms_residual), "", ""],
            ["", "Total", fmt(a.ss_total), str(a.df_total), "", "", ""],
        ],
        (preds_note, f"b. Dependent Variable: {dep}"),
    )
    rows = []
    for k, c in enumerate(model.coefficients):
        rows.append([
            "1" if k == 0 else "",
            labels.get(c.name, c.name),
            fmt(c.b),
            fmt(c.std_error),
            "" if c.beta is None else fmt(c.beta),
            fmt(c.t),
            fmt(c.p),
        ])
    coefficients = ReportTable(
        "Coefficients^a",
        ["Model", "", "B", "Std. Error", "Beta", "t", "Sig."],
        rows,
        (f"a. Dependent Variable: {dep}",),
        header_groups=(("Model", 1), ("", 1), ("Unstandardized Coefficients", 2),
                       ("Standardized Coefficients", 1), ("t", 1), ("Sig.", 1)),
    )
    return summary, anova, coefficients


def render_verdicts(verdicts, paper_wording: bool = False) -> str:
    return "\n".join(v.describe(paper_wording) for v in verdicts) + "\n"
