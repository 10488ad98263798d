"""Correlation, OLS regression and SPSS-style reporting for annual series."""

__version__ = "0.1.0"

from .dataset import Dataset, Series, align, column, load_csv, write_csv
from .descriptive import CorrelationMatrix, correlation_matrix, moments, pearson, sscp
from .errors import EconRegError
from .inference import TestVerdict, f_cdf, f_sf, reg_inc_beta, t_cdf, t_two_tailed, verdict
from .ols import RegressionModel, equation_string, fit, predict, residuals
from .consistency import ConsistencyCheck, Published, paper_consistency_suite
from .workflow import PaperVariables, run_staged_analysis, verdict_report
from .report import ReportTable, render_correlation_table, render_regression_tables
from .figures import FigureSpec, render_figure

__all__ = [
    "ConsistencyCheck", "CorrelationMatrix", "Dataset", "EconRegError", "FigureSpec",
    "PaperVariables", "Published", "RegressionModel", "ReportTable", "Series", "TestVerdict",
    "align", "column", "correlation_matrix", "equation_string", "f_cdf", "f_sf", "fit",
    "load_csv", "moments", "paper_consistency_suite", "pearson", "predict", "reg_inc_beta",
    "render_correlation_table", "render_figure", "render_regression_tables", "residuals",
    "run_staged_analysis", "sscp", "t_cdf", "t_two_tailed", "verdict", "verdict_report",
    "write_csv",
]
