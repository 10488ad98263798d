"""Consistency checks over the published summary statistics.

The published tables print rounded numbers only, so every identity is
checked with a tolerance made of two parts: the tolerance of the check's
class, and the largest change of the recomputed value when each input
moves by half a unit in its last printed digit. A number printed as
``-.005`` is only known to lie in ``[-.0055, -.0045]``; checks built on it
honour that.
"""

from __future__ import annotations

import copy
import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from .inference import correlation_p, f_sf, t_two_tailed

FIXTURE_NAME = "published_statistics.json"

# Tolerance per check class; "relative" classes scale with |expected|.
CLASS_TOLERANCE = {
    "correlation": 0.0005,
    "covariance": 0.001,
    "model-summary": 0.001,
    "see": 0.0005,  # relative
    "f-t": 0.02,
    "p-value": 0.005,
    "beta": 0.002,
    "anova": 0.001,
    "exact": 0.0,
    "display": 0.0,
}
RELATIVE_CLASSES = {"see"}


def _decimals(text: str) -> int:
    return len(text.split(".", 1)[1]) if "." in text else 0


class Published:
    """Read access to the shipped table of published numbers."""

    def __init__(self, doc: dict):
        self.doc = doc
        self._records = {r["key"]: r for r in doc["records"]}

    @classmethod
    def load(cls, path: Union[str, Path, None] = None) -> "Published":
        if path is None:
            text = resources.files("econreg").joinpath("data").joinpath(FIXTURE_NAME).read_text("utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
        return cls(json.loads(text))

    @property
    def keys(self) -> List[str]:
        return list(self._records)

    @property
    def variables(self) -> List[str]:
        return list(self.doc["variables"])

    @property
    def labels(self) -> Dict[str, str]:
        return dict(self.doc["labels"])

    @property
    def correlation_labels(self) -> Dict[str, str]:
        return dict(self.doc["correlation_labels"])

    @property
    def models(self) -> Dict[str, dict]:
        return dict(self.doc["models"])

    def record(self, key: str) -> dict:
        return self._records[key]

    def __contains__(self, key):
        return key in self._records

    def printed(self, key: str) -> str:
        return self._records[key]["value"]

    def value(self, key: str) -> float:
        return float(self.printed(key))

    def flag(self, key: str) -> str:
        return self._records[key].get("flag", "")

    def half_unit(self, key: str) -> float:
        """Half a unit in the last printed place; 0 for exact counts."""
        if ".df_" in key or key.endswith(".n"):
            return 0.0
        return 0.5 * 10.0 ** -_decimals(self.printed(key))

    def table(self, key: str) -> str:
        return self._records[key]["table"]

    def with_value(self, key: str, printed: str) -> "Published":
        """Copy of the fixture with one printed value replaced."""
        doc = copy.deepcopy(self.doc)
        for r in doc["records"]:
            if r["key"] == key:
                r["value"] = printed
                break
        else:
            raise KeyError(key)
        return Published(doc)


@dataclass(frozen=True)
class ConsistencyCheck:
    label: str
    expected: float
    computed: float
    tolerance: float
    passed: bool
    check_class: str = ""
    tables: tuple = ()
    inputs: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "class": self.check_class,
            "tables": list(self.tables),
            "expected": self.expected,
            "computed": self.computed,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "inputs": list(self.inputs),
        }


def _safe(fn, args) -> float:
    try:
        v = float(fn(*args))
    except (ArithmeticError, ValueError, ZeroDivisionError):
        return math.nan
    return v


class _SuiteBuilder:
    def __init__(self, pub: Published):
        self.pub = pub
        self.checks: List[ConsistencyCheck] = []

    def check(
        self,
        label: str,
        klass: str,
        expected: Union[str, float],
        fn: Callable[..., float],
        inputs: Sequence[str],
        with_slack: bool = True,
        slack: Optional[float] = None,
    ):
        pub = self.pub
        if isinstance(expected, str):
            exp_value = pub.value(expected)
            exp_half = pub.half_unit(expected)
            tables = [pub.table(expected)]
        else:
            exp_value = float(expected)
            exp_half = 0.0
            tables = []
        tables += [pub.table(k) for k in inputs]
        tables = tuple(dict.fromkeys(tables))

        point = [pub.value(k) for k in inputs]
        computed = _safe(fn, point)
        if slack is not None:
            with_slack = False
        else:
            slack = 0.0
        if with_slack and not math.isnan(computed):
            halves = [pub.half_unit(k) for k in inputs]
            for signs in itertools.product((-1.0, 1.0), repeat=len(inputs)):
                corner = [v + s * h for v, s, h in zip(point, signs, halves)]
                c = _safe(fn, corner)
                if not math.isnan(c):
                    slack = max(slack, abs(c - computed))
        base = CLASS_TOLERANCE[klass]
        if klass in RELATIVE_CLASSES:
            base *= abs(exp_value)
        if klass != "display":
            base = max(base, exp_half)
        tol = base + slack
        passed = (not math.isnan(computed)) and abs(exp_value - computed) <= tol
        self.checks.append(
            ConsistencyCheck(
                label, exp_value, computed, tol, passed, klass, tables,
                tuple([expected] if isinstance(expected, str) else []) + tuple(inputs),
            )
        )


def _sd(ss: float, n: float) -> float:
    return math.sqrt(ss / (n - 1))


def _beta_from_correlations(r_xx: np.ndarray, r_xy: np.ndarray) -> np.ndarray:
    return np.linalg.solve(r_xx, r_xy)


def _pair_key(pub: Published, prefix: str, a: str, b: str) -> str:
    """Key of the (a, b) cell; when both orientations are printed, the one
    carrying more decimals."""
    keys = [k for k in (f"{prefix}.{a}.{b}", f"{prefix}.{b}.{a}") if k in pub]
    if not keys:
        raise KeyError(f"{prefix}.{a}.{b}")
    return max(keys, key=lambda k: _decimals(pub.printed(k)))


def _r_from_sscp(sxy, sxx, syy):
    return sxy / math.sqrt(sxx * syy)


def paper_consistency_suite(pub: Optional[Published] = None) -> List[ConsistencyCheck]:
    """Evaluate every identity derivable from the published statistics."""
    pub = pub or Published.load()
    b = _SuiteBuilder(pub)
    N = "t1_1.n"

    # correlation matrix of the three indices
    idx = ["NYSE", "DJ", "SP500"]
    for x, y in itertools.combinations(idx, 2):
        sxy = _pair_key(pub, "t1_1.sscp", x, y)
        b.check(
            f"r({x},{y}) from sums of squares and cross-products", "correlation",
            f"t1_1.r.{x}.{y}", _r_from_sscp,
            [sxy, f"t1_1.sscp.{x}.{x}", f"t1_1.sscp.{y}.{y}"],
        )
    for x, y in itertools.combinations_with_replacement(idx, 2):
        cov = _pair_key(pub, "t1_1.cov", x, y)
        sxy = _pair_key(pub, "t1_1.sscp", x, y)
        b.check(
            f"cov({x},{y}) = SSCP/(N-1)", "covariance", cov,
            lambda s, n: s / (n - 1), [sxy, N],
        )
    for x, y in [("NYSE", "DJ"), ("DJ", "SP500")]:
        b.check(
            f"SSCP({x},{y}) printed symmetrically", "exact",
            f"t1_1.sscp.{x}.{y}", lambda s: s, [f"t1_1.sscp.{y}.{x}"],
        )
    b.check("N agrees across tables", "exact", N, lambda n: n, ["appendix.n"])

    # the same correlation printed in several tables
    for x, y in itertools.combinations(idx, 2):
        b.check(
            f"r({x},{y}) agrees between tables", "correlation",
            f"t1_1.r.{x}.{y}", lambda r: r, [_pair_key(pub, "appendix.r", x, y)],
        )
    b.check("r(DJ,CPIU) agrees between tables", "correlation",
            "t2_1.r.DJ.CPIU", lambda r: r, ["appendix.r.DJ.CPIU"])
    b.check("r(CPIU,SP500) agrees between tables", "correlation",
            "t2_2.r.CPIU.SP500", lambda r: r, ["appendix.r.SP500.CPIU"])

    # significance of every printed correlation
    r_keys = [k for k in pub.keys if ".r." in k and k.split(".")[0] in ("t1_1", "t2_1", "t2_2", "appendix")]
    for rk in r_keys:
        sk = rk.replace(".r.", ".sig.")
        pair = ",".join(rk.split(".")[2:])
        b.check(f"Sig.({pair}) from r [{pub.table(rk)}]", "p-value", sk,
                lambda r, n: correlation_p(r, int(round(n))), [rk, N])
        expected_flag = 1.0 if pub.flag(rk) == "**" else 0.0
        b.check(f"** flag on r({pair}) [{pub.table(rk)}]", "exact", expected_flag,
                lambda r, n: 1.0 if correlation_p(r, int(round(n))) < 0.01 else 0.0, [rk, N])

    # a printed correlation matrix must be positive semidefinite; rounding
    # each entry by h moves any eigenvalue by at most (k-1)*h (Weyl)
    app = pub.variables
    app_keys = [_pair_key(pub, "appendix.r", x, y) for x, y in itertools.combinations(app, 2)]

    def min_eigenvalue(*vals, _k=len(app)):
        m = np.eye(_k)
        for (i, j), v in zip(itertools.combinations(range(_k), 2), vals):
            m[i, j] = m[j, i] = v
        return min(0.0, float(np.linalg.eigvalsh(m)[0]))

    b.check(
        "Appendix correlation matrix is positive semidefinite", "exact", 0.0,
        min_eigenvalue, app_keys,
        slack=(len(app) - 1) * max(pub.half_unit(k) for k in app_keys),
    )

    # regression models
    sd_inputs = {
        "SP500": "t1_1.sscp.SP500.SP500",
        "CPIU": "m2.anova.ss_total",
        "TB3": "m3.anova.ss_total",
        "GPDI": "m4.anova.ss_total",
    }
    for prefix, spec in pub.models.items():
        p = len(spec["predictors"])
        dep = spec["dependent"]
        a = f"{prefix}.anova"
        s = f"{prefix}.summary"
        b.check(f"{dep}: df regression = p", "exact", f"{a}.df_regression", lambda: p, [])
        b.check(f"{dep}: df residual = N-p-1", "exact", f"{a}.df_residual", lambda n: n - p - 1, [N])
        b.check(f"{dep}: df total = N-1", "exact", f"{a}.df_total", lambda n: n - 1, [N])
        b.check(f"{dep}: SS regression + SS residual = SS total", "anova", f"{a}.ss_total",
                lambda r, e: r + e, [f"{a}.ss_regression", f"{a}.ss_residual"])
        for part in ("regression", "residual"):
            b.check(f"{dep}: MS {part} = SS/df", "anova", f"{a}.ms_{part}",
                    lambda ss, df: ss / df, [f"{a}.ss_{part}", f"{a}.df_{part}"])
        b.check(f"{dep}: F = MS regression / MS residual", "f-t", f"{a}.f",
                lambda r, e: r / e, [f"{a}.ms_regression", f"{a}.ms_residual"])
        b.check(f"{dep}: Sig. of F", "p-value", f"{a}.sig",
                lambda f, d1, d2: f_sf(f, d1, d2), [f"{a}.f", f"{a}.df_regression", f"{a}.df_residual"])
        b.check(f"{dep}: R Square = SS regression / SS total", "model-summary", f"{s}.r_square",
                lambda r, t: r / t, [f"{a}.ss_regression", f"{a}.ss_total"])
        b.check(f"{dep}: R = sqrt(R Square)", "model-summary", f"{s}.r",
                math.sqrt, [f"{s}.r_square"])
        b.check(f"{dep}: adjusted R Square from (R Square, N, p)", "model-summary",
                f"{s}.adj_r_square", lambda r2, n: 1 - (1 - r2) * (n - 1) / (n - p - 1),
                [f"{s}.r_square", N])
        b.check(f"{dep}: Std. Error of the Estimate = sqrt(MS residual)", "see",
                f"{s}.see", math.sqrt, [f"{a}.ms_residual"])

        for name in ["CONST", *spec["predictors"]]:
            c = f"{prefix}.coef.{name}"
            b.check(f"{dep}: t({name}) = B/SE", "f-t", f"{c}.t", lambda bb, se: bb / se, [f"{c}.b", f"{c}.se"])
            b.check(f"{dep}: Sig.({name}) from t", "p-value", f"{c}.sig",
                    lambda t, df: t_two_tailed(t, df), [f"{c}.t", f"{a}.df_residual"])
            if name == "CONST":
                continue
            b.check(
                f"{dep}: Beta({name}) = B * sd({name}) / sd({dep})", "beta", f"{c}.beta",
                lambda bb, ssx, ssy, n: bb * _sd(ssx, n) / _sd(ssy, n),
                [f"{c}.b", sd_inputs[name], sd_inputs[dep], N],
            )

        # standardized coefficients and R Square from the correlation matrix
        preds = spec["predictors"]
        rxx_keys = [[None if i == j else _pair_key(pub, "appendix.r", preds[i], preds[j])
                     for j in range(p)] for i in range(p)]
        rxy_keys = [_pair_key(pub, "appendix.r", dep, x) for x in preds]
        flat = [k for row in rxx_keys for k in row if k is not None]
        inputs = list(dict.fromkeys(flat)) + rxy_keys

        def solve(*vals, _rxx=rxx_keys, _rxy=rxy_keys, _inputs=tuple(inputs), _p=p):
            lookup = dict(zip(_inputs, vals))
            m = np.array([[1.0 if k is None else lookup[k] for k in row] for row in _rxx])
            v = np.array([lookup[k] for k in _rxy])
            return _beta_from_correlations(m, v), v

        for j, name in enumerate(preds):
            b.check(f"{dep}: Beta({name}) from the correlation matrix", "beta",
                    f"{prefix}.coef.{name}.beta",
                    lambda *vals, _j=j: solve(*vals)[0][_j], inputs)
        b.check(f"{dep}: R Square from the correlation matrix", "model-summary",
                f"{s}.r_square", lambda *vals: float(np.dot(*solve(*vals))), inputs)

    # simple regression bridges
    b.check("CPIU: F = t^2 (one predictor)", "f-t", "m2.anova.f", lambda t: t * t, ["m2.coef.SP500.t"])
    b.check("CPIU: Beta(SP500) = r(CPIU,SP500) at display precision", "display",
            "m2.coef.SP500.beta", lambda r: r, ["t2_2.r.CPIU.SP500"], with_slack=False)
    b.check("CPIU: R = |r(CPIU,SP500)| at display precision", "display",
            "m2.summary.r", abs, ["t2_2.r.CPIU.SP500"], with_slack=False)
    return b.checks


def suite_passed(checks: Sequence[ConsistencyCheck]) -> bool:
    return all(c.passed for c in checks)


def render_suite_text(checks: Sequence[ConsistencyCheck]) -> str:
    lines = []
    width = max(len(c.label) for c in checks)
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        lines.append(
            f"{mark}  {c.label:<{width}}  expected {c.expected:>16.6g}  "
            f"computed {c.computed:>16.6g}  tol {c.tolerance:.3g}"
        )
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"


def render_suite_json(checks: Sequence[ConsistencyCheck]) -> str:
    return json.dumps(
        {"passed": suite_passed(checks), "checks": [c.to_dict() for c in checks]}, indent=2
    )
