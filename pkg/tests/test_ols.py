import json
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from econreg.dataset import Dataset, Series
from econreg.descriptive import pearson
from econreg.errors import (
    ConstantPredictor,
    DatasetMismatch,
    MissingPredictor,
    RankDeficient,
    TooFewObservations,
    UnknownVariable,
)
from econreg.ols import (
    CONSTANT,
    IllConditionedWarning,
    RegressionModel,
    equation_string,
    fit,
    predict,
    residuals,
)
from econreg.workflow import published_model


def make_ds(columns, years=None):
    n = len(next(iter(columns.values())))
    years = years or list(range(1, n + 1))
    return Dataset(tuple(Series(k, years, v) for k, v in columns.items()))


def random_instance(rng, n, p):
    X = rng.normal(size=(n, p)) * rng.uniform(0.1, 100, size=p) + rng.uniform(-50, 50, size=p)
    y = X @ rng.normal(size=p) + rng.normal(size=n) * rng.uniform(0.1, 10) + rng.uniform(-20, 20)
    cols = {f"x{j}": X[:, j] for j in range(p)}
    cols["y"] = y
    return make_ds(cols), [f"x{j}" for j in range(p)]


def normal_equations_oracle(ds, dep, preds, dps=40):
    """Intercept-first coefficients from X'X b = X'y in extended precision."""
    with mpmath.workdps(dps):
        n = ds.n
        rows = [[mpmath.mpf(1)] + [mpmath.mpf(ds.column(p).values[i]) for p in preds] for i in range(n)]
        y = [mpmath.mpf(v) for v in ds.column(dep).values]
        X = mpmath.matrix(rows)
        XtX = X.T * X
        Xty = X.T * mpmath.matrix(y)
        b = mpmath.lu_solve(XtX, Xty)
        return [float(v) for v in b]


def test_perfect_fit():
    x = [1.0, 4.0, 2.0, 8.0, 5.0]
    m = fit(make_ds({"x": x, "y": x}), "y", ["x"])
    assert m.slopes[0].b == pytest.approx(1.0, abs=1e-12)
    assert m.constant.b == pytest.approx(0.0, abs=1e-12)
    assert m.summary.r_square == 1.0
    assert m.anova.ss_residual == pytest.approx(0.0, abs=1e-20)
    assert np.allclose(residuals(m, make_ds({"x": x, "y": x})).array, 0.0, atol=1e-12)


def test_symmetric_x_forces_zero_slope():
    m = fit(make_ds({"x": [0.0, 1.0, 2.0], "y": [0.0, 1.0, 0.0]}), "y", ["x"])
    assert m.slopes[0].b == pytest.approx(0.0, abs=1e-15)
    assert m.constant.b == pytest.approx(1 / 3, abs=1e-15)


def test_small_random_against_oracle():
    rng = np.random.default_rng(6)
    ds, preds = random_instance(rng, 6, 2)
    m = fit(ds, "y", preds)
    oracle = normal_equations_oracle(ds, "y", preds)
    got = [c.b for c in m.coefficients]
    assert np.allclose(got, oracle, rtol=1e-8, atol=0)


def test_oracle_equivalence_random_instances():
    rng = np.random.default_rng(12345)
    for _ in range(60):
        p = int(rng.integers(1, 5))
        n = int(rng.integers(p + 2, 13))
        ds, preds = random_instance(rng, n, p)
        m = fit(ds, "y", preds)
        oracle = np.array(normal_equations_oracle(ds, "y", preds))
        got = np.array([c.b for c in m.coefficients])
        floor = 1e-8 * np.abs(oracle).max()
        assert np.all(np.abs(got - oracle) <= 1e-8 * np.abs(oracle) + floor)
        a = m.anova
        assert a.ss_regression + a.ss_residual == pytest.approx(a.ss_total, rel=1e-9)
        e = residuals(m, ds).array
        scale = np.abs(ds.matrix(preds)).max() * np.abs(ds.column("y").array).max() * n
        assert abs(e.sum()) <= 1e-8 * scale
        for name in preds:
            assert abs(ds.column(name).array @ e) <= 1e-8 * scale


def test_statistics_are_consistent():
    rng = np.random.default_rng(3)
    ds, preds = random_instance(rng, 30, 3)
    m = fit(ds, "y", preds)
    a, s = m.anova, m.summary
    assert (a.df_regression, a.df_residual, a.df_total) == (3, 26, 29)
    assert a.f == pytest.approx(a.ms_regression / a.ms_residual, rel=1e-12)
    assert s.std_error_estimate ** 2 == pytest.approx(a.ms_residual, rel=1e-12)
    assert s.adj_r_square == pytest.approx(1 - (1 - s.r_square) * 29 / 26, rel=1e-12)
    assert s.r == pytest.approx(np.sqrt(s.r_square), rel=1e-15)
    sd_y = ds.column("y").array.std(ddof=1)
    for c in m.slopes:
        assert c.t == pytest.approx(c.b / c.std_error, rel=1e-12)
        assert c.beta == pytest.approx(c.b * ds.column(c.name).array.std(ddof=1) / sd_y, rel=1e-10)
    assert m.constant.beta is None and m.constant.name == CONSTANT
    e = residuals(m, ds)
    assert float(np.sum(e.array ** 2)) == pytest.approx(a.ss_residual, rel=1e-10)


def test_negative_slope_reports_positive_r():
    m = fit(make_ds({"x": [1.0, 2.0, 3.0, 4.0, 5.0], "y": [5.0, 3.0, 4.0, 1.0, 0.5]}), "y", ["x"])
    assert m.slopes[0].b < 0 and m.summary.r > 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(8, 40))
def test_simple_regression_bridges(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n) * 10
    y = 0.5 * x + rng.normal(size=n) * rng.uniform(0.5, 20)
    ds = make_ds({"x": x, "y": y})
    m = fit(ds, "y", ["x"])
    r = pearson(x, y).r
    assert abs(m.slopes[0].beta) == pytest.approx(abs(r), rel=1e-9)
    assert m.anova.f == pytest.approx(m.slopes[0].t ** 2, rel=1e-9)
    assert m.summary.r_square == pytest.approx(r * r, rel=1e-9)


@pytest.mark.filterwarnings("ignore::econreg.ols.IllConditionedWarning")
@settings(max_examples=25, deadline=None)
@given(
    st.integers(0, 2**32 - 1),
    st.floats(0.001, 1000),
    st.booleans(),
    st.floats(-1e4, 1e4),
)
def test_affine_invariance(seed, a, negate, shift):
    a = -a if negate else a
    rng = np.random.default_rng(seed)
    ds, preds = random_instance(rng, 20, 2)
    base = fit(ds, "y", preds)
    moved = ds.select(["x1", "y"]).with_series(Series("x0", ds.years, a * ds.column("x0").array + shift))
    m = fit(moved, "y", preds)
    assert m.summary.r_square == pytest.approx(base.summary.r_square, rel=1e-9)
    assert m.anova.f == pytest.approx(base.anova.f, rel=1e-9)
    b0, b1 = base.coefficient("x0"), m.coefficient("x0")
    # a negative scale flips the sign of the rescaled slope's t and Beta only
    sign = 1 if a > 0 else -1
    assert b1.t == pytest.approx(sign * b0.t, rel=1e-9)
    assert b1.beta == pytest.approx(sign * b0.beta, rel=1e-9)
    c0, c1 = base.coefficient("x1"), m.coefficient("x1")
    assert c1.t == pytest.approx(c0.t, rel=1e-9)
    assert c1.beta == pytest.approx(c0.beta, rel=1e-9)
    assert b1.b == pytest.approx(b0.b / a, rel=1e-9)
    assert b1.std_error == pytest.approx(b0.std_error / abs(a), rel=1e-9)
    yhat0 = ds.column("y").array - residuals(base, ds).array
    yhat1 = moved.column("y").array - residuals(m, moved).array
    assert np.allclose(yhat0, yhat1, rtol=1e-9, atol=1e-9 * np.abs(yhat0).max())


def test_rank_deficient_names_columns():
    x = np.arange(10.0)
    z = np.sin(x)
    ds = make_ds({"x": x, "z": z, "w": 2 * x - 3 * z + 1, "y": x + z ** 2})
    with pytest.raises(RankDeficient) as info:
        fit(ds, "y", ["x", "z", "w"])
    assert set(info.value.columns) == {"x", "z", "w"}


def test_fit_errors():
    ds = make_ds({"x": [1.0, 2.0, 3.0], "k": [2.0, 2.0, 2.0], "y": [1.0, 0.0, 2.0]})
    with pytest.raises(ConstantPredictor):
        fit(ds, "y", ["k"])
    with pytest.raises(TooFewObservations):
        fit(ds, "y", ["x", "k"])
    with pytest.raises(UnknownVariable):
        fit(ds, "y", ["nope"])
    with pytest.raises(ValueError):
        fit(ds, "y", ["y"])


def test_condition_warning():
    rng = np.random.default_rng(0)
    x = rng.normal(size=30)
    ds = make_ds({"x": x, "x2": x + 1e-6 * rng.normal(size=30), "y": x + rng.normal(size=30)})
    with pytest.warns(IllConditionedWarning):
        fit(ds, "y", ["x", "x2"])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        fit(ds, "y", ["x"])


def test_predict_published_equations(published):
    m4 = published_model(published, "m4")
    assert predict(m4, {"SP500": 100, "CPIU": 50, "TB3": 5}) == pytest.approx(246.855, abs=1e-9)
    assert predict(m4, {"SP500": 0, "CPIU": 0, "TB3": 0}) == m4.constant.b
    m2 = published_model(published, "m2")
    assert predict(m2, {"SP500": 0}) == pytest.approx(52.892, abs=1e-12)
    assert predict(m2, {"SP500": 100}) == pytest.approx(64.392, abs=1e-9)
    with pytest.raises(MissingPredictor):
        predict(m4, {"SP500": 1})


def test_published_see_from_residual_ms(published):
    # Sum of squared residuals / 41 is the residual mean square of the CPI-U model
    m2 = published_model(published, "m2")
    assert m2.anova.ss_residual / 41 == pytest.approx(860.713, abs=5e-4)
    assert np.sqrt(m2.anova.ms_residual) == pytest.approx(29.3379, rel=5e-4)


def test_equation_strings(published):
    labels = {"CPIU": "CPI-U"}
    eq4 = equation_string(published_model(published, "m4"), labels=labels)
    assert eq4 == (
        "GPDI = -162.815 + .574 * SP500 + 6.031 * CPI-U + 10.144 * TB3\n"
        "(.039) (.272) (3.156)"
    )
    eq3 = equation_string(published_model(published, "m3"), labels=labels)
    assert eq3.splitlines()[0] == "TB3 = 4.278 - .005 * SP500 + .037 * CPI-U"


def test_zero_slope_rendering():
    m = fit(make_ds({"x": [0.0, 1.0, 2.0], "y": [0.0, 1.0, 0.0]}), "y", ["x"])
    assert "+ .000 * x" in equation_string(m)


def test_residuals_dataset_mismatch():
    ds = make_ds({"x": [1.0, 2.0, 3.0, 4.0], "y": [1.0, 3.0, 2.0, 5.0]})
    m = fit(ds, "y", ["x"])
    with pytest.raises(DatasetMismatch):
        residuals(m, make_ds({"x": [1.0, 2.0, 3.0], "y": [1.0, 3.0, 2.0]}))
    with pytest.raises(DatasetMismatch):
        residuals(m, make_ds({"q": [1.0, 2.0, 3.0, 4.0]}))


def test_json_round_trip():
    rng = np.random.default_rng(1)
    ds, preds = random_instance(rng, 15, 2)
    m = fit(ds, "y", preds)
    back = RegressionModel.from_dict(json.loads(json.dumps(m.to_dict())))
    assert back == m
    assert set(m.to_dict()) >= {"dependent", "predictors", "n", "coefficients", "summary", "anova"}


def test_deterministic():
    rng = np.random.default_rng(9)
    ds, preds = random_instance(rng, 12, 3)
    assert fit(ds, "y", preds) == fit(ds, "y", preds)
