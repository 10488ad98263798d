import numpy as np
import pytest

from econreg.consistency import Published
from econreg.dataset import Dataset, Series, write_csv

ROLES = ("GPDI", "NYSE", "DJ", "SP500", "CPIU", "TB3")
# sums of squares recoverable from the published ANOVA and SSCP tables
TOTAL_SS = {
    "GPDI": 10160733.0,
    "NYSE": 1269247.942,
    "DJ": 343161317.0,
    "SP500": 5449048.019,
    "CPIU": 107615.3,
    "TB3": 269.459,
}
MEANS = {"GPDI": 600.0, "NYSE": 300.0, "DJ": 3000.0, "SP500": 400.0, "CPIU": 100.0, "TB3": 6.0}


def appendix_correlations(pub=None):
    pub = pub or Published.load()
    k = len(ROLES)
    r = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            r[i, j] = r[j, i] = pub.value(f"appendix.r.{ROLES[i]}.{ROLES[j]}")
    return r


def make_dataset(target_r, names=ROLES, n=43, seed=0, first_year=1959):
    """Dataset whose sample correlation matrix equals ``target_r`` exactly.

    Random draws are centred, whitened against their own sample covariance
    and recoloured with the Cholesky factor of the target.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, len(names)))
    z -= z.mean(axis=0)
    w = np.linalg.cholesky(z.T @ z / (n - 1))
    white = np.linalg.solve(w, z.T).T
    coloured = white @ np.linalg.cholesky(target_r).T
    years = list(range(first_year, first_year + n))
    cols = []
    for k, name in enumerate(names):
        sd = np.sqrt(TOTAL_SS.get(name, n - 1) / (n - 1))
        values = MEANS.get(name, 0.0) + sd * coloured[:, k]
        cols.append(Series(name, years, values))
    return Dataset(tuple(cols))


@pytest.fixture(scope="session")
def published():
    return Published.load()


@pytest.fixture(scope="session")
def appendix_dataset(published):
    return make_dataset(appendix_correlations(published))


@pytest.fixture()
def appendix_csv(tmp_path, appendix_dataset):
    path = tmp_path / "series.csv"
    write_csv(appendix_dataset, path)
    return path


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
