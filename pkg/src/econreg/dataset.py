"""Loading and aligning named annual time series.

A :class:`Series` is one year-indexed variable; a :class:`Dataset` is an
ordered collection of series sharing one year vector. Both are immutable.
Missing observations are removed by listwise deletion at load time.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DuplicateName,
    EmptyAfterDeletion,
    EmptyIntersection,
    InvalidSeries,
    MalformedHeader,
    NonNumericCell,
    UnknownVariable,
    UnreadableFile,
)

logger = logging.getLogger(__name__)

YEAR_COLUMN = "YEAR"


@dataclass(frozen=True)
class Series:
    """A named, year-indexed numeric variable."""

    name: str
    years: tuple
    values: tuple

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        values = tuple(float(v) for v in self.values)
        if not self.name:
            raise InvalidSeries("series name must be non-empty")
        if len(years) != len(values):
            raise InvalidSeries(
                f"{self.name}: {len(years)} years but {len(values)} values"
            )
        if not years:
            raise InvalidSeries(f"{self.name}: series is empty")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise InvalidSeries(f"{self.name}: years must be strictly increasing")
        if not all(math.isfinite(v) for v in values):
            raise InvalidSeries(f"{self.name}: values must be finite")
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def renamed(self, name: str) -> "Series":
        return Series(name, self.years, self.values)


@dataclass(frozen=True)
class Dataset:
    """Series over a common year range, one row per year.

    ``dropped_rows`` lists the 1-based data-row numbers removed by listwise
    deletion when the dataset came from :func:`load_csv`.
    """

    variables: tuple
    dropped_rows: tuple = field(default=(), compare=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        if not variables:
            raise InvalidSeries("dataset needs at least one variable")
        names = [s.name for s in variables]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise DuplicateName(f"duplicate variable names: {', '.join(dupes)}")
        years = variables[0].years
        for s in variables[1:]:
            if s.years != years:
                raise InvalidSeries(
                    f"{s.name}: year vector differs from {variables[0].name}; use align()"
                )
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "dropped_rows", tuple(self.dropped_rows))

    @property
    def n(self) -> int:
        return len(self.variables[0])

    @property
    def years(self) -> tuple:
        return self.variables[0].years

    @property
    def names(self) -> tuple:
        return tuple(s.name for s in self.variables)

    def __contains__(self, name):
        return name in self.names

    def column(self, name: str) -> Series:
        for s in self.variables:
            if s.name == name:
                return s
        raise UnknownVariable(name, self.names)

    def matrix(self, names: Sequence[str]) -> np.ndarray:
        """Return an ``n x len(names)`` float array of the named columns."""
        return np.column_stack([self.column(nm).array for nm in names])

    def select(self, names: Sequence[str]) -> "Dataset":
        return Dataset(tuple(self.column(nm) for nm in names))

    def with_series(self, series: Series) -> "Dataset":
        return Dataset(self.variables + (series,))


def column(ds: Dataset, name: str) -> Series:
    """Return the series called ``name`` (exact, case-sensitive match)."""
    return ds.column(name)


def align(series_list: Iterable[Series]) -> Dataset:
    """Restrict every series to the years present in all of them.

    Variable order is preserved.
    """
    series_list = list(series_list)
    if not series_list:
        raise EmptyIntersection("no series to align")
    names = [s.name for s in series_list]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise DuplicateName(f"duplicate variable names: {', '.join(dupes)}")
    common = set(series_list[0].years)
    for s in series_list[1:]:
        common &= set(s.years)
    if not common:
        raise EmptyIntersection(
            "series share no common years: " + ", ".join(names)
        )
    aligned = []
    for s in series_list:
        keep = [(y, v) for y, v in zip(s.years, s.values) if y in common]
        aligned.append(Series(s.name, [y for y, _ in keep], [v for _, v in keep]))
    return Dataset(tuple(aligned))


def parse_number(text: str, thousands: Optional[str] = ",") -> float:
    """Parse a decimal cell, stripping thousands separators.

    Raises ValueError for anything that is not a finite number.
    """
    s = text.strip()
    if thousands:
        s = s.replace(thousands, "")
    value = float(s)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value


def _parse_year(text: str) -> int:
    s = text.strip()
    value = float(s)
    if not value.is_integer():
        raise ValueError(f"year {text!r} is not an integer")
    return int(value)


def load_csv(
    path: Union[str, Path],
    *,
    thousands: Optional[str] = ",",
    encoding: str = "utf-8-sig",
) -> Dataset:
    """Read a ``YEAR,<var>,<var>...`` CSV file into a :class:`Dataset`.

    Empty cells mark missing values. Any row with a missing cell is dropped
    (listwise deletion); the 1-based data-row numbers of dropped rows are
    kept on ``Dataset.dropped_rows``.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding=encoding) as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise UnreadableFile(f"{path}: {exc}") from exc

    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise MalformedHeader(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if not header or header[0].upper() != YEAR_COLUMN:
        raise MalformedHeader(f"{path}: first column header must be YEAR, got {header[:1]}")
    names = header[1:]
    if not names or any(not nm for nm in names):
        raise MalformedHeader(f"{path}: every data column needs a name")
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise MalformedHeader(f"{path}: duplicate column names: {', '.join(dupes)}")

    years = []
    columns = [[] for _ in names]
    dropped = []
    for rowno, raw in enumerate(rows[1:], start=1):
        if len(raw) > len(header):
            raise MalformedHeader(
                f"{path}: data row {rowno} has {len(raw)} cells, header has {len(header)}"
            )
        cells = list(raw) + [""] * (len(header) - len(raw))
        if any(not c.strip() for c in cells):
            dropped.append(rowno)
            continue
        try:
            year = _parse_year(cells[0])
        except ValueError:
            raise NonNumericCell(rowno, header[0], cells[0]) from None
        parsed = []
        for name, cell in zip(names, cells[1:]):
            try:
                parsed.append(parse_number(cell, thousands))
            except ValueError:
                raise NonNumericCell(rowno, name, cell) from None
        years.append(year)
        for col, v in zip(columns, parsed):
            col.append(v)

    if not years:
        raise EmptyAfterDeletion(
            f"{path}: no complete rows remain after listwise deletion"
        )
    if dropped:
        logger.info("%s: dropped %d incomplete row(s): %s", path, len(dropped), dropped)
    try:
        series = tuple(Series(nm, years, col) for nm, col in zip(names, columns))
    except InvalidSeries as exc:
        raise InvalidSeries(f"{path}: {exc}") from None
    return Dataset(series, dropped_rows=tuple(dropped))


def write_csv(ds: Dataset, path: Union[str, Path]) -> None:
    """Write ``ds`` in the format :func:`load_csv` reads."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([YEAR_COLUMN, *ds.names])
        for i, year in enumerate(ds.years):
            w.writerow([year, *(repr(s.values[i]) for s in ds.variables)])
