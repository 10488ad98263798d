import re
import xml.etree.ElementTree as ET

import pytest

from econreg.dataset import Dataset, Series
from econreg.errors import DegenerateRange
from econreg.figures import FigureKind, FigureSpec, line_spec, nice_ticks, render_figure, scatter_spec

SVG = "{http://www.w3.org/2000/svg}"


def marks(svg):
    root = ET.fromstring(svg.encode())
    return [el for el in root.iter() if el.get("class") == "mark"]


def test_scatter_has_one_mark_per_point(appendix_dataset):
    svg = render_figure(scatter_spec(appendix_dataset, "GPDI", "SP500"))
    found = marks(svg)
    assert len(found) == 43
    assert all(el.tag == SVG + "circle" for el in found)
    root = ET.fromstring(svg.encode())
    assert root.get("version") == "1.1"
    assert "SCATTERPLOT OF GPDI AND SP500" in svg


def test_single_point_is_padded():
    svg = render_figure(FigureSpec("scatter", "x", "y", [(1, 1)], "one"))
    (circle,) = marks(svg)
    # the point sits inside the plot area rather than on a zero-width axis
    assert 80 < float(circle.get("cx")) < 640 - 24
    lo, hi, ticks = nice_ticks(1.0, 1.0)
    assert lo < 1.0 < hi and len(ticks) >= 2


def test_line_preserves_year_order(appendix_dataset):
    svg = render_figure(line_spec(appendix_dataset, "CPIU"))
    (poly,) = marks(svg)
    xs = [float(p.split(",")[0]) for p in poly.get("points").split()]
    assert len(xs) == 43
    assert all(b > a for a, b in zip(xs, xs[1:]))
    assert "CPIU 1959-2001" in svg


def test_deterministic(appendix_dataset):
    spec = scatter_spec(appendix_dataset, "NYSE", "DJ")
    assert render_figure(spec) == render_figure(spec)


def test_spec_validation():
    with pytest.raises(DegenerateRange):
        FigureSpec(FigureKind.LINE, "x", "y", [], "empty")
    with pytest.raises(ValueError):
        FigureSpec(FigureKind.SCATTER, "x", "y", [(0, float("inf"))], "bad")
    with pytest.raises(ValueError):
        FigureSpec("pie", "x", "y", [(0, 1)], "bad")


def test_constant_series_renders():
    years = [2000, 2001, 2002]
    ds = Dataset((Series("a", years, [3, 3, 3]), Series("b", years, [1, 2, 3])))
    svg = render_figure(scatter_spec(ds, "a", "b"))
    assert len(marks(svg)) == 3


@pytest.mark.parametrize("lo, hi", [(0, 1), (-3.2, 17.9), (1959, 2001), (0.001, 0.004), (-5e6, 1e7)])
def test_nice_ticks_cover_range(lo, hi):
    a, b, ticks = nice_ticks(lo, hi)
    assert a <= lo and b >= hi
    assert 2 <= len(ticks) <= 12
    assert ticks[0] == a and ticks[-1] == pytest.approx(b)


def test_tick_labels_keep_step_decimals():
    svg = render_figure(FigureSpec("scatter", "x", "y", [(0, 0), (10, 12)], "t"))
    labels = re.findall(r'text-anchor="end">([^<]+)<', svg)
    assert labels == ["0.0", "2.5", "5.0", "7.5", "10.0", "12.5"]


def test_title_is_escaped():
    svg = render_figure(FigureSpec("line", "YEAR", "A&B", [(1, 2), (2, 3)], "A & B <x>"))
    ET.fromstring(svg.encode())
    assert "A &amp; B &lt;x&gt;" in svg
