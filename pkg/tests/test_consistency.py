import copy
import json

import pytest

from econreg.consistency import (
    CLASS_TOLERANCE,
    Published,
    paper_consistency_suite,
    render_suite_json,
    render_suite_text,
    suite_passed,
)


def perturbed(pub, key, factor):
    """Copy of ``pub`` with one record scaled, printed at its original decimals."""
    printed = pub.printed(key)
    decimals = len(printed.split(".")[1]) if "." in printed else 0
    value = pub.value(key)
    delta = max(abs(value) * abs(factor), 0.05) * (1 if factor > 0 else -1)
    return pub.with_value(key, f"{value + delta:.{decimals}f}")


@pytest.fixture(scope="module")
def checks(published):
    return paper_consistency_suite(published)


def test_shipped_fixture_passes(checks):
    failed = [c.label for c in checks if not c.passed]
    assert failed == []
    assert suite_passed(checks)


def test_check_semantics(checks):
    for c in checks:
        assert c.passed == (abs(c.expected - c.computed) <= c.tolerance)
        assert c.check_class in CLASS_TOLERANCE
        assert c.tolerance >= 0


def test_display_checks_are_exact(checks):
    display = [c for c in checks if c.check_class == "display"]
    assert display and all(c.tolerance == 0 for c in display)


def test_covers_every_table(checks, published):
    tables = {t for c in checks for t in c.tables}
    assert {published.table(k) for k in published.keys} <= tables


@pytest.mark.parametrize(
    "label_part, expected",
    [
        ("r(NYSE,SP500) from sums of squares", 0.996),
        ("TB3: adjusted R Square", 0.170),
        ("GPDI: Beta(CPIU) = B * sd(CPIU) / sd(GPDI)", 0.621),
    ],
)
def test_worked_examples(checks, label_part, expected):
    match = [c for c in checks if label_part in c.label]
    assert match, label_part
    assert match[0].expected == expected and match[0].passed


def test_fixture_records(published):
    assert published.variables == ["GPDI", "NYSE", "DJ", "SP500", "CPIU", "TB3"]
    assert published.value("m4.anova.f") == 1583.148
    assert published.flag("appendix.r.GPDI.TB3") == ""
    assert published.flag("appendix.r.GPDI.CPIU") == "**"
    assert published.half_unit("m2.summary.see") == pytest.approx(0.00005)
    assert published.half_unit("m2.anova.df_total") == 0
    assert published.models["m4"]["dependent_label"].endswith("(GPGDI)")
    with pytest.raises(KeyError):
        published.with_value("no.such.key", "1")


def test_every_record_has_a_table(published):
    for key in published.keys:
        assert published.table(key)


def test_perturbations_flip_suite(published):
    keys = [k for k in published.keys if not k.endswith(".n")][::10]
    for i, key in enumerate(keys):
        bad = perturbed(published, key, 0.5 if i % 2 else -0.5)
        assert not suite_passed(paper_consistency_suite(bad)), key


def test_flag_change_flips_suite(published):
    doc = copy.deepcopy(published.doc)
    for rec in doc["records"]:
        if rec["key"] == "appendix.r.GPDI.TB3":
            rec["flag"] = "**"
    assert not suite_passed(paper_consistency_suite(Published(doc)))


def test_load_from_path(tmp_path, published):
    p = tmp_path / "fixture.json"
    p.write_text(json.dumps(published.doc))
    assert suite_passed(paper_consistency_suite(Published.load(p)))


def test_renderings(checks):
    text = render_suite_text(checks)
    assert len([ln for ln in text.splitlines() if ln.startswith(("PASS", "FAIL"))]) == len(checks)
    doc = json.loads(render_suite_json(checks))
    assert doc["passed"] is True
    assert len(doc["checks"]) == len(checks)
    assert set(doc["checks"][0]) >= {"label", "expected", "computed", "tolerance", "passed"}
