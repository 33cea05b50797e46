import json

import pytest

from ovalis import catalog as C
from ovalis.obstructions import dp2_harnack
from ovalis.scheme import parse, parse_refined


def st(text, k=4, d=3, surface="DP2"):
    return C.status(parse(text, surface, k=k), surface, k, d)


def test_status_examples():
    e = st("2:2:2:2")
    assert e.status == "RealizedSymmetric" and "circ" in e.labels
    assert st("2+<1>+<1>+<1>:0:0:0").status == "SymplecticOnly"
    e = st("<1>+<1>+<1>+<1>:0:0:0")
    assert e.status == "Prohibited" and e.verdict.witness is not None


def test_status_uses_canonical_codes():
    assert st("<2>:1:0:0").to_json() == st("3:1:0:0").to_json()
    assert st("1+<6>:0:0:0").status == st("<1>+6:0:0:0").status


def test_realized_status_and_labels():
    e = st("8:0:0:0")
    assert e.status in ("Realized", "RealizedSymmetric") and e.provenance.startswith("realized3")


def test_invalid_surface_parameters():
    with pytest.raises(C.CatalogError):
        C.status(parse("1", "DP2", k=4), "DP2", 5, 3)


def test_dp1_low_class_is_realized():
    assert C.status(parse("J|0:0:0:0", "DP1", k=4), "DP1", 4, 3).status == "Realized"
    assert C.status(parse("J|0:0:0:0", "DP1", k=4), "DP1", 4, 2).status == "Prohibited"


def test_refined_status():
    e = C.status(parse_refined("0|<<1>>:0:0:0"), "DP1", 4, 2)
    assert e.status == "Realized"


# --- families ---------------------------------------------------------------------

def test_family_row_one():
    m = C.expand_family(1, dict(d=5, k1=0, k2=1, h1=1, h2=2, h3=1, h4=0))
    assert m.scheme.ovals == 11 and m.forced_nonsymmetric and m.cross_check


def test_family_extra_condition_fails():
    m = C.expand_family(1, dict(d=5, k1=0, k2=1, h1=2, h2=1, h3=1, h4=0))
    assert not m.forced_nonsymmetric
    assert m.extra["h2 != 1"] is False


def test_family_base_constraints():
    with pytest.raises(C.ConstraintError, match="d >= 5"):
        C.expand_family(1, dict(d=4, k1=0, k2=0, h1=1, h2=1, h3=1, h4=0))
    with pytest.raises(C.ConstraintError):
        C.expand_family(1, dict(d=5, k1=1, k2=1, h1=1, h2=2, h3=1, h4=0))


@pytest.mark.parametrize("d", [5, 6])
def test_family_members_respect_harnack(d):
    members = C.family_members(d)
    assert members
    for m in members:
        assert not dp2_harnack(m.scheme, d).prohibited
        if m.forced_nonsymmetric:
            assert m.scheme.ovals == 2 * d + 1


def test_family_cross_check_flags_mirrors():
    # every extra condition holds but the first sphere 1+<1>+<1> has a mirror
    flagged = [m for m in C.family_members(5) if m.forced_nonsymmetric and not m.cross_check]
    assert flagged
    assert all(not m.no_mirrors for m in flagged)


# --- audits and reports -------------------------------------------------------------

def test_validate_passes_on_shipped_data():
    lines = {line.check: line for line in C.validate()}
    assert set(lines) == {"a", "b", "c", "d", "e", "f"}
    assert all(line.passed for line in lines.values())


def test_validate_is_idempotent():
    assert [l.to_json() for l in C.validate()] == [l.to_json() for l in C.validate()]


def test_mutated_catalog_fails_audit_a():
    lines = {line.check: line for line in C.validate(C.default_catalog().without("2:2:2:2"))}
    assert not lines["a"].passed
    assert "47" in lines["a"].detail


def test_knot4_audit_reports_k4_verdicts():
    e = next(line for line in C.validate() if line.check == "e")
    assert any("<1>+<1>:<1>+<1>" in f and "Prohibited" in f for f in e.flags)


@pytest.mark.parametrize("table, rows", [("realized3", 55), ("knot4", 10), ("table1", 8), ("lastchapter", 2)])
def test_report_row_counts(table, rows):
    data = json.loads(C.report(table, "json"))
    assert len(data["rows"]) == rows
    assert C.report(table, "text") == C.report(table, "text")


def test_unknown_table():
    with pytest.raises(C.CatalogError):
        C.report("nope")
