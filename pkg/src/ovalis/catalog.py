"""Realization data, the non-symmetric family expander, audits and reports.

The tables live as text files under ``ovalis/data``; this module only knows
how to read, combine and check them.
"""

from __future__ import annotations

import ast
import csv
import functools
import io
import itertools
import json
import operator
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Literal

from .enumerate import dp1_admissible, dp2_admissible, refined_admissible
from .obstructions import Verdict, dp1_verdict, dp2_verdict
from .scheme import RefinedScheme, Scheme, SphereArrangement, has_mirror, parse, parse_refined

Status = Literal["RealizedSymmetric", "Realized", "SymplecticOnly", "AdmissibleOpen", "Prohibited"]
TABLES = ("realized3", "knot4", "table1", "lastchapter")


class CatalogError(ValueError):
    pass


class ConstraintError(CatalogError):
    """A family parameter violates a named base constraint."""

    def __init__(self, constraint: str, params: dict):
        super().__init__(f"constraint violated: {constraint} (params {params})")
        self.constraint = constraint


# --- a small, closed expression language for constraints ------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Mod: operator.mod}
_CMPOPS = {
    ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt, ast.LtE: operator.le,
    ast.Gt: operator.gt, ast.GtE: operator.ge,
    ast.In: lambda a, b: a in b, ast.NotIn: lambda a, b: a not in b,
}


def evaluate(expr: str, env: dict[str, int]):
    """Evaluate integer arithmetic, comparisons, ``and``/``or``/``not`` and tuples."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, bool)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise CatalogError(f"unknown name {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.Tuple):
            return tuple(ev(e) for e in node.elts)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
            return not ev(node.operand)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.BoolOp):
            vals = (ev(v) for v in node.values)
            return all(vals) if isinstance(node.op, ast.And) else any(vals)
        if isinstance(node, ast.Compare):
            left = ev(node.left)
            for op, comp in zip(node.ops, node.comparators):
                right = ev(comp)
                if type(op) not in _CMPOPS or not _CMPOPS[type(op)](left, right):
                    return False
                left = right
            return True
        raise CatalogError(f"unsupported expression {expr!r}")

    return ev(ast.parse(expr, mode="eval"))


def fill(template: str, env: dict[str, int]) -> str:
    return re.sub(r"\{([^}]*)\}", lambda m: str(evaluate(m.group(1), env)), template)


# --- data loading ------------------------------------------------------------

def _read_text(name: str) -> str:
    return resources.files("ovalis.data").joinpath(name).read_text(encoding="utf-8")


def _read_tsv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines)), delimiter="\t"))


def _ks(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


@dataclass(frozen=True)
class TableCell:
    scheme: str
    ks: tuple[int, ...]
    labels: frozenset[str]
    anchor: str

    def realized_at(self, k: int) -> bool:
        if k not in self.ks:
            return False
        return bool(self.labels & ({"circ", "dagger"} if k == 4 else {"circ*", "dagger*"}))

    def symmetric_at(self, k: int) -> bool:
        return k in self.ks and ("circ" if k == 4 else "circ*") in self.labels


@dataclass(frozen=True)
class FamilyRow:
    row: int
    template: str
    extra: tuple[str, ...]
    anchor: str


@dataclass(frozen=True)
class Catalog:
    """Immutable view of every shipped table."""

    realized3: tuple[TableCell, ...]
    knot4: tuple[TableCell, ...]
    symplectic: tuple[dict, ...]
    families: tuple[FamilyRow, ...]
    family_base: tuple[str, ...]
    family_tail: str
    lastchapter: dict

    @classmethod
    def load(cls) -> "Catalog":
        realized = tuple(
            TableCell(r["scheme"], _ks(r["ks"]), frozenset(r["labels"].split()), r["anchor"])
            for r in _read_tsv(_read_text("realized3.tsv"))
        )
        knot = tuple(
            TableCell(r["scheme"], _ks(r["ks"]), frozenset(), r["anchor"])
            for r in _read_tsv(_read_text("knot4.tsv"))
        )
        sympl = tuple(_read_tsv(_read_text("symplectic.tsv")))
        fam = json.loads(_read_text("families.json"))
        rows = tuple(
            FamilyRow(r["row"], r["template"], tuple(r["extra"]), r["anchor"]) for r in fam["rows"]
        )
        last = json.loads(_read_text("lastchapter.json"))
        return cls(realized, knot, sympl, rows, tuple(fam["base"]), fam["tail"], last)

    def without(self, scheme: str) -> "Catalog":
        """A copy with the realized3 cell for ``scheme`` removed (used by audits)."""
        cells = tuple(c for c in self.realized3 if c.scheme != scheme)
        return Catalog(cells, self.knot4, self.symplectic, self.families,
                       self.family_base, self.family_tail, self.lastchapter)

    # -- indexes -----------------------------------------------------------
    def realized_at(self, k: int) -> dict[str, TableCell]:
        return {parse(c.scheme, "DP2", k=k).code: c for c in self.realized3 if k in c.ks}

    def knot4_at(self, k: int) -> dict[str, TableCell]:
        return {parse(c.scheme, "DP2", k=k).code: c for c in self.knot4 if k in c.ks}

    def lastchapter_plain(self) -> dict[str, str]:
        return {s.code: anchor for s, anchor in _lastchapter(self.lastchapter, refined=False)}

    def lastchapter_refined(self) -> dict[str, str]:
        return {s.code: anchor for s, anchor in _lastchapter(self.lastchapter, refined=True)}


def _lastchapter(data: dict, refined: bool):
    key = "refined" if refined else "plain"
    for row in data["rows"]:
        names = row["params"]
        for values in itertools.product(range(4), repeat=len(names)):
            env = dict(zip(names, values))
            if not evaluate(row["constraint"], env):
                continue
            for template in row[key]:
                text = fill(template, env)
                yield (parse_refined(text) if refined else parse(text, "DP1", k=data["k"])), row["anchor"]


@functools.lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return Catalog.load()


# --- status lookup -------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    scheme: str
    code: str
    surface: str
    k: int
    d: int
    status: Status
    labels: frozenset[str] = frozenset()
    provenance: str = ""
    verdict: Verdict | None = None
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "scheme": self.scheme, "code": self.code, "surface": self.surface,
            "k": self.k, "d": self.d, "status": self.status,
            "labels": sorted(self.labels), "provenance": self.provenance,
        }
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _check_kd(surface: str, k: int, d: int) -> None:
    lo = 1 if surface == "DP2" else 0
    if not lo <= k <= 4:
        raise CatalogError(f"k={k} outside {lo}..4 for {surface}")
    if d < 1:
        raise CatalogError(f"class d={d} must be positive")


def pad(s: Scheme, k: int) -> Scheme:
    if s.k > k:
        if any(a.ovals for a in s.spheres[k:]):
            raise CatalogError(f"scheme {s} has more than k={k} non-empty spheres")
        return Scheme(s.surface, s.spheres[:k], s.rp2)
    return Scheme(s.surface, s.spheres + (SphereArrangement(),) * (k - s.k), s.rp2)


def status(scheme: Scheme | RefinedScheme, surface: str, k: int, d: int,
           catalog: Catalog | None = None) -> CatalogEntry:
    """Catalog record first, then the obstruction verdict, then AdmissibleOpen."""
    cat = catalog or default_catalog()
    _check_kd(surface, k, d)
    if isinstance(scheme, RefinedScheme):
        if k != 4 or surface != "DP1":
            raise CatalogError("refined schemes live on DP1 with k = 4")
        return _refined_status(scheme, d, cat)
    if scheme.surface != surface:
        raise CatalogError(f"scheme is a {scheme.surface} scheme, not {surface}")
    s = pad(scheme, k)
    base = dict(scheme=str(s), code=s.code, surface=surface, k=k, d=d)
    if surface == "DP2":
        return _dp2_status(s, k, d, cat, base)
    return _dp1_status(s, k, d, cat, base)


def _dp2_status(s: Scheme, k: int, d: int, cat: Catalog, base: dict) -> CatalogEntry:
    verdict = dp2_verdict(s, k, d)
    if d == 3:
        cell = cat.realized_at(k).get(s.code)
        if cell is not None:
            st = "RealizedSymmetric" if cell.symmetric_at(k) else "Realized"
            return CatalogEntry(**base, status=st, labels=cell.labels, provenance=cell.anchor,
                                verdict=verdict)
        for rec in cat.symplectic:
            if (rec["surface"], int(rec["k"]), int(rec["d"])) == ("DP2", k, d) and \
                    parse(rec["scheme"], "DP2", k=k).code == s.code:
                return CatalogEntry(**base, status="SymplecticOnly", provenance=rec["anchor"],
                                    verdict=verdict)
        cell = cat.knot4_at(k).get(s.code)
        if cell is not None:
            note = "not realizable on X^4 (padded verdict: %s)" % dp2_verdict(pad(s, 4), 4, d).status
            return CatalogEntry(**base, status="AdmissibleOpen", provenance=cell.anchor,
                                verdict=verdict, notes=(note,))
    if d >= 5 and k == 4:
        hit = family_index(d, cat).get(s.code)
        if hit is not None:
            note = "forced non-symmetric" if hit.forced_nonsymmetric else "symmetry unknown"
            return CatalogEntry(**base, status="Realized", provenance=hit.anchor, verdict=verdict,
                                notes=(note,))
    if verdict.prohibited:
        return CatalogEntry(**base, status="Prohibited", provenance=verdict.obstruction, verdict=verdict)
    if d <= 2:
        return CatalogEntry(**base, status="RealizedSymmetric", provenance="classes-1-2", verdict=verdict)
    return CatalogEntry(**base, status="AdmissibleOpen", verdict=verdict)


def _dp1_status(s: Scheme, k: int, d: int, cat: Catalog, base: dict) -> CatalogEntry:
    verdict = dp1_verdict(s, k, d)
    if verdict.prohibited:
        return CatalogEntry(**base, status="Prohibited", provenance=verdict.obstruction, verdict=verdict)
    if d == 2 and k == 4:
        anchor = cat.lastchapter_plain().get(s.code)
        if anchor is not None:
            return CatalogEntry(**base, status="Realized", provenance=anchor, verdict=verdict)
    if d <= 3:
        return CatalogEntry(**base, status="Realized", provenance="dp1-classes-1-3", verdict=verdict)
    return CatalogEntry(**base, status="AdmissibleOpen", verdict=verdict)


def _refined_status(rs: RefinedScheme, d: int, cat: Catalog) -> CatalogEntry:
    from .obstructions import refined_verdict

    verdict = refined_verdict(rs, d)
    base = dict(scheme=str(rs), code=rs.code, surface="DP1", k=4, d=d)
    if verdict.prohibited:
        return CatalogEntry(**base, status="Prohibited", provenance=verdict.obstruction, verdict=verdict)
    if d == 2:
        anchor = cat.lastchapter_refined().get(rs.code)
        if anchor is not None:
            return CatalogEntry(**base, status="Realized", provenance=anchor, verdict=verdict)
    if d <= 3:
        return CatalogEntry(**base, status="Realized", provenance="dp1-classes-1-3", verdict=verdict)
    return CatalogEntry(**base, status="AdmissibleOpen", verdict=verdict)


# --- non-symmetric families ----------------------------------------------------

PARAMS = ("d", "k1", "k2", "h1", "h2", "h3", "h4")


@dataclass(frozen=True)
class FamilyMember:
    row: int
    params: dict
    scheme: Scheme
    forced_nonsymmetric: bool
    extra: dict[str, bool] = field(default_factory=dict)
    no_mirrors: bool = False
    anchor: str = ""

    @property
    def cross_check(self) -> bool:
        """The no-mirror and 2d+1 oval argument agrees with the extra conditions."""
        count_ok = self.scheme.ovals == 2 * self.params["d"] + 1
        return (not self.forced_nonsymmetric) or (self.no_mirrors and count_ok)

    def to_json(self) -> dict:
        return {
            "row": self.row, "params": self.params, "scheme": str(self.scheme),
            "code": self.scheme.code, "ovals": self.scheme.ovals,
            "forced_nonsymmetric": self.forced_nonsymmetric, "extra": self.extra,
            "no_mirrors": self.no_mirrors, "cross_check": self.cross_check,
        }


def _row(row: int | FamilyRow, cat: Catalog) -> FamilyRow:
    if isinstance(row, FamilyRow):
        return row
    for r in cat.families:
        if r.row == row:
            return r
    raise CatalogError(f"no family row {row}; rows are 1..{len(cat.families)}")


def expand_family(row: int | FamilyRow, params: dict, catalog: Catalog | None = None) -> FamilyMember:
    cat = catalog or default_catalog()
    fr = _row(row, cat)
    missing = [p for p in PARAMS if p not in params]
    if missing:
        raise CatalogError(f"missing parameters: {', '.join(missing)}")
    env = {p: int(params[p]) for p in PARAMS}
    for p, v in env.items():
        if v < 0:
            raise ConstraintError(f"{p} >= 0", env)
    for cond in cat.family_base:
        if not evaluate(cond, env):
            raise ConstraintError(cond, env)
    s = parse(fill(fr.template + cat.family_tail, env), "DP2", k=4)
    extra = {cond: bool(evaluate(cond, env)) for cond in fr.extra}
    return FamilyMember(
        row=fr.row, params=env, scheme=s, forced_nonsymmetric=all(extra.values()), extra=extra,
        no_mirrors=not any(has_mirror(a) for a in s.spheres), anchor=fr.anchor,
    )


def family_members(d: int, catalog: Catalog | None = None) -> list[FamilyMember]:
    """Every valid parameter choice of every row for class ``d``."""
    cat = catalog or default_catalog()
    out = []
    for fr in cat.families:
        for k1 in range(d - 3):
            k2 = d - 4 - k1
            for h1, h2, h3 in itertools.product(range(d), repeat=3):
                h4 = d - 1 - h1 - h2 - h3
                if h4 < 0:
                    continue
                params = dict(d=d, k1=k1, k2=k2, h1=h1, h2=h2, h3=h3, h4=h4)
                try:
                    out.append(expand_family(fr, params, cat))
                except ConstraintError:
                    continue
    return out


@functools.lru_cache(maxsize=16)
def _family_index(d: int, cat: Catalog) -> dict[str, FamilyMember]:
    idx: dict[str, FamilyMember] = {}
    for m in family_members(d, cat):
        prev = idx.get(m.scheme.code)
        # a scheme reached by several parameter choices is non-symmetric if any forces it
        if prev is None or (m.forced_nonsymmetric and not prev.forced_nonsymmetric):
            idx[m.scheme.code] = m
    return idx


def family_index(d: int, catalog: Catalog | None = None) -> dict[str, FamilyMember]:
    return _family_index(d, catalog or default_catalog())


# --- audit ---------------------------------------------------------------------

@dataclass(frozen=True)
class AuditLine:
    check: str
    passed: bool
    detail: str
    flags: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"check": self.check, "passed": self.passed, "detail": self.detail, "flags": list(self.flags)}


EXPECTED_K4 = (48, 19)
EXPECTED_SMALL_K = {3: (49, 6), 2: (38, 6), 1: (17, 2)}


def validate(catalog: Catalog | None = None) -> list[AuditLine]:
    """Cross-check the tables against the stated counts and the obstructions."""
    cat = catalog or default_catalog()
    lines = []

    r4 = [c for c in cat.realized3 if c.realized_at(4)]
    s4 = [c for c in r4 if c.symmetric_at(4)]
    lines.append(AuditLine(
        "a", (len(r4), len(s4)) == EXPECTED_K4,
        f"k=4: {len(r4)} realized (expected 48), {len(s4)} symmetric (expected 19)"))

    ok, parts = True, []
    for k, (want_r, want_s) in EXPECTED_SMALL_K.items():
        r = sum(c.realized_at(k) for c in cat.realized3)
        sy = sum(c.symmetric_at(k) for c in cat.realized3)
        ok &= (r, sy) == (want_r, want_s)
        parts.append(f"k={k}: {r}/{sy} (expected {want_r}/{want_s})")
    lines.append(AuditLine("b", ok, "; ".join(parts)))

    bad = []
    for k in (1, 2, 3, 4):
        for cell in cat.realized3:
            if cell.realized_at(k):
                v = dp2_verdict(parse(cell.scheme, "DP2", k=k), k, 3)
                if v.prohibited:
                    bad.append(f"{cell.scheme} at k={k}: {v.obstruction}")
    lines.append(AuditLine("c", not bad, "all realized entries admissible" if not bad else
                           f"{len(bad)} realized entries prohibited", tuple(bad)))

    adm4 = {s.code for s in dp2_admissible(4, 3, 8)}
    outside = [c.scheme for c in r4 if parse(c.scheme, "DP2", k=4).code not in adm4]
    lines.append(AuditLine("d", not outside and len(adm4) == 74,
                           f"{len(r4) - len(outside)} of {len(r4)} realized at k=4 lie in the "
                           f"{len(adm4)} admissible", tuple(outside)))

    flags, clash = [], []
    for cell in cat.knot4:
        for k in cell.ks:
            s = parse(cell.scheme, "DP2", k=k)
            if s.code in cat.realized_at(k):
                clash.append(f"{cell.scheme} listed as realized at k={k}")
            native = dp2_verdict(s, k, 3).status
            at4 = dp2_verdict(pad(s, 4), 4, 3)
            flags.append(f"{cell.scheme} k={k}: verdict {native}; on X^4 {at4.status}"
                         + (f" ({at4.obstruction})" if at4.prohibited else " DISCREPANCY"))
    disc = sum("DISCREPANCY" in f for f in flags)
    lines.append(AuditLine("e", not clash,
                           f"{len(cat.knot4)} entries, {len(clash)} also realized, "
                           f"{disc} not prohibited on X^4", tuple(clash + flags)))

    missing = []
    for d in (1, 2, 3):
        for k in range(5):
            for s in dp1_admissible(k, d):
                if status(s, "DP1", k, d, cat).status != "Realized":
                    missing.append(f"{s} (k={k}, d={d})")
        plain = {s.code for s in dp1_admissible(4, d)}
        refined = refined_admissible(d)
        for rs in refined:
            if status(rs, "DP1", 4, d, cat).status != "Realized":
                missing.append(f"refined {rs} (d={d})")
        image = {rs.plain().code for rs in refined}
        if image != plain:
            missing.append(f"d={d}: refined schemes do not cover the plain ones")
    lines.append(AuditLine("f", not missing, "every admissible DP1 scheme of class <= 3 is realized"
                           if not missing else f"{len(missing)} DP1 schemes unmarked", tuple(missing)))
    return lines


# --- reports -------------------------------------------------------------------

def report(table: str, fmt: str = "text", catalog: Catalog | None = None) -> str:
    cat = catalog or default_catalog()
    if table == "realized3":
        rows = [{"scheme": c.scheme, "k": list(c.ks), "labels": sorted(c.labels), "anchor": c.anchor}
                for c in cat.realized3]
    elif table == "knot4":
        rows = [{"scheme": c.scheme, "k": list(c.ks), "anchor": c.anchor} for c in cat.knot4]
    elif table == "table1":
        rows = [{"row": r.row, "template": r.template + cat.family_tail, "extra": list(r.extra)}
                for r in cat.families]
    elif table == "lastchapter":
        rows = [{"row": r["row"], "plain": r["plain"], "refined": r["refined"],
                 "constraint": r["constraint"]} for r in cat.lastchapter["rows"]]
    else:
        raise CatalogError(f"unknown table {table!r}; choose from {', '.join(TABLES)}")
    if fmt == "json":
        return json.dumps({"table": table, "rows": rows}, indent=1, ensure_ascii=False)
    if fmt != "text":
        raise CatalogError(f"unknown format {fmt!r}")
    out = [f"# {table}: {len(rows)} rows"]
    for r in rows:
        out.append("  ".join(f"{k}={v}" for k, v in r.items()))
    return "\n".join(out)
