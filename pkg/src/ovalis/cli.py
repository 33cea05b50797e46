"""Command-line entry point: ``ovalis``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from . import topology as topo
from . import trigonal as tri
from .enumerate import (
    dp1_schemes,
    dp2_schemes,
    knob_differences,
    refined_schemes,
)
from .obstructions import (
    DEFAULT_KNOBS,
    Knobs,
    dp1_checks,
    dp1_verdict,
    dp2_checks,
    dp2_verdict,
    refined_verdict,
)
from .scheme import NotationError, RefinedScheme, component_stats, parse, parse_refined

EXIT_INPUT = 2
EXIT_UNKNOWN = 3


class InputError(Exception):
    pass


def _emit(obj, fmt: str = "json") -> None:
    if fmt == "json":
        print(json.dumps(obj, ensure_ascii=False))
    else:
        print(obj)


def _knobs(a) -> Knobs:
    return Knobs(
        disjointness=a.disjointness,
        one_sphere_disjoint=not a.one_sphere_any,
        case2_needs_nest_on_x2=a.case2_needs_nest,
        pair_rule=a.pair_rule,
    )


def cmd_enum(a) -> int:
    if a.cls < 1:
        raise InputError("--class must be positive")
    if a.ovals is not None and a.ovals > 12 and not a.force:
        raise InputError("enumeration beyond 12 ovals needs --force")
    if a.surface == "dp2":
        if not 1 <= a.k <= 4:
            raise InputError("DP2 needs 1 <= k <= 4")
        if a.refined:
            raise InputError("refined schemes exist only on DP1")
        knobs = _knobs(a)
        rows = ((s, dp2_verdict(s, a.k, a.cls, knobs)) for s in dp2_schemes(a.k, a.cls, a.ovals))
    else:
        if not 0 <= a.k <= 4:
            raise InputError("DP1 needs 0 <= k <= 4")
        if a.refined:
            if a.k != 4:
                raise InputError("refined schemes need k = 4")
            rows = ((r, refined_verdict(r, a.cls)) for r in refined_schemes(a.cls, a.ovals))
        else:
            rows = ((s, dp1_verdict(s, a.k, a.cls)) for s in dp1_schemes(a.k, a.cls, a.ovals))
    rows = sorted(rows, key=lambda sv: sv[0].code)
    if a.admissible:
        rows = [(s, v) for s, v in rows if not v.prohibited]
    for s, v in rows:
        plain = s.plain() if isinstance(s, RefinedScheme) else s
        if a.format == "json":
            st = component_stats(plain)
            rec = {"scheme": str(s), "l": st.l, "t": st.t,
                   "verdict": "prohibited" if v.prohibited else "admissible",
                   "witness": None if v.witness is None else v.witness.to_json()}
            _emit(rec)
        else:
            tag = f"  [{v.obstruction}]" if v.prohibited else ""
            print(f"{s}{tag}")
    if a.format == "text":
        print(f"# count: {len(rows)}")
    if a.knob_report and a.surface == "dp2":
        diffs = knob_differences(a.k, a.cls, a.ovals, _knobs(a))
        _emit({"knob_differences": diffs}) if a.format == "json" else _print_diffs(diffs)
    return 0


def _print_diffs(diffs) -> None:
    for knob, d in diffs.items():
        print(f"# flip {knob}: +{len(d['newly_admissible'])} admissible, "
              f"-{len(d['newly_prohibited'])} admissible")
        for s in d["newly_admissible"]:
            print(f"#   + {s}")
        for s in d["newly_prohibited"]:
            print(f"#   - {s}")


def cmd_check(a) -> int:
    try:
        if a.surface == "dp1" and a.refined:
            s = parse_refined(a.scheme)
            v = refined_verdict(s, a.cls)
            checks = dp1_checks(s.plain(), 4, a.cls) if a.explain else []
        elif a.surface == "dp1":
            s = parse(a.scheme, "DP1", k=a.k)
            v = dp1_verdict(s, a.k, a.cls)
            checks = dp1_checks(s, a.k, a.cls) if a.explain else []
        else:
            s = parse(a.scheme, "DP2", k=a.k)
            v = dp2_verdict(s, a.k, a.cls, _knobs(a))
            checks = dp2_checks(s, a.k, a.cls, _knobs(a)) if a.explain else []
    except NotationError as exc:
        raise InputError(str(exc)) from exc
    out = {"scheme": str(s), "code": s.code, "k": a.k, "class": a.cls, **v.to_json()}
    if a.explain:
        out["checks"] = [c.to_json() for c in checks]
    _emit(out)
    return 0


def cmd_catalog(a) -> int:
    if a.action == "status":
        if not a.scheme:
            raise InputError("catalog status needs a scheme")
        surface = a.surface.upper()
        try:
            if surface == "DP1" and a.refined:
                s = parse_refined(a.scheme)
            else:
                s = parse(a.scheme, surface)
        except NotationError as exc:
            raise InputError(str(exc)) from exc
        _emit(cat.status(s, surface, a.k, a.cls).to_json())
    elif a.action == "validate":
        lines = cat.validate()
        if a.format == "json":
            for line in lines:
                _emit(line.to_json())
        else:
            for line in lines:
                print(f"({line.check}) {'PASS' if line.passed else 'FAIL'}  {line.detail}")
                for flag in line.flags:
                    print(f"      {flag}")
    else:
        if not a.table:
            raise InputError("catalog report needs --table")
        print(cat.report(a.table, a.format))
    return 0


def cmd_family(a) -> int:
    params = dict(d=a.d, k1=a.k1, k2=a.k2, h1=a.h1, h2=a.h2, h3=a.h3, h4=a.h4)
    _emit(cat.expand_family(a.row, params).to_json())
    return 0


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def cmd_trigonal(a) -> int:
    obj = _read_json(a.input)
    try:
        if "word" in obj:
            if a.degree is not None:
                obj = {**obj, "n": a.degree}
            ls = tri.TrigonalLScheme.from_json(obj)
            rg, n = tri.encode_real_graph(ls), ls.n
        else:
            rg = tri.RealGraph.from_json(obj)
            n = a.degree if a.degree is not None else obj.get("n")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed input: {exc}") from exc
    if a.action == "encode":
        _emit({"n": n, "real_graph": rg.to_json(), "text": str(rg)})
        return 0
    if n is None:
        raise InputError("--degree is required for a bare real graph")
    res = tri.search_completion(rg, int(n), budget_ms=a.budget)
    out = {"status": res.status, "n": n, "real_graph": str(rg)}
    if isinstance(res, tri.Found):
        out["completion"] = res.completion.to_json()
        out["violations"] = tri.is_valid_completion(res.completion, int(n), rg)
    else:
        out["reason"] = res.reason
    _emit(out)
    return EXIT_UNKNOWN if isinstance(res, tri.Unknown) else 0


def cmd_cover(a) -> int:
    obj = _read_json(a.input)
    try:
        if a.surface == "dp2":
            s = topo.dp2_lift(topo.plane_pair_from_json(obj))
        else:
            s = topo.dp1_lift(topo.cone_pair_from_json(obj), refined=a.refined)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed input: {exc}") from exc
    _emit({"scheme": str(s), "code": s.code})
    return 0


def cmd_glue(a) -> int:
    try:
        s = topo.half_from_json(_read_json(a.s))
        t = topo.half_from_json(_read_json(a.t))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed input: {exc}") from exc
    if a.choice is None:
        results = topo.enumerate_gluings(s, t, a.reflect)
    else:
        results = [(a.choice, topo.glue_degeneration(s, t, a.choice, a.reflect))]
    for choice, scheme in results:
        _emit({"choice": choice, "reflect": a.reflect, "scheme": str(scheme), "code": scheme.code})
    return 0


def _add_knobs(p) -> None:
    p.add_argument("--disjointness", choices=("each", "common"), default=DEFAULT_KNOBS.disjointness)
    p.add_argument("--one-sphere-any", action="store_true",
                   help="one-sphere lemma: allow non-disjoint nests")
    p.add_argument("--case2-needs-nest", action="store_true",
                   help="case (2) requires an oval on the sphere taking one point")
    p.add_argument("--pair-rule", choices=("end-disk", "edge-disjoint"), default=DEFAULT_KNOBS.pair_rule)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ovalis", description="Real schemes on del Pezzo surfaces of degree 1 and 2.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", help="enumerate schemes")
    p.add_argument("surface", choices=("dp2", "dp1"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, required=True)
    p.add_argument("--ovals", type=int)
    p.add_argument("--admissible", action="store_true")
    p.add_argument("--refined", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--knob-report", action="store_true", help="list schemes whose verdict flips with each knob")
    p.add_argument("--force", action="store_true")
    _add_knobs(p)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("check", help="verdict for one scheme")
    p.add_argument("surface", choices=("dp2", "dp1"))
    p.add_argument("scheme")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--class", dest="cls", type=int, required=True)
    p.add_argument("--refined", action="store_true")
    p.add_argument("--explain", action="store_true")
    _add_knobs(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("catalog", help="catalog lookups, audits and reports")
    p.add_argument("action", choices=("status", "validate", "report"))
    p.add_argument("scheme", nargs="?")
    p.add_argument("--surface", choices=("dp2", "dp1"), default="dp2")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--class", dest="cls", type=int, default=3)
    p.add_argument("--refined", action="store_true")
    p.add_argument("--table", choices=cat.TABLES)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("family", help="expand a non-symmetric family row")
    p.add_argument("action", choices=("expand",))
    p.add_argument("--row", type=int, required=True)
    for name in ("d", "k1", "k2", "h1", "h2", "h3", "h4"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("trigonal", help="real graphs of trigonal L-schemes")
    p.add_argument("action", choices=("encode", "complete"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--budget", type=float, default=60_000, help="milliseconds")
    p.set_defaults(func=cmd_trigonal)

    p = sub.add_parser("cover", help="lift a plane or cone arrangement through the double cover")
    p.add_argument("surface", choices=("dp2", "dp1"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--refined", action="store_true")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("glue", help="glue the two halves of a degeneration")
    p.add_argument("--s", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--choice", type=int, choices=(1, 2))
    p.add_argument("--reflect", action="store_true")
    p.set_defaults(func=cmd_glue)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        return a.func(a)
    except (InputError, NotationError, cat.CatalogError, topo.TopologyError, tri.TrigonalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
