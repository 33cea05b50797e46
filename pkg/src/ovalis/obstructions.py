"""Prohibition predicates for real schemes on degree 2 and degree 1 del Pezzo
surfaces, and the dispatchers that combine them per surface.

Every predicate returns a :class:`Verdict`.  A prohibition carries a
:class:`Witness` holding the nests it used, so the violated inequality can be
recomputed from the witness alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Literal

from .scheme import (
    Nest,
    RefinedScheme,
    Rp2Arrangement,
    Scheme,
    SphereArrangement,
    best_selection,
    component_stats,
    diameter,
    edge_disjoint_best,
    rp2_disjoint,
    rp2_nests,
    sphere_nests,
)

Status = Literal["Admissible", "Prohibited", "NotApplicable"]


@dataclass(frozen=True)
class Knobs:
    """Interpretation choices where the text admits more than one reading.

    disjointness
        ``"each"``: in a disjoint family every other nest lies in one of the
        two end disks of each nest.  ``"common"``: one end disk holds all the
        others.  Applies to families of three or more nests.
    one_sphere_disjoint
        Whether the three nests of the one-sphere lemma must be disjoint; if
        off, any three nests without a common oval are used.
    case2_needs_nest_on_x2
        Whether case (2) of the Welschinger-type bound requires an oval on
        the sphere that receives the single point.
    pair_rule
        Disjointness for two nests: ``"end-disk"`` (same test as for three)
        or ``"edge-disjoint"``.
    """

    disjointness: Literal["each", "common"] = "each"
    one_sphere_disjoint: bool = True
    case2_needs_nest_on_x2: bool = False
    pair_rule: Literal["end-disk", "edge-disjoint"] = "end-disk"

    def flips(self) -> dict[str, "Knobs"]:
        """The configurations differing from this one in exactly one knob."""
        return {
            "disjointness": replace(self, disjointness="common" if self.disjointness == "each" else "each"),
            "one_sphere_disjoint": replace(self, one_sphere_disjoint=not self.one_sphere_disjoint),
            "case2_needs_nest_on_x2": replace(self, case2_needs_nest_on_x2=not self.case2_needs_nest_on_x2),
            "pair_rule": replace(
                self, pair_rule="edge-disjoint" if self.pair_rule == "end-disk" else "end-disk"
            ),
        }


DEFAULT_KNOBS = Knobs()


@dataclass(frozen=True)
class Witness:
    obstruction: str
    bound: float
    attained: float
    t: int | None = None
    s: int | None = None
    r1: int | None = None
    r2: int | None = None
    spheres: tuple[int, ...] = ()
    depths: tuple[int, ...] = ()
    nests: tuple[tuple[Nest, ...], ...] = field(default=(), compare=False)
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "obstruction": self.obstruction,
            "bound": self.bound,
            "attained": self.attained,
        }
        for key in ("t", "s", "r1", "r2"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.spheres:
            out["spheres"] = list(self.spheres)
        if self.depths:
            out["depths"] = list(self.depths)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Witness | None = None
    obstruction: str = ""

    @property
    def prohibited(self) -> bool:
        return self.status == "Prohibited"

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.obstruction:
            out["obstruction"] = self.obstruction
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _ok(name: str) -> Verdict:
    return Verdict("Admissible", obstruction=name)


def _na(name: str) -> Verdict:
    return Verdict("NotApplicable", obstruction=name)


def _no(w: Witness) -> Verdict:
    return Verdict("Prohibited", w, w.obstruction)


# --- degree 2 -----------------------------------------------------------------

def dp2_harnack(s: Scheme, d: int) -> Verdict:
    bound = d * (d - 1) + 2
    if s.ovals > bound:
        return _no(Witness("harnack", bound, s.ovals, note="l <= d(d-1)+2"))
    return _ok("harnack")


def _selection(a: SphereArrangement, r: int, knobs: Knobs):
    if r == 1:
        ns = sphere_nests(a)
        return (ns[0],) if ns else None
    if r == 2 and knobs.pair_rule == "edge-disjoint":
        return edge_disjoint_best(a, 2)
    return best_selection(a, r, knobs.disjointness)


def _cap(a: SphereArrangement, r: int) -> int:
    """Upper bound for the depth of r disjoint nests, checked before searching."""
    return min(a.ovals, r * diameter(a))


def _depth(sel) -> int:
    return sum(n.depth for n in sel) if sel else 0


def dp2_welschinger_nests(s: Scheme, d: int, knobs: Knobs = DEFAULT_KNOBS) -> Verdict:
    """Welschinger-type bound for two spheres X1, X2 receiving r1, r2 points.

    (1) r1, r2 > 1:            sum of all 2s depths <= d s - (t - 2)
    (2) r1 = 2s - 1, r2 = 1:   sum of the r1 depths <= d s - (t - 1)
    """
    name = "welschinger_nests"
    if s.k < 2:
        return _na(name)
    t = component_stats(s).t_spheres
    sph = s.spheres
    # a depth sum never exceeds the oval count, so large s' cannot fire
    for sp in range(2, s.ovals + 2):
        if d * sp - (t - 1) >= s.ovals:
            break
        # case (2)
        r1 = 2 * sp - 1
        bound2 = d * sp - (t - 1)
        for i, a in enumerate(sph):
            if a.ovals < r1:
                continue
            partners = [j for j in range(len(sph)) if j != i]
            if knobs.case2_needs_nest_on_x2:
                partners = [j for j in partners if sph[j].ovals]
            if not partners or _cap(a, r1) <= bound2:
                continue
            sel = _selection(a, r1, knobs)
            if sel and _depth(sel) > bound2:
                return _no(Witness(
                    name, bound2, _depth(sel), t=t, s=sp, r1=r1, r2=1,
                    spheres=(i, partners[0]), depths=tuple(n.depth for n in sel),
                    nests=(sel,), note="case 2",
                ))
        # case (1)
        bound1 = d * sp - (t - 2)
        for r1 in range(3, 2 * sp - 2, 2):
            r2 = 2 * sp - r1
            for i, j in itertools.permutations(range(len(sph)), 2):
                if sph[i].ovals < r1 or sph[j].ovals < r2:
                    continue
                if _cap(sph[i], r1) + _cap(sph[j], r2) <= bound1:
                    continue
                s1 = _selection(sph[i], r1, knobs)
                s2 = _selection(sph[j], r2, knobs)
                if s1 and s2 and _depth(s1) + _depth(s2) > bound1:
                    return _no(Witness(
                        name, bound1, _depth(s1) + _depth(s2), t=t, s=sp, r1=r1, r2=r2,
                        spheres=(i, j),
                        depths=tuple(n.depth for n in s1 + s2),
                        nests=(s1, s2), note="case 1",
                    ))
    return _ok(name)


def dp2_two_nests_k4(s: Scheme, d: int) -> Verdict:
    """Two nests on two different spheres of a 4-sphere surface:
    j1 + j2 <= 2d - (t - 2)."""
    name = "two_nests_k4"
    if s.k != 4:
        return _na(name)
    t = component_stats(s).t_spheres
    bound = 2 * d - (t - 2)
    ranked = sorted(
        ((diameter(a), i) for i, a in enumerate(s.spheres) if a.ovals), reverse=True
    )
    if len(ranked) < 2:
        return _ok(name)
    (j1, i1), (j2, i2) = ranked[:2]
    if j1 + j2 > bound:
        n1 = sphere_nests(s.spheres[i1])[0]
        n2 = sphere_nests(s.spheres[i2])[0]
        return _no(Witness(name, bound, j1 + j2, t=t, spheres=(i1, i2),
                           depths=(j1, j2), nests=((n1,), (n2,))))
    return _ok(name)


_QUADRUPLE = None


def dp2_forbidden_quadruple(s: Scheme, d: int) -> Verdict:
    """The single class-3 scheme <1>+<1>+<1>+<1>:0:0:0 on four spheres."""
    global _QUADRUPLE
    name = "forbidden_quadruple"
    if d != 3 or s.k != 4:
        return _na(name)
    if _QUADRUPLE is None:
        from .scheme import parse

        _QUADRUPLE = parse("<1>+<1>+<1>+<1>:0:0:0").code
    if s.code == _QUADRUPLE:
        return _no(Witness(name, 12, 14, t=1, note="class-2 curve through 6 points meets A 14 > 12 times"))
    return _ok(name)


def dp2_one_sphere_nests(s: Scheme, d: int, knobs: Knobs = DEFAULT_KNOBS) -> Verdict:
    """Three nests on the single sphere: j1 + j2 + j3 <= 2d."""
    name = "one_sphere_nests"
    if s.k != 1:
        return _na(name)
    a = s.spheres[0]
    if a.ovals < 3:
        return _ok(name)
    if knobs.one_sphere_disjoint:
        sel = best_selection(a, 3, knobs.disjointness)
    else:
        sel = edge_disjoint_best(a, 3)
    bound = 2 * d
    if sel and _depth(sel) > bound:
        return _no(Witness(name, bound, _depth(sel), t=1, r1=3, spheres=(0,),
                           depths=tuple(n.depth for n in sel), nests=(sel,)))
    return _ok(name)


def petrovsky_bounds(d: int) -> tuple[float, float]:
    """Bounds on chi of the real part of the double cover: 2 chi(B)."""
    c = d * (3 * d - 2) / 2
    return -14 - c, 16 + c


def dp2_petrovsky(s: Scheme, d: int) -> Verdict:
    """Comessatti-Petrovsky test for the maximal scheme l:0:...:0, d even.

    Every choice of complementary halves (B1, B2) bounded by the curve is
    tried; empty spheres may join either half.  The scheme is prohibited when
    every choice has a half whose doubled Euler characteristic leaves the
    allowed range.
    """
    name = "petrovsky"
    l = d * (d - 1) + 2
    if d % 2 or s.ovals != l:
        return _na(name)
    nonempty = [a for a in s.spheres if a.ovals]
    if len(nonempty) != 1:
        return _na(name)
    a = nonempty[0]
    if a.tree != SphereArrangement.from_forest(((),) * l).tree:
        return _na(name)
    lo, hi = petrovsky_bounds(d)
    empties = s.k - 1
    disks, outer = l, 2 - l
    worst = None
    for m in range(empties + 1):
        # m empty spheres on the disk side, the rest on the outer side
        chi = (disks + 2 * m, outer + 2 * (empties - m))
        bad = [2 * c for c in chi if not lo <= 2 * c <= hi]
        if not bad:
            return _ok(name)
        worst = bad[0]
    return _no(Witness(name, hi, worst, note=f"2chi(B) must lie in [{lo:g}, {hi:g}] for both halves"))


DP2_ORDER = ("harnack", "welschinger_nests", "two_nests_k4", "forbidden_quadruple",
             "one_sphere_nests", "petrovsky")


def dp2_checks(s: Scheme, k: int, d: int, knobs: Knobs = DEFAULT_KNOBS) -> list[Verdict]:
    """All predicates the dispatcher applies, in the fixed order."""
    if not 1 <= k <= 4:
        raise ValueError("k must be between 1 and 4 for a degree 2 surface")
    if s.k != k:
        raise ValueError(f"scheme has {s.k} spheres, expected {k}")
    out = [dp2_harnack(s, d)]
    if k >= 2:
        out.append(dp2_welschinger_nests(s, d, knobs))
    if k == 4:
        out.append(dp2_two_nests_k4(s, d))
        out.append(dp2_forbidden_quadruple(s, d))
    if k == 1:
        out.append(dp2_one_sphere_nests(s, d, knobs))
    pv = dp2_petrovsky(s, d)
    if pv.status != "NotApplicable":
        out.append(pv)
    return out


def dp2_verdict(s: Scheme, k: int, d: int, knobs: Knobs = DEFAULT_KNOBS) -> Verdict:
    for v in dp2_checks(s, k, d, knobs):
        if v.prohibited:
            return v
    return Verdict("Admissible")


# --- degree 1 -----------------------------------------------------------------

def dp1_parity(s: Scheme, d: int) -> Verdict:
    name = "parity"
    j = s.rp2.pseudo_lines
    if j != d % 2:
        return _no(Witness(name, d % 2, j, note="pseudo-lines must equal d mod 2"))
    return _ok(name)


def dp1_bounds(s: Scheme, d: int) -> Verdict:
    name = "bounds"
    lo, hi = d % 2, d * (d - 1) // 2 + 2
    if not lo <= s.l <= hi:
        return _no(Witness(name, hi if s.l > hi else lo, s.l, note=f"{lo} <= l <= {hi}"))
    return _ok(name)


def _rp2_pairs(r: Rp2Arrangement):
    ns = rp2_nests(r)
    for a, b in itertools.combinations(ns, 2):
        if rp2_disjoint(r, a, b):
            yield (a, b) if a.depth <= b.depth else (b, a)


def dp1_nest_obstruction(s: Scheme, d: int) -> Verdict:
    """Bezout-type bound on a 4-sphere degree 1 surface, d = 2s + eps:

    i1 + i2 <= 3s + eps - t        (N1, N2 a disjoint pair in RP^2, i1 <= i2)
    i2 + i3 <= 3s + eps - (t - 1)  (N3 on a sphere)
    """
    name = "dp1_nests"
    sp, eps = divmod(d, 2)
    if s.k != 4 or sp < 1:
        return _na(name)
    pairs = list(_rp2_pairs(s.rp2))
    sphere_best = max(((diameter(a), i) for i, a in enumerate(s.spheres) if a.ovals), default=None)
    if not pairs or sphere_best is None:
        return _na(name)
    t = component_stats(s).t_spheres
    b1, b2 = 3 * sp + eps - t, 3 * sp + eps - (t - 1)
    n1, n2 = max(pairs, key=lambda p: p[0].depth + p[1].depth)
    if n1.depth + n2.depth > b1:
        return _no(Witness(name, b1, n1.depth + n2.depth, t=t, s=sp,
                           depths=(n1.depth, n2.depth), nests=((n1, n2),), note="i1+i2"))
    n1, n2 = max(pairs, key=lambda p: p[1].depth)
    i3, j = sphere_best
    if n2.depth + i3 > b2:
        n3 = sphere_nests(s.spheres[j])[0]
        return _no(Witness(name, b2, n2.depth + i3, t=t, s=sp, spheres=(j,),
                           depths=(n1.depth, n2.depth, i3), nests=((n1, n2), (n3,)), note="i2+i3"))
    return _ok(name)


def dp1_checks(s: Scheme, k: int, d: int) -> list[Verdict]:
    if not 0 <= k <= 4:
        raise ValueError("k must be between 0 and 4 for a degree 1 surface")
    if s.k != k:
        raise ValueError(f"scheme has {s.k} spheres, expected {k}")
    out = [dp1_parity(s, d), dp1_bounds(s, d)]
    if d >= 4 and k == 4:
        out.append(dp1_nest_obstruction(s, d))
    return out


def dp1_verdict(s: Scheme, k: int, d: int) -> Verdict:
    for v in dp1_checks(s, k, d):
        if v.prohibited:
            return v
    return Verdict("Admissible")


def refined_verdict(rs: RefinedScheme, d: int) -> Verdict:
    """No obstruction distinguishes refined schemes: use the plain verdict."""
    return dp1_verdict(rs.plain(), 4, d)
