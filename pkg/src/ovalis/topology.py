"""Topological bookkeeping for the double-cover lifts and the degeneration gluing.

All pieces are disks or annuli whose boundary carries labelled points where
the curve crosses it.  Inside a piece the curve is a set of arcs between
boundary points plus closed ovals sitting in the faces the arcs cut out.
A closed surface is assembled by identifying boundary segments of pieces;
its region tree then follows from merging faces along the identified
segments and reading every closed-up curve as one circle.

Conventions (1-based labels in files, 0-based internally):

* a piece boundary with ``P`` points has segments ``1..P``; segment ``s``
  runs from point ``s`` to point ``s + 1`` (segment ``P`` closes the loop).
  With ``P = 0`` the whole boundary is segment ``1``.
* an oval placement names a face by one boundary segment it touches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from . import trees as T
from .scheme import (
    NotationError,
    RefinedScheme,
    Rp2Arrangement,
    Scheme,
    SphereArrangement,
    parse_sphere,
)


class TopologyError(ValueError):
    """Inconsistent arrangement data (odd crossings, crossing arcs, label clashes)."""


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _parse_forest(text: str) -> T.Rooted:
    from .scheme import _Parser

    p = _Parser(text)
    forest = p.forest()
    p.done()
    return T.normalize(tuple(forest))


# --- pieces --------------------------------------------------------------------

def _memo(fn):
    # frozen dataclasses reject functools.cached_property assignment
    name = "_cache_" + fn.__name__

    def getter(self):
        try:
            return object.__getattribute__(self, name)
        except AttributeError:
            val = fn(self)
            object.__setattr__(self, name, val)
            return val

    return property(getter)


@dataclass(frozen=True)
class Disk:
    """A disk with ``points`` boundary points, chords pairing them, at most one
    ray from an interior marked point to the boundary, and ovals per face."""

    points: int
    chords: tuple[tuple[int, int], ...] = ()
    ovals: tuple[tuple[int, T.Rooted], ...] = ()  # (segment, forest), 0-based
    ray: int | None = None  # 0-based boundary point joined to the marked point

    def __post_init__(self):
        used = [p for c in self.chords for p in c] + ([self.ray] if self.ray is not None else [])
        if any(not 0 <= p < self.points for p in used):
            raise TopologyError("chord endpoint outside the boundary labels")
        if sorted(used) != list(range(self.points)):
            raise TopologyError(
                f"every boundary point must end exactly one arc ({self.points} points, "
                f"{len(used)} arc ends)"
            )
        if len(set(self.faces().values())) != len(self.chords) + 1:
            raise TopologyError("chords cross")

    @_memo
    def mate(self) -> dict[int, int]:
        m = {}
        for a, b in self.chords:
            m[a], m[b] = b, a
        if self.ray is not None:
            m[self.ray] = self.ray  # a slit: the walk turns back
        return m

    def faces(self) -> dict[int, int]:
        """Map segment -> face id (smallest segment of the face)."""
        if self.points == 0:
            return {0: 0}
        face: dict[int, int] = {}
        for start in range(self.points):
            if start in face:
                continue
            orbit, s = [], start
            while s not in face:
                face[s] = -1
                orbit.append(s)
                s = self.mate[(s + 1) % self.points]
            for x in orbit:
                face[x] = min(orbit)
        return face

    def chord_sides(self) -> list[tuple[int, int, int]]:
        """(chord index, face on one side, face on the other side)."""
        face = self.faces()
        n = self.points
        return [(i, face[(a - 1) % n], face[a]) for i, (a, _) in enumerate(self.chords)]

    def segment_of(self, s: int) -> int:
        return s % max(self.points, 1)


Endpoint = tuple[str, int]  # ("o" | "i", 0-based label)


@dataclass(frozen=True)
class Annulus:
    """An annulus whose outer and inner circles both carry ``points`` labelled
    points (the same points of the double curve seen from the two sides).

    Arcs pair the ``2 * points`` endpoints.  For an arc joining two points of
    one circle the disk it cuts off holds the boundary run from its first to
    its second endpoint in increasing label order; this is consulted only when
    no arc crosses from one circle to the other.
    """

    points: int
    arcs: tuple[tuple[Endpoint, Endpoint], ...] = ()
    ovals: tuple[tuple[Endpoint, T.Rooted], ...] = ()  # ((circle, segment), forest)

    def __post_init__(self):
        ends = [e for a in self.arcs for e in a]
        want = [(c, i) for c in "io" for i in range(self.points)]
        if sorted(ends) != want:
            raise TopologyError("every endpoint of both annulus circles must end exactly one arc")
        orbits = len(set(self._trace()[0].values()))
        bridging = any(a[0] != b[0] for a, b in self.arcs)
        # P arcs cut the annulus into P regions, or P + 1 when none bridges
        # (the annular region is then traced once from each side)
        want_orbits = self.points if bridging else self.points + 2
        if self.points and orbits != want_orbits:
            raise TopologyError("annulus arcs cross")

    @_memo
    def mate(self) -> dict[Endpoint, Endpoint]:
        m = {}
        for a, b in self.arcs:
            m[a], m[b] = b, a
        return m

    def _trace(self):
        """Face walks along the annulus side.  Returns (segment -> orbit id,
        arc side -> orbit id) where an arc side is (from endpoint, to endpoint)."""
        n = self.points
        if n == 0:
            return {("o", 0): 0, ("i", 0): 0}, {}
        seg_face: dict[Endpoint, int] = {}
        side_face: dict[tuple[Endpoint, Endpoint], int] = {}
        orbit_id = 0
        for start in [("o", s) for s in range(n)] + [("i", s) for s in range(n)]:
            if start in seg_face:
                continue
            g = start
            while g not in seg_face:
                seg_face[g] = orbit_id
                circ, s = g
                arrive = ("o", (s + 1) % n) if circ == "o" else ("i", s)
                nxt = self.mate[arrive]
                side_face[(arrive, nxt)] = orbit_id
                g = ("o", nxt[1]) if nxt[0] == "o" else ("i", (nxt[1] - 1) % n)
            orbit_id += 1
        return seg_face, side_face

    def faces(self) -> tuple[dict[Endpoint, int], dict[tuple[Endpoint, Endpoint], int]]:
        seg_face, side_face = self._trace()
        n = self.points
        if n == 0 or any(a[0] != b[0] for a, b in self.arcs):
            return seg_face, side_face
        # no arc crosses: merge the outer-side and inner-side walks of the annular face
        hole = []
        for circ in "oi":
            covered = set()
            for a, b in self.arcs:
                if a[0] == circ:
                    s = a[1]
                    while s != b[1]:
                        covered.add(s)
                        s = (s + 1) % n
            free = [s for s in range(n) if s not in covered]
            faces = {seg_face[(circ, s)] for s in free}
            if len(faces) != 1:
                raise TopologyError(f"cannot place the hole on the {circ} circle")
            hole.append(faces.pop())
        merged = {hole[0]: hole[1]}
        seg_face = {k: merged.get(v, v) for k, v in seg_face.items()}
        side_face = {k: merged.get(v, v) for k, v in side_face.items()}
        return seg_face, side_face


# --- assembling a closed surface ----------------------------------------------

class _Surface:
    """Faces of pieces merged along glued segments; arcs closed up into circles."""

    def __init__(self):
        self.faces = _UnionFind()
        self.points = _UnionFind()
        self.arcs: list[tuple[tuple, tuple, object, object]] = []  # (p, q, face a, face b)
        self.forests: list[tuple[object, T.Rooted]] = []
        self.all_faces: set = set()
        self.closed_loops = 0

    def add_disk(self, tag, disk: Disk, point_key, segment_key):
        face = disk.faces()
        for s, f in face.items():
            self.all_faces.add((tag, f))
            self.faces.union((tag, f), segment_key(s))
        for i, fa, fb in disk.chord_sides():
            a, b = disk.chords[i]
            self.arcs.append((point_key(a), point_key(b), (tag, fa), (tag, fb)))
        for s, forest in disk.ovals:
            self.forests.append(((tag, face[disk.segment_of(s)]), forest))

    def add_annulus(self, tag, ann: Annulus, point_key, segment_key):
        seg_face, side_face = ann.faces()
        for g, f in seg_face.items():
            self.all_faces.add((tag, f))
            self.faces.union((tag, f), segment_key(g))
        for a, b in ann.arcs:
            self.arcs.append((point_key(a), point_key(b), (tag, side_face[(a, b)]), (tag, side_face[(b, a)])))
        n = max(ann.points, 1)
        for (circ, s), forest in ann.ovals:
            self.forests.append(((tag, seg_face[(circ, s % n)]), forest))

    def circles(self) -> list[tuple[object, object]]:
        """One (face, face) pair per closed-up circle, walking arc to arc."""
        at: dict = {}
        for idx, (p, q, _, _) in enumerate(self.arcs):
            at.setdefault(self.points.find(p), []).append(idx)
            at.setdefault(self.points.find(q), []).append(idx)
        for node, idxs in at.items():
            if len(idxs) != 2:
                raise TopologyError("a crossing point is not met by exactly two arcs")
        seen, out = set(), []
        for start in range(len(self.arcs)):
            if start in seen:
                continue
            idx, node = start, self.points.find(self.arcs[start][0])
            while idx not in seen:
                seen.add(idx)
                p, q, _, _ = self.arcs[idx]
                node = self.points.find(q) if self.points.find(p) == node else self.points.find(p)
                a, b = at[node]
                idx = b if a == idx else a
            _, _, fa, fb = self.arcs[start]
            out.append((fa, fb))
        return out

    def sphere(self) -> SphereArrangement:
        nodes: dict = {}
        for f in self.all_faces:
            nodes.setdefault(self.faces.find(f), len(nodes))
        adj: list[list[int]] = [[] for _ in nodes]

        def link(a, b):
            adj[a].append(b)
            adj[b].append(a)

        for fa, fb in self.circles():
            a, b = nodes[self.faces.find(fa)], nodes[self.faces.find(fb)]
            if a == b:
                raise TopologyError("a circle does not separate the glued surface")
            link(a, b)

        def hang(v, forest):
            for child in forest:
                w = len(adj)
                adj.append([])
                link(v, w)
                hang(w, child)

        for f, forest in self.forests:
            hang(nodes[self.faces.find(f)], forest)
        if sum(map(len, adj)) // 2 != len(adj) - 1 or not _connected(adj):
            raise TopologyError("the glued pieces do not form a sphere")
        return SphereArrangement.from_adjacency(tuple(tuple(n) for n in adj))


def _connected(adj) -> bool:
    seen, stack = {0}, [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def _reflect(n: int, reflect: bool):
    """Label and segment maps for matching boundary labels in reversed order."""
    if not reflect or n == 0:
        return (lambda i: i), (lambda s: s)
    return (lambda i: (n - 1 - i) % n), (lambda s: (n - 2 - s) % n)


def glue_disks(w: Disk, h: Disk, reflect: bool = False) -> SphereArrangement:
    """The sphere obtained by gluing two disks along their labelled boundaries."""
    if w.points != h.points:
        raise TopologyError(f"crossing counts differ: {w.points} vs {h.points}")
    pmap, smap = _reflect(h.points, reflect)
    surf = _Surface()
    surf.add_disk("w", w, lambda i: i, lambda s: ("seg", s))
    surf.add_disk("h", h, lambda i: pmap(i), lambda s: ("seg", smap(s)))
    return surf.sphere()


def glue_disks_annulus(w_outer: Disk, w_inner: Disk, ann: Annulus, reflect: bool = False) -> SphereArrangement:
    for d in (w_outer, w_inner):
        if d.points != ann.points:
            raise TopologyError(f"crossing counts differ: {d.points} vs {ann.points}")
    pmap, smap = _reflect(ann.points, reflect)
    surf = _Surface()
    surf.add_disk("wo", w_outer, lambda i: ("o", i), lambda s: ("o", s))
    surf.add_disk("wi", w_inner, lambda i: ("i", i), lambda s: ("i", s))
    surf.add_annulus("a", ann, lambda e: (e[0], pmap(e[1])), lambda g: (g[0], smap(g[1])))
    return surf.sphere()


def double_disk(d: Disk) -> SphereArrangement:
    """Two copies of a disk glued along the boundary (the double cover branched
    along the boundary circle)."""
    if d.ray is not None:
        raise TopologyError("a ray only makes sense in the disk around the cone vertex")
    return glue_disks(d, d)


# --- marked halves and the gluing ------------------------------------------------

Kind = Literal["two_disks", "annulus", "none"]


@dataclass(frozen=True)
class MarkedHalf:
    """One side of the degeneration: plain spheres plus the piece cut by E."""

    spheres: tuple[SphereArrangement, ...] = ()
    kind: Kind = "none"
    disks: tuple[Disk, Disk] | None = None
    annulus: Annulus | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)
    source: str = ""

    @property
    def boundary(self) -> int:
        if self.kind == "two_disks":
            return self.disks[0].points
        if self.kind == "annulus":
            return self.annulus.points
        return 0


def glue_degeneration(side_s: MarkedHalf, side_t: MarkedHalf, choice: int | None = None,
                      reflect: bool = False) -> Scheme:
    """The scheme on the smoothed surface.

    ``choice`` 1 glues W1 to H1 (or to the outer annulus circle), 2 glues W1
    to H2 (or to the inner circle).  It is required when both sides are split
    into two disks.
    """
    kinds = (side_s.kind, side_t.kind)
    plain = side_s.spheres + side_t.spheres
    if kinds == ("none", "none"):
        return Scheme("DP2", plain)
    if "none" in kinds:
        raise TopologyError("the double curve has real points on one side only")
    if side_s.boundary != side_t.boundary:
        raise TopologyError(f"crossing counts differ: {side_s.boundary} vs {side_t.boundary}")
    if kinds == ("two_disks", "two_disks"):
        if choice not in (1, 2):
            raise TopologyError("choice 1 or 2 is required when both sides are two disks")
        w1, w2 = side_s.disks
        h1, h2 = side_t.disks if choice == 1 else side_t.disks[::-1]
        return Scheme("DP2", plain + (glue_disks(w1, h1, reflect), glue_disks(w2, h2, reflect)))
    if kinds == ("annulus", "two_disks"):
        side_s, side_t = side_t, side_s
        kinds = ("two_disks", "annulus")
    if kinds == ("two_disks", "annulus"):
        w1, w2 = side_s.disks if choice in (None, 1) else side_s.disks[::-1]
        return Scheme("DP2", plain + (glue_disks_annulus(w1, w2, side_t.annulus, reflect),))
    raise TopologyError(f"cannot glue {kinds[0]} to {kinds[1]}")


def enumerate_gluings(side_s: MarkedHalf, side_t: MarkedHalf, reflect: bool = False) -> list[tuple[int | None, Scheme]]:
    if "none" in (side_s.kind, side_t.kind):
        return [(None, glue_degeneration(side_s, side_t, None, reflect))]
    return [(c, glue_degeneration(side_s, side_t, c, reflect)) for c in (1, 2)]


# --- double covers ---------------------------------------------------------------

@dataclass(frozen=True)
class PlanePair:
    """Curve arrangement relative to a quartic whose positive region is the
    union of the disks bounded by its ``k`` ovals."""

    ovals: tuple[Disk, ...]
    source: str = ""


def dp2_lift(p: PlanePair) -> Scheme:
    """Each quartic oval disk doubles to a sphere; curve parts outside vanish."""
    return Scheme("DP2", tuple(double_disk(d) for d in p.ovals))


@dataclass(frozen=True)
class VertexDisk:
    """The region of the cone around the vertex V, cut open as a disk with V
    inside.  ``v_segment`` names the face holding V (ignored with a ray);
    ``around_v`` counts nested circles of the curve encircling V."""

    disk: Disk
    v_segment: int = 0
    around_v: int = 0


@dataclass(frozen=True)
class ConePair:
    vertex: VertexDisk
    ovals: tuple[Disk, ...]
    positive: tuple[bool | None, ...] = ()
    bidegree: tuple[int, int] | None = None
    source: str = ""


def _rp2_part(v: VertexDisk) -> Rp2Arrangement:
    d = v.disk
    face = d.faces()
    root = face[d.ray] if d.ray is not None else face[d.segment_of(v.v_segment)]
    if d.ray is not None and v.around_v:
        raise TopologyError("a circle around V would meet the ray through V")
    children: dict[int, list[int]] = {}
    for _, fa, fb in d.chord_sides():
        children.setdefault(fa, []).append(fb)
        children.setdefault(fb, []).append(fa)
    forests: dict[int, list] = {}
    for s, forest in d.ovals:
        forests.setdefault(face[d.segment_of(s)], []).extend(forest)

    def build(f, parent) -> list:
        # ovals in a face not containing V are seen twice, chords once
        kids = [tuple(build(g, f)) for g in children.get(f, []) if g != parent]
        return kids + 2 * list(forests.get(f, []))

    top = build(root, None)
    inner: list = []
    for _ in range(v.around_v):
        inner = [tuple(inner)]
    return Rp2Arrangement(T.normalize(tuple(top + inner)), 1 if d.ray is not None else 0)


def dp1_lift(c: ConePair, refined: bool = False) -> Scheme | RefinedScheme:
    if c.bidegree is not None and (c.vertex.disk.ray is not None) != bool(c.bidegree[1]):
        raise TopologyError("a curve passes through V exactly when its second bidegree entry is 1")
    rp2 = _rp2_part(c.vertex)
    spheres = tuple(double_disk(d) for d in c.ovals)
    if not refined:
        return Scheme("DP1", spheres, rp2)
    if len(spheres) != 4 or len(c.positive) != 4 or None in c.positive:
        raise TopologyError("a refined lift needs four ovals, each labelled positive or negative")
    pos = tuple(s for s, p in zip(spheres, c.positive) if p)
    neg = tuple(s for s, p in zip(spheres, c.positive) if not p)
    if len(pos) != 2:
        raise TopologyError("two ovals are positive and two negative")
    return RefinedScheme(rp2, pos, neg)


# --- JSON fixtures ---------------------------------------------------------------

def _label(x, n: int) -> int:
    if n == 0:
        return 0
    try:
        x = int(x)
    except ValueError:
        raise TopologyError(f"bad boundary label {x!r}") from None
    if not 1 <= x <= n:
        raise TopologyError(f"label {x} outside 1..{n}")
    return x - 1


def _face_key(o: dict):
    # a face is named by any boundary segment it touches
    return o.get("face", o.get("segment", 1))


def disk_from_json(obj: dict, arcs=None, ovals=None) -> Disk:
    n = int(obj["points"]) if "points" in obj else int(obj.get("boundary", 0))
    if n % 2 and obj.get("ray") is None:
        raise TopologyError(f"odd number of crossings ({n})")
    chords = tuple((_label(a, n), _label(b, n)) for a, b in (arcs if arcs is not None else obj.get("chords", [])))
    ov = tuple((_label(_face_key(o), n), _parse_forest(o["forest"]))
               for o in (ovals if ovals is not None else obj.get("ovals", [])))
    ray = obj.get("ray")
    return Disk(n, chords, ov, None if ray is None else _label(ray, n))


def _endpoint(x, n: int) -> Endpoint:
    text = str(x)
    if not text or text[0] not in "oi":
        raise TopologyError(f"annulus endpoint {x!r} must look like 'o3' or 'i5'")
    return text[0], _label(text[1:], n)


def half_from_json(obj: dict) -> MarkedHalf:
    """MarkedHalf from ``{"spheres": [...], "marked": {...}, "source": ...}``."""
    spheres = tuple(parse_sphere(s) for s in obj.get("spheres", []))
    marked = obj.get("marked") or {"kind": "none"}
    kind = marked.get("kind", "none")
    meta = {k: v for k, v in obj.items() if k not in ("spheres", "marked", "source")}
    src = obj.get("source", "")
    if kind == "none":
        return MarkedHalf(spheres, "none", meta=meta, source=src)
    n = int(marked.get("boundary", 0))
    if n % 2:
        raise TopologyError(f"odd number of crossings on the double curve ({n})")
    if kind == "two_disks":
        disks = []
        for name in ("disk1", "disk2"):
            arcs = [a[:2] for a in marked.get("arcs", []) if a[2] == name]
            ovals = [o for o in marked.get("ovals", []) if o.get("piece", "disk1") == name]
            disks.append(disk_from_json({"points": n}, arcs, ovals))
        return MarkedHalf(spheres, "two_disks", tuple(disks), meta=meta, source=src)
    if kind == "annulus":
        arcs = tuple((_endpoint(a, n), _endpoint(b, n)) for a, b, *_ in marked.get("arcs", []))
        ovals = tuple(
            (_endpoint(_face_key(o), n), _parse_forest(o["forest"]))
            for o in marked.get("ovals", [])
        )
        return MarkedHalf(spheres, "annulus", annulus=Annulus(n, arcs, ovals), meta=meta, source=src)
    raise TopologyError(f"unknown marked kind {kind!r}")


def plane_pair_from_json(obj: dict) -> PlanePair:
    return PlanePair(tuple(disk_from_json(o) for o in obj["quartic_ovals"]), obj.get("source", ""))


def cone_pair_from_json(obj: dict) -> ConePair:
    v = obj["vertex_region"]
    vd = VertexDisk(disk_from_json(v), _label(v.get("v_segment", 1), int(v.get("points", 0))),
                    int(v.get("around_v", 0)))
    ovals = tuple(disk_from_json(o) for o in obj.get("ovals", []))
    pos = tuple(o.get("positive") for o in obj.get("ovals", []))
    bideg = tuple(obj["bidegree"]) if "bidegree" in obj else None
    return ConePair(vd, ovals, pos, bideg, obj.get("source", ""))


def load_json(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
