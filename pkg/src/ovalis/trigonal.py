"""Trigonal L-schemes, their real graphs, and completion to real trigonal graphs.

Vertex kinds: ``x`` (zero of the discriminant), ``o`` (zero of b3), ``*``
(zero of b2), ``m`` (monochrome).  Edge colours: ``solid``, ``bold``,
``dotted``.  Edges are oriented x -> o along dotted, o -> * along bold and
* -> x along solid.

The L-scheme word is read along the base from x = -inf to x = +inf.  A
tangency has side ``up`` when its double point lies above the simple point
in the affine chart; for odd n this comparison flips across the fibre at
infinity.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from numpy.polynomial import polynomial as P

Kind = Literal["x", "o", "*", "m"]
Color = Literal["solid", "bold", "dotted"]

COLORS = ("solid", "bold", "dotted")
# colour -> (tail kind, head kind)
ENDS = {"dotted": ("x", "o"), "bold": ("o", "*"), "solid": ("*", "x")}
SYMBOLS = {"×": "x", "∘": "o", "•": "*", "x": "x", "o": "o", "*": "*"}


class TrigonalError(ValueError):
    """Malformed L-scheme, real graph or completion data."""


class DegenerateDiscriminant(TrigonalError):
    pass


# --- L-schemes -------------------------------------------------------------------

@dataclass(frozen=True)
class Tangency:
    side: Literal["up", "down"]

    def to_json(self):
        return {"event": "tangency", "side": self.side}


@dataclass(frozen=True)
class Run:
    kind: Literal["one", "three"]
    length: int = 1

    def to_json(self):
        return {"run": self.kind, "length": self.length}


@dataclass(frozen=True)
class TrigonalLScheme:
    n: int
    word: tuple
    source: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise TrigonalError("the base degree n must be at least 1")
        if not any(isinstance(e, Run) for e in self.word):
            raise TrigonalError("the word needs at least one run")
        self.gaps()  # validates

    @property
    def tangencies(self) -> list[Tangency]:
        return [e for e in self.word if isinstance(e, Tangency)]

    def gaps(self) -> list[str]:
        """Run kind after each tangency (the last one wraps through infinity)."""
        word = list(self.word)
        tang = [i for i, e in enumerate(word) if isinstance(e, Tangency)]
        kinds = {e.kind for e in word if isinstance(e, Run)}
        if not tang:
            if len(kinds) != 1:
                raise TrigonalError("runs of both kinds without a tangency between them")
            return [kinds.pop()]
        out = []
        for a, i in enumerate(tang):
            j = tang[(a + 1) % len(tang)]
            span = word[i + 1:j] if j > i else word[i + 1:] + word[:j]
            ks = {e.kind for e in span}
            if len(ks) != 1:
                raise TrigonalError("each gap between tangencies holds runs of exactly one kind")
            out.append(ks.pop())
        for a in range(len(out)):
            if out[a] == out[a - 1]:
                raise TrigonalError("the real point count must change at every tangency")
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "word": [e.to_json() for e in self.word], "source": self.source}

    @classmethod
    def from_json(cls, obj: dict) -> "TrigonalLScheme":
        word = []
        for e in obj["word"]:
            if e.get("event") == "tangency":
                if e.get("side") not in ("up", "down"):
                    raise TrigonalError(f"tangency side must be up or down, got {e.get('side')!r}")
                word.append(Tangency(e["side"]))
            elif e.get("run") in ("one", "three"):
                length = int(e.get("length", 1))
                if length < 1:
                    raise TrigonalError("run lengths are positive")
                word.append(Run(e["run"], length))
            else:
                raise TrigonalError(f"unknown word item {e!r}")
        return cls(int(obj["n"]), tuple(word), obj.get("source", ""))


# --- real graphs -----------------------------------------------------------------

@dataclass(frozen=True)
class RealGraph:
    """Cyclic sequence of real vertices; ``colors[i]`` joins vertex i to i+1.

    A graph without vertices is a single circle of ``colors[0]``.
    """

    vertices: tuple[str, ...]
    colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.colors) != max(len(self.vertices), 1):
            raise TrigonalError("one colour per edge of the real circle")
        if any(c not in COLORS for c in self.colors):
            raise TrigonalError("unknown edge colour")
        allowed = {"x": {"solid", "dotted"}, "o": {"dotted", "bold"}, "*": {"bold", "solid"}}
        for i, v in enumerate(self.vertices):
            if v not in allowed:
                raise TrigonalError(f"unknown vertex kind {v!r}")
            pair = {self.colors[i - 1], self.colors[i]}
            if not pair <= allowed[v]:
                raise TrigonalError(f"vertex {i} ({v}) meets a forbidden colour")
            if v != "o" and len(pair) != 2:
                raise TrigonalError(f"vertex {i} ({v}) needs one edge of each of its colours")
            if v == "o" and len(pair) != 1:
                raise TrigonalError(f"vertex {i} (o) sits inside a bold or a dotted run")

    def count(self, kind: str) -> int:
        return self.vertices.count(kind)

    def __str__(self) -> str:
        sym = {"x": "×", "o": "∘", "*": "•"}
        if not self.vertices:
            return f"({self.colors[0]} circle)"
        return "[" + ",".join(sym[v] for v in self.vertices) + "]"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "colors": list(self.colors)}

    @classmethod
    def from_json(cls, obj: dict) -> "RealGraph":
        try:
            verts = tuple(SYMBOLS[v] for v in obj["vertices"])
        except KeyError as exc:
            raise TrigonalError(f"unknown vertex symbol {exc}") from None
        return cls(verts, tuple(obj["colors"]))


def encode_real_graph(ls: TrigonalLScheme) -> RealGraph:
    """The real graph of an L-scheme.

    Between consecutive tangencies the sign of b3 changes exactly when their
    sides differ (up to the twist at infinity for odd n); such a gap gets a
    ``o`` vertex, flanked by ``*`` vertices when the gap is a one-point run.
    """
    tang = ls.tangencies
    gaps = ls.gaps()
    twist = ls.n % 2 == 1
    if not tang:
        kind = gaps[0]
        if not twist:
            return RealGraph((), ("solid" if kind == "one" else "dotted",))
        if kind == "one":
            return RealGraph(("*", "o", "*"), ("bold", "bold", "solid"))
        return RealGraph(("o",), ("dotted",))
    verts: list[str] = []
    colors: list[str] = []
    m = len(tang)
    for i, t in enumerate(tang):
        nxt = tang[(i + 1) % m]
        change = (t.side != nxt.side) ^ (twist and i == m - 1)
        verts.append("x")
        if gaps[i] == "one":
            if change:
                verts += ["*", "o", "*"]
                colors += ["solid", "bold", "bold", "solid"]
            else:
                colors.append("solid")
        else:
            if change:
                verts.append("o")
                colors += ["dotted", "dotted"]
            else:
                colors.append("dotted")
    return RealGraph(tuple(verts), tuple(colors))


# --- completions -------------------------------------------------------------------

@dataclass
class Completion:
    """Half of a real trigonal graph: the closed upper hemisphere.

    ``rotation[v]`` lists half-edges ``(edge, end)`` counter-clockwise (end 0
    is the tail).  For a real vertex the list starts with the real edge
    towards the next real vertex and ends with the real edge from the
    previous one; the lower half is the mirror image.
    """

    n: int
    kinds: dict[int, str]
    mono_color: dict[int, str]
    real: set[int]
    edges: dict[int, tuple[int, int, str, bool]]  # id -> (tail, head, colour, real)
    rotation: dict[int, list[tuple[int, int]]]
    real_cycle: list[int]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [
                {"id": v, "kind": k, "real": v in self.real, **({"color": self.mono_color[v]} if k == "m" else {})}
                for v, k in sorted(self.kinds.items())
            ],
            "edges": [
                {"id": e, "tail": t, "head": h, "color": c, "real": r}
                for e, (t, h, c, r) in sorted(self.edges.items())
            ],
            "rotation": {str(v): [list(h) for h in rot] for v, rot in sorted(self.rotation.items())},
            "real_cycle": list(self.real_cycle),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Completion":
        kinds = {int(v["id"]): v["kind"] for v in obj["vertices"]}
        return cls(
            n=int(obj["n"]),
            kinds=kinds,
            mono_color={int(v["id"]): v["color"] for v in obj["vertices"] if v["kind"] == "m"},
            real={int(v["id"]) for v in obj["vertices"] if v.get("real")},
            edges={int(e["id"]): (int(e["tail"]), int(e["head"]), e["color"], bool(e.get("real"))) for e in obj["edges"]},
            rotation={int(v): [tuple(h) for h in rot] for v, rot in obj["rotation"].items()},
            real_cycle=[int(v) for v in obj["real_cycle"]],
        )


# --- the checker ---------------------------------------------------------------------
# Works on the doubled sphere map and shares nothing with the searcher below.

def _sphere(c: Completion):
    """Double a hemisphere completion into a map on the whole sphere."""
    mirror_v = {v: (v if v in c.real else ("bar", v)) for v in c.kinds}
    edges = {}
    for e, (t, h, col, real) in c.edges.items():
        edges[e] = (t, h, col)
        if not real:
            edges[("bar", e)] = (mirror_v[t], mirror_v[h], col)
    kinds = {}
    for v, k in c.kinds.items():
        kinds[v] = k
        kinds[mirror_v[v]] = k
    mono = {}
    for v, col in c.mono_color.items():
        mono[v] = mono[mirror_v[v]] = col
    rot = {}
    for v, r in c.rotation.items():
        bar = [(("bar", e), end) for e, end in r]
        if v in c.real:
            inner = r[1:-1]
            rot[v] = list(r) + [(("bar", e), end) for e, end in reversed(inner)]
        else:
            rot[v] = list(r)
            rot[("bar", v)] = list(reversed(bar))
    return kinds, mono, edges, rot


def _faces(edges, rot):
    """Faces as lists of darts (edge, end) with end the starting half-edge."""
    pos = {}
    for v, r in rot.items():
        for i, he in enumerate(r):
            pos[he] = (v, i)
    seen, faces = set(), []
    for start in pos:
        if start in seen:
            continue
        face, he = [], start
        while he not in seen:
            seen.add(he)
            face.append(he)
            e, end = he
            other = (e, 1 - end)
            v, i = pos[other]
            he = rot[v][(i - 1) % len(rot[v])]
        faces.append(face)
    return faces


def is_valid_completion(c: Completion, n: int | None = None, real_graph: RealGraph | None = None) -> list[str]:
    """All violated conditions (empty list = valid)."""
    n = c.n if n is None else n
    bad: list[str] = []
    try:
        kinds, mono, edges, rot = _sphere(c)
    except (KeyError, TypeError, IndexError) as exc:
        return [f"structure: {exc}"]
    # structural consistency of the rotation system
    he_all = [(e, end) for e in edges for end in (0, 1)]
    listed = [he for r in rot.values() for he in r]
    if sorted(map(repr, listed)) != sorted(map(repr, he_all)):
        return ["structure: rotation system does not list every half-edge exactly once"]
    for v, r in rot.items():
        for e, end in r:
            if edges[e][end] != v:
                return [f"structure: half-edge {(e, end)} is not at vertex {v}"]
    incident = {v: [(e, end) for e, end in r] for v, r in rot.items()}

    # 1: the real circle
    cyc = c.real_cycle
    real_edges = {e for e, (_, _, _, r) in c.edges.items() if r}
    if set(cyc) != c.real or len(cyc) < 1:
        bad.append("1: real vertices and real cycle disagree")
    else:
        used = set()
        for i, v in enumerate(cyc):
            w = cyc[(i + 1) % len(cyc)]
            fwd = c.rotation[v][0][0]
            if fwd not in real_edges or {c.edges[fwd][0], c.edges[fwd][1]} != {v, w} or fwd in used:
                bad.append("1: real edges do not close up along the real cycle")
                break
            if c.rotation[w][-1][0] != fwd:
                bad.append("1: real edge is not the backward edge of the next real vertex")
                break
            used.add(fwd)
        if used != real_edges and not any(b.startswith("1") for b in bad):
            bad.append("1: stray real edges")
        if real_graph is not None and not any(b.startswith("1") for b in bad):
            seq = [(kinds[v], c.edges[c.rotation[v][0][0]][2]) for v in cyc]
            ess = _essential_word(seq)
            want = list(zip(real_graph.vertices, real_graph.colors)) if real_graph.vertices else []
            if not _cyclic_equal(ess, want) or (not want and any(k != "m" for k, _ in seq)):
                bad.append("1: intersection with the real line differs from the real graph")
            if not want and seq and seq[0][1] != real_graph.colors[0]:
                bad.append("1: real circle has the wrong colour")

    # 2 and 3: degrees
    totals = {"x": 0, "o": 0, "*": 0}
    for v, k in kinds.items():
        deg = len(incident[v])
        if deg % 2:
            bad.append(f"2: vertex {v} has odd degree {deg}")
        if k == "o" and deg % 4:
            bad.append(f"2: o-vertex {v} has degree {deg}, not a multiple of 4")
        if k == "*" and deg % 6:
            bad.append(f"2: *-vertex {v} has degree {deg}, not a multiple of 6")
        if k in totals:
            totals[k] += deg
    for k, t in totals.items():
        if t != 12 * n:
            bad.append(f"3: {k}-vertices have {t} incidences, expected {12 * n}")

    # 4: every region cut out by monochrome cycles holds an essential vertex
    faces = _faces(edges, rot)
    face_of = {he: i for i, f in enumerate(faces) for he in f}
    region = list(range(len(faces)))

    def find(x):
        while region[x] != x:
            region[x] = region[region[x]]
            x = region[x]
        return x

    for e, (t, h, _) in edges.items():
        if not (kinds[t] == "m" and kinds[h] == "m"):
            region[find(face_of[(e, 0)])] = find(face_of[(e, 1)])
    lit = {find(face_of[he]) for v, r in rot.items() if kinds[v] != "m" for he in r}
    if any(find(i) not in lit for i in range(len(faces))):
        bad.append("4: a monochrome cycle bounds a region without essential vertices")

    # 5: faces are coherently oriented
    for face in faces:
        forward = [end == 0 for _, end in face]
        if any(forward) and not all(forward):
            bad.append("5: a face boundary is not coherently oriented")
            break

    # 6-9: local colour/orientation rules
    rule = {"x": ("solid", "dotted"), "o": ("dotted", "bold"), "*": ("bold", "solid")}
    for v, k in kinds.items():
        hes = incident[v]
        cols = [edges[e][2] for e, _ in hes]
        ins = [end == 1 for _, end in hes]
        if k == "m":
            if len(set(cols)) > 1:
                bad.append(f"6: monochrome vertex {v} has edges of several colours")
            if mono.get(v) not in (None, cols[0] if cols else None):
                bad.append(f"6: monochrome vertex {v} colour label disagrees with its edges")
            continue
        cin, cout = rule[k]
        for col, is_in in zip(cols, ins):
            if (is_in and col != cin) or (not is_in and col != cout):
                num = {"x": 7, "o": 8, "*": 9}[k]
                bad.append(f"{num}: {k}-vertex {v} has a {'incoming' if is_in else 'outgoing'} {col} edge")
                break

    # connectivity and genus 0
    comp = {}

    def cfind(x):
        while comp.setdefault(x, x) != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for t, h, _ in edges.values():
        comp[cfind(t)] = cfind(h)
    if len({cfind(v) for v in kinds}) != 1:
        bad.append("structure: graph is not connected")
    elif len(kinds) - len(edges) + len(_faces(edges, rot)) != 2:
        bad.append("structure: rotation system is not planar")
    return bad


def _essential_word(seq):
    # collapse monochrome vertices: colour of the real edge leaving each essential vertex
    out = [(k, col) for k, col in seq if k != "m"]
    return out


def _cyclic_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    return any(a[i:] + a[:i] == b for i in range(len(a)))


# --- the searcher -----------------------------------------------------------------------

@dataclass(frozen=True)
class Found:
    completion: Completion
    nodes: int

    status = "Found"


@dataclass(frozen=True)
class NotCompletable:
    reason: str

    status = "NotCompletable"


@dataclass(frozen=True)
class Unknown:
    reason: str
    nodes: int = 0

    status = "Unknown"


# stub directions/colours around each kind, counter-clockwise, starting anywhere
_PATTERN = {
    "x": (("solid", 1), ("dotted", 0)),
    "o": (("dotted", 1), ("bold", 0)),
    "*": (("bold", 1), ("solid", 0)),
}  # 1 = incoming, 0 = outgoing


def _stub_after(kind: str, color: str, incoming: int, steps: int, mono_color: str | None = None):
    """Colour and direction ``steps`` positions counter-clockwise from a given half-edge."""
    inc = (incoming + steps) % 2
    if kind == "m":
        return mono_color, inc
    pat = _PATTERN[kind]
    return (pat[0][0] if inc else pat[1][0]), inc


class _Budget(Exception):
    pass


def _required(word, B):
    """Interior x and o counts forced by the stubs of a region holding B *-vertices."""
    d = {c: 0 for c in COLORS}
    for col, inc, _ in word:
        d[col] += -1 if inc else 1  # outgoing stubs need incoming partners
    X = d["solid"] + 3 * B
    twice_c = d["dotted"] + X
    if X < 0 or twice_c < 0 or twice_c % 2:
        return None
    return X, twice_c // 2


def _canon(word):
    if not word:
        return 0, ()
    best, shift = None, 0
    for i in range(len(word)):
        r = word[i:] + word[:i]
        if best is None or r < best:
            best, shift = r, i
    return shift, best


class _Searcher:
    def __init__(self, caps, node_limit, deadline):
        self.caps = caps  # (B, C, X)
        self.memo: dict = {}
        self.nodes = 0
        self.node_limit = node_limit
        self.deadline = deadline

    def feasible(self, word, B):
        """Plan for completing a region with exactly B interior *-vertices, or None."""
        shift, key = _canon(word)
        mk = (key, B)
        if mk in self.memo:
            return self.memo[mk], shift
        self.nodes += 1
        if self.nodes > self.node_limit or (self.nodes % 512 == 0 and time.monotonic() > self.deadline):
            raise _Budget()
        plan = self._solve(key, B)
        self.memo[mk] = plan
        return plan, shift

    def _solve(self, w, B):
        if not w:
            return ("empty",) if B == 0 else None
        req = _required(w, B)
        if req is None:
            return None
        X, C = req
        bB, bC, bX = self.caps
        if B > bB or C > bC or X > bX:
            return None
        col, inc, mono = w[0]
        # join the first stub with a compatible stub of the same region
        for j in range(1, len(w)):
            c2, i2, m2 = w[j]
            if c2 != col or i2 == inc or (mono and m2):
                continue
            left, right = w[1:j], w[j + 1:]
            for b1 in range(B + 1):
                if _required(left, b1) is None or _required(right, B - b1) is None:
                    continue
                p1, _ = self.feasible(left, b1)
                if p1 is None:
                    continue
                p2, _ = self.feasible(right, B - b1)
                if p2 is not None:
                    return ("join", j, b1)
        # or hang a new interior vertex on it
        for kind, cost in (("*", (1, 0, 0)), ("o", (0, 1, 0)), ("x", (0, 0, 1))):
            if (B, C, X)[0] < cost[0] or C < cost[1] or X < cost[2]:
                continue
            new = _new_stubs(kind, col, inc)
            if new is None:
                continue
            w2 = tuple(reversed(new)) + w[1:]
            plan, _ = self.feasible(w2, B - cost[0])
            if plan is not None:
                return ("attach", kind)
        return None


def _new_stubs(kind, col, inc):
    """Free stubs of a new vertex attached to a stub (col, inc), counter-clockwise
    after the attaching half-edge."""
    want_inc = 1 - inc
    pat = _PATTERN[kind]
    if (pat[0][0] if want_inc else pat[1][0]) != col:
        return None
    deg = {"x": 2, "o": 4, "*": 6}[kind]
    out = []
    for s in range(1, deg):
        c, i = _stub_after(kind, col, want_inc, s)
        out.append((c, i, False))
    return out


@dataclass
class _Half:
    vid: int
    slot: int
    color: str
    inc: int
    mono: bool

    @property
    def sig(self):
        return (self.color, self.inc, self.mono)


def _hemisphere(rg: RealGraph):
    """Real vertices with monochrome vertices inserted, their real edges, and the
    initial frontier of free stubs in travel order."""
    kinds: dict[int, str] = {}
    mono_color: dict[int, str] = {}
    cyc: list[int] = []
    colors: list[str] = []  # colour of the real edge leaving cyc[i]

    def add(kind, col=None):
        v = len(kinds)
        kinds[v] = kind
        if kind == "m":
            mono_color[v] = col
        cyc.append(v)
        return v

    if not rg.vertices:
        add("m", rg.colors[0]); colors.append(rg.colors[0])
        add("m", rg.colors[0]); colors.append(rg.colors[0])
    else:
        k = len(rg.vertices)
        for i, v in enumerate(rg.vertices):
            add(v)
            col = rg.colors[i]
            colors.append(col)
            if rg.vertices[(i + 1) % k] == v:
                add("m", col)
                colors.append(col)
    edges: dict[int, tuple[int, int, str, bool]] = {}
    m = len(cyc)
    for i in range(m):
        a, b, col = cyc[i], cyc[(i + 1) % m], colors[i]
        tail_kind, head_kind = ENDS[col]
        ka, kb = kinds[a], kinds[b]
        if ka == "m":
            forward = kb == head_kind if kb != "m" else i == 0
        else:
            forward = ka == tail_kind
        edges[i] = (a, b, col, True) if forward else (b, a, col, True)
    rotation: dict[int, list] = {}
    frontier: list[_Half] = []
    for i, v in enumerate(cyc):
        fwd, bwd = i, (i - 1) % m
        k = kinds[v]
        fwd_inc = 1 if edges[fwd][1] == v else 0
        bwd_inc = 1 if edges[bwd][1] == v else 0
        deg = {"x": 2, "o": 4, "*": 6, "m": 4}[k]
        if fwd_inc == bwd_inc and k in ("x", "*"):
            raise TrigonalError(f"real {k}-vertex with two edges of the same direction")
        if k in ("o", "m") and fwd_inc != bwd_inc:
            raise TrigonalError(f"real {k}-vertex between edges of opposite direction")
        ups = []
        for s in range(1, deg // 2):
            col, inc = _stub_after(k, edges[fwd][2], fwd_inc, s, mono_color.get(v))
            ups.append(_Half(v, s, col, inc, k == "m"))
        rotation[v] = [None] * (deg // 2 + 1)
        rotation[v][0] = (fwd, 0 if edges[fwd][0] == v else 1)
        rotation[v][-1] = (bwd, 0 if edges[bwd][0] == v else 1)
        frontier.extend(reversed(ups))
    return kinds, mono_color, cyc, edges, rotation, frontier


def search_completion(rg: RealGraph, n: int, budget_ms: float = 60_000, node_limit: int = 2_000_000):
    """Look for a completion of ``rg`` in degree ``n``.

    The search covers hemisphere completions in which every x, o and *
    vertex is generic (valency 2, 4, 6) and monochrome vertices occur only on
    the real line, one on each real edge joining two vertices of the same
    kind.  Counting arguments alone give ``NotCompletable``; running out of
    the restricted space gives ``Unknown``.
    """
    if n < 1:
        raise TrigonalError("n must be positive")
    rx, ro, rb = rg.count("x"), rg.count("o"), rg.count("*")
    if rx > 6 * n:
        return NotCompletable(f"{rx} real x-vertices need at least {2 * rx} > {12 * n} incidences")
    if ro > 3 * n or rb > 2 * n:
        return NotCompletable("too many real o- or *-vertices for degree n")
    if (6 * n - rx) % 2 or (3 * n - ro) % 2 or (2 * n - rb) % 2:
        return NotCompletable("real vertex counts have the wrong parity for a conjugation-invariant graph")
    caps = ((2 * n - rb) // 2, (3 * n - ro) // 2, (6 * n - rx) // 2)
    kinds, mono_color, cyc, edges, rotation, frontier = _hemisphere(rg)
    word = tuple(h.sig for h in frontier)
    req = _required(word, caps[0])
    if req != (caps[2], caps[1]):
        return NotCompletable("stub balance contradicts the incidence totals")
    s = _Searcher(caps, node_limit, time.monotonic() + budget_ms / 1000)
    try:
        plan, _ = s.feasible(word, caps[0])
    except _Budget:
        return Unknown("budget exhausted", s.nodes)
    if plan is None:
        return Unknown("no completion in the generic search space", s.nodes)
    comp = Completion(n, kinds, mono_color, set(cyc), edges, rotation, cyc)
    _build(s, comp, frontier, caps[0])
    return Found(comp, s.nodes)


def _build(s: _Searcher, comp: Completion, frontier: list[_Half], B: int):
    """Replay memoised plans, creating vertices and edges."""
    stack = [(frontier, B)]
    while stack:
        halves, b = stack.pop()
        plan, shift = s.feasible(tuple(h.sig for h in halves), b)
        halves = halves[shift:] + halves[:shift]
        if plan[0] == "empty":
            continue
        first = halves[0]
        if plan[0] == "join":
            j, b1 = plan[1], plan[2]
            _link(comp, first, halves[j])
            stack.append((halves[1:j], b1))
            stack.append((halves[j + 1:], b - b1))
        else:
            kind = plan[1]
            v = max(comp.kinds) + 1
            comp.kinds[v] = kind
            deg = {"x": 2, "o": 4, "*": 6}[kind]
            comp.rotation[v] = [None] * deg
            me = _Half(v, 0, first.color, 1 - first.inc, False)
            _link(comp, first, me)
            new = []
            for st in range(1, deg):
                col, inc = _stub_after(kind, first.color, 1 - first.inc, st)
                new.append(_Half(v, st, col, inc, False))
            stack.append((list(reversed(new)) + halves[1:], b - (kind == "*")))


def _link(comp: Completion, a: _Half, b: _Half):
    e = max(comp.edges) + 1 if comp.edges else 0
    tail, head = (a, b) if not a.inc else (b, a)
    comp.edges[e] = (tail.vid, head.vid, a.color, False)
    comp.rotation[tail.vid][tail.slot] = (e, 0)
    comp.rotation[head.vid][head.slot] = (e, 1)


# --- numeric tracing ------------------------------------------------------------------

@dataclass(frozen=True)
class TrigonalPolynomial:
    """c(x, y) = y^3 + b2(x) y + b3(x); coefficient lists in increasing degree."""

    n: int
    b2: tuple[float, ...]
    b3: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise TrigonalError("n must be positive")
        if len(self.b2) > 2 * self.n + 1 or len(self.b3) > 3 * self.n + 1:
            raise TrigonalError("b2 has degree at most 2n and b3 at most 3n")

    def discriminant(self) -> np.ndarray:
        # one real root iff positive
        d = 4 * P.polypow(np.asarray(self.b2, float), 3) + 27 * P.polypow(np.asarray(self.b3, float), 2)
        out = np.zeros(6 * self.n + 1)
        out[: len(d)] = d
        return out


def trace_trigonal_polynomial(p: TrigonalPolynomial, tol: float = 1e-9) -> TrigonalLScheme:
    """Read the L-scheme off the real roots of the discriminant.

    Double roots split at about sqrt(tol) under floating point, so roots
    closer than ``sqrt(tol)`` relative are reported as degenerate, as is a
    tangency at the fibre over infinity.
    """
    delta = p.discriminant()
    scale = np.max(np.abs(delta))
    if scale == 0:
        raise DegenerateDiscriminant("the discriminant vanishes identically")
    if abs(delta[-1]) <= tol * scale:
        raise DegenerateDiscriminant("tangency at the fibre over infinity")
    roots = P.polyroots(delta)
    sep = np.sqrt(tol)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) <= sep * max(1.0, abs(roots[i]), abs(roots[j])):
                raise DegenerateDiscriminant("discriminant has a multiple root")
    real = sorted(r.real for r in roots if abs(r.imag) <= sep * max(1.0, abs(r)))

    def kind_at(x):
        return "one" if P.polyval(x, delta) > 0 else "three"

    b3 = np.asarray(p.b3, float)
    word: list = []
    if not real:
        return TrigonalLScheme(p.n, (Run(kind_at(0.0)),))
    word.append(Run(kind_at(real[0] - 1.0)))
    for i, r in enumerate(real):
        v3 = P.polyval(r, b3)
        if abs(v3) <= tol * max(1.0, float(np.max(np.abs(b3))) if b3.size else 1.0):
            raise DegenerateDiscriminant("triple root of the cubic in a real fibre")
        word.append(Tangency("up" if v3 > 0 else "down"))
        nxt = real[i + 1] if i + 1 < len(real) else r + 2.0
        word.append(Run(kind_at((r + nxt) / 2)))
    return TrigonalLScheme(p.n, tuple(word))


def random_polynomial(n: int, rng: np.random.Generator) -> TrigonalPolynomial:
    return TrigonalPolynomial(n, tuple(rng.normal(size=2 * n + 1)), tuple(rng.normal(size=3 * n + 1)))


def load_lscheme(path) -> TrigonalLScheme:
    with open(path, encoding="utf-8") as fh:
        return TrigonalLScheme.from_json(json.load(fh))
