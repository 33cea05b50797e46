"""Real schemes: data model, notation grammar and nest combinatorics.

Notation (ASCII, whitespace ignored)::

    scheme   := [ rp2part "|" ] part ( ":" part )*
    rp2part  := "J" [ "+" forest ] | forest | "0"
    part     := forest | "0"
    forest   := term ( "+" term )*
    term     := INT | "<" forest ">" | "N(" INT "," ( forest | "0" ) ")"

``m`` is ``m`` sibling ovals, ``<S>`` an oval around ``S`` and ``N(h, S)``
``h`` ovals around ``S``.  The unicode forms ``⊔``, ``⟨`` and ``⟩`` are
accepted on input.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal

from . import trees as T

Surface = Literal["DP2", "DP1"]
EMPTY: T.Rooted = ()


class NotationError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


# --- forest printing --------------------------------------------------------

def forest_str(tree: T.Rooted) -> str:
    """Notation of the ovals hanging below a root region."""
    if not tree:
        return "0"
    leaves = sum(1 for c in tree if not c)
    nested = sorted(
        (("<" + forest_str(c) + ">", T.rooted_size(c)) for c in tree if c),
        key=lambda p: (p[1], p[0]),
    )
    terms = ([str(leaves)] if leaves else []) + [s for s, _ in nested]
    return "+".join(terms)


# --- sphere and projective plane arrangements --------------------------------

@dataclass(frozen=True, order=True)
class SphereArrangement:
    """Circles on S^2 up to homeomorphism, stored as the centroid rooting."""

    tree: T.Rooted = EMPTY

    @classmethod
    def from_forest(cls, forest: T.Rooted) -> "SphereArrangement":
        return cls.from_adjacency(T.from_rooted(T.normalize(forest)))

    @classmethod
    def from_adjacency(cls, adj: T.Adjacency) -> "SphereArrangement":
        return cls(T.centroid_rooting(adj))

    @functools.cached_property
    def adjacency(self) -> T.Adjacency:
        return T.from_rooted(self.tree)

    @property
    def ovals(self) -> int:
        return T.rooted_size(self.tree) - 1

    @property
    def code(self) -> str:
        return T.rooted_code(self.tree)

    def __str__(self) -> str:
        return min((forest_str(f) for f in rootings(self)), key=lambda s: (len(s), s))


@dataclass(frozen=True, order=True)
class Rp2Arrangement:
    """Ovals in RP^2 rooted at the non-orientable region, plus a J flag."""

    forest: T.Rooted = EMPTY
    pseudo_lines: int = 0

    def __post_init__(self):
        if self.pseudo_lines not in (0, 1):
            raise ValueError("at most one pseudo-line")
        object.__setattr__(self, "forest", T.normalize(self.forest))

    @property
    def ovals(self) -> int:
        return T.rooted_size(self.forest) - 1

    @property
    def components(self) -> int:
        return self.ovals + self.pseudo_lines

    @property
    def code(self) -> str:
        return ("J" if self.pseudo_lines else "") + T.rooted_code(self.forest)

    def __str__(self) -> str:
        body = forest_str(self.forest)
        if self.pseudo_lines:
            return "J" if body == "0" else "J+" + body
        return body


def _sphere_sort_key(a: SphereArrangement) -> tuple:
    return (-a.ovals, str(a))


@dataclass(frozen=True)
class Scheme:
    """A real scheme on a DP2 surface (k spheres) or a DP1 surface (RP^2 + k)."""

    surface: Surface
    spheres: tuple[SphereArrangement, ...]
    rp2: Rp2Arrangement | None = None

    def __post_init__(self):
        if self.surface == "DP2" and self.rp2 is not None:
            raise ValueError("a DP2 scheme has no RP^2 component")
        if self.surface == "DP1" and self.rp2 is None:
            object.__setattr__(self, "rp2", Rp2Arrangement())
        object.__setattr__(self, "spheres", tuple(sorted(self.spheres, key=_sphere_sort_key)))

    @property
    def k(self) -> int:
        return len(self.spheres)

    @property
    def ovals(self) -> int:
        return sum(a.ovals for a in self.spheres) + (self.rp2.ovals if self.rp2 else 0)

    @property
    def l(self) -> int:
        return self.ovals + (self.rp2.pseudo_lines if self.rp2 else 0)

    @property
    def code(self) -> str:
        body = ",".join(sorted(a.code for a in self.spheres))
        if self.surface == "DP1":
            return f"DP1/{self.k}/{self.rp2.code}/{body}"
        return f"DP2/{self.k}/{body}"

    def __str__(self) -> str:
        body = ":".join(str(a) for a in self.spheres)
        return f"{self.rp2}|{body}" if self.surface == "DP1" else body

    def __eq__(self, other):
        return isinstance(other, Scheme) and self.code == other.code

    def __hash__(self):
        return hash(self.code)


@dataclass(frozen=True)
class RefinedScheme:
    """A DP1 scheme with k = 4 remembering the positive and negative pair."""

    rp2: Rp2Arrangement
    positive: tuple[SphereArrangement, SphereArrangement]
    negative: tuple[SphereArrangement, SphereArrangement]

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple(sorted(self.positive, key=_sphere_sort_key)))
        object.__setattr__(self, "negative", tuple(sorted(self.negative, key=_sphere_sort_key)))

    @property
    def code(self) -> str:
        pos = ",".join(sorted(a.code for a in self.positive))
        neg = ",".join(sorted(a.code for a in self.negative))
        return f"DP1R/{self.rp2.code}/{pos}/{neg}"

    @property
    def l(self) -> int:
        return self.plain().l

    def plain(self) -> Scheme:
        return Scheme("DP1", self.positive + self.negative, self.rp2)

    def __str__(self) -> str:
        return f"{self.rp2}|" + ":".join(str(a) for a in self.positive + self.negative)

    def __eq__(self, other):
        return isinstance(other, RefinedScheme) and self.code == other.code

    def __hash__(self):
        return hash(self.code)


# --- parsing ----------------------------------------------------------------

_ALIASES = {"⊔": "+", "⟨": "<", "⟩": ">", "〈": "<", "〉": ">", "∪": "+"}


class _Parser:
    def __init__(self, text: str):
        self.chars = [(i, _ALIASES.get(c, c)) for i, c in enumerate(text) if not c.isspace()]
        self.pos = 0
        self.end = len(text)

    def peek(self) -> str:
        return self.chars[self.pos][1] if self.pos < len(self.chars) else ""

    def where(self) -> int:
        return self.chars[self.pos][0] if self.pos < len(self.chars) else self.end

    def expect(self, c: str):
        if self.peek() != c:
            got = self.peek() or "end of input"
            raise NotationError(f"expected {c!r}, got {got!r}", self.where())
        self.pos += 1

    def integer(self) -> int:
        start, digits = self.where(), ""
        while self.peek().isdigit():
            digits += self.peek()
            self.pos += 1
        if not digits:
            raise NotationError("expected an integer", start)
        return int(digits)

    def forest(self) -> list:
        # list of rooted trees (each an oval with its interior)
        if self.peek() == "0" and not self._digit_follows():
            self.pos += 1
            return []
        out = self.term()
        while self.peek() == "+":
            self.pos += 1
            if self.peek() == "J":
                raise NotationError("a pseudo-line must come first", self.where())
            out += self.term()
        return out

    def _digit_follows(self) -> bool:
        nxt = self.chars[self.pos + 1][1] if self.pos + 1 < len(self.chars) else ""
        return nxt.isdigit()

    def term(self) -> list:
        c = self.peek()
        if c.isdigit():
            start = self.where()
            m = self.integer()
            if m == 0:
                raise NotationError("0 cannot be combined with other ovals", start)
            return [()] * m
        if c == "<":
            self.pos += 1
            start = self.where()
            inner = self.forest()
            if not inner:
                raise NotationError("<...> needs a non-empty interior", start)
            self.expect(">")
            return [tuple(inner)]
        if c == "N":
            self.pos += 1
            self.expect("(")
            h = self.integer()
            self.expect(",")
            inner = self.forest()
            self.expect(")")
            # N(0, 0) contributes nothing, so templates may leave h at zero
            for _ in range(h):
                inner = [tuple(inner)]
            return inner
        if c == "J":
            raise NotationError("pseudo-line outside the RP^2 part", self.where())
        raise NotationError(f"unexpected {c or 'end of input'!r}", self.where())

    def rp2(self) -> Rp2Arrangement:
        j = 0
        if self.peek() == "J":
            self.pos += 1
            j = 1
            if self.peek() == "+":
                self.pos += 1
                if self.peek() == "J":
                    raise NotationError("more than one pseudo-line", self.where())
                return Rp2Arrangement(tuple(self.forest()), j)
            return Rp2Arrangement((), j)
        return Rp2Arrangement(tuple(self.forest()), 0)

    def parts(self) -> list:
        out = [self.forest()]
        while self.peek() == ":":
            self.pos += 1
            out.append(self.forest())
        return out

    def done(self):
        if self.pos != len(self.chars):
            raise NotationError(f"unexpected {self.peek()!r}", self.where())


def _split(text: str) -> tuple[Rp2Arrangement | None, list]:
    p = _Parser(text)
    if "|" in text:
        rp2 = p.rp2()
        p.expect("|")
        parts = [] if p.pos == len(p.chars) else p.parts()
    else:
        if "J" in text:
            raise NotationError("pseudo-line in a DP2 scheme", text.index("J"))
        rp2, parts = None, p.parts()
    p.done()
    return rp2, parts


def parse(text: str, surface: Surface | None = None, k: int | None = None) -> Scheme:
    """Parse a scheme; ``k`` pads the sphere list with empty spheres."""
    rp2, parts = _split(text)
    if surface is None:
        surface = "DP1" if rp2 is not None else "DP2"
    if surface == "DP2" and rp2 is not None:
        raise NotationError("an RP^2 part is not allowed in a DP2 scheme")
    if surface == "DP1" and rp2 is None:
        raise NotationError("a DP1 scheme needs an RP^2 part before '|'")
    spheres = [SphereArrangement.from_forest(tuple(f)) for f in parts]
    if k is not None:
        extra = [a for a in spheres[k:] if a.ovals]
        if extra:
            raise NotationError(f"scheme has more than k={k} non-empty spheres")
        spheres = spheres[:k] + [SphereArrangement()] * (k - len(spheres[:k]))
    return Scheme(surface, tuple(spheres), rp2)


def parse_refined(text: str) -> RefinedScheme:
    """Parse ``T|S1:S2:S3:S4`` with S1, S2 positive and S3, S4 negative."""
    rp2, parts = _split(text)
    if rp2 is None:
        raise NotationError("a refined scheme needs an RP^2 part before '|'")
    if len(parts) > 4:
        raise NotationError("a refined scheme has exactly four spheres")
    parts = parts + [[]] * (4 - len(parts))
    sph = [SphereArrangement.from_forest(tuple(f)) for f in parts]
    return RefinedScheme(rp2, (sph[0], sph[1]), (sph[2], sph[3]))


def parse_sphere(text: str) -> SphereArrangement:
    p = _Parser(text)
    forest = p.forest()
    p.done()
    return SphereArrangement.from_forest(tuple(forest))


def print_canonical(x) -> str:
    return str(x)


def canonical_code(x) -> str:
    return x.code


# --- rootings and mirrors -----------------------------------------------------

def rootings(a: SphereArrangement) -> set[T.Rooted]:
    """One rooted forest per base region, duplicates merged."""
    adj = a.adjacency
    return {T.root_at(adj, v) for v in range(len(adj))}


def has_mirror(a: SphereArrangement) -> bool:
    """Whether some representative reads S' + S' + T with S' non-empty."""
    for forest in rootings(a):
        if any(n >= 2 for n in _multiplicities(forest)):
            return True
    return False


def _multiplicities(forest: T.Rooted) -> Iterable[int]:
    return (len(list(g)) for _, g in itertools.groupby(forest))


# --- nests --------------------------------------------------------------------

Edge = tuple[int, int]


@dataclass(frozen=True)
class Nest:
    """A chain of ovals.  On S^2 the ovals are edges of the region tree lying
    on one path; on RP^2 they are vertices of the rooted forest ordered by
    inclusion (outermost first)."""

    ovals: tuple
    ends: tuple = field(default=(), compare=False)

    @property
    def depth(self) -> int:
        return len(self.ovals)


def sphere_nests(a: SphereArrangement, contiguous: bool = True) -> list[Nest]:
    """Nests of a sphere arrangement.

    Every collection of ovals lying on one path of the region tree is a nest.
    With ``contiguous`` only unbroken sub-paths are returned; these realise
    every maximum used by the obstructions.
    """
    adj = a.adjacency
    seen: dict[frozenset, Nest] = {}
    for path in T.iter_paths(adj):
        if contiguous:
            subsets = [path]
        else:
            subsets = [
                tuple(path[i] for i in idx)
                for r in range(1, len(path) + 1)
                for idx in itertools.combinations(range(len(path)), r)
            ]
        for sub in subsets:
            key = frozenset(sub)
            if key not in seen:
                seen[key] = Nest(tuple(sorted(sub)), _path_ends(adj, sub))
    return sorted(seen.values(), key=lambda n: (-n.depth, n.ovals))


def _path_ends(adj, edges_: Iterable[Edge]) -> tuple[int, int]:
    deg: dict[int, int] = {}
    for a, b in edges_:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    # endpoints of the hull path: vertices of degree 1 in the hull
    verts = set(deg)
    hull = _hull(adj, verts)
    hdeg: dict[int, int] = {}
    for a, b in hull:
        hdeg[a] = hdeg.get(a, 0) + 1
        hdeg[b] = hdeg.get(b, 0) + 1
    ends = sorted(v for v, d in hdeg.items() if d == 1)
    return (ends[0], ends[-1])


def _hull(adj, verts: set[int]) -> set[Edge]:
    # smallest subtree containing verts, for vertices on one path: the path
    verts = sorted(verts)
    if len(verts) == 1:
        return set()
    best = None
    for u, v in itertools.combinations(verts, 2):
        p = _tree_path(adj, u, v)
        if best is None or len(p) > len(best):
            best = p
    return set(best)


def _tree_path(adj, u: int, v: int) -> list[Edge]:
    parent = {u: None}
    order = [u]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    out, x = [], v
    while parent[x] is not None:
        out.append((min(x, parent[x]), max(x, parent[x])))
        x = parent[x]
    return out


def rp2_nests(r: Rp2Arrangement) -> list[Nest]:
    """Chains of pairwise injective ovals in RP^2 (contiguous chains)."""
    adj = T.from_rooted(r.forest)
    parent = {0: None}
    order = [0]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    out = []
    for v in order[1:]:
        chain = [v]
        x = parent[v]
        out.append(Nest((v,), (v, v)))
        while x:
            chain.append(x)
            out.append(Nest(tuple(reversed(chain)), (x, v)))
            x = parent[x]
    return sorted(out, key=lambda n: (-n.depth, n.ovals))


def rp2_ancestors(r: Rp2Arrangement) -> dict[int, set[int]]:
    adj = T.from_rooted(r.forest)
    anc: dict[int, set[int]] = {0: set()}
    order = [0]
    for x in order:
        for y in adj[x]:
            if y not in anc:
                anc[y] = anc[x] | ({x} if x else set())
                order.append(y)
    return anc


def rp2_disjoint(r: Rp2Arrangement, n1: Nest, n2: Nest) -> bool:
    anc = rp2_ancestors(r)
    return all(a not in anc[b] and b not in anc[a] and a != b for a in n1.ovals for b in n2.ovals)


def nests(a) -> list[Nest]:
    """All nests (maximal chains and their sub-chains)."""
    if isinstance(a, Rp2Arrangement):
        return rp2_nests(a)
    return sphere_nests(a, contiguous=False)


# --- disjoint selections on S^2 -----------------------------------------------

Rule = Literal["each", "common"]


def _components_without(adj, removed: set[Edge]) -> list[int]:
    comp = [-1] * len(adj)
    cid = 0
    for s in range(len(adj)):
        if comp[s] >= 0:
            continue
        comp[s] = cid
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if comp[y] < 0 and (min(x, y), max(x, y)) not in removed:
                    comp[y] = cid
                    stack.append(y)
        cid += 1
    return comp


def end_side(adj, nest: Nest, other: Nest) -> int | None:
    """Which end disk of ``nest`` contains ``other`` (0 or 1), or None.

    The two end disks of a nest are the regions beyond its outermost and
    innermost ovals; everything else in the complement is an annulus.
    """
    if set(nest.ovals) & set(other.ovals):
        return None
    comp = _components_without(adj, set(nest.ovals))
    e0, e1 = nest.ends
    verts = {v for e in other.ovals for v in e}
    sides = {comp[v] for v in verts}
    if len(sides) != 1:
        return None
    (c,) = sides
    if c == comp[e0]:
        return 0
    if c == comp[e1]:
        return 1
    return None


def is_disjoint_family(a: SphereArrangement, family: Iterable[Nest], rule: Rule = "each") -> bool:
    """Disjointness of nests on S^2.

    ``common``: for every nest one end disk holds all the others (the
    definition read literally).  ``each``: every other nest lies in some end
    disk, not necessarily the same one.
    """
    family = list(family)
    adj = a.adjacency
    for i, n in enumerate(family):
        sides = set()
        for j, m in enumerate(family):
            if i == j:
                continue
            s = end_side(adj, n, m)
            if s is None:
                return False
            sides.add(s)
        if rule == "common" and len(sides) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def _compat_tables(a: SphereArrangement):
    ns = sphere_nests(a)
    adj = a.adjacency
    side = {}
    for i, n in enumerate(ns):
        for j, m in enumerate(ns):
            if i != j:
                side[i, j] = end_side(adj, n, m)
    return ns, side


def _families(a: SphereArrangement, r: int, rule: Rule, pair_rule: str = "end-disk"):
    """Yield index tuples of admissible r-families over contiguous nests."""
    ns, side = _compat_tables(a)
    n = len(ns)
    if r == 1:
        for i in range(n):
            yield (i,)
        return
    if r == 2 and pair_rule == "edge-disjoint":
        for i, j in itertools.combinations(range(n), 2):
            if not set(ns[i].ovals) & set(ns[j].ovals):
                yield (i, j)
        return

    def ok(chosen, j):
        for i in chosen:
            if side[i, j] is None or side[j, i] is None:
                return False
        if rule == "common":
            for i in chosen + (j,):
                got = {side[i, x] for x in chosen + (j,) if x != i}
                if len(got) > 1:
                    return False
        return True

    def rec(start, chosen):
        if len(chosen) == r:
            yield chosen
            return
        for j in range(start, n):
            if ok(chosen, j):
                yield from rec(j + 1, chosen + (j,))

    yield from rec(0, ())


def disjoint_nest_selections(
    a: SphereArrangement, r: int, rule: Rule = "each", pair_rule: str = "end-disk"
) -> list[tuple[Nest, ...]]:
    """All r-families of pairwise disjoint contiguous nests, deepest first."""
    if r < 1:
        raise ValueError("r must be at least 1")
    ns, _ = _compat_tables(a)
    out = [tuple(ns[i] for i in fam) for fam in _families(a, r, rule, pair_rule)]
    return sorted(out, key=lambda f: -sum(x.depth for x in f))


@functools.lru_cache(maxsize=None)
def best_selection(a: SphereArrangement, r: int, rule: Rule = "each") -> tuple[Nest, ...] | None:
    """A disjoint r-family of maximal total depth (None if there is none).

    Branch and bound over nests sorted by depth, using the pairwise end-disk
    table; the total depth is bounded by the oval count.
    """
    if r < 1 or a.ovals < r:
        return None
    ns, side = _compat_tables(a)
    n = len(ns)
    depth = [x.depth for x in ns]
    cap = a.ovals
    best: list = [0, None]

    def ok(chosen, j):
        for i in chosen:
            if side[i, j] is None or side[j, i] is None:
                return False
        if rule == "common":
            for i in chosen + (j,):
                got = {side[i, x] for x in chosen + (j,) if x != i}
                if len(got) > 1:
                    return False
        return True

    def rec(start, chosen, total):
        if len(chosen) == r:
            if total > best[0]:
                best[0], best[1] = total, chosen
            return
        need = r - len(chosen)
        for j in range(start, n):
            # nests are sorted by depth, so depth[j] bounds every later pick
            if total + depth[j] * need <= best[0] or best[0] >= cap:
                return
            if ok(chosen, j):
                rec(j + 1, chosen + (j,), total + depth[j])

    rec(0, (), 0)
    if best[1] is None:
        return None
    return tuple(ns[i] for i in best[1])


def best_depth(a: SphereArrangement, r: int, rule: Rule = "each") -> int:
    sel = best_selection(a, r, rule)
    return sum(x.depth for x in sel) if sel else 0


def edge_disjoint_best(a: SphereArrangement, r: int) -> tuple[Nest, ...] | None:
    """Deepest r nests sharing no oval, with no further condition."""
    ns, _ = _compat_tables(a)
    best, arg = 0, None
    for combo in itertools.combinations(range(len(ns)), r):
        used = [e for i in combo for e in ns[i].ovals]
        if len(used) == len(set(used)) and len(used) > best:
            best, arg = len(used), combo
    return None if arg is None else tuple(ns[i] for i in arg)


def diameter(a: SphereArrangement) -> int:
    """Depth of the deepest nest: the diameter of the region tree (double BFS)."""
    adj = a.adjacency

    def farthest(src):
        dist = {src: 0}
        queue = [src]
        for x in queue:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        far = max(dist, key=dist.get)
        return far, dist[far]

    return farthest(farthest(0)[0])[1]


# --- statistics -------------------------------------------------------------

@dataclass(frozen=True)
class ComponentStats:
    l: int
    t: int
    t_spheres: int
    per_component: tuple[int, ...]
    pseudo_lines: int


def component_stats(s: Scheme) -> ComponentStats:
    counts = [a.ovals for a in s.spheres]
    j = 0
    if s.rp2 is not None:
        counts = [s.rp2.components] + counts
        j = s.rp2.pseudo_lines
    t_sph = sum(1 for a in s.spheres if a.ovals)
    return ComponentStats(
        l=sum(counts),
        t=sum(1 for c in counts if c),
        t_spheres=t_sph,
        per_component=tuple(counts),
        pseudo_lines=j,
    )
