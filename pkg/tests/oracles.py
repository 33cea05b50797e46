"""Brute-force reference implementations.

Nothing here imports the package's own tree or face code: trees are parent
lists with their own canonical strings, circle counts come from union-find,
and plane-pair doublings are built from a face tree chosen first.
"""

from __future__ import annotations

import random
from functools import lru_cache


# --- trees as parent lists -------------------------------------------------------

def _children(parent: tuple[int, ...]) -> list[list[int]]:
    ch = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            ch[p].append(v)
    return ch


def _canon(adj: list[list[int]], v: int, up: int) -> str:
    return "[" + "".join(sorted(_canon(adj, w, v) for w in adj[v] if w != up)) + "]"


def _adj(parent: tuple[int, ...]) -> list[list[int]]:
    adj = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            adj[v].append(p)
            adj[p].append(v)
    return adj


@lru_cache(maxsize=None)
def rooted_shapes(n: int) -> frozenset[str]:
    """Rooted trees on n vertices, grown one leaf at a time."""
    if n == 1:
        return frozenset({"[]"})
    out = set()
    for parent in _labelled(n - 1):
        for v in range(n - 1):
            grown = parent + (v,)
            out.add(_canon(_adj(grown), 0, -1))
    return frozenset(out)


@lru_cache(maxsize=None)
def _labelled(n: int) -> tuple[tuple[int, ...], ...]:
    """One labelled parent list per rooted shape on n vertices."""
    if n == 1:
        return ((-1,),)
    seen, out = set(), []
    for parent in _labelled(n - 1):
        for v in range(n - 1):
            grown = parent + (v,)
            key = _canon(_adj(grown), 0, -1)
            if key not in seen:
                seen.add(key)
                out.append(grown)
    return tuple(out)


def free_tree_count(n: int) -> int:
    """Unlabelled trees on n vertices: rooted shapes modulo rerooting."""
    classes = set()
    for parent in _labelled(n):
        adj = _adj(parent)
        classes.add(min(_canon(adj, r, -1) for r in range(n)))
    return len(classes)


def multisets_by_size(counts: list[int], k: int, total: int) -> int:
    """Multisets of exactly k objects of total weight ``total`` when there are
    counts[m] distinct objects of weight m (weight-0 objects included)."""
    # dp[j][w]: multisets of j objects, weight w, using the weights handled so far
    dp = [[0] * (total + 1) for _ in range(k + 1)]
    dp[0][0] = 1
    for m, c in enumerate(counts):
        if c == 0:
            continue
        new = [row[:] for row in dp]
        for j in range(k + 1):
            for w in range(total + 1):
                if not dp[j][w]:
                    continue
                # add r >= 1 more objects of weight m: C(c + r - 1, r) ways
                r, ways = 1, c
                while j + r <= k and w + r * m <= total:
                    new[j + r][w + r * m] += dp[j][w] * ways
                    ways = ways * (c + r) // (r + 1)
                    r += 1
        dp = new
    return dp[k][total]


# --- chord diagrams --------------------------------------------------------------

def random_noncrossing(points: int, rng: random.Random) -> list[tuple[int, int]]:
    """A random non-crossing perfect matching of 0..points-1 via a Dyck word."""
    half = points // 2
    while True:
        word = [1] * half + [-1] * half
        rng.shuffle(word)
        h, ok = 0, True
        for x in word:
            h += x
            if h < 0:
                ok = False
                break
        if ok:
            break
    stack, pairs = [], []
    for i, x in enumerate(word):
        if x == 1:
            stack.append(i)
        else:
            pairs.append((stack.pop(), i))
    shift = rng.randrange(max(points, 1))
    return [((a + shift) % points, (b + shift) % points) for a, b in pairs]


def circle_count(m1, m2) -> int:
    """Circles formed by two matchings on the same points: union-find components."""
    parent: dict[int, int] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in list(m1) + list(m2):
        parent[find(a)] = find(b)
    return len({find(x) for x in parent})


# --- plane pairs from a face tree --------------------------------------------------

def random_face_tree(rng: random.Random, chords: int, forests) -> tuple:
    """A random plane tree of faces.  Node = (forest, [children]); the edge to
    each child is one chord."""
    nodes = [[rng.choice(forests), []]]
    for _ in range(chords):
        parent = rng.choice(nodes)
        child = [rng.choice(forests), []]
        parent[1].insert(rng.randrange(len(parent[1]) + 1), child)
        nodes.append(child)
    return nodes[0]


def chord_walk(root) -> tuple[int, list[tuple[int, int]], list[tuple[int, object]]]:
    """Contour walk of a face tree: boundary points, chords and, for every face,
    one boundary segment inside it (segment s lies between points s and s+1)."""
    points: list = []
    chords, ovals = [], []

    def visit(node):
        for child in node[1]:
            a = len(points)
            points.append(a)
            ovals.append((a, child[0]))  # segment right after entering the child face
            visit(child)
            b = len(points)
            points.append(b)
            chords.append((a, b))

    visit(root)
    n = len(points)
    ovals.insert(0, ((n - 1) if n else 0, root[0]))
    return n, chords, ovals


def doubled_region_tree(root) -> tuple:
    """Rooted region tree of the doubled disk: faces are regions, chords become
    circles, each face forest appears twice.  Same nested-tuple format as the
    package's rooted trees (children only)."""

    def build(node):
        kids = [build(c) for c in node[1]]
        kids += list(node[0]) * 2
        return tuple(kids)

    return build(root)
