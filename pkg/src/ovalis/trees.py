"""Region trees of circle arrangements on the sphere.

A collection of ``l`` disjoint circles on S^2 cuts the sphere into ``l + 1``
regions.  Joining two regions whenever they share a circle gives a tree, and
two arrangements are homeomorphic exactly when their trees are isomorphic.

Rooted trees are stored as sorted tuples of children, so a rooted tree is its
own canonical form.  Unrooted trees are stored as adjacency tuples and
compared through :func:`tree_code`, an AHU code taken at the centroid.
"""

from __future__ import annotations

import functools
from collections.abc import Iterator

Rooted = tuple  # nested tuples; () is a leaf
Adjacency = tuple  # adj[v] is a tuple of neighbours of vertex v


def rooted_code(tree: Rooted) -> str:
    """AHU string of a rooted tree, e.g. ``'(()())'`` for a cherry."""
    return "(" + "".join(sorted(rooted_code(c) for c in tree)) + ")"


@functools.lru_cache(maxsize=None)
def _key(tree: Rooted) -> tuple:
    return (rooted_size(tree), rooted_code(tree))


def normalize(tree: Rooted) -> Rooted:
    """Sort children recursively so equal rooted trees compare equal."""
    return tuple(sorted((normalize(c) for c in tree), key=_key))


@functools.lru_cache(maxsize=None)
def rooted_size(tree: Rooted) -> int:
    return 1 + sum(rooted_size(c) for c in tree)


def rooted_height(tree: Rooted) -> int:
    return 1 + max((rooted_height(c) for c in tree), default=-1)


# --- adjacency helpers -----------------------------------------------------

def from_rooted(tree: Rooted) -> Adjacency:
    """Adjacency of a rooted tree with the root as vertex 0."""
    adj: list[list[int]] = [[]]

    def walk(node, v):
        for child in node:
            w = len(adj)
            adj.append([v])
            adj[v].append(w)
            walk(child, w)

    walk(tree, 0)
    return tuple(tuple(n) for n in adj)


def root_at(adj: Adjacency, v: int) -> Rooted:
    def walk(x, parent):
        return tuple(walk(y, x) for y in adj[x] if y != parent)

    return normalize(walk(v, None))


def edges(adj: Adjacency) -> list[tuple[int, int]]:
    return [(a, b) for a in range(len(adj)) for b in adj[a] if a < b]


def centroids(adj: Adjacency) -> list[int]:
    n = len(adj)
    if n == 1:
        return [0]
    order, parent = [0], {0: None}
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    size = [1] * n
    for x in reversed(order):
        if parent[x] is not None:
            size[parent[x]] += size[x]
    best, found = n, []
    for x in range(n):
        heaviest = n - size[x]
        for y in adj[x]:
            if y != parent[x]:
                heaviest = max(heaviest, size[y])
        if heaviest < best:
            best, found = heaviest, [x]
        elif heaviest == best:
            found.append(x)
    return found


def tree_code(adj: Adjacency) -> str:
    """Canonical code of an unrooted tree (rooted AHU code at the centroid).

    With two centroids the smaller of the two rooted codes is kept.
    """
    return min(rooted_code(root_at(adj, c)) for c in centroids(adj))


def centroid_rooting(adj: Adjacency) -> Rooted:
    return min((root_at(adj, c) for c in centroids(adj)), key=rooted_code)


# --- enumeration -----------------------------------------------------------

@functools.lru_cache(maxsize=None)
def rooted_trees(n: int) -> tuple[Rooted, ...]:
    """All rooted trees with ``n`` vertices, in canonical form."""
    if n < 1:
        return ()
    return tuple(forests(n - 1))


@functools.lru_cache(maxsize=None)
def _forests_bounded(n: int, max_part: int) -> tuple[Rooted, ...]:
    # forests of n vertices whose trees have size <= max_part
    if n == 0:
        return ((),)
    out = []
    for size in range(min(n, max_part), 0, -1):
        trees = rooted_trees(size)
        for i, t in enumerate(trees):
            for rest in _forests_with_first(n - size, size, i):
                out.append(normalize((t,) + rest))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _forests_with_first(n: int, size: int, index: int) -> tuple[Rooted, ...]:
    # remaining trees are (size, index)-lexicographically no larger
    if n == 0:
        return ((),)
    out = []
    for s in range(min(n, size), 0, -1):
        trees = rooted_trees(s)
        top = index if s == size else len(trees) - 1
        for i in range(top + 1):
            for rest in _forests_with_first(n - s, s, i):
                out.append((trees[i],) + rest)
    return tuple(out)


def forests(n: int, max_part: int | None = None) -> tuple[Rooted, ...]:
    """All multisets of rooted trees with ``n`` vertices in total."""
    return _forests_bounded(n, n if max_part is None else max_part)


@functools.lru_cache(maxsize=None)
def free_trees(n: int) -> tuple[Adjacency, ...]:
    """One adjacency per isomorphism class of trees on ``n`` vertices.

    Trees are built from their centroid: a unicentroidal tree is a root whose
    branches all have fewer than n/2 vertices; a bicentroidal tree is an
    unordered pair of rooted trees with n/2 vertices each.
    """
    if n < 1:
        return ()
    out = [from_rooted(f) for f in forests(n - 1, (n - 1) // 2)]
    if n % 2 == 0:
        half = rooted_trees(n // 2)
        for i, a in enumerate(half):
            for b in half[i:]:
                out.append(_join(a, b))
    return tuple(out)


def _join(a: Rooted, b: Rooted) -> Adjacency:
    # root of a adjacent to root of b
    return from_rooted(normalize(a + (b,)))


def iter_paths(adj: Adjacency) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every path with at least one edge, as a tuple of sorted edges."""
    n = len(adj)
    for u in range(n):
        parent = {u: None}
        order = [u]
        for x in order:
            for y in adj[x]:
                if y not in parent:
                    parent[y] = x
                    order.append(y)
        for v in order[1:]:
            if v < u:
                continue
            path, x = [], v
            while parent[x] is not None:
                path.append((min(x, parent[x]), max(x, parent[x])))
                x = parent[x]
            yield tuple(reversed(path))
