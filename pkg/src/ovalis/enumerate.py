"""Exhaustive generation of schemes, one per canonical code."""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterator

from . import trees as T
from .obstructions import DEFAULT_KNOBS, Knobs, dp1_verdict, dp2_verdict, refined_verdict
from .scheme import RefinedScheme, Rp2Arrangement, Scheme, SphereArrangement


@functools.lru_cache(maxsize=None)
def sphere_classes(l: int) -> tuple[SphereArrangement, ...]:
    """Arrangements of ``l`` circles on S^2, one per homeomorphism class."""
    return tuple(sorted(SphereArrangement.from_adjacency(a) for a in T.free_trees(l + 1)))


@functools.lru_cache(maxsize=None)
def rp2_classes(m: int) -> tuple[T.Rooted, ...]:
    """Arrangements of ``m`` ovals in RP^2 (rooted forests)."""
    return T.rooted_trees(m + 1)


def _partitions(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    # non-increasing tuples of length `parts` summing to total
    cap = total if cap is None else cap
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def sphere_multisets(k: int, total: int) -> Iterator[tuple[SphereArrangement, ...]]:
    """Multisets of ``k`` sphere arrangements with ``total`` circles."""
    for sizes in _partitions(total, k):
        groups = [(size, len(list(g))) for size, g in itertools.groupby(sizes)]
        choices = [
            itertools.combinations_with_replacement(sphere_classes(size), n)
            for size, n in groups
        ]
        for pick in itertools.product(*(list(c) for c in choices)):
            yield tuple(a for group in pick for a in group)


def _oval_range(d: int, ovals: int | None, hi: int) -> range:
    if ovals is not None:
        return range(ovals, ovals + 1)
    return range(0, hi + 1)


def dp2_schemes(k: int, d: int, ovals: int | None = None) -> Iterator[Scheme]:
    """Schemes on k spheres in class d (at most d(d-1)+2 ovals)."""
    for total in _oval_range(d, ovals, d * (d - 1) + 2):
        for spheres in sphere_multisets(k, total):
            yield Scheme("DP2", spheres)


def dp2_admissible(k: int, d: int, ovals: int | None = None,
                   knobs: Knobs = DEFAULT_KNOBS) -> list[Scheme]:
    return [s for s in dp2_schemes(k, d, ovals) if not dp2_verdict(s, k, d, knobs).prohibited]


def _rp2_parts(m: int, pseudo: tuple[int, ...]) -> Iterator[Rp2Arrangement]:
    for j in pseudo:
        for forest in rp2_classes(m):
            yield Rp2Arrangement(forest, j)


def dp1_schemes(k: int, d: int, ovals: int | None = None) -> Iterator[Scheme]:
    """Schemes on RP^2 plus k spheres in class d.

    Both pseudo-line counts are generated; ``ovals`` fixes the total number
    of components l (pseudo-line included).
    """
    hi = d * (d - 1) // 2 + 2
    for l in _oval_range(d, ovals, hi):
        for j in (0, 1):
            for m in range(l - j + 1):
                for rp2 in _rp2_parts(m, (j,)):
                    for spheres in sphere_multisets(k, l - j - m):
                        yield Scheme("DP1", spheres, rp2)


def dp1_admissible(k: int, d: int, ovals: int | None = None) -> list[Scheme]:
    return [s for s in dp1_schemes(k, d, ovals) if not dp1_verdict(s, k, d).prohibited]


def _pairs(total: int) -> Iterator[tuple[SphereArrangement, SphereArrangement]]:
    yield from sphere_multisets(2, total)


def refined_schemes(d: int, ovals: int | None = None) -> Iterator[RefinedScheme]:
    """Refined schemes (k = 4) in class d."""
    hi = d * (d - 1) // 2 + 2
    for l in _oval_range(d, ovals, hi):
        for j in (0, 1):
            for m in range(l - j + 1):
                for rp2 in _rp2_parts(m, (j,)):
                    rest = l - j - m
                    for p in range(rest + 1):
                        for pos in _pairs(p):
                            for neg in _pairs(rest - p):
                                yield RefinedScheme(rp2, pos, neg)


def refined_admissible(d: int, ovals: int | None = None) -> list[RefinedScheme]:
    return [r for r in refined_schemes(d, ovals) if not refined_verdict(r, d).prohibited]


def knob_differences(k: int, d: int, ovals: int | None = None,
                     knobs: Knobs = DEFAULT_KNOBS) -> dict[str, dict[str, list[str]]]:
    """For every single-knob flip, the schemes whose verdict changes.

    Returns ``{knob: {"newly_prohibited": [...], "newly_admissible": [...]}}``.
    """
    base = {s.code: s for s in dp2_admissible(k, d, ovals, knobs)}
    out = {}
    for name, flipped in knobs.flips().items():
        other = {s.code: s for s in dp2_admissible(k, d, ovals, flipped)}
        out[name] = {
            "newly_prohibited": sorted(str(base[c]) for c in base.keys() - other.keys()),
            "newly_admissible": sorted(str(other[c]) for c in other.keys() - base.keys()),
        }
    return out
