"""
BadicDim - finite-scale Assouad and lower dimensions on b-adic cube trees

Copyright (C) 2026  The BadicDim developers

This program is free software: you can redistribute it and/or modify
it under the terms of the GNU General Public License as published by
the Free Software Foundation, either version 3 of the License, or
(at your option) any later version.

This program is distributed in the hope that it will be useful,
but WITHOUT ANY WARRANTY; without even the implied warranty of
MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
GNU General Public License for more details.

You should have received a copy of the GNU General Public License
along with this program. If not, see <https://www.gnu.org/licenses/>.
"""

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

from badicdim.components.cubes import CubeTree, Point, PointSet, linf
from badicdim.components.errors import OracleSizeError, ParameterError
from badicdim.components.helpers import to_fraction


def oracle_exact_packing(points: PointSet, center: Sequence, R, r, limit: int = 20) -> int:
    """True maximum number of disjoint open radius-r balls centred in A ∩ B(center, R)."""
    R, r = to_fraction(R), to_fraction(r)
    center = tuple(to_fraction(x) for x in center)
    if not 0 < r < R:
        raise ParameterError(f"need 0 < r < R, got r={r} R={R}")
    candidates = points.within(center, R)
    if len(candidates) > limit:
        raise OracleSizeError(f"{len(candidates)} packing candidates exceed the oracle limit {limit}")
    conflicts = []
    for i, p in enumerate(candidates):
        mask = 0
        for j, q in enumerate(candidates):
            if i != j and linf(p, q) < 2 * r:
                mask |= 1 << j
        conflicts.append(mask)

    @lru_cache(maxsize=None)
    def largest(mask: int) -> int:
        if mask == 0:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        return max(largest(rest), 1 + largest(rest & ~conflicts[v]))

    return largest((1 << len(candidates)) - 1)


def oracle_exact_cover(points: Sequence[Point], radius, limit: int = 20) -> int:
    """Least number of open max-metric balls of the given radius covering the points."""
    radius = to_fraction(radius)
    points = list(points)
    if radius <= 0:
        raise ParameterError("radius must be positive")
    if len(points) > limit:
        raise OracleSizeError(f"{len(points)} points exceed the oracle limit {limit}")
    if not points:
        return 0
    width = 2 * radius
    best = [len(points)]
    groups: List[List[List[Fraction]]] = []

    def fits(group, p):
        return all(max(hi, x) - min(lo, x) < width for (lo, hi), x in zip(group, p))

    def place(i):
        if len(groups) >= best[0]:
            return
        if i == len(points):
            best[0] = len(groups)
            return
        p = points[i]
        for group in groups:
            if fits(group, p):
                saved = [list(bounds) for bounds in group]
                for bounds, x in zip(group, p):
                    bounds[0], bounds[1] = min(bounds[0], x), max(bounds[1], x)
                place(i + 1)
                group[:] = saved
        groups.append([[x, x] for x in p])
        place(i + 1)
        groups.pop()

    place(0)
    return best[0]


def oracle_exact_hstar(tree: CubeTree, k: int, size_guard: int = 65536) -> int:
    """Largest k-level subcube count by flat enumeration of every (cube, descendant) pair reached from the leaves."""
    if k < 0 or k > tree.depth:
        raise ParameterError(f"k={k} outside 0..{tree.depth}")
    if tree.leaf_count > size_guard:
        raise OracleSizeError(f"{tree.leaf_count} leaves exceed the oracle size guard {size_guard}")
    hits = defaultdict(set)
    for leaf in tree.iter_leaves():
        for level in range(tree.depth - k + 1):
            hits[(level, leaf.ancestor(level).index)].add(leaf.ancestor(level + k).index)
    return max(len(found) for found in hits.values())
