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

import logging
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from badicdim.components.cubes import BadicCube, CubeTree, LatticeCube, Label, Point, PointSet, Window, \
    WindowedSet, format_badic, leaf_representatives, linf
from badicdim.components.definitions import LOGGER_NAME, STAR_LOCAL, STAR_GLOBAL, ASSOUAD_BALL, LOWER_COVER, \
    LOWER_PACK, REPORT_KINDS, REPORT_HEADER, TableContents
from badicdim.components.errors import DepthError, ParameterError
from badicdim.components.helpers import format_ratio, log_ratio, to_fraction
from badicdim.components.oracles import oracle_exact_cover, oracle_exact_packing

logger = logging.getLogger(LOGGER_NAME)

AnySet = Union[CubeTree, WindowedSet]


@dataclass(frozen=True)
class BallWitness:
    base: int
    center: Point
    R: Fraction
    r: Fraction

    def __str__(self):
        digits = ",".join(format_badic(x, self.base) for x in self.center)
        return f"x=({digits}) R={self.R} r={self.r}"


Witness = Union[BadicCube, LatticeCube, BallWitness]


@dataclass(frozen=True)
class ScaleRecord:
    k: int
    count: int
    log_ratio: float
    witness: Witness

    def row(self, decimals: int = 6) -> List[str]:
        return [str(self.k), str(self.count), format_ratio(self.log_ratio, decimals), str(self.witness)]


@dataclass
class DimensionReport:
    kind: str
    base: int
    records: List[ScaleRecord] = field(default_factory=list)
    method: str = "b-adic-cubes"

    def __post_init__(self):
        if self.kind not in REPORT_KINDS:
            raise ParameterError(f"unknown report kind {self.kind!r}")
        ks = [record.k for record in self.records]
        if any(a >= b for a, b in zip(ks, ks[1:])):
            raise ParameterError("report records must be strictly increasing in k")

    @property
    def k_max(self) -> int:
        return self.records[-1].k if self.records else 0

    @property
    def headline(self) -> float:
        if not self.records:
            raise DepthError("the report has no scales")
        return self.records[-1].log_ratio

    @property
    def envelope(self) -> Tuple[float, float]:
        ratios = [record.log_ratio for record in self.records]
        return min(ratios), max(ratios)

    def headline_line(self, decimals: int = 6) -> str:
        return f"estimate={format_ratio(self.headline, decimals)} kind={self.kind} depth={self.k_max}"

    def table(self, decimals: int = 6) -> TableContents:
        return TableContents(REPORT_HEADER, [record.row(decimals) for record in self.records],
                             title=f"{self.kind} ({self.method})")


def count_hit_subcubes(tree: CubeTree, cube: BadicCube, k: int) -> int:
    """Descendants of cube present k levels below it, 0 when the cube misses the set."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    if cube.level + k > tree.depth:
        raise DepthError(f"level {cube.level} + {k} exceeds tree depth {tree.depth}")
    node = tree.node_at(cube)
    return 0 if node is None else node.counts[k]


def _extreme_below(node, k: int, skip: int, better: Callable[[int, int], bool], memo: Dict):
    """Preorder-first extreme of node.counts[k] over the subtree, skipping the first skip levels."""
    key = (id(node), skip)
    if key in memo:
        return memo[key]
    best = None
    if node.height >= k:
        if skip == 0:
            best = (node.counts[k], ())
        for label, child in node.children:
            found = _extreme_below(child, k, max(skip - 1, 0), better, memo)
            if found is not None and (best is None or better(found[0], best[0])):
                best = (found[0], (label,) + found[1])
    memo[key] = best
    return best


def best_node(tree: CubeTree, k: int, min_level: int = 0, minimize: bool = False,
              exclude: Sequence[BadicCube] = ()) -> Optional[Tuple[int, BadicCube]]:
    """Extreme count_hit_subcubes over nodes at level >= min_level.

    Ties go to the first node in preorder, so shallower and lexicographically smaller
    cubes win. Nodes inside, or containing, any excluded cube are skipped.
    """
    better = operator.lt if minimize else operator.gt
    memo = {}
    blocked = {cube.labels() for cube in exclude}
    ancestors = {labels[:i] for labels in blocked for i in range(len(labels))}

    def walk(node, path):
        if path in blocked:
            return None
        if path not in ancestors:
            found = _extreme_below(node, k, max(min_level - len(path), 0), better, memo)
            return None if found is None else (found[0], path + found[1])
        best = None
        for label, child in node.children:
            found = walk(child, path + (label,))
            if found is not None and (best is None or better(found[0], best[0])):
                best = found
        return best

    found = walk(tree.root, ())
    if found is None:
        return None
    return found[0], tree.cube(found[1])


def _window_witness(window: Window, cube: BadicCube) -> LatticeCube:
    exponent = window.side_exp - cube.level
    b = cube.base
    if exponent >= 0:
        corner = tuple(o // b ** exponent + i for o, i in zip(window.offset, cube.index))
    else:
        corner = tuple(o * b ** (-exponent) + i for o, i in zip(window.offset, cube.index))
    return LatticeCube(b, exponent, corner)


def _windowed_extreme(wset: WindowedSet, k: int, kind: str, minimize: bool = False) -> Tuple[int, LatticeCube]:
    better = operator.lt if minimize else operator.gt
    best = None
    for window in wset.windows:
        min_level = window.side_exp if kind != STAR_GLOBAL else 0
        if window.tree.depth - min_level < k:
            continue
        found = best_node(window.tree, k, min_level, minimize)
        if found is not None and (best is None or better(found[0], best[0])):
            best = (found[0], _window_witness(window, found[1]))
    if kind == STAR_GLOBAL:
        b = wset.base
        extra = set()
        for window in wset.windows:
            for exponent in range(window.side_exp + 1, wset.max_side_exp + 1):
                if exponent - k < -wset.resolution:
                    continue
                extra.add((exponent, tuple(o // b ** exponent for o in window.offset)))
        for exponent, corner in sorted(extra):
            count = wset.count_hit_subcubes(exponent, corner, k)
            if best is None or better(count, best[0]):
                best = (count, LatticeCube(b, exponent, corner))
    if best is None:
        raise DepthError(f"k={k} exceeds the available resolution of the set")
    return best


def h_star(item: AnySet, k: int, kind: str = STAR_LOCAL) -> Tuple[int, Witness]:
    """Largest number of subcells k levels below one admissible cube that the set meets."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    if isinstance(item, CubeTree):
        if kind == STAR_GLOBAL:
            return _windowed_extreme(WindowedSet.single(item), k, kind)
        if k > item.depth:
            raise DepthError(f"k={k} exceeds tree depth {item.depth}")
        return best_node(item, k)
    return _windowed_extreme(item, k, kind)


def lower_count(item: AnySet, k: int) -> Tuple[int, Witness]:
    """Cube-based inf-count: the fewest level-k subcells hit inside any occupied cube."""
    if isinstance(item, CubeTree):
        if k > item.depth:
            raise DepthError(f"k={k} exceeds tree depth {item.depth}")
        return best_node(item, k, minimize=True)
    return _windowed_extreme(item, k, STAR_LOCAL, minimize=True)


def _scales(k_max: int, limit: int) -> List[int]:
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")
    if k_max > limit:
        raise DepthError(f"k_max={k_max} exceeds the available depth {limit}")
    return list(range(1, k_max + 1))


def _resolution_limit(item: AnySet, kind: str) -> int:
    if isinstance(item, CubeTree):
        return item.depth
    if kind == STAR_GLOBAL:
        return item.resolution + item.max_side_exp
    return item.resolution


def _default_k_max(item: AnySet, kind: str) -> int:
    """Global reports default to the largest window side exponent."""
    if kind == STAR_GLOBAL and isinstance(item, WindowedSet) and item.max_side_exp >= 1:
        return item.max_side_exp
    return _resolution_limit(item, kind)


def _collect(kind: str, base: int, ks: List[int], evaluate: Callable[[int], Tuple[int, Witness]],
             workers: int, method: str) -> DimensionReport:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(evaluate, ks))
    else:
        results = [evaluate(k) for k in ks]
    records = [ScaleRecord(k, count, log_ratio(count, k, base), witness) for k, (count, witness) in zip(ks, results)]
    logger.debug(f"{kind} report over k=1..{ks[-1]} with {workers} worker(s)")
    return DimensionReport(kind, base, records, method)


def star_dimension_report(item: AnySet, kind: str = STAR_LOCAL, k_max: Optional[int] = None,
                          workers: int = 1) -> DimensionReport:
    if kind not in (STAR_LOCAL, STAR_GLOBAL):
        raise ParameterError(f"star report kind must be {STAR_LOCAL} or {STAR_GLOBAL}, got {kind!r}")
    limit = _resolution_limit(item, kind)
    ks = _scales(_default_k_max(item, kind) if k_max is None else k_max, limit)
    return _collect(kind, item.base, ks, lambda k: h_star(item, k, kind), workers, "b-adic-cubes")


def lower_dimension_report(item: AnySet, k_max: Optional[int] = None, workers: int = 1) -> DimensionReport:
    limit = _resolution_limit(item, STAR_LOCAL)
    ks = _scales(limit if k_max is None else k_max, limit)
    return _collect(LOWER_COVER, item.base, ks, lambda k: lower_count(item, k), workers, "b-adic-cubes")


def _check_radii(R: Fraction, r: Fraction):
    if r <= 0:
        raise ParameterError("r must be positive")
    if r >= R:
        raise ParameterError(f"r={r} must be smaller than R={R}")


def _check_center(points: PointSet, center: Point):
    if center not in points:
        raise ParameterError(f"center {center} is not a point of the set")


def cell_level(base: int, r: Fraction) -> int:
    """Smallest integer l with base**-l <= r."""
    level = 0
    while Fraction(base) ** (-level) > r:
        level += 1
    while Fraction(base) ** (-(level - 1)) <= r:
        level -= 1
    return level


def cell_count(points: Iterable[Point], base: int, r: Fraction) -> int:
    """Distinct b-adic cells of side <= r hit by the points; an upper bound for N_r."""
    scale = Fraction(base) ** cell_level(base, r)
    return len({tuple((x * scale).numerator // (x * scale).denominator for x in p) for p in points})


def ball_cover_count(points: PointSet, center: Sequence, R, r) -> int:
    R, r = to_fraction(R), to_fraction(r)
    center = tuple(to_fraction(x) for x in center)
    _check_radii(R, r)
    _check_center(points, center)
    return cell_count(points.within(center, R), points.base, r)


def greedy_separated(points: Iterable[Point], gap: Fraction) -> List[Point]:
    """Lexicographic greedy scan keeping points at max-distance >= gap from every kept point."""
    kept = []
    for p in points:
        if all(linf(p, q) >= gap for q in kept):
            kept.append(p)
    return kept


def packing_count(points: PointSet, center: Sequence, R, r) -> int:
    """Greedy maximal packing by disjoint radius-r balls centred in A ∩ B(center, R)."""
    R, r = to_fraction(R), to_fraction(r)
    center = tuple(to_fraction(x) for x in center)
    _check_radii(R, r)
    _check_center(points, center)
    return len(greedy_separated(points.within(center, R), 2 * r))


@dataclass(frozen=True)
class SandwichRow:
    center: Point
    R: Fraction
    r: Fraction
    cover_2r: int
    packing: int
    cover_r3: int
    method: str

    @property
    def ok(self) -> bool:
        return self.cover_2r <= self.packing <= self.cover_r3


def verify_cover_pack_sandwich(points: PointSet, samples: Iterable[Tuple[Sequence, object, object]],
                               oracle_limit: int = 20) -> List[SandwichRow]:
    """cover(2r, B(a,R/2)) <= pack(r, B(a,R)) <= cover(r/3, B(a,R)) for each sample (a, R, r).

    Small instances use the exact packing and covering oracles. Larger ones compare a
    separated-set lower bound, the greedy packing and the b-adic cell count, which
    sandwiches the same quantities.
    """
    rows = []
    for center, R, r in samples:
        R, r = to_fraction(R), to_fraction(r)
        center = tuple(to_fraction(x) for x in center)
        _check_radii(R, r)
        inner = points.within(center, R / 2)
        outer = points.within(center, R)
        if len(outer) <= oracle_limit:
            left = oracle_exact_cover(inner, 2 * r, oracle_limit)
            middle = oracle_exact_packing(points, center, R, r, oracle_limit)
            right = oracle_exact_cover(outer, r / 3, oracle_limit)
            method = "exact"
        else:
            left = len(greedy_separated(inner, 4 * r))
            middle = len(greedy_separated(outer, 2 * r))
            right = cell_count(outer, points.base, r / 3)
            method = "bounds"
        row = SandwichRow(center, R, r, left, middle, right, method)
        if not row.ok:
            logger.warning(f"Sandwich violated at {center} R={R} r={r}: {left} <= {middle} <= {right}")
        rows.append(row)
    return rows


def ball_dimension_report(points: PointSet, kind: str = ASSOUAD_BALL, k_max: int = 1,
                          workers: int = 1) -> DimensionReport:
    """Ball-based estimates at R = 1, r = b^-k: max cover count or min greedy packing over centres."""
    if kind not in (ASSOUAD_BALL, LOWER_PACK):
        raise ParameterError(f"ball report kind must be {ASSOUAD_BALL} or {LOWER_PACK}, got {kind!r}")
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")
    if len(points) == 0:
        raise ParameterError("the point set is empty")
    b = points.base
    R = Fraction(1)
    count_fn = ball_cover_count if kind == ASSOUAD_BALL else packing_count
    better = operator.gt if kind == ASSOUAD_BALL else operator.lt

    def evaluate(k):
        r = Fraction(1, b ** k)
        best = None
        for x in points:
            count = count_fn(points, x, R, r)
            if best is None or better(count, best[0]):
                best = (count, BallWitness(b, x, R, r))
        return best

    method = "b-adic-cells" if kind == ASSOUAD_BALL else "greedy-packing"
    return _collect(kind, b, list(range(1, k_max + 1)), evaluate, workers, method)


def dimension_report(item: AnySet, kind: str, k_max: Optional[int] = None, workers: int = 1) -> DimensionReport:
    if kind in (STAR_LOCAL, STAR_GLOBAL):
        return star_dimension_report(item, kind, k_max, workers)
    if kind == LOWER_COVER:
        return lower_dimension_report(item, k_max, workers)
    if not isinstance(item, CubeTree):
        raise ParameterError(f"{kind} reports need a single tree, not a windowed set")
    limit = item.depth
    return ball_dimension_report(leaf_representatives(item), kind, limit if k_max is None else k_max, workers)
