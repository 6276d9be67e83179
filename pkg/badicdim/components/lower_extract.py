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
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from badicdim.components.assouad_extract import Condition, enforce_conditions
from badicdim.components.cubes import BadicCube, CubeTree, Point, PointSet, format_badic, linf
from badicdim.components.definitions import LOGGER_NAME, LOWER_PACK, LOWER_REPORT_HEADER, VERIFY_HEADER, CheckRow, \
    TableContents
from badicdim.components.errors import ParameterError, SelectionError
from badicdim.components.estimators import DimensionReport, ball_dimension_report, cell_level, \
    lower_dimension_report, packing_count
from badicdim.components.helpers import Number, format_ratio, integer_root, power_ge, to_fraction

logger = logging.getLogger(LOGGER_NAME)

Source = Union[PointSet, CubeTree]


@dataclass(frozen=True)
class LowerParams:
    alpha: Fraction
    M: int
    depth: int
    R0: Fraction = Fraction(1)
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        object.__setattr__(self, "R0", to_fraction(self.R0))
        object.__setattr__(self, "eps", to_fraction(self.eps))
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if self.M < 1:
            raise ParameterError(f"M must be at least 1, got {self.M}")
        if self.depth < 0:
            raise ParameterError("depth must be non-negative")
        if self.R0 <= 0:
            raise ParameterError("R0 must be positive")
        if self.eps < 0:
            raise ParameterError(f"eps must be non-negative, got {self.eps}")
        if self.M > 1 and integer_root(self.M, self.alpha.numerator) is None:
            raise ParameterError(f"lambda = M^(-1/alpha) is irrational: {self.M} is not a perfect "
                                 f"{self.alpha.numerator}-th power")

    @property
    def ratio(self) -> Fraction:
        """λ with λ^α M = 1."""
        if self.M == 1:
            raise ParameterError("M=1 has no shrinking ratio")
        root = integer_root(self.M, self.alpha.numerator)
        return Fraction(1, root ** self.alpha.denominator)

    def radius(self, k: int) -> Fraction:
        return self.R0 * self.ratio ** k


def candidate_centers(source: Source, x: Point, R: Fraction, r: Fraction) -> List[Point]:
    """Points of E in B(x, R), one per occupied cell of side <= r, lexicographically sorted."""
    if isinstance(source, PointSet):
        return source.within(x, R)
    level = min(max(cell_level(source.base, r), 0), source.depth)

    def near(cube: BadicCube) -> bool:
        side = cube.side
        return all(lo < c + R and c - R < lo + side for lo, c in zip(cube.corner(), x))

    found = []
    for cube, _ in source.iter_nodes(level, region=near):
        corner = source.first_leaf_under(cube).corner()
        if linf(corner, x) < R:
            found.append(corner)
    return sorted(found)


def packing_children(source: Source, x: Point, R: Fraction, r: Fraction) -> List[Point]:
    """Greedy centres c with B(c, r) ⊂ B(x, R), pairwise disjoint and disjoint from B(x, r); x first."""
    kept = [x]
    for c in candidate_centers(source, x, R, r):
        if linf(c, x) + r > R:
            continue
        if all(linf(c, q) >= 2 * r for q in kept):
            kept.append(c)
    return kept


def select_packing_children(source: Source, x: Sequence, R: Number, r: Number, M: int) -> List[Point]:
    R, r = to_fraction(R), to_fraction(r)
    x = tuple(to_fraction(c) for c in x)
    if not 0 < r < R:
        raise ParameterError(f"need 0 < r < R, got r={r} R={R}")
    kept = packing_children(source, x, R, r)
    if len(kept) < M:
        raise SelectionError(f"only {len(kept)} disjoint balls of radius {r} fit in B(x,{R}), need {M}",
                             achieved=len(kept))
    return kept[:M]


@dataclass
class BallTree:
    base: int
    M: int
    radii: List[Fraction]
    levels: List[List[Point]]
    shortfalls: int = 0
    conditions: List[Condition] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def word(self, k: int, i: int) -> Tuple[int, ...]:
        letters = []
        for _ in range(k):
            i, j = divmod(i, self.M)
            letters.append(j + 1)
        return tuple(reversed(letters))

    def children(self, k: int, i: int) -> List[Point]:
        return self.levels[k + 1][i * self.M:(i + 1) * self.M]

    @property
    def points(self) -> PointSet:
        dim = len(self.levels[0][0])
        return PointSet(self.base, dim, tuple(self.levels[-1]), _exponent_for(self.levels[-1], self.base))

    def to_tree(self, depth: int) -> CubeTree:
        dim = len(self.levels[0][0])
        cubes = []
        for p in self.levels[-1]:
            scaled = [x * self.base ** depth for x in p]
            cubes.append(BadicCube(self.base, depth, tuple(v.numerator // v.denominator for v in scaled)))
        return CubeTree.from_cubes(self.base, dim, depth, cubes)

    def check_invariants(self) -> List[CheckRow]:
        rows = []
        for k, centers in enumerate(self.levels):
            expected = self.M ** k
            rows.append(CheckRow("cardinality", f"level {k}", str(len(centers)), str(expected),
                                 len(centers) == expected))
            gap = min((linf(p, q) for p, q in combinations(centers, 2)), default=None)
            rows.append(CheckRow("disjoint", f"level {k}", "-" if gap is None else str(gap),
                                 f">= {2 * self.radii[k]}", gap is None or gap >= 2 * self.radii[k]))
        for k in range(self.depth):
            nested = anchored = True
            for i, parent in enumerate(self.levels[k]):
                kids = self.children(k, i)
                nested &= all(linf(c, parent) + self.radii[k + 1] <= self.radii[k] for c in kids)
                anchored &= bool(kids) and kids[0] == parent
            rows.append(CheckRow("nested", f"level {k}->{k + 1}", str(nested), "True", nested))
            rows.append(CheckRow("anchor", f"level {k}->{k + 1}", str(anchored), "True", anchored))
        return rows


def _exponent_for(points: Sequence[Point], base: int) -> int:
    exponent = 0
    while any(x >= Fraction(base) ** exponent for p in points for x in p):
        exponent += 1
    return exponent


def _lower_report(source: Source, params: LowerParams) -> DimensionReport:
    if isinstance(source, CubeTree):
        if source.depth == 0:
            raise ParameterError("a depth-0 tree has no scales to measure")
        return lower_dimension_report(source)
    finest = params.radius(params.depth) if params.M > 1 else params.R0
    return ball_dimension_report(source, LOWER_PACK, max(cell_level(source.base, finest), 1))


def lower_conditions(source: Source, params: LowerParams, denominator_limit: int = 64) -> List[Condition]:
    """Measured s = headline(E) and C = min_k count_k / b^(ks), checked against alpha+eps and M+3^d."""
    report = _lower_report(source, params)
    last = report.records[-1]
    s = report.headline
    C = min(record.count / float(report.base) ** (record.k * s) for record in report.records)
    dim = source.dim
    threshold = params.M + 3 ** dim
    reach = C * float(params.M) ** ((s - float(params.eps)) / float(params.alpha))
    target = params.alpha + params.eps
    logger.info(f"Measured lower constants of E: s={format_ratio(s)} C={format_ratio(C)}")
    return [
        Condition("headline(E) >= alpha+eps",
                  f"headline(E) < alpha+eps: {format_ratio(s)} < {target}",
                  power_ge(last.count, report.base, last.k * target, denominator_limit)),
        Condition("C*M^((s-eps)/alpha) >= M+3^d",
                  f"C*M^((s-eps)/alpha) < M+3^d: {format_ratio(C)}*{params.M}^(({format_ratio(s)}-{params.eps})"
                  f"/{params.alpha}) = {format_ratio(reach)} < {threshold}",
                  reach >= threshold),
    ]


def construct_subset_lower(source: Source, params: LowerParams,
                           status_text_callback: Optional[Callable[..., None]] = None,
                           strict: bool = False) -> BallTree:
    """Nested families of M disjoint balls with radii R_0 λ^k, anchored at the first point of E."""
    if not isinstance(source, CubeTree) and len(source) == 0:
        raise ParameterError("the point set is empty")
    conditions = lower_conditions(source, params)
    enforce_conditions(conditions, strict)
    if isinstance(source, CubeTree):
        first = source.first_leaf_under(BadicCube.root(source.base, source.dim)).corner()
    else:
        first = source.points[0]
    radii = [params.radius(k) for k in range(params.depth + 1)] if params.depth else [params.R0]
    levels = [[first]]
    shortfalls = 0
    threshold = params.M + 3 ** len(first)
    for k in range(params.depth):
        next_level = []
        for i, center in enumerate(levels[k]):
            kept = packing_children(source, center, radii[k], radii[k + 1])
            if len(kept) < threshold:
                shortfalls += 1
            if len(kept) < params.M:
                word = BallTree(source.base, params.M, radii, levels).word(k, i)
                raise SelectionError(f"word {word or '()'}: only {len(kept)} disjoint balls of radius "
                                     f"{radii[k + 1]} fit in B(x,{radii[k]}), need {params.M}",
                                     achieved=len(kept), word=word)
            next_level.extend(kept[:params.M])
        levels.append(next_level)
        if status_text_callback is not None:
            status_text_callback(f"Level {k + 1}: {len(next_level)} centres at radius {radii[k + 1]}")
    if shortfalls:
        logger.warning(f"{shortfalls} node(s) had fewer than M+3^d = {threshold} packing candidates")
    return BallTree(source.base, params.M, radii, levels, shortfalls, conditions)


@dataclass(frozen=True)
class LowerRow:
    x: Point
    R: Fraction
    r: Fraction
    nstar: int
    bound: Union[Fraction, float]
    ok: bool
    base: int

    def row(self, decimals: int = 6) -> List[str]:
        x = ",".join(format_badic(c, self.base) for c in self.x)
        return [x, str(self.R), str(self.r), str(self.nstar), format_ratio(float(self.bound), decimals),
                "yes" if self.ok else "no"]


@dataclass
class LowerReport:
    rows: List[LowerRow] = field(default_factory=list)
    checks: List[CheckRow] = field(default_factory=list)
    box_ratio: Union[Fraction, float] = 0.0

    @property
    def violations(self) -> int:
        return sum(not row.ok for row in self.rows) + sum(not check.ok for check in self.checks)

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def table(self, decimals: int = 6) -> TableContents:
        return TableContents(LOWER_REPORT_HEADER, [row.row(decimals) for row in self.rows], title="lower bounds")

    def check_table(self) -> TableContents:
        return TableContents(VERIFY_HEADER, [check.row() for check in self.checks], title="ball tree invariants")


def _meets(count: int, M: int, ratio: Fraction, alpha: Fraction) -> bool:
    """count >= (R/r)^alpha / (M+1), compared exactly as integers."""
    p, q = alpha.numerator, alpha.denominator
    return Fraction(count * (M + 1)) ** q >= ratio ** p


def _box_ratio(tree: BallTree, alpha: Fraction) -> Union[Fraction, float]:
    """log M^n / -log(R_0 λ^n); exactly alpha when R_0 = 1 and λ^alpha M = 1."""
    if tree.depth == 0:
        return Fraction(0)
    lam = tree.radii[1] / tree.radii[0]
    exact = lam.numerator == 1 and tree.M ** alpha.denominator == lam.denominator ** alpha.numerator
    if tree.radii[0] == 1 and exact and len(tree.levels[-1]) == tree.M ** tree.depth:
        return alpha
    return math.log(len(tree.levels[-1])) / -math.log(tree.radii[-1])


def verify_lower_bounds(tree: BallTree, alpha: Number, samples: Optional[int] = None, seed: int = 0) -> LowerReport:
    """N*_r(F ∩ B(x,R)) >= (R/r)^α/(M+1) over scale pairs, plus the tree invariants and box ratio.

    Radius pairs k levels apart use the deeper centres as a packing certificate. Same-level
    pairs, with r twice the next radius, rely on the greedy packing alone.
    """
    alpha = to_fraction(alpha)
    points = tree.points
    M = tree.M
    cases = [(x, j, j + k) for x in points for j in range(tree.depth + 1) for k in range(1, tree.depth - j + 1)]
    cases += [(x, j, None) for x in points for j in range(tree.depth) if 2 * tree.radii[j + 1] < tree.radii[j]]
    if samples is not None and samples < len(cases):
        rng = np.random.default_rng(seed)
        cases = [cases[i] for i in sorted(rng.choice(len(cases), size=samples, replace=False).tolist())]
    rows = []
    for x, j, level in cases:
        R = tree.radii[j]
        if level is None:
            r = 2 * tree.radii[j + 1]
            structured = 0
            bound = (R / r) ** float(alpha) / (M + 1)
        else:
            r = tree.radii[level]
            structured = sum(1 for c in tree.levels[level] if linf(c, x) < R)
            bound = Fraction(M ** (level - j), M + 1)
        nstar = max(structured, packing_count(points, x, R, r))
        rows.append(LowerRow(x, R, r, nstar, bound, _meets(nstar, M, R / r, alpha), tree.base))
    report = LowerReport(rows, tree.check_invariants(), _box_ratio(tree, alpha))
    logger.info(f"Lower-bound verification: {len(rows)} samples, {report.violations} violation(s)")
    return report
