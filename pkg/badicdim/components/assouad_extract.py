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
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from badicdim.components.cubes import BadicCube, CubeTree, NodeFactory, TrieNode, Window, WindowedSet
from badicdim.components.definitions import LOGGER_NAME, GREEDY, RANDOM, STAR_GLOBAL, ASSOUAD_TRACE_HEADER, \
    TableContents
from badicdim.components.errors import DepthError, HypothesisError, OffsetOverflowError, ParameterError, \
    RetryLimitError, StageError
from badicdim.components.estimators import best_node, h_star
from badicdim.components.helpers import Number, ceil_power, compare_power, floor_power, format_ratio, log_ratio, \
    power_ge, power_le, text_input_to_int, to_fraction

logger = logging.getLogger(LOGGER_NAME)

StatusCallback = Callable[..., None]


def parse_strategy(text: str) -> Tuple[str, int]:
    """'greedy' or 'random:<seed>' (seed defaults to 0)."""
    name, _, seed_text = text.partition(":")
    if name == GREEDY and not seed_text:
        return GREEDY, 0
    if name == RANDOM:
        if not seed_text:
            return RANDOM, 0
        if (seed := text_input_to_int(seed_text)) is not None and seed >= 0:
            return RANDOM, seed
    raise ParameterError(f"strategy must be 'greedy' or 'random:<seed>', got {text!r}")


@dataclass(frozen=True)
class PruneParams:
    M: int
    n: int
    N: int
    s: Fraction
    eps: Fraction = Fraction(0)
    strategy: str = GREEDY
    seed: int = 0
    retry_limit: int = 64
    denominator_limit: int = 64

    def __post_init__(self):
        if self.M < 2:
            raise ParameterError(f"M must be at least 2, got {self.M}")
        if self.n < 0:
            raise ParameterError(f"n must be non-negative, got {self.n}")
        if self.N < 1:
            raise ParameterError(f"N must be at least 1, got {self.N}")
        if self.eps < 0:
            raise ParameterError("eps must be non-negative")
        if self.strategy not in (GREEDY, RANDOM):
            raise ParameterError(f"unknown strategy {self.strategy!r}")

    @property
    def bound(self) -> int:
        """⌈N^n M^{-nε}⌉, the guaranteed leaf count."""
        return ceil_power(self.M, -self.n * self.eps, self.N ** self.n, self.denominator_limit)


def check_prune_hypotheses(tree: CubeTree, params: PruneParams):
    if tree.base != params.M or tree.depth != params.n:
        raise ParameterError(f"tree must have base {params.M} and depth {params.n}, "
                             f"got base {tree.base} and depth {tree.depth}")
    cap = floor_power(params.M, params.s + params.eps, 1, params.denominator_limit)
    if params.N > cap:
        raise HypothesisError(f"N > M^(s+eps): {params.N} > floor({params.M}^({params.s + params.eps})) = {cap}")
    for cube, node in tree.distinct_nodes():
        if len(node.children) > cap:
            raise HypothesisError(f"node {cube} has {len(node.children)} children > M^(s+eps) = {cap}", node=cube)
    if not power_ge(tree.leaf_count, params.M, params.n * params.s, params.denominator_limit):
        raise HypothesisError(f"leaf count < M^(n*s): {tree.leaf_count} < {params.M}^({params.n * params.s})",
                              node=BadicCube.root(tree.base, tree.dim))


def _fits_cap(node: TrieNode, cap: int, memo: Dict[int, bool]) -> bool:
    key = id(node)
    if key not in memo:
        memo[key] = len(node.children) <= cap and all(_fits_cap(child, cap, memo) for _, child in node.children)
    return memo[key]


def _greedy_prune(root: TrieNode, cap: int) -> TrieNode:
    factory = NodeFactory()
    fits = {}
    memo = {}

    def keep(node):
        if _fits_cap(node, cap, fits):
            return node
        if id(node) not in memo:
            ranked = sorted(node.children, key=lambda item: (-item[1].counts[item[1].height], item[0]))
            memo[id(node)] = factory.node((label, keep(child)) for label, child in ranked[:cap])
        return memo[id(node)]

    return keep(root)


def _random_prune(root: TrieNode, cap: int, rng: np.random.Generator) -> TrieNode:
    factory = NodeFactory()
    fits = {}

    def keep(node):
        if _fits_cap(node, cap, fits):
            return node
        children = node.children
        if len(children) > cap:
            chosen = sorted(rng.choice(len(children), size=cap, replace=False).tolist())
            children = [children[i] for i in chosen]
        return factory.node((label, keep(child)) for label, child in children)

    return keep(root)


def random_prune_once(tree: CubeTree, N: int, rng: np.random.Generator) -> CubeTree:
    """One uniform draw of an N-subset at every node, without retrying."""
    return CubeTree(tree.base, tree.dim, tree.depth, _random_prune(tree.root, N, rng))


def prune(tree: CubeTree, params: PruneParams, validate: bool = True,
          rng: Optional[np.random.Generator] = None) -> CubeTree:
    """Cap every node at N children while keeping at least ⌈N^n M^{-nε}⌉ leaves.

    greedy keeps the N children with the most descendant leaves (ties by label);
    random draws a uniform N-subset at every node and retries until the bound is met.
    """
    if validate:
        check_prune_hypotheses(tree, params)
    if params.strategy == GREEDY:
        return CubeTree(tree.base, tree.dim, tree.depth, _greedy_prune(tree.root, params.N))
    if rng is None:
        rng = np.random.default_rng(params.seed)
    bound = params.bound
    best = 0
    for attempt in range(1, params.retry_limit + 1):
        result = random_prune_once(tree, params.N, rng)
        if result.leaf_count >= bound:
            logger.debug(f"Random prune met bound {bound} on attempt {attempt}")
            return result
        best = max(best, result.leaf_count)
    raise RetryLimitError(f"random prune stayed below {bound} leaves after {params.retry_limit} attempts "
                          f"(best {best})")


@dataclass(frozen=True)
class DenseWindow:
    cube: BadicCube
    level: int
    count: int


def find_dense_window(tree: CubeTree, n: int, min_level: Optional[int] = None,
                      exclude: Sequence[BadicCube] = ()) -> DenseWindow:
    """The cube of level >= min_level (default n) hitting the most level-(level+n) cells."""
    min_level = n if min_level is None else min_level
    if min_level + n > tree.depth:
        raise DepthError(f"a window at level {min_level} with {n} levels below exceeds depth {tree.depth}")
    found = best_node(tree, n, min_level, exclude=exclude)
    if found is None:
        raise DepthError(f"no free window at level >= {min_level} with {n} levels below it")
    count, cube = found
    return DenseWindow(cube, cube.level, count)


@dataclass(frozen=True)
class Condition:
    statement: str
    violation: str
    ok: bool


def enforce_conditions(conditions: List[Condition], strict: bool):
    for condition in conditions:
        if not condition.ok:
            if strict:
                raise ParameterError(condition.violation)
            logger.warning(f"Recorded unmet condition: {condition.violation}")


def large_m_conditions(M: int, N: int, alpha: Fraction, eps: Fraction, dim: int,
                       denominator_limit: int = 64) -> List[Condition]:
    return [
        Condition("N >= M^(alpha-eps/2)",
                  f"N < M^(alpha-eps/2): {N} < {M}^({alpha - eps / 2})",
                  power_ge(N, M, alpha - eps / 2, denominator_limit)),
        Condition("N+3^d <= M^(alpha+eps)",
                  f"N+3^d > M^(alpha+eps): {N}+{3 ** dim} > {M}^({alpha + eps})",
                  power_le(N + 3 ** dim, M, alpha + eps, denominator_limit)),
    ]


@dataclass(frozen=True)
class StageRecord:
    stage: int
    window: BadicCube
    level: int
    length: int
    window_count: int
    count: int
    bound: int

    @property
    def ok(self) -> bool:
        return self.count >= self.bound

    def row(self) -> List[str]:
        return [str(self.stage), str(self.window), str(self.level), str(self.count), str(self.bound),
                "yes" if self.ok else "no"]


@dataclass
class ConstructionTrace:
    alpha: Fraction
    eps: Fraction
    M: int
    N: int
    tree: CubeTree
    k_max: int
    headline: float
    conditions: List[Condition] = field(default_factory=list)
    stages: List[StageRecord] = field(default_factory=list)

    @property
    def delta(self) -> float:
        return self.tree.dim * math.log(2) / (self.k_max * math.log(self.M))

    @property
    def in_range(self) -> bool:
        slack = float(self.eps) + self.delta
        return float(self.alpha) - slack - 1e-12 <= self.headline <= float(self.alpha) + slack + 1e-12

    @property
    def ok(self) -> bool:
        return self.in_range and all(stage.ok for stage in self.stages)

    def table(self) -> TableContents:
        return TableContents(ASSOUAD_TRACE_HEADER, [stage.row() for stage in self.stages],
                             title=f"alpha={self.alpha} eps={self.eps} M={self.M} N={self.N}")

    def summary(self, decimals: int = 6) -> str:
        return (f"estimate={format_ratio(self.headline, decimals)} target={self.alpha} eps={self.eps} "
                f"delta={format_ratio(self.delta, decimals)} depth={self.k_max} ok={'yes' if self.ok else 'no'}")


def stage_schedule_unit(depth: int, stages: int) -> int:
    """Largest unit u whose stage schedule fits the depth when every window sits at its minimal level.

    The first stage is u levels long and each later stage adds the previous window level.
    """
    if stages < 1:
        raise ParameterError("stages must be at least 1")
    a, b = 1, 2
    for _ in range(stages - 1):
        a, b = b, a + b
    unit = depth // a
    if unit < 1:
        raise DepthError(f"depth {depth} cannot hold {stages} stages (needs at least {a} levels)")
    return unit


def _first_leaf_chain(node: TrieNode, factory: NodeFactory, memo: Dict[int, TrieNode]) -> TrieNode:
    if not node.children:
        return factory.leaf()
    if id(node) not in memo:
        label, child = node.children[0]
        memo[id(node)] = factory.node([(label, _first_leaf_chain(child, factory, memo))])
    return memo[id(node)]


def extend_to_leaves(pruned: TrieNode, source: TrieNode, factory: NodeFactory) -> TrieNode:
    """Continue every leaf of pruned by the first leaf path of source below the same cube."""
    chains = {}
    memo = {}

    def walk(p, e):
        key = (id(p), id(e))
        if key not in memo:
            if not p.children:
                memo[key] = _first_leaf_chain(e, factory, chains)
            else:
                memo[key] = factory.node((label, walk(child, e.child(label))) for label, child in p.children)
        return memo[key]

    return walk(pruned, source)


def _as_base(tree: CubeTree, M: int) -> CubeTree:
    if tree.base == M:
        return tree
    rebased = tree.rebase(M)
    logger.info(f"Rebased b={tree.base} depth {tree.depth} to M={M} depth {rebased.depth}")
    return rebased


def construct_subset_assouad(tree: CubeTree, alpha: Number, eps: Number, M: int, stages: int = 1,
                             strategy: str = GREEDY, seed: int = 0, cap: Optional[int] = None,
                             strict: bool = False, retry_limit: int = 64, denominator_limit: int = 64,
                             status_text_callback: Optional[StatusCallback] = None) -> ConstructionTrace:
    alpha, eps = to_fraction(alpha), to_fraction(eps)
    if alpha <= 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if eps < 0:
        raise ParameterError(f"eps must be non-negative, got {eps}")
    source = _as_base(tree, M)
    depth = source.depth
    N = floor_power(M, alpha, 1, denominator_limit) if cap is None else cap
    if N < 1:
        raise ParameterError(f"branching cap must be at least 1, got {N}")
    conditions = large_m_conditions(M, N, alpha, eps, source.dim, denominator_limit)
    headline_e = log_ratio(source.leaf_count, depth, M) if depth else 0.0
    conditions.append(Condition("alpha < headline(E)",
                                f"alpha >= headline(E): {alpha} >= {format_ratio(headline_e)}",
                                float(alpha) < headline_e))
    enforce_conditions(conditions, strict)

    unit = stage_schedule_unit(depth, stages)
    rng = np.random.default_rng(seed) if strategy == RANDOM else None
    factory = NodeFactory()
    pieces: List[CubeTree] = []
    occupied: List[BadicCube] = []
    records = []
    length, previous_length, previous_level = unit, 0, 0
    for stage in range(1, stages + 1):
        window = find_dense_window(source, length, previous_length, exclude=occupied)
        window_tree = source.subtree(window.cube).truncate(length)
        params = PruneParams(M, length, N, alpha, eps, strategy, seed, retry_limit, denominator_limit)
        pruned = prune(window_tree, params, validate=False, rng=rng)
        below = extend_to_leaves(pruned.root, source.node_at(window.cube), factory)
        piece = CubeTree(M, source.dim, depth, factory.chain(window.cube.labels(), below))
        pieces.append(piece)
        bound = ceil_power(M, -length * eps / 2, N ** length, denominator_limit)
        record = StageRecord(stage, window.cube, window.level, length, window.count, pruned.leaf_count, bound)
        records.append(record)
        if status_text_callback is not None:
            status_text_callback(f"Stage {stage}: window {window.cube} level {window.level} "
                                 f"count {record.count} bound {bound}", failed=not record.ok)
        if stage < stages:
            occupied.extend(cube for cube, _ in piece.iter_nodes(window.level + length,
                                                                  region=lambda c: _related(c, window.cube)))
            previous_length, length = length, length + window.level

    result = pieces[0]
    for piece in pieces[1:]:
        result = result.union(piece)
    k_max = records[-1].length
    count, _ = h_star(result, k_max)
    trace = ConstructionTrace(alpha, eps, M, N, result, k_max, log_ratio(count, k_max, M), conditions, records)
    logger.info(f"Assouad extraction: {trace.summary()}")
    return trace


def _related(cube: BadicCube, window: BadicCube) -> bool:
    return cube.is_ancestor_of(window) or window.is_ancestor_of(cube)


@dataclass(frozen=True)
class GapRecord:
    """lhs <= rhs is the integer condition that picks the gap exponent.

    It bounds the diameter sum by k times its largest term, so diameter_sum can sit well below ell_power.
    """
    window: int
    offset: Tuple[int, ...]
    side_exp: int
    leaves: int
    ell_exp: int
    lhs: int
    rhs: int
    diameter_sum: float = 0.0
    ell_power: float = 0.0

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def diameters_covered(self) -> bool:
        return self.diameter_sum <= self.ell_power * (1 + 1e-12)


@dataclass
class GlobalTrace:
    alpha: Fraction
    eps: Fraction
    M: int
    N: int
    wset: WindowedSet
    k_max: int
    headline: float
    conditions: List[Condition] = field(default_factory=list)
    gaps: List[GapRecord] = field(default_factory=list)

    @property
    def delta(self) -> float:
        return self.wset.dim * math.log(2) / (self.k_max * math.log(self.M))

    @property
    def in_range(self) -> bool:
        slack = float(self.eps) + self.delta
        return float(self.alpha) - slack - 1e-12 <= self.headline <= float(self.alpha) + slack + 1e-12

    @property
    def ok(self) -> bool:
        return self.in_range and all(gap.ok for gap in self.gaps)

    def table(self) -> TableContents:
        rows = [[str(g.window), ",".join(str(o) for o in g.offset), str(g.side_exp), str(g.leaves),
                 str(g.ell_exp), str(g.lhs), str(g.rhs), format_ratio(g.diameter_sum), format_ratio(g.ell_power),
                 "yes" if g.ok else "no"] for g in self.gaps]
        return TableContents(["window", "offset", "m", "leaves", "ell_exp", "lhs", "rhs", "diam_sum", "ell_power",
                              "ok"], rows,
                             title=f"alpha={self.alpha} eps={self.eps} M={self.M} N={self.N}")

    def summary(self, decimals: int = 6) -> str:
        return (f"estimate={format_ratio(self.headline, decimals)} target={self.alpha} eps={self.eps} "
                f"delta={format_ratio(self.delta, decimals)} depth={self.k_max} ok={'yes' if self.ok else 'no'}")


def gap_exponent(k: int, max_side_exp: int, exponent: Fraction, M: int, previous: Optional[int]) -> int:
    """Smallest t > previous with k^q M^(p*max_side_exp) <= M^(p*t), where exponent = p/q.

    Then the first k window diameters, each raised to exponent, sum to at most (M^t)^exponent.
    This is a sufficient condition rather than the smallest t for the actual sum, and t strictly
    grows from window to window so the gaps never shrink.
    """
    p, q = exponent.numerator, exponent.denominator
    lhs = k ** q * M ** (p * max_side_exp)
    t = max_side_exp if previous is None else previous + 1
    if previous is None:
        while t > 0 and lhs <= M ** (p * (t - 1)):
            t -= 1
    while lhs > M ** (p * t):
        t += 1
    return t


def construct_subset_assouad_global(wset: WindowedSet, alpha: Number, eps: Number, M: int,
                                    strategy: str = GREEDY, seed: int = 0, cap: Optional[int] = None,
                                    strict: bool = False, offset_bits: int = 62, retry_limit: int = 64,
                                    denominator_limit: int = 64,
                                    status_text_callback: Optional[StatusCallback] = None) -> GlobalTrace:
    alpha, eps = to_fraction(alpha), to_fraction(eps)
    if alpha <= 0 or eps < 0:
        raise ParameterError(f"need alpha > 0 and eps >= 0, got alpha={alpha} eps={eps}")
    if wset.base != M:
        raise ParameterError(f"windowed set has base {wset.base}, the construction needs base M={M}")
    N = floor_power(M, alpha, 1, denominator_limit) if cap is None else cap
    conditions = large_m_conditions(M, N, alpha, eps, wset.dim, denominator_limit)
    leaf_counts = [w.tree.leaf_count for w in wset.windows]
    conditions.append(Condition("window counts nondecreasing",
                                f"window counts decrease: {leaf_counts}",
                                all(a <= b for a, b in zip(leaf_counts, leaf_counts[1:]))))
    enforce_conditions(conditions, strict)

    if len(wset.windows) == 1:
        window = wset.windows[0]
        trace = construct_subset_assouad(window.tree, alpha, eps, M, 1, strategy, seed, cap, strict,
                                         retry_limit, denominator_limit, status_text_callback)
        single = WindowedSet(M, wset.dim, (Window(window.offset, window.side_exp, trace.tree),))
        return GlobalTrace(alpha, eps, M, N, single, trace.k_max, trace.headline, conditions + trace.conditions)

    rng = np.random.default_rng(seed) if strategy == RANDOM else None
    exponent = alpha + eps
    limit = 2 ** offset_bits
    windows, gaps = [], []
    reach = 0
    ell_exp = None
    max_side = 0
    diameter_sum = 0.0
    for index, window in enumerate(wset.windows, start=1):
        params = PruneParams(M, window.tree.depth, N, alpha, eps, strategy, seed, retry_limit, denominator_limit)
        pruned = prune(window.tree, params, validate=False, rng=rng)
        side = M ** window.side_exp
        if index == 1:
            start = 0
        else:
            gap_start = reach + M ** ell_exp
            start = -(-gap_start // side) * side
        if start + side > limit:
            raise OffsetOverflowError(f"window {index} offset {start} exceeds 2^{offset_bits}")
        offset = (start,) + (0,) * (wset.dim - 1)
        windows.append(Window(offset, window.side_exp, pruned))
        reach = start + side
        max_side = max(max_side, window.side_exp)
        ell_exp = gap_exponent(index, max_side, exponent, M, ell_exp)
        p, q = exponent.numerator, exponent.denominator
        diameter_sum += float(M) ** (window.side_exp * float(exponent))
        gaps.append(GapRecord(index, offset, window.side_exp, pruned.leaf_count, ell_exp,
                              index ** q * M ** (p * max_side), M ** (p * ell_exp),
                              diameter_sum, float(M) ** (ell_exp * float(exponent))))
        if status_text_callback is not None:
            status_text_callback(f"Window {index}: offset {start} m={window.side_exp} "
                                 f"leaves {pruned.leaf_count} gap M^{ell_exp}")

    result = WindowedSet(M, wset.dim, tuple(windows))
    k_max = max_side if max_side > 0 else result.resolution
    count, _ = h_star(result, k_max, STAR_GLOBAL)
    trace = GlobalTrace(alpha, eps, M, N, result, k_max, log_ratio(count, k_max, M), conditions, gaps)
    logger.info(f"Global Assouad extraction: {trace.summary()}")
    return trace


def ladder_points(alpha: Fraction, s: float, n: int) -> Tuple[float, float]:
    """(low, high) ladder points: alpha(1-2^-n) rises to alpha, s+(alpha-s)(1-2^-n) falls to alpha."""
    weight = 1 - 2.0 ** (-n)
    return float(alpha) * weight, s + (float(alpha) - s) * weight


def _cap_in_interval(M: int, lo: Fraction, hi: Fraction, closed_high: bool, denominator_limit: int) -> int:
    if closed_high:
        N = floor_power(M, hi, 1, denominator_limit)
        if N < 1 or compare_power(N, M, lo, denominator_limit) <= 0:
            raise StageError(f"no integer N with {lo} < log N/log {M} <= {hi}")
    else:
        N = ceil_power(M, hi, 1, denominator_limit) - 1
        if N < 1 or compare_power(N, M, lo, denominator_limit) < 0:
            raise StageError(f"no integer N with {lo} <= log N/log {M} < {hi}")
    return N


@dataclass(frozen=True)
class LadderStage:
    stage: int
    side: str
    N: int
    lo: float
    hi: float
    headline: float

    @property
    def ok(self) -> bool:
        if self.side == "A":
            return self.lo < self.headline <= self.hi + 1e-12
        return self.lo - 1e-12 <= self.headline < self.hi

    def row(self, decimals: int = 6) -> List[str]:
        return [str(self.stage), self.side, str(self.N), format_ratio(self.lo, decimals),
                format_ratio(self.hi, decimals), format_ratio(self.headline, decimals), "yes" if self.ok else "no"]


@dataclass
class LadderResult:
    A: List[CubeTree]
    B: List[CubeTree]
    stages: List[LadderStage]

    def containment_ok(self) -> bool:
        chain = self.A + list(reversed(self.B))
        return all(a.is_subset_of(b) for a, b in zip(chain, chain[1:]))

    @property
    def ok(self) -> bool:
        return self.containment_ok() and all(stage.ok for stage in self.stages)

    def table(self, decimals: int = 6) -> TableContents:
        return TableContents(["stage", "set", "N", "lo", "hi", "estimate", "ok"],
                             [stage.row(decimals) for stage in self.stages], title="sandwich ladder")


def sandwich_assemble(tree: CubeTree, alpha: Number, levels: int, M: int, strategy: str = GREEDY, seed: int = 0,
                      retry_limit: int = 64, denominator_limit: int = 64,
                      status_text_callback: Optional[StatusCallback] = None) -> LadderResult:
    """Nested A_1 ⊂ ... ⊂ A_L ⊂ B_L ⊂ ... ⊂ B_1 squeezing the star estimate onto alpha."""
    alpha = to_fraction(alpha)
    if levels < 1:
        raise ParameterError("ladder depth must be at least 1")
    source = _as_base(tree, M)
    depth = source.depth
    if depth < 1:
        raise DepthError("the set has no levels to work with")
    s = log_ratio(source.leaf_count, depth, M)
    if not 0 < float(alpha) < s:
        raise ParameterError(f"need 0 < alpha < headline(E): {alpha} vs {format_ratio(s)}")

    def run(inside: CubeTree, N: int) -> CubeTree:
        return construct_subset_assouad(inside, alpha, 0, M, 1, strategy, seed, N, False, retry_limit,
                                        denominator_limit).tree

    def headline(item: CubeTree) -> float:
        return log_ratio(h_star(item, depth)[0], depth, M)

    def exact(value: float) -> Fraction:
        return Fraction(value).limit_denominator(1 << 20)

    A, B, stages = [], [], []
    previous_a, previous_b = None, source
    for n in range(1, levels + 1):
        low, high = ladder_points(alpha, s, n)
        low_next, _ = ladder_points(alpha, s, n + 1)
        _, high_prev = ladder_points(alpha, s, n - 1)
        cap_b = _cap_in_interval(M, exact(high), exact(high_prev), False, denominator_limit)
        cap_a = _cap_in_interval(M, exact(low), exact(low_next), True, denominator_limit)
        b_piece = run(previous_b, cap_b)
        a_piece = run(b_piece, cap_a)
        a_tree = a_piece if previous_a is None else previous_a.union(a_piece)
        b_tree = b_piece if previous_a is None else previous_a.union(b_piece)
        A.append(a_tree)
        B.append(b_tree)
        stages.append(LadderStage(n, "A", cap_a, low, low_next, headline(a_tree)))
        stages.append(LadderStage(n, "B", cap_b, high, high_prev, headline(b_tree)))
        if status_text_callback is not None:
            status_text_callback(f"Ladder stage {n}: N_A={cap_a} N_B={cap_b}")
        previous_a, previous_b = a_tree, b_tree
    result = LadderResult(A, B, stages)
    logger.info(f"Sandwich ladder with {levels} stage(s): ok={result.ok}")
    return result
