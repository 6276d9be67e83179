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
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np

from badicdim.components.assouad_extract import PruneParams, prune, random_prune_once
from badicdim.components.cubes import CubeTree, PointSet, full_tree, leaf_representatives, tree_from_digit_rule
from badicdim.components.definitions import LOGGER_NAME, CheckRow
from badicdim.components.estimators import ball_cover_count, count_hit_subcubes, h_star, packing_count, \
    verify_cover_pack_sandwich
from badicdim.components.generators import random_branching_tree
from badicdim.components.helpers import floor_power, power_ge
from badicdim.components.oracles import oracle_exact_hstar, oracle_exact_packing

logger = logging.getLogger(LOGGER_NAME)

StatusCallback = Optional[Callable[..., None]]


def _row(check: str, case: str, observed, expected, ok: bool) -> CheckRow:
    if not ok:
        logger.warning(f"{check} failed for {case}: observed {observed}, expected {expected}")
    return CheckRow(check, case, str(observed), str(expected), ok)


def _random_tree(rng: np.random.Generator, bases=(2, 3, 4), max_depth: int = 6) -> Tuple[str, CubeTree]:
    base = int(rng.choice(bases))
    depth = int(rng.integers(1, max_depth + 1))
    max_children = int(rng.integers(1, base + 1))
    seed = int(rng.integers(0, 2 ** 31))
    name = f"random-branching(b={base},n={depth},c={max_children},seed={seed})"
    return name, random_branching_tree(base, 1, depth, max_children, seed)


def verify_h_star(seed: int = 0, trees: int = 200, size_guard: int = 65536) -> List[CheckRow]:
    """h_star against the flat oracle, witness re-evaluation and submultiplicativity."""
    rng = np.random.default_rng(seed)
    cases = [("digit-cantor(b=3,{0,2},n=6)", tree_from_digit_rule(3, 1, 6, {0, 2})),
             ("full-cube(b=2,d=2,n=4)", full_tree(2, 2, 4))]
    cases += [_random_tree(rng) for _ in range(trees)]
    rows = []
    for name, tree in cases:
        counts = {}
        mismatches = bad_witnesses = 0
        for k in range(1, tree.depth + 1):
            count, witness = h_star(tree, k)
            counts[k] = count
            mismatches += count != oracle_exact_hstar(tree, k, size_guard)
            bad_witnesses += count_hit_subcubes(tree, witness, k) != count
        broken = sum(counts[j + k] > counts[j] * counts[k]
                     for j in range(1, tree.depth) for k in range(1, tree.depth - j + 1))
        rows.append(_row("oracle", name, mismatches, 0, mismatches == 0))
        rows.append(_row("witness", name, bad_witnesses, 0, bad_witnesses == 0))
        rows.append(_row("submultiplicative", name, broken, 0, broken == 0))
    return rows


def _random_points(rng: np.random.Generator, size: int, dim: int, denominator: int = 32) -> PointSet:
    grid = denominator ** dim
    chosen = rng.choice(grid, size=min(size, grid), replace=False).tolist()
    points = []
    for index in chosen:
        coords = []
        for _ in range(dim):
            index, value = divmod(index, denominator)
            coords.append(Fraction(value, denominator))
        points.append(tuple(coords))
    return PointSet(2, dim, tuple(points))


def verify_packing_sandwich(seed: int = 0, samples: int = 500, oracle_limit: int = 20) -> List[CheckRow]:
    """Cover/pack sandwich on small point sets, plus greedy packing within 2^d of the optimum."""
    rng = np.random.default_rng(seed)
    sets = [("digit-cantor(b=3,{0,2},n=3)", leaf_representatives(tree_from_digit_rule(3, 1, 3, {0, 2}))),
            ("three-points", PointSet(2, 1, ((Fraction(0),), (Fraction(1, 2),), (Fraction(1),)), exponent=1))]
    for dim in (1, 2):
        for _ in range(3):
            size = int(rng.integers(1, oracle_limit + 1))
            sets.append((f"random(d={dim},size={size})", _random_points(rng, size, dim)))
    rows = []
    per_set = max(1, samples // len(sets))
    for name, points in sets:
        triples = []
        for _ in range(per_set):
            center = points.points[int(rng.integers(0, len(points)))]
            R = Fraction(int(rng.integers(1, 33)), 32)
            r = R * Fraction(int(rng.integers(1, 16)), 16)
            triples.append((center, R, r))
        sandwich = verify_cover_pack_sandwich(points, triples, oracle_limit)
        failures = sum(not row.ok for row in sandwich)
        rows.append(_row("sandwich", name, failures, 0, failures == 0))
        outside = 0
        for center, R, r in triples:
            greedy = packing_count(points, center, R, r)
            exact = oracle_exact_packing(points, center, R, r, oracle_limit)
            outside += not (exact <= greedy * 2 ** points.dim and greedy <= exact)
        rows.append(_row("greedy-vs-exact", name, outside, 0, outside == 0))
    return rows


def admissible_exponents(tree: CubeTree, M: int) -> Tuple[Fraction, Fraction]:
    """(s, eps) with leaf count >= M^(ns) and every node's child count <= floor(M^(s+eps))."""
    n = tree.depth
    widest = tree.max_children()
    s = Fraction(math.floor(math.log(tree.leaf_count, M) / n * 1000), 1000) if n else Fraction(0)
    while s > 0 and not power_ge(tree.leaf_count, M, n * s):
        s -= Fraction(1, 1000)
    top = Fraction(math.ceil(math.log(max(widest, 1), M) * 1000), 1000)
    while floor_power(M, top) < widest:
        top += Fraction(1, 1000)
    return s, max(top - s, Fraction(0))


def verify_prune_bound(seed: int = 0, trees: int = 200) -> List[CheckRow]:
    """Greedy prune keeps >= ⌈N^n M^{-nε}⌉ leaves with at most N children, for every admissible N."""
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(trees):
        name, tree = _random_tree(rng)
        M = tree.base
        s, eps = admissible_exponents(tree, M)
        cap = floor_power(M, s + eps)
        short = wide = 0
        for N in range(1, cap + 1):
            params = PruneParams(M, tree.depth, N, s, eps)
            pruned = prune(tree, params)
            short += pruned.leaf_count < params.bound
            wide += pruned.max_children() > N
        rows.append(_row("prune-bound", f"{name} s={s} eps={eps}", short, 0, short == 0))
        rows.append(_row("prune-cap", name, wide, 0, wide == 0))
    return rows


def verify_ball_cube(seed: int = 0, samples: int = 100) -> List[CheckRow]:
    """Ball counts around a cube corner agree with the cube count within a factor 6^d."""
    rng = np.random.default_rng(seed)
    trees = [("digit-cantor(b=3,{0,2},n=6)", tree_from_digit_rule(3, 1, 6, {0, 2})),
             ("digit-cantor(b=4,{0,3},n=5)", tree_from_digit_rule(4, 1, 5, {0, 3})),
             ("full-cube(b=2,d=2,n=5)", full_tree(2, 2, 5))]
    rows = []
    for name, tree in trees:
        points = leaf_representatives(tree)
        factor = 6 ** tree.dim
        outside = 0
        for _ in range(samples):
            j = int(rng.integers(0, tree.depth))
            k = int(rng.integers(1, tree.depth - j + 1))
            nodes = [cube for cube, _ in tree.iter_nodes(j)]
            cube = nodes[int(rng.integers(0, len(nodes)))]
            corner = tree.first_leaf_under(cube).corner()
            cubes = count_hit_subcubes(tree, cube, k)
            balls = ball_cover_count(points, corner, Fraction(1, tree.base ** j), Fraction(1, tree.base ** (j + k)))
            outside += not (cubes <= balls * factor and balls <= cubes * factor)
        rows.append(_row("ball-vs-cube", name, outside, 0, outside == 0))
    return rows


def verify_random_prune(seed: int = 0, runs: int = 1000) -> List[CheckRow]:
    """Mean leaf count of single random prunes reaches N^n M^{-nε} within three standard errors."""
    rng = np.random.default_rng(seed)
    cases = [("full(M=4,n=3),N=2", full_tree(4, 1, 3), 2),
             ("random-branching(M=4,n=3,c=4,seed=7),N=2", random_branching_tree(4, 1, 3, 4, 7), 2)]
    rows = []
    for name, tree, N in cases:
        s, eps = admissible_exponents(tree, tree.base)
        target = N ** tree.depth * float(tree.base) ** (-tree.depth * float(eps))
        counts = np.array([random_prune_once(tree, N, rng).leaf_count for _ in range(runs)], dtype=float)
        mean = float(counts.mean())
        error = float(counts.std(ddof=1) / math.sqrt(runs)) if runs > 1 else 0.0
        ok = mean + 3 * error >= target
        rows.append(_row("random-prune-mean", f"{name} s={s} eps={eps}", f"{mean:.4f}+-{error:.4f}",
                         f">= {target:.4f}", ok))
    return rows
