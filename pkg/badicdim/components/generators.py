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
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Tuple, Union

import numpy as np

from badicdim.components.cubes import BadicCube, CubeTree, NodeFactory, Window, WindowedSet, child_labels, \
    full_tree, tree_from_digit_rule
from badicdim.components.definitions import LOGGER_NAME, DIGIT_CANTOR, FULL_CUBE, LATTICE_WINDOW, INTEGER_CANTOR, \
    ONE_OVER_K, CANTOR_LATTICE_UNION, RANDOM_BRANCHING, FAMILIES, FAMILY_ALIASES
from badicdim.components.errors import ParameterError

logger = logging.getLogger(LOGGER_NAME)

Digits = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    base: int = 2
    dim: int = 1
    depth: int = 8
    digits: Digits = ()
    lattice_digits: Digits = ()
    side_exp: int = 6
    resolution: int = 4
    windows: int = 1
    count: int = 64
    max_children: int = 2
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "family", FAMILY_ALIASES.get(self.family, self.family))
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}, expected one of {', '.join(FAMILIES)}")
        if self.base < 2:
            raise ParameterError(f"base must be at least 2, got {self.base}")
        if self.dim < 1:
            raise ParameterError(f"dimension must be at least 1, got {self.dim}")
        if self.depth < 0 or self.side_exp < 0 or self.resolution < 0:
            raise ParameterError("depth, side exponent and resolution must be non-negative")
        if self.windows < 1:
            raise ParameterError("at least one window is needed")


def parse_digits(text: str, dim: int) -> Digits:
    """'0,2' for d=1 or '00,22' (one character per coordinate) for d>1."""
    labels = []
    for item in text.split(","):
        item = item.strip()
        if dim == 1:
            if not item.isdigit():
                raise ParameterError(f"not a digit: {item!r}")
            labels.append((int(item),))
        else:
            if len(item) != dim:
                raise ParameterError(f"digit tuple {item!r} needs {dim} characters")
            labels.append(tuple(int(char, 36) for char in item))
    return tuple(labels)


def _chain_below(base: int, dim: int, full_levels: int, allowed, resolution: int) -> CubeTree:
    """Digit-rule tree for full_levels levels, then a chain of zeros down to the resolution."""
    factory = NodeFactory()
    node = factory.chain([(0,) * dim] * resolution, factory.leaf())
    for _ in range(full_levels):
        node = factory.node((label, node) for label in allowed)
    return CubeTree(base, dim, full_levels + resolution, node)


def _lattice_labels(digits: Digits, dim: int, base: int) -> list:
    flat = sorted({d for label in digits for d in label})
    if not flat:
        raise ParameterError("the lattice digit set is empty")
    if any(not 0 <= d < base for d in flat):
        raise ParameterError(f"lattice digits {flat} are not valid in base {base}")
    return list(product(flat, repeat=dim))


def integer_cantor_windows(base: int, dim: int, digits: Digits, levels: int, resolution: int,
                           copies: int = 1, first_offset: int = 0) -> Tuple[Window, ...]:
    """Windows of side base^levels holding the integers whose base-M digits lie in digits."""
    tree = _chain_below(base, dim, levels, _lattice_labels(digits, dim, base), resolution)
    windows = []
    for copy in range(copies):
        start = first_offset if copy == 0 else base ** (levels + copy + 1)
        windows.append(Window((start,) + (0,) * (dim - 1), levels, tree))
    return tuple(windows)


def random_branching_tree(base: int, dim: int, depth: int, max_children: int, seed: int = 0) -> CubeTree:
    """Seeded tree where every internal node has between 1 and max_children children."""
    labels = child_labels(base, dim)
    if not 1 <= max_children <= len(labels):
        raise ParameterError(f"max_children must be in 1..{len(labels)}, got {max_children}")
    rng = np.random.default_rng(seed)
    factory = NodeFactory()

    def build(level):
        if level == depth:
            return factory.leaf()
        size = int(rng.integers(1, max_children + 1))
        chosen = sorted(rng.choice(len(labels), size=size, replace=False).tolist())
        return factory.node((labels[i], build(level + 1)) for i in chosen)

    return CubeTree(base, dim, depth, build(0))


def one_over_k_tree(count: int, depth: int, base: int = 2) -> CubeTree:
    """{1/k : k <= count} at resolution base^-depth; 1 is clamped into the top cell."""
    if count < 1:
        raise ParameterError("count must be at least 1")
    top = base ** depth - 1
    cubes = {BadicCube(base, depth, (min(math.floor(Fraction(1, k) * base ** depth), top),))
             for k in range(1, count + 1)}
    return CubeTree.from_cubes(base, 1, depth, cubes)


def generate(spec: GeneratorSpec) -> Union[CubeTree, WindowedSet]:
    b, d = spec.base, spec.dim
    if spec.family == DIGIT_CANTOR:
        result = tree_from_digit_rule(b, d, spec.depth, spec.digits)
    elif spec.family == FULL_CUBE:
        result = full_tree(b, d, spec.depth)
    elif spec.family == LATTICE_WINDOW:
        tree = _chain_below(b, d, spec.side_exp, child_labels(b, d), spec.resolution)
        result = WindowedSet(b, d, (Window((0,) * d, spec.side_exp, tree),))
    elif spec.family == INTEGER_CANTOR:
        result = WindowedSet(b, d, integer_cantor_windows(b, d, spec.lattice_digits, spec.side_exp,
                                                          spec.resolution, spec.windows))
    elif spec.family == ONE_OVER_K:
        if d != 1:
            raise ParameterError("one-over-k is a subset of the line, use dimension 1")
        result = one_over_k_tree(spec.count, spec.depth, b)
    elif spec.family == CANTOR_LATTICE_UNION:
        small = tree_from_digit_rule(b, d, spec.depth, spec.digits)
        lattice = integer_cantor_windows(b, d, spec.lattice_digits, spec.side_exp, spec.depth, spec.windows,
                                         first_offset=b ** spec.side_exp)
        result = WindowedSet(b, d, (Window((0,) * d, 0, small),) + lattice)
    else:
        result = random_branching_tree(b, d, spec.depth, spec.max_children, spec.seed)
    logger.info(f"Generated {spec.family}: {result.describe()}")
    return result
