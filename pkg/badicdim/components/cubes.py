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

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import groupby, product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from badicdim.components.errors import DepthError, ParameterError

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"

Label = Tuple[int, ...]
Point = Tuple[Fraction, ...]


def digit_values(value: int, base: int, length: int) -> List[int]:
    """Most significant first; works for any base."""
    digits = []
    for _ in range(length):
        value, digit = divmod(value, base)
        digits.append(digit)
    return digits[::-1]


def digit_string(value: int, base: int, length: int) -> str:
    if base > len(DIGITS):
        raise ParameterError(f"base {base} cannot be written with single-character digits")
    chars = []
    for _ in range(length):
        value, digit = divmod(value, base)
        chars.append(DIGITS[digit])
    return "".join(reversed(chars))


def format_badic(value: Fraction, base: int) -> str:
    """Positional base-b rendering of a b-adic rational, e.g. 0.02 for 2/9 in base 3."""
    value = Fraction(value)
    sign = "-" if value < 0 else ""
    value = abs(value)
    whole = value.numerator // value.denominator
    rest = value - whole
    int_digits = digit_string(whole, base, max(1, _digit_length(whole, base)))
    frac_digits = []
    while rest and len(frac_digits) < 256:
        rest *= base
        digit = rest.numerator // rest.denominator
        frac_digits.append(DIGITS[digit])
        rest -= digit
    if not frac_digits:
        return sign + int_digits
    return sign + int_digits + "." + "".join(frac_digits)


def _digit_length(value: int, base: int) -> int:
    length = 0
    while value:
        value //= base
        length += 1
    return length


def is_badic(value: Fraction, base: int) -> bool:
    denominator = Fraction(value).denominator
    while denominator != 1:
        step = math.gcd(denominator, base)
        if step == 1:
            return False
        denominator //= step
    return True


def linf(p: Sequence[Fraction], q: Sequence[Fraction]) -> Fraction:
    return max(abs(a - b) for a, b in zip(p, q))


@dataclass(frozen=True, order=True)
class BadicCube:
    """A level-n cube of side base**-n; index holds one integer in [0, base**n) per coordinate."""
    base: int
    level: int
    index: Tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ParameterError(f"base must be at least 2, got {self.base}")
        if self.level < 0:
            raise ParameterError(f"level must be non-negative, got {self.level}")
        if len(self.index) == 0:
            raise ParameterError("a cube needs at least one coordinate")
        limit = self.base ** self.level
        for value in self.index:
            if not 0 <= value < limit:
                raise ParameterError(f"coordinate {value} outside [0, {limit}) at level {self.level}")

    @classmethod
    def root(cls, base: int, dim: int) -> "BadicCube":
        return cls(base, 0, (0,) * dim)

    @classmethod
    def from_digits(cls, base: int, digit_strings: Sequence[str]) -> "BadicCube":
        lengths = {len(s) for s in digit_strings}
        if len(lengths) != 1:
            raise ParameterError(f"coordinate strings differ in length: {list(digit_strings)}")
        level = lengths.pop()
        index = []
        for text in digit_strings:
            value = 0
            for char in text:
                digit = DIGITS.find(char.lower())
                if not 0 <= digit < base:
                    raise ParameterError(f"digit {char!r} is not valid in base {base}")
                value = value * base + digit
            index.append(value)
        return cls(base, level, tuple(index))

    @classmethod
    def from_labels(cls, base: int, dim: int, labels: Iterable[Label]) -> "BadicCube":
        index = [0] * dim
        level = 0
        for label in labels:
            index = [i * base + digit for i, digit in zip(index, label)]
            level += 1
        return cls(base, level, tuple(index))

    @property
    def dim(self) -> int:
        return len(self.index)

    @property
    def side(self) -> Fraction:
        return Fraction(1, self.base ** self.level)

    def digits(self) -> Tuple[str, ...]:
        return tuple(digit_string(value, self.base, self.level) for value in self.index)

    def labels(self) -> Tuple[Label, ...]:
        columns = [digit_values(value, self.base, self.level) for value in self.index]
        return tuple(tuple(column[pos] for column in columns) for pos in range(self.level))

    def corner(self) -> Point:
        return tuple(Fraction(value, self.base ** self.level) for value in self.index)

    def contains_point(self, point: Sequence[Fraction]) -> bool:
        side = self.side
        return all(lo <= x < lo + side for lo, x in zip(self.corner(), point))

    def parent(self) -> "BadicCube":
        if self.level == 0:
            raise ParameterError("the root cube has no parent")
        return BadicCube(self.base, self.level - 1, tuple(v // self.base for v in self.index))

    def ancestor(self, level: int) -> "BadicCube":
        shift = self.base ** (self.level - level)
        return BadicCube(self.base, level, tuple(v // shift for v in self.index))

    def child(self, label: Label) -> "BadicCube":
        return BadicCube(self.base, self.level + 1,
                         tuple(v * self.base + digit for v, digit in zip(self.index, label)))

    def is_ancestor_of(self, other: "BadicCube") -> bool:
        return other.level >= self.level and other.ancestor(self.level) == self

    def __str__(self):
        if self.level == 0:
            return "root"
        if self.base > len(DIGITS):
            return "/".join(".".join(str(d) for d in label) for label in self.labels())
        return ",".join(self.digits())


def child_labels(base: int, dim: int) -> List[Label]:
    return list(product(range(base), repeat=dim))


def subdivide(cube: BadicCube) -> List[BadicCube]:
    return [cube.child(label) for label in child_labels(cube.base, cube.dim)]


class TrieNode:
    """Immutable prefix-tree node; counts[j] is the number of descendants j levels below."""
    __slots__ = ("children", "height", "counts", "_labels")

    def __init__(self, children: Tuple[Tuple[Label, "TrieNode"], ...]):
        self.children = children
        if not children:
            self.height = 0
            self.counts = (1,)
        else:
            heights = {child.height for _, child in children}
            if len(heights) != 1:
                raise ParameterError("leaves must all sit at the same depth")
            self.height = heights.pop() + 1
            counts = [1]
            for j in range(1, self.height + 1):
                counts.append(sum(child.counts[j - 1] for _, child in children))
            self.counts = tuple(counts)
        self._labels = {label: child for label, child in children}

    def child(self, label: Label) -> Optional["TrieNode"]:
        return self._labels.get(label)

    @property
    def labels(self) -> List[Label]:
        return [label for label, _ in self.children]


class NodeFactory:
    """Hash-conses nodes so identical subtrees are stored once."""

    def __init__(self):
        self._table: Dict[tuple, TrieNode] = {}
        self._leaf = TrieNode(())

    def leaf(self) -> TrieNode:
        return self._leaf

    def node(self, children: Iterable[Tuple[Label, TrieNode]]) -> TrieNode:
        ordered = tuple(sorted(children, key=lambda item: item[0]))
        if not ordered:
            raise ParameterError("an internal node needs at least one child")
        key = tuple((label, id(child)) for label, child in ordered)
        if (found := self._table.get(key)) is None:
            found = TrieNode(ordered)
            self._table[key] = found
        return found

    def chain(self, labels: Sequence[Label], tail: TrieNode) -> TrieNode:
        node = tail
        for label in reversed(labels):
            node = self.node([(label, node)])
        return node


class CubeTree:
    def __init__(self, base: int, dim: int, depth: int, root: TrieNode):
        if base < 2 or dim < 1 or depth < 0:
            raise ParameterError(f"invalid tree shape b={base} d={dim} n={depth}")
        if root.height != depth:
            raise ParameterError(f"root height {root.height} does not match depth {depth}")
        self.base = base
        self.dim = dim
        self.depth = depth
        self.root = root

    @classmethod
    def from_cubes(cls, base: int, dim: int, depth: int, leaves: Iterable[BadicCube]) -> "CubeTree":
        paths = []
        for cube in leaves:
            if cube.base != base or cube.dim != dim or cube.level != depth:
                raise ParameterError(f"leaf {cube} does not match b={base} d={dim} n={depth}")
            paths.append(cube.labels())
        return cls.from_paths(base, dim, depth, paths)

    @classmethod
    def from_paths(cls, base: int, dim: int, depth: int, paths: Iterable[Sequence[Label]]) -> "CubeTree":
        paths = sorted(set(tuple(p) for p in paths))
        if not paths:
            raise ParameterError("a cube tree needs at least one leaf")
        factory = NodeFactory()

        def build(group, level):
            if level == depth:
                return factory.leaf()
            return factory.node((label, build(list(items), level + 1))
                                for label, items in groupby(group, key=lambda p: p[level]))

        return cls(base, dim, depth, build(paths, 0))

    def same_shape(self, other: "CubeTree") -> bool:
        return (self.base, self.dim, self.depth) == (other.base, other.dim, other.depth)

    def level_count(self, level: int) -> int:
        if not 0 <= level <= self.depth:
            raise DepthError(f"level {level} outside 0..{self.depth}")
        return self.root.counts[level]

    @property
    def leaf_count(self) -> int:
        return self.root.counts[self.depth]

    def node_at(self, cube: BadicCube) -> Optional[TrieNode]:
        if cube.level > self.depth:
            raise DepthError(f"cube level {cube.level} below tree depth {self.depth}")
        node = self.root
        for label in cube.labels():
            node = node.child(label)
            if node is None:
                return None
        return node

    def cube(self, labels: Sequence[Label]) -> BadicCube:
        return BadicCube.from_labels(self.base, self.dim, labels)

    def iter_nodes(self, level: int,
                   region: Optional[Callable[[BadicCube], bool]] = None) -> Iterator[Tuple[BadicCube, TrieNode]]:
        """Nodes at one level in lexicographic order; region prunes whole subtrees."""
        if not 0 <= level <= self.depth:
            raise DepthError(f"level {level} outside 0..{self.depth}")

        def walk(node, cube):
            if region is not None and not region(cube):
                return
            if cube.level == level:
                yield cube, node
                return
            for label, child in node.children:
                yield from walk(child, cube.child(label))

        yield from walk(self.root, BadicCube.root(self.base, self.dim))

    def iter_leaves(self) -> Iterator[BadicCube]:
        for cube, _ in self.iter_nodes(self.depth):
            yield cube

    def first_leaf_under(self, cube: BadicCube) -> Optional[BadicCube]:
        node = self.node_at(cube)
        if node is None:
            return None
        while node.children:
            label, node = node.children[0]
            cube = cube.child(label)
        return cube

    def distinct_nodes(self) -> Iterator[Tuple[BadicCube, TrieNode]]:
        """Each shared node once, with the first path that reaches it."""
        seen = set()

        def walk(node, cube):
            if id(node) in seen:
                return
            seen.add(id(node))
            yield cube, node
            for label, child in node.children:
                yield from walk(child, cube.child(label))

        yield from walk(self.root, BadicCube.root(self.base, self.dim))

    def max_children(self) -> int:
        return max((len(node.children) for _, node in self.distinct_nodes()), default=0)

    def union(self, other: "CubeTree") -> "CubeTree":
        if not self.same_shape(other):
            raise ParameterError("union needs trees of equal base, dimension and depth")
        factory = NodeFactory()
        memo = {}

        def merge(a, b):
            if a is None:
                return b
            if b is None or a is b:
                return a
            key = (id(a), id(b))
            if key not in memo:
                if not a.children:
                    memo[key] = a
                else:
                    labels = sorted(set(a.labels) | set(b.labels))
                    memo[key] = factory.node((label, merge(a.child(label), b.child(label))) for label in labels)
            return memo[key]

        return CubeTree(self.base, self.dim, self.depth, merge(self.root, other.root))

    def is_subset_of(self, other: "CubeTree") -> bool:
        if not self.same_shape(other):
            return False
        memo = {}

        def inside(a, b):
            if a is b:
                return True
            key = (id(a), id(b))
            if key not in memo:
                result = True
                for label, child in a.children:
                    target = b.child(label)
                    if target is None or not inside(child, target):
                        result = False
                        break
                memo[key] = result
            return memo[key]

        return inside(self.root, other.root)

    def same_set(self, other: "CubeTree") -> bool:
        return self.is_subset_of(other) and other.is_subset_of(self)

    def subtree(self, cube: BadicCube) -> "CubeTree":
        """The part of the set inside cube, rescaled so cube becomes [0,1)^d."""
        node = self.node_at(cube)
        if node is None:
            raise ParameterError(f"cube {cube} is not in the tree")
        return CubeTree(self.base, self.dim, self.depth - cube.level, node)

    def graft(self, cube: BadicCube, inner: "CubeTree") -> "CubeTree":
        """Place a rescaled tree back inside cube; the inverse of subtree."""
        if inner.depth + cube.level != self.depth or inner.base != self.base:
            raise ParameterError("grafted tree does not fit below the cube")
        factory = NodeFactory()
        return CubeTree(self.base, self.dim, self.depth, factory.chain(cube.labels(), inner.root))

    def restrict(self, cube: BadicCube) -> "CubeTree":
        """E ∩ cube, kept in place."""
        return self.graft(cube, self.subtree(cube))

    def truncate(self, depth: int) -> "CubeTree":
        if not 0 <= depth <= self.depth:
            raise DepthError(f"cannot truncate depth {self.depth} tree to {depth}")
        factory = NodeFactory()
        memo = {}

        def cut(node, remaining):
            if remaining == 0:
                return factory.leaf()
            key = (id(node), remaining)
            if key not in memo:
                memo[key] = factory.node((label, cut(child, remaining - 1)) for label, child in node.children)
            return memo[key]

        return CubeTree(self.base, self.dim, depth, cut(self.root, depth))

    def rebase(self, new_base: int) -> "CubeTree":
        """Regroup digits for new_base = base**j (truncating depth), or split them for base = new_base**j."""
        if new_base == self.base:
            return self
        group = _exact_log(new_base, self.base)
        if group is not None:
            return self._group_digits(new_base, group)
        split = _exact_log(self.base, new_base)
        if split is not None:
            return self._split_digits(new_base, split)
        raise ParameterError(f"base {new_base} is not a power or root of base {self.base}")

    def _group_digits(self, new_base: int, group: int) -> "CubeTree":
        new_depth = self.depth // group
        if new_depth == 0:
            raise DepthError(f"depth {self.depth} is too shallow to regroup into base {new_base}")
        source = self.truncate(new_depth * group)
        factory = NodeFactory()
        memo = {}

        def paths(node, steps):
            if steps == 0:
                yield (), node
                return
            for label, child in node.children:
                for rest, end in paths(child, steps - 1):
                    yield (label,) + rest, end

        def regroup(node):
            if not node.children:
                return factory.leaf()
            if id(node) not in memo:
                children = []
                for labels, end in paths(node, group):
                    combined = tuple(_combine(digits, self.base) for digits in zip(*labels))
                    children.append((combined, regroup(end)))
                memo[id(node)] = factory.node(children)
            return memo[id(node)]

        return CubeTree(new_base, self.dim, new_depth, regroup(source.root))

    def _split_digits(self, new_base: int, split: int) -> "CubeTree":
        factory = NodeFactory()
        memo = {}

        def explode(node):
            if not node.children:
                return factory.leaf()
            if id(node) not in memo:
                children = []
                for label, child in node.children:
                    pieces = [digit_values(value, new_base, split) for value in label]
                    steps = [tuple(p[pos] for p in pieces) for pos in range(split)]
                    children.append((steps, explode(child)))
                heads = {}
                for steps, child in children:
                    heads.setdefault(steps[0], []).append((steps[1:], child))
                memo[id(node)] = factory.node((head, _assemble(factory, tails)) for head, tails in heads.items())
            return memo[id(node)]

        return CubeTree(new_base, self.dim, self.depth * split, explode(self.root))

    def describe(self) -> str:
        return f"bdt b={self.base} d={self.dim} n={self.depth}"


def _assemble(factory: NodeFactory, tails: List[Tuple[Sequence[Label], TrieNode]]) -> TrieNode:
    if len(tails[0][0]) == 0:
        return tails[0][1]
    heads = {}
    for steps, child in tails:
        heads.setdefault(steps[0], []).append((steps[1:], child))
    return factory.node((head, _assemble(factory, rest)) for head, rest in heads.items())


def _combine(digits: Sequence[int], base: int) -> int:
    value = 0
    for digit in digits:
        value = value * base + digit
    return value


def _exact_log(value: int, base: int) -> Optional[int]:
    exponent = 0
    power = 1
    while power < value:
        power *= base
        exponent += 1
    return exponent if power == value and exponent > 0 else None


def tree_from_digit_rule(base: int, dim: int, depth: int, allowed: Iterable) -> CubeTree:
    labels = sorted({(item,) if isinstance(item, int) else tuple(item) for item in allowed})
    if not labels:
        raise ParameterError("the allowed digit set is empty")
    for label in labels:
        if len(label) != dim or not all(0 <= digit < base for digit in label):
            raise ParameterError(f"digit tuple {label} is not valid for b={base} d={dim}")
    factory = NodeFactory()
    node = factory.leaf()
    for _ in range(depth):
        node = factory.node((label, node) for label in labels)
    return CubeTree(base, dim, depth, node)


def full_tree(base: int, dim: int, depth: int) -> CubeTree:
    return tree_from_digit_rule(base, dim, depth, child_labels(base, dim))


@dataclass(frozen=True)
class PointSet:
    """Exact points with b-adic rational coordinates in [0, base**exponent)^dim, kept sorted."""
    base: int
    dim: int
    points: Tuple[Point, ...]
    exponent: int = 0

    def __post_init__(self):
        limit = Fraction(self.base) ** self.exponent
        cleaned = []
        for point in self.points:
            point = tuple(Fraction(x) for x in point)
            if len(point) != self.dim:
                raise ParameterError(f"point {point} does not have {self.dim} coordinates")
            for x in point:
                if not 0 <= x < limit:
                    raise ParameterError(f"coordinate {x} outside [0, {limit})")
                if not is_badic(x, self.base):
                    raise ParameterError(f"coordinate {x} has no finite base-{self.base} expansion")
            cleaned.append(point)
        if len(set(cleaned)) != len(cleaned):
            raise ParameterError("points must be distinct")
        object.__setattr__(self, "points", tuple(sorted(cleaned)))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point):
        return tuple(Fraction(x) for x in point) in set(self.points)

    def within(self, center: Sequence[Fraction], radius: Fraction) -> List[Point]:
        """Points of the set inside the open max-metric ball B(center, radius)."""
        return [p for p in self.points if linf(p, center) < radius]

    def digits(self, point: Sequence[Fraction]) -> Tuple[str, ...]:
        return tuple(format_badic(x, self.base) for x in point)


def leaf_representatives(tree: CubeTree) -> PointSet:
    return PointSet(tree.base, tree.dim, tuple(cube.corner() for cube in tree.iter_leaves()))


@dataclass(frozen=True)
class Window:
    offset: Tuple[int, ...]
    side_exp: int
    tree: CubeTree

    @property
    def side(self) -> int:
        return self.tree.base ** self.side_exp

    @property
    def resolution(self) -> int:
        return self.tree.depth - self.side_exp

    def contains_cell(self, other: "Window") -> bool:
        return all(o <= q and q + other.side <= o + self.side for o, q in zip(self.offset, other.offset))

    def overlaps(self, other: "Window") -> bool:
        return all(o < q + other.side and q < o + self.side for o, q in zip(self.offset, other.offset))


@dataclass(frozen=True)
class LatticeCube:
    """The cube corner*base**exponent + [0, base**exponent)^d; exponent may be negative."""
    base: int
    exponent: int
    corner: Tuple[int, ...]

    def __str__(self):
        return f"{self.base}^{self.exponent}@({','.join(str(c) for c in self.corner)})"


@dataclass(frozen=True)
class WindowedSet:
    base: int
    dim: int
    windows: Tuple[Window, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.windows:
            raise ParameterError("a windowed set needs at least one window")
        for window in self.windows:
            if window.tree.base != self.base or window.tree.dim != self.dim or len(window.offset) != self.dim:
                raise ParameterError(f"window at {window.offset} does not match b={self.base} d={self.dim}")
            if window.side_exp < 0 or window.side_exp > window.tree.depth:
                raise ParameterError(f"window side exponent {window.side_exp} is invalid")
            if any(o % window.side for o in window.offset):
                raise ParameterError(f"window offset {window.offset} is not aligned to its side {window.side}")
        if len({w.resolution for w in self.windows}) != 1:
            raise ParameterError("all windows must share the same cell resolution")
        ordered = tuple(sorted(self.windows, key=lambda w: (max(abs(o) for o in w.offset), w.offset)))
        for i, first in enumerate(ordered):
            for second in ordered[i + 1:]:
                if first.overlaps(second):
                    raise ParameterError(f"windows at {first.offset} and {second.offset} overlap")
        object.__setattr__(self, "windows", ordered)

    @classmethod
    def single(cls, tree: CubeTree) -> "WindowedSet":
        return cls(tree.base, tree.dim, (Window((0,) * tree.dim, 0, tree),))

    @property
    def resolution(self) -> int:
        return self.windows[0].resolution

    @property
    def max_side_exp(self) -> int:
        return max(w.side_exp for w in self.windows)

    def count_hit_subcubes(self, exponent: int, corner: Sequence[int], k: int) -> int:
        """Subcubes k levels below corner*b^exponent + [0, b^exponent)^d that the set meets."""
        if k < 0:
            raise ParameterError("k must be non-negative")
        cell_exp = exponent - k
        if cell_exp < -self.resolution:
            raise DepthError(f"cells of side {self.base}^{cell_exp} are finer than the resolution")
        b = self.base
        total = 0
        big_cells = set()
        for window in self.windows:
            m = window.side_exp
            if exponent <= m:
                level = m - exponent
                relative = [Fraction(c) - Fraction(o) / Fraction(b) ** exponent
                            for c, o in zip(corner, window.offset)]
                if all(r.denominator == 1 and 0 <= r < b ** level for r in relative):
                    node = window.tree.node_at(BadicCube(b, level, tuple(int(r) for r in relative)))
                    return 0 if node is None else node.counts[k]
                continue
            size = b ** exponent
            if all(c * size <= o and o + window.side <= (c + 1) * size for c, o in zip(corner, window.offset)):
                if cell_exp <= m:
                    total += window.tree.root.counts[m - cell_exp]
                else:
                    cell = b ** cell_exp
                    big_cells.add(tuple(o // cell for o in window.offset))
        return total + len(big_cells)

    def describe(self) -> str:
        return f"wdt b={self.base} d={self.dim} windows={len(self.windows)}"
