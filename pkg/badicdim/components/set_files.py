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
import re
from typing import List, Optional, Tuple, Union

from badicdim.components.cubes import BadicCube, CubeTree, Window, WindowedSet
from badicdim.components.definitions import LOGGER_NAME
from badicdim.components.errors import BadicError, SetFileError

logger = logging.getLogger(LOGGER_NAME)

AnySet = Union[CubeTree, WindowedSet]

_BDT_HEADER = re.compile(r"^bdt b=(\d+) d=(\d+) n=(\d+)$")
_WDT_HEADER = re.compile(r"^wdt b=(\d+) d=(\d+) windows=(\d+)$")
_WINDOW_LINE = re.compile(r"^window off=(-?\d+(?:,-?\d+)*) m=(\d+)$")


def leaf_line(cube: BadicCube) -> str:
    return str(cube)


def _leaf_lines(tree: CubeTree) -> List[str]:
    return sorted(leaf_line(cube) for cube in tree.iter_leaves())


def format_tree(tree: CubeTree) -> str:
    return "\n".join([tree.describe()] + _leaf_lines(tree)) + "\n"


def format_windowed(wset: WindowedSet) -> str:
    lines = [wset.describe()]
    for window in wset.windows:
        lines.append(f"window off={','.join(str(o) for o in window.offset)} m={window.side_exp}")
        lines.extend(_leaf_lines(window.tree))
    return "\n".join(lines) + "\n"


def format_set(item: AnySet) -> str:
    if isinstance(item, WindowedSet):
        return format_windowed(item)
    return format_tree(item)


def write_set_file(item: AnySet, path: str):
    with open(path, "w", newline="\n") as f:
        f.write(format_set(item))
    logger.info(f"Wrote {item.describe()} to {path}")


def read_set_file(path: str) -> AnySet:
    with open(path, "r") as f:
        text = f.read()
    return parse_set_text(text)


def _numbered_lines(text: str) -> List[Tuple[int, str]]:
    lines = text.split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    return [(number, line.rstrip("\r")) for number, line in enumerate(lines, start=1)]


def parse_set_text(text: str) -> AnySet:
    lines = _numbered_lines(text)
    if not lines:
        raise SetFileError("empty set file, expected a 'bdt' or 'wdt' header", 1)
    number, header = lines[0]
    if (match := _BDT_HEADER.match(header)) is not None:
        base, dim, depth = (int(g) for g in match.groups())
        _check_shape(base, dim, number)
        return _parse_leaves(lines[1:], base, dim, depth, number)
    if (match := _WDT_HEADER.match(header)) is not None:
        base, dim, count = (int(g) for g in match.groups())
        _check_shape(base, dim, number)
        return _parse_windows(lines[1:], base, dim, count)
    raise SetFileError(f"unrecognised header {header!r}", number)


def _check_shape(base: int, dim: int, number: int):
    if base < 2 or base > 36:
        raise SetFileError(f"base {base} outside 2..36", number)
    if dim < 1:
        raise SetFileError("dimension must be at least 1", number)


def _parse_leaves(lines: List[Tuple[int, str]], base: int, dim: int,
                  depth: Optional[int], header_number: int) -> CubeTree:
    if not lines:
        raise SetFileError("a set needs at least one leaf line", header_number + 1)
    cubes = []
    previous = None
    for number, line in lines:
        if previous is not None:
            if line == previous:
                raise SetFileError(f"duplicate leaf {line!r}", number)
            if line < previous:
                raise SetFileError(f"leaf {line!r} is out of lexicographic order", number)
        previous = line
        cube = _parse_leaf(line, base, dim, number)
        if depth is None:
            depth = cube.level
        if cube.level != depth:
            raise SetFileError(f"leaf {line!r} has length {cube.level}, expected {depth}", number)
        cubes.append(cube)
    try:
        return CubeTree.from_cubes(base, dim, depth, cubes)
    except BadicError as e:
        raise SetFileError(str(e), lines[0][0])


def _parse_leaf(line: str, base: int, dim: int, number: int) -> BadicCube:
    if line == "root":
        return BadicCube.root(base, dim)
    parts = line.split(",")
    if len(parts) != dim:
        raise SetFileError(f"expected {dim} coordinates, got {len(parts)}", number)
    try:
        return BadicCube.from_digits(base, parts)
    except BadicError as e:
        raise SetFileError(str(e), number)


def _parse_windows(lines: List[Tuple[int, str]], base: int, dim: int, count: int) -> WindowedSet:
    windows = []
    position = 0
    while position < len(lines):
        number, line = lines[position]
        if (match := _WINDOW_LINE.match(line)) is None:
            raise SetFileError(f"expected a 'window off=... m=...' line, got {line!r}", number)
        offset = tuple(int(v) for v in match.group(1).split(","))
        side_exp = int(match.group(2))
        if len(offset) != dim:
            raise SetFileError(f"window offset has {len(offset)} coordinates, expected {dim}", number)
        end = position + 1
        while end < len(lines) and not lines[end][1].startswith("window"):
            end += 1
        tree = _parse_leaves(lines[position + 1:end], base, dim, None, number)
        windows.append(Window(offset, side_exp, tree))
        position = end
    if len(windows) != count:
        raise SetFileError(f"header announces {count} windows, found {len(windows)}", 1)
    try:
        return WindowedSet(base, dim, tuple(windows))
    except BadicError as e:
        raise SetFileError(str(e), 1)
