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
import sys
from typing import Optional, TextIO

from badicdim.components.definitions import LOGGER_NAME, TableContents

logger = logging.getLogger(LOGGER_NAME)


def format_table(table: TableContents) -> str:
    lines = []
    if table.header is not None:
        lines.append("\t".join(x.strip() for x in table.header))
    for row in table.rows:
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def write_table(table: TableContents, path: Optional[str] = None, stream: Optional[TextIO] = None):
    """TSV to a file when a path is given, otherwise to the stream (stdout by default)."""
    text = format_table(table)
    if path is None:
        (stream or sys.stdout).write(text)
        return
    with open(path, "w", newline="\n") as f:
        f.write(text)
    logger.info(f"Exported {len(table.rows)} rows of {table.title or 'table'} to {path}")
