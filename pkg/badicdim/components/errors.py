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

from typing import Optional


class BadicError(Exception):
    pass


class ParameterError(BadicError):
    pass


class DepthError(BadicError):
    pass


class HypothesisError(BadicError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class RetryLimitError(BadicError):
    pass


class SelectionError(BadicError):
    def __init__(self, message, achieved: int, word: Optional[tuple] = None):
        super().__init__(message)
        self.achieved = achieved
        self.word = word


class StageError(BadicError):
    pass


class OracleSizeError(BadicError):
    pass


class OffsetOverflowError(BadicError):
    pass


class SetFileError(BadicError):
    def __init__(self, message, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number
