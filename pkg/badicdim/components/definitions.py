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

from enum import Enum
from typing import List, Optional
from dataclasses import dataclass
import inspect

CONFIG_DIR = "badicdim"
LOGGER_NAME = "BadicDim"

STAR_LOCAL = "star-local"
STAR_GLOBAL = "star-global"
ASSOUAD_BALL = "assouad-ball"
LOWER_COVER = "lower-cover"
LOWER_PACK = "lower-pack"

REPORT_KINDS = [STAR_LOCAL, STAR_GLOBAL, ASSOUAD_BALL, LOWER_COVER, LOWER_PACK]

GREEDY = "greedy"
RANDOM = "random"

DIGIT_CANTOR = "digit-cantor"
FULL_CUBE = "full-cube"
LATTICE_WINDOW = "lattice-window"
INTEGER_CANTOR = "integer-cantor"
ONE_OVER_K = "one-over-k"
CANTOR_LATTICE_UNION = "cantor-lattice-union"
RANDOM_BRANCHING = "random-branching"

FAMILIES = [DIGIT_CANTOR, FULL_CUBE, LATTICE_WINDOW, INTEGER_CANTOR, ONE_OVER_K, CANTOR_LATTICE_UNION, RANDOM_BRANCHING]
FAMILY_ALIASES = {"prop5-union": CANTOR_LATTICE_UNION}

REPORT_HEADER = ["k", "count", "logratio", "witness"]
ASSOUAD_TRACE_HEADER = ["stage", "window", "level", "count", "bound", "ok"]
LOWER_REPORT_HEADER = ["x", "R", "r", "Nstar", "bound", "ok"]
VERIFY_HEADER = ["check", "case", "observed", "expected", "ok"]


class ConfigType(Enum):
    EstimateConfig = "estimate_config.conf"
    ExtractConfig = "extract_config.conf"
    VerifyConfig = "verify_config.conf"
    GeneratorConfig = "generator_config.conf"


@dataclass
class EstimateConfig:
    workers: int = 1
    decimals: int = 6
    report_kind: str = STAR_LOCAL

    @classmethod
    def from_dict(cls, config_dict: dict):
        return cls(**{
            k: v for k, v in config_dict.items()
            if k in inspect.signature(cls).parameters
        })


@dataclass
class ExtractConfig:
    retry_limit: int = 64
    offset_bits: int = 62
    strict: bool = False
    stages: int = 1
    strategy: str = GREEDY
    exact_denominator_limit: int = 64

    @classmethod
    def from_dict(cls, config_dict: dict):
        return cls(**{
            k: v for k, v in config_dict.items()
            if k in inspect.signature(cls).parameters
        })


@dataclass
class VerifyConfig:
    samples: int = 100
    trees: int = 200
    random_prunes: int = 1000

    @classmethod
    def from_dict(cls, config_dict: dict):
        return cls(**{
            k: v for k, v in config_dict.items()
            if k in inspect.signature(cls).parameters
        })


@dataclass
class GeneratorConfig:
    size_guard: int = 65536
    max_packing_candidates: int = 20

    @classmethod
    def from_dict(cls, config_dict: dict):
        return cls(**{
            k: v for k, v in config_dict.items()
            if k in inspect.signature(cls).parameters
        })


@dataclass
class TableContents:
    header: Optional[List[str]]
    rows: List[List[str]]
    title: str = ""


@dataclass(frozen=True)
class CheckRow:
    check: str
    case: str
    observed: str
    expected: str
    ok: bool

    def row(self) -> List[str]:
        return [self.check, self.case, self.observed, self.expected, "yes" if self.ok else "no"]
