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
from abc import abstractmethod
from argparse import Namespace
from typing import Optional

from badicdim.components.assouad_extract import construct_subset_assouad, construct_subset_assouad_global, \
    parse_strategy, sandwich_assemble
from badicdim.components.config_handler import load_estimate_config, load_extract_config, load_generator_config, \
    load_verify_config
from badicdim.components.cubes import CubeTree, WindowedSet
from badicdim.components.definitions import LOGGER_NAME, VERIFY_HEADER, TableContents
from badicdim.components.errors import ParameterError
from badicdim.components.estimators import dimension_report
from badicdim.components.export import write_table
from badicdim.components.generators import GeneratorSpec, generate, parse_digits
from badicdim.components.helpers import format_ratio
from badicdim.components.lower_extract import LowerParams, construct_subset_lower, verify_lower_bounds
from badicdim.components.set_files import format_set, read_set_file, write_set_file
from badicdim.components.verification import verify_h_star, verify_ball_cube, verify_packing_sandwich, \
    verify_prune_bound, verify_random_prune

logger = logging.getLogger(LOGGER_NAME)


def _pick(value, default):
    return default if value is None else value


class CommandBase:
    def __init__(self, args: Namespace, command_name: str):
        self.args = args
        self.command_name = command_name
        self.failed_action = False
        self.stdout = sys.stdout

    def add_status_text(self, text: str, failed: bool = False):
        if failed:
            self.failed_action = True
            logger.warning(text)
        else:
            logger.info(text)
        print(text, file=sys.stderr)

    def say(self, text: str):
        self.stdout.write(text + "\n")

    def emit(self, table: TableContents, path: Optional[str] = None):
        write_table(table, path, self.stdout)

    def load_tree(self) -> CubeTree:
        item = read_set_file(self.args.in_path)
        if not isinstance(item, CubeTree):
            raise ParameterError(f"{self.command_name} needs a .bdt tree, {self.args.in_path} holds a windowed set")
        return item

    def run(self) -> int:
        logger.info(f"Running {self.command_name}")
        self.action()
        return 1 if self.failed_action else 0

    @abstractmethod
    def action(self):
        ...


class GenCommand(CommandBase):
    def __init__(self, args: Namespace):
        super().__init__(args, f"gen {args.family}")

    def action(self):
        a = self.args
        spec = GeneratorSpec(family=a.family, base=a.base, dim=a.dim, depth=a.depth,
                             digits=parse_digits(a.digits, a.dim) if a.digits else (),
                             lattice_digits=parse_digits(a.lattice_digits, a.dim) if a.lattice_digits else (),
                             side_exp=a.side_exp, resolution=a.resolution, windows=a.windows, count=a.count,
                             max_children=a.max_children, seed=a.seed)
        result = generate(spec)
        if a.out is None:
            self.stdout.write(format_set(result))
        else:
            write_set_file(result, a.out)
            self.add_status_text(f"Wrote {result.describe()} to {a.out}")


class EstimateCommand(CommandBase):
    def __init__(self, args: Namespace):
        super().__init__(args, "estimate")
        self.configuration = load_estimate_config()

    def action(self):
        a = self.args
        item = read_set_file(a.in_path)
        kind = _pick(a.kind, self.configuration.report_kind)
        workers = max(1, _pick(a.workers, self.configuration.workers))
        decimals = _pick(a.decimals, self.configuration.decimals)
        report = dimension_report(item, kind, a.k_max, workers)
        self.emit(report.table(decimals), a.report)
        low, high = report.envelope
        self.add_status_text(f"envelope {format_ratio(low, decimals)}..{format_ratio(high, decimals)} "
                             f"method={report.method}")
        self.say(report.headline_line(decimals))


class InfoCommand(CommandBase):
    def __init__(self, args: Namespace):
        super().__init__(args, "info")

    def action(self):
        item = read_set_file(self.args.in_path)
        self.say(item.describe())
        trees = [(None, item)] if isinstance(item, CubeTree) else [(w, w.tree) for w in item.windows]
        for window, tree in trees:
            if window is not None:
                self.say(f"window off={','.join(str(o) for o in window.offset)} m={window.side_exp} "
                         f"depth={tree.depth}")
            self.say(f"leaves={tree.leaf_count}")
            self.say("levels=" + ",".join(str(c) for c in tree.root.counts))


class ExtractCommand(CommandBase):
    def __init__(self, args: Namespace):
        super().__init__(args, f"extract {args.target}")
        self.configuration = load_extract_config()

    def action(self):
        {"assouad": self.assouad,
         "assouad-global": self.assouad_global,
         "ladder": self.ladder,
         "lower": self.lower}[self.args.target]()

    def _strategy(self):
        return parse_strategy(_pick(self.args.strategy, self.configuration.strategy))

    def assouad(self):
        a, c = self.args, self.configuration
        strategy, seed = self._strategy()
        trace = construct_subset_assouad(self.load_tree(), a.alpha, a.eps, a.M, _pick(a.stages, c.stages),
                                         strategy, seed, a.cap, a.strict or c.strict, c.retry_limit,
                                         c.exact_denominator_limit, self.add_status_text)
        if a.out is not None:
            write_set_file(trace.tree, a.out)
        self.emit(trace.table(), a.trace)
        self.say(trace.summary())
        if not trace.ok:
            self.add_status_text("extracted set misses its target range or a stage bound", failed=True)

    def assouad_global(self):
        a, c = self.args, self.configuration
        item = read_set_file(a.in_path)
        if not isinstance(item, WindowedSet):
            item = WindowedSet.single(item)
        strategy, seed = self._strategy()
        trace = construct_subset_assouad_global(item, a.alpha, a.eps, a.M, strategy, seed, a.cap,
                                                a.strict or c.strict, _pick(a.offset_bits, c.offset_bits),
                                                c.retry_limit, c.exact_denominator_limit, self.add_status_text)
        if a.out is not None:
            write_set_file(trace.wset, a.out)
        self.emit(trace.table(), a.trace)
        self.say(trace.summary())
        if not trace.ok:
            self.add_status_text("windowed set misses its target range or a gap condition", failed=True)

    def ladder(self):
        a, c = self.args, self.configuration
        strategy, seed = self._strategy()
        result = sandwich_assemble(self.load_tree(), a.alpha, a.levels, a.M, strategy, seed, c.retry_limit,
                                   c.exact_denominator_limit, self.add_status_text)
        if a.out_a is not None:
            write_set_file(result.A[-1], a.out_a)
        if a.out_b is not None:
            write_set_file(result.B[-1], a.out_b)
        self.emit(result.table(), a.trace)
        self.say(f"containment={'yes' if result.containment_ok() else 'no'} ok={'yes' if result.ok else 'no'}")
        if not result.ok:
            self.add_status_text("ladder containment or stage interval violated", failed=True)

    def lower(self):
        a = self.args
        tree = self.load_tree()
        params = LowerParams(a.alpha, a.M, a.depth, a.r0, a.eps)
        balls = construct_subset_lower(tree, params, self.add_status_text, a.strict or self.configuration.strict)
        for condition in balls.conditions:
            if not condition.ok:
                self.add_status_text(f"unmet condition: {condition.violation}")
        report = verify_lower_bounds(balls, params.alpha, a.samples)
        if a.out is not None:
            write_set_file(balls.to_tree(tree.depth), a.out)
        self.emit(report.table(), a.report)
        for check in report.checks:
            if not check.ok:
                self.add_status_text(f"invariant {check.check} failed at {check.case}", failed=True)
        self.say(f"points={len(balls.levels[-1])} box_ratio={report.box_ratio} violations={report.violations}")
        if not report.ok:
            self.add_status_text(f"{report.violations} lower-bound violation(s)", failed=True)


class VerifyCommand(CommandBase):
    def __init__(self, args: Namespace):
        super().__init__(args, f"verify {args.check}")
        self.configuration = load_verify_config()
        self.generator_config = load_generator_config()

    def action(self):
        a, c = self.args, self.configuration
        checks = {
            "h-star": lambda: verify_h_star(a.seed, _pick(a.trees, c.trees), self.generator_config.size_guard),
            "packing-sandwich": lambda: verify_packing_sandwich(a.seed, _pick(a.samples, c.samples),
                                                                self.generator_config.max_packing_candidates),
            "prune-bound": lambda: verify_prune_bound(a.seed, _pick(a.trees, c.trees)),
            "ball-cube": lambda: verify_ball_cube(a.seed, _pick(a.samples, c.samples)),
            "lemma21": lambda: verify_ball_cube(a.seed, _pick(a.samples, c.samples)),
            "random-prune": lambda: verify_random_prune(a.seed, _pick(a.runs, c.random_prunes)),
        }
        rows = checks[a.check]()
        self.emit(TableContents(VERIFY_HEADER, [row.row() for row in rows], title=self.command_name), a.report)
        failures = sum(not row.ok for row in rows)
        self.say(f"checks={len(rows)} failures={failures}")
        if failures:
            self.add_status_text(f"{failures} check(s) failed", failed=True)
