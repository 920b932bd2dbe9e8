"""Asymptotic regimes, the regime classifier and parameter sweeps."""

import argparse
import itertools
import logging
import time
from typing import TYPE_CHECKING, Any, List, Optional

from asymptotics import Regime, asym_estimate, classify_regime
from model_core import CapacityError, DomainError, GraphParams
from reporting import SWEEP_HEADER, RunRecord, render_csv, render_json, write_output
from simulate import format_number, run_blocking

from .common import (
    ASYM_METHODS,
    EXACT_METHODS,
    EXIT_OK,
    parse_float_list,
    parse_int_list,
    parse_method_list,
    parse_positive_int,
    parse_seed,
)

if TYPE_CHECKING:
    from cli import ConnectivityCli

logger = logging.getLogger(__name__)


class RegimeHandlers:
    """Mixin for `asym`, `classify` and `sweep`."""

    def register_regime_commands(self: "ConnectivityCli", subparsers: argparse._SubParsersAction) -> None:
        asym = subparsers.add_parser("asym", help="evaluate the regime formulas")
        self.add_graph_arguments(asym)
        asym.add_argument("--method", default="all", choices=ASYM_METHODS + ("all",))
        asym.add_argument("--regime-c", type=float, default=None, dest="regime_c")
        self.add_output_argument(asym)
        asym.set_defaults(handler=self.cmd_asym)

        classify = subparsers.add_parser("classify", help="which regime covers a finite triple")
        self.add_graph_arguments(classify)
        classify.add_argument("--aspect-ratio", type=float, default=None, dest="aspect_ratio")
        self.add_output_argument(classify)
        classify.set_defaults(handler=self.cmd_classify)

        sweep = subparsers.add_parser("sweep", help="grid of triples times methods, as CSV")
        sweep.add_argument("--grid-n", type=parse_int_list, default=[], dest="grid_n")
        sweep.add_argument("--grid-m", type=parse_int_list, default=None, dest="grid_m")
        group = sweep.add_mutually_exclusive_group(required=True)
        group.add_argument("--grid-p", type=parse_float_list, dest="grid_p")
        group.add_argument("--grid-c", type=parse_float_list, dest="grid_c")
        sweep.add_argument("--method", type=parse_method_list, default=["exploration-dp"])
        sweep.add_argument("--samples", type=parse_positive_int, default=None)
        sweep.add_argument("--seed", type=parse_seed, default=None)
        sweep.add_argument("--workers", type=parse_positive_int, default=None)
        self.add_output_argument(sweep)
        sweep.set_defaults(handler=self.cmd_sweep)

    def cmd_asym(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        methods = ASYM_METHODS if args.method == "all" else (args.method,)
        record = RunRecord(params=gp)
        details = []
        for method in methods:
            result = asym_estimate(gp, method, args.regime_c)
            details.append(result.to_dict())
            record.add(self.evaluate(gp, method, regime_c=args.regime_c))
        record.extra["regimes"] = details
        record.extra["classified"] = classify_regime(gp).value
        write_output(render_json(record.to_dict()), args.out, self.stdout)
        return EXIT_OK

    def cmd_classify(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        regime = classify_regime(gp, args.aspect_ratio)
        payload = {"params": gp.to_dict(), "regime": regime.value}
        if regime is Regime.UNCOVERED:
            logger.info("n=%d m=%d c=%.6g falls between the covered regimes", gp.n, gp.m, gp.c)
        write_output(render_json(payload), args.out, self.stdout)
        return EXIT_OK

    def sweep_points(self, args: argparse.Namespace) -> List[tuple[int, int, Optional[float], Optional[float]]]:
        """Grid points in emission order: n outer, then m, then the p or c value."""
        if args.grid_m is None:
            pairs = [(n, n) for n in args.grid_n]
        else:
            pairs = list(itertools.product(args.grid_n, args.grid_m))
        if args.grid_p is not None:
            return [(n, m, p, None) for (n, m), p in itertools.product(pairs, args.grid_p)]
        return [(n, m, None, c) for (n, m), c in itertools.product(pairs, args.grid_c)]

    def sweep_row(self: "ConnectivityCli", point: tuple, method: str, args: argparse.Namespace) -> dict[str, Any]:
        n, m, p, c = point
        row: dict[str, Any] = {"n": n, "m": m, "p": p, "c": c, "method": method}
        started = time.perf_counter()
        try:
            gp = GraphParams.from_c(n, m, c) if c is not None else GraphParams(n=n, m=m, p=p)
            row["p"], row["c"] = float(gp.p), gp.c
            estimate = self.evaluate(gp, method, samples=args.samples, seed=args.seed, workers=1)
            row["value"] = estimate.estimate
            row["stderr"] = estimate.stderr if estimate.samples is not None else None
        except CapacityError as exc:
            logger.warning("Sweep row n=%d m=%d %s over capacity: %s", n, m, method, exc)
            row["error"] = "capacity"
        except (DomainError, ValueError) as exc:
            logger.warning("Sweep row n=%d m=%d %s rejected: %s", n, m, method, exc)
            row["error"] = "domain"
        row["seconds"] = time.perf_counter() - started
        return row

    def cmd_sweep(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        points = self.sweep_points(args)
        calls = [
            (lambda point=point, method=method: self.sweep_row(point, method, args))
            for point in points
            for method in args.method
        ]
        rows = run_blocking(calls, args.workers)
        write_output(render_csv(SWEEP_HEADER, self.sweep_table(rows, args.method)), args.out, self.stdout)
        logger.info("Sweep finished: %d points x %d methods", len(points), len(args.method))
        return EXIT_OK

    @staticmethod
    def sweep_table(rows: List[dict[str, Any]], methods: List[str]) -> List[List[str]]:
        """CSV cells; ratio is value over the first exact method's value at the same point."""
        reference_method = next((m for m in methods if m in EXACT_METHODS), None)
        table = []
        for start in range(0, len(rows), len(methods)):
            block = rows[start:start + len(methods)]
            reference = None
            if reference_method is not None:
                reference = block[methods.index(reference_method)].get("value")

            for row in block:
                value = row.get("value")
                ratio = value / reference if value is not None and reference else None
                table.append(
                    [
                        _cell(row["n"]),
                        _cell(row["m"]),
                        _cell(row["p"]),
                        _cell(row["c"]),
                        row["method"],
                        _cell(value),
                        _cell(row.get("stderr")),
                        _cell(ratio),
                        _cell(row["seconds"]),
                        row.get("error", ""),
                    ]
                )
        return table


def _cell(value: Any) -> str:
    return "" if value is None else format_number(value)
