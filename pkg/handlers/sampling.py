"""Seeded commands: Monte Carlo connectivity and the walk curve tables."""

import argparse
import logging
from pathlib import Path
from typing import TYPE_CHECKING

from model_core import DegenerateParameterError
from reporting import RunRecord, render_json, write_output
from simulate import curve_csv

from .common import EXIT_OK, parse_nonnegative_int, parse_positive_int, parse_seed

if TYPE_CHECKING:
    from cli import ConnectivityCli

logger = logging.getLogger(__name__)


class SamplingHandlers:
    """Mixin for `mc` and `curves`; both refuse to run without --seed."""

    def register_sampling_commands(self: "ConnectivityCli", subparsers: argparse._SubParsersAction) -> None:
        mc = subparsers.add_parser("mc", help="Monte Carlo connectivity estimate")
        self.add_graph_arguments(mc)
        mc.add_argument("--samples", type=parse_positive_int, default=100_000)
        mc.add_argument("--seed", type=parse_seed, required=True)
        mc.add_argument("--workers", type=parse_positive_int, default=None)
        self.add_output_argument(mc)
        mc.set_defaults(handler=self.cmd_mc)

        curves = subparsers.add_parser("curves", help="S_k and B_k / V_k curve data as CSV")
        self.add_graph_arguments(curves)
        curves.add_argument("--realizations", type=parse_nonnegative_int, default=5)
        curves.add_argument("--seed", type=parse_seed, required=True)
        curves.add_argument("--workers", type=parse_positive_int, default=None)
        self.add_output_argument(curves)
        curves.set_defaults(handler=self.cmd_curves)

    def cmd_mc(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        record = RunRecord(params=gp, seed=args.seed)
        record.add(self.evaluate(gp, "mc", samples=args.samples, seed=args.seed, workers=args.workers))
        write_output(render_json(record.to_dict()), args.out, self.stdout)
        return EXIT_OK

    def cmd_curves(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        if gp.is_degenerate:
            raise DegenerateParameterError("walk curves need 0 < p < 1")
        s_table, bv_table = curve_csv(gp, args.realizations, args.seed, args.workers)
        if args.out:
            out = Path(args.out)
            bv_path = out.with_name(f"{out.stem}_bv.csv")
            write_output(s_table, str(out), self.stdout)
            write_output(bv_table, str(bv_path), self.stdout)
            logger.info("Curve tables written to %s and %s", out, bv_path)
        else:
            write_output(s_table + "\n" + bv_table, None, self.stdout)
        return EXIT_OK
