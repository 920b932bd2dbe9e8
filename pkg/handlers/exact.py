"""Exact routes: `exact` compares brute force and both lattice DPs, `walk` decomposes the walk representation."""

import argparse
import logging
from typing import TYPE_CHECKING

from model_core import CapacityError, DegenerateParameterError, DomainError, endpoint_probabilities
from reporting import RunRecord, render_json, write_output
from simulate import expectation_check, generating_identity_check
from walk_repr import connectivity_via_walk, endpoint_marginals

from .common import EXACT_METHODS, EXIT_OK, parse_positive_int, parse_seed

if TYPE_CHECKING:
    from cli import ConnectivityCli

logger = logging.getLogger(__name__)


class ExactHandlers:
    """Mixin for the `exact` and `walk` subcommands."""

    def register_exact_commands(self: "ConnectivityCli", subparsers: argparse._SubParsersAction) -> None:
        exact = subparsers.add_parser("exact", help="exact connectivity probability by one or all exact routes")
        self.add_graph_arguments(exact)
        exact.add_argument("--method", default="exploration-dp", choices=EXACT_METHODS + ("all",))
        self.add_output_argument(exact)
        exact.set_defaults(handler=self.cmd_exact)

        walk = subparsers.add_parser("walk", help="Poisson walk decomposition with optional sampling checks")
        self.add_graph_arguments(walk)
        walk.add_argument("--samples", type=parse_positive_int, default=None)
        walk.add_argument("--seed", type=parse_seed, default=None)
        walk.add_argument("--workers", type=parse_positive_int, default=None)
        self.add_output_argument(walk)
        walk.set_defaults(handler=self.cmd_walk)

    def cmd_exact(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        record = RunRecord(params=gp)
        if args.method != "all":
            record.add(self.evaluate(gp, args.method))
        else:
            for method in EXACT_METHODS:
                try:
                    record.add(self.evaluate(gp, method))
                except CapacityError as exc:
                    # brute force is the only route with a hard ceiling at these sizes
                    if method != "brute":
                        raise
                    logger.warning("Skipping brute force for n=%d m=%d: %s", gp.n, gp.m, exc)

        agreement = record.agreement
        if agreement is not None and agreement > self.settings.EXACT_AGREEMENT_TOLERANCE:
            logger.warning("Exact routes disagree by %.3e at n=%d m=%d p=%s", agreement, gp.n, gp.m, gp.p)
        logger.info("exact run recorded at %s", record.timestamp.isoformat())
        write_output(render_json(record.to_dict()), args.out, self.stdout)
        return EXIT_OK

    def cmd_walk(self: "ConnectivityCli", args: argparse.Namespace) -> int:
        gp = self.graph_params(args)
        if gp.is_degenerate:
            raise DegenerateParameterError("the walk representation needs 0 < p < 1")
        if args.samples is not None and args.seed is None:
            raise DomainError("sampling checks need an explicit --seed")

        decomposition = connectivity_via_walk(gp)
        closed_a, closed_b = endpoint_probabilities(gp)
        lattice_a, lattice_b = endpoint_marginals(gp)
        record = RunRecord(params=gp, seed=args.seed)
        record.add(self.evaluate(gp, "walk-dp"))
        record.extra["walk"] = decomposition.to_dict()
        record.extra["endpoints"] = {
            "closed_form": [closed_a, closed_b],
            "lattice": [lattice_a, lattice_b],
        }
        if args.samples is not None:
            es = expectation_check(gp, args.samples, args.seed, args.workers)
            identity = generating_identity_check(gp, args.samples, args.seed, args.workers)
            record.extra["checks"] = {
                "samples": args.samples,
                "expectation_max_z": es.max_z,
                "generating_identity_max_z": identity.max_z,
            }
        write_output(render_json(record.to_dict()), args.out, self.stdout)
        return EXIT_OK
