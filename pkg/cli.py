import argparse
import contextlib
import logging
import sys
import time
from typing import Any, Optional, Sequence

from asymptotics import Regime, asym_estimate
from exploration import exact_connectivity_dp
from handlers import ExactHandlers, RegimeHandlers, SamplingHandlers
from handlers.common import ASYM_METHODS, EXIT_CAPACITY, EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from model_core import CapacityError, DomainError, GraphParams
from oracle_brute import brute_connectivity
from settings import get_settings
from simulate import ConnectivityEstimate, Method, mc_connectivity
from walk_repr import connectivity_via_walk

logger = logging.getLogger(__name__)


class ConnectivityCli(ExactHandlers, SamplingHandlers, RegimeHandlers):
    """Command-line front door; one subcommand per toolkit capability."""

    def __init__(self, stdout: Any = None, stderr: Any = None) -> None:
        self.settings = get_settings()
        self.stdout = stdout if stdout is not None else sys.stdout
        self.stderr = stderr if stderr is not None else sys.stderr
        self.parser = self.build_parser()

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog=self.settings.APP_NAME, description=self.settings.APP_DESCRIPTION)
        parser.add_argument("--version", action="version", version=self.settings.APP_VERSION)
        subparsers = parser.add_subparsers(dest="command", required=True)
        self.register_exact_commands(subparsers)
        self.register_sampling_commands(subparsers)
        self.register_regime_commands(subparsers)
        return parser

    @staticmethod
    def add_graph_arguments(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n", type=int, required=True)
        parser.add_argument("--m", type=int, required=True)
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument("--p", type=float)
        group.add_argument("--c", type=float)

    @staticmethod
    def add_output_argument(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--out", default=None)

    @staticmethod
    def graph_params(args: argparse.Namespace) -> GraphParams:
        if args.c is not None:
            return GraphParams.from_c(args.n, args.m, args.c)
        return GraphParams(n=args.n, m=args.m, p=args.p)

    def evaluate(
        self,
        gp: GraphParams,
        method: str,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        regime_c: Optional[float] = None,
    ) -> ConnectivityEstimate:
        """One method at one triple, wrapped with its provenance."""
        if method == "brute":
            return ConnectivityEstimate(estimate=float(brute_connectivity(gp)), method=Method.BRUTE)
        if method == "exploration-dp":
            return ConnectivityEstimate(estimate=exact_connectivity_dp(gp), method=Method.EXPLORATION_DP)
        if method == "walk-dp":
            if gp.is_degenerate:
                return ConnectivityEstimate(estimate=exact_connectivity_dp(gp), method=Method.WALK_DP)
            return ConnectivityEstimate(
                estimate=min(1.0, max(0.0, connectivity_via_walk(gp).total)), method=Method.WALK_DP
            )
        if method == "mc":
            if seed is None:
                raise DomainError("Monte Carlo needs an explicit --seed")
            return mc_connectivity(gp, samples or 100_000, seed, workers)
        if method in ASYM_METHODS:
            result = asym_estimate(gp, Regime.coerce(method), regime_c)
            return ConnectivityEstimate(
                estimate=min(1.0, max(0.0, result.value)), method=Method.ASYMPTOTIC, label=method
            )
        raise DomainError(f"unknown method {method!r}")

    def fail(self, message: str) -> None:
        self.stderr.write(f"{self.settings.APP_NAME}: error: {message}\n")

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            # argparse prints usage, help and errors on the process streams
            with contextlib.redirect_stdout(self.stdout), contextlib.redirect_stderr(self.stderr):
                args = self.parser.parse_args(argv)
        except SystemExit as exc:
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

        started = time.perf_counter()
        try:
            status = args.handler(args)
        except CapacityError as exc:
            logger.warning("Capacity exceeded in %s: %s", args.command, exc)
            self.fail(str(exc))
            return EXIT_CAPACITY
        except (DomainError, ValueError) as exc:
            self.fail(str(exc))
            return EXIT_USAGE
        except Exception:
            logger.exception("Unhandled failure in %s", args.command)
            return EXIT_FAILURE
        logger.info("%s finished in %.3fs", args.command, time.perf_counter() - started)
        return status


def run(argv: Optional[Sequence[str]] = None) -> int:
    return ConnectivityCli().run(argv)
