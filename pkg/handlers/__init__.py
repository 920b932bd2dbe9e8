"""Subcommand mixins for the bipconn command line."""

from .exact import ExactHandlers
from .regimes import RegimeHandlers
from .sampling import SamplingHandlers

__all__ = ["ExactHandlers", "SamplingHandlers", "RegimeHandlers"]
