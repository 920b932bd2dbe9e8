"""Method names, exit codes and argument parsers shared by the command mixins."""

import argparse

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

EXACT_METHODS = ("brute", "exploration-dp", "walk-dp")
ASYM_METHODS = ("asym-r1", "asym-r2", "asym-r3", "asym-r4")
ALL_METHODS = EXACT_METHODS + ("mc",) + ASYM_METHODS


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {text!r}") from exc


def parse_float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got {text!r}") from exc


def parse_method_list(text: str) -> list[str]:
    methods = [item.strip().lower() for item in text.split(",") if item.strip()]
    if methods == ["all"]:
        return list(ALL_METHODS)
    for method in methods:
        if method not in ALL_METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {method!r}")
    return list(dict.fromkeys(methods))


def parse_seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def parse_positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def parse_nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value
