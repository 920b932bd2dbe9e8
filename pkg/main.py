"""Entry point: configure logging and error reporting, then hand off to the command line."""

from __future__ import annotations

import logging
import sys

import sentry_sdk

from cli import run
from settings import get_settings

settings = get_settings()

logging.basicConfig(format=settings.LOG_FORMAT, level=settings.LOG_LEVEL)

if settings.SENTRY_DSN:
    sentry_sdk.init(dsn=settings.SENTRY_DSN, release=f"{settings.APP_NAME}@{settings.APP_VERSION}")


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
