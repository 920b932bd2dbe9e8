"""Shared fixtures; the toolkit modules live at the repository root."""

import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from settings import get_settings  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings; tests may set env vars before calling get_settings()."""
    for name in ("WORKERS", "MC_BLOCK_SIZE", "BRUTE_MAX_EDGES", "DP_STATE_BUDGET", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


GOLDEN_DIR = ROOT / "tests" / "golden"


@pytest.fixture
def golden():
    """
    Byte comparison against tests/golden/<name>. A missing file, or
    BIPCONN_UPDATE_GOLDEN=1, records the current output and skips.
    """
    def _check(name: str, text: str) -> None:
        path = GOLDEN_DIR / name
        if os.environ.get("BIPCONN_UPDATE_GOLDEN") or not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(text.encode())
            pytest.skip(f"recorded {path.name}")
        assert path.read_bytes().decode() == text
    return _check
