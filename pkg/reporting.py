"""Run records and the JSON / CSV writers used by the command line."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional, Sequence

import orjson

from model_core import GraphParams

if TYPE_CHECKING:
    from simulate import ConnectivityEstimate

__all__ = [
    "RunRecord",
    "SWEEP_HEADER",
    "render_json",
    "render_csv",
    "write_output",
]

SWEEP_HEADER = ["n", "m", "p", "c", "method", "value", "stderr", "ratio", "seconds", "error"]


@dataclass
class RunRecord:
    """One CLI evaluation: parameters, one estimate per method, cross-route agreement."""
    params: GraphParams
    results: List[ConnectivityEstimate] = field(default_factory=list)
    seed: Optional[int] = None
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    extra: Dict[str, Any] = field(default_factory=dict)

    def add(self, estimate: ConnectivityEstimate) -> None:
        if any(existing.label == estimate.label for existing in self.results):
            raise ValueError(f"method {estimate.label} already recorded")
        self.results.append(estimate)

    @property
    def agreement(self) -> Optional[float]:
        """Largest pairwise gap among exact methods; None with fewer than two."""
        exact = [r.estimate for r in self.results if r.method.is_exact]
        if len(exact) < 2:
            return None
        return max(abs(x - y) for x, y in itertools.combinations(exact, 2))

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "params": self.params.to_dict(),
            "results": [r.to_dict() for r in self.results],
            "agreement": self.agreement,
        }
        payload.update(self.extra)
        return payload


def render_json(payload: Dict[str, Any]) -> str:
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE).decode()


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_output(text: str, out: Optional[str], stream: Any) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        stream.write(text)
