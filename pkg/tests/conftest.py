"""Shared fixtures: the reference worked-example signature and a counting matcher."""

from __future__ import annotations

from pathlib import Path

import pytest

from fpdedup.matcher import MatchParams, MatchResult, match_score
from fpdedup.signature import Minutia, Signature, read_signature_file

DATA_DIR = Path(__file__).parent / "data"

# The worked-example signature and its published index key (n=5 grid).
REFERENCE_SIGNATURE_PATH = DATA_DIR / "reference_signature.sig"
REFERENCE_KEY = "1-1-1-1-0-1-4-2-2-0-2-1-2-0-0-1-0-0-1-1-1-0-1-0-0"


@pytest.fixture(scope="session")
def reference_signature() -> Signature:
    return read_signature_file(REFERENCE_SIGNATURE_PATH, "reference")


def make_signature(record_id: str, points: list[tuple[int, int]],
                   theta: float = 0.5, type_code: int = 1) -> Signature:
    return Signature(record_id, [Minutia(x, y, theta, type_code) for x, y in points])


def translate(s: Signature, dx: int, dy: int, record_id: str | None = None) -> Signature:
    return Signature(record_id or s.record_id,
                     [Minutia(m.x + dx, m.y + dy, m.theta, m.type_code) for m in s.minutiae])


class CountingMatcher:
    """Wraps the built-in scorer and records every compared pair."""

    def __init__(self):
        self.pairs: list[tuple[str, str]] = []

    def __call__(self, a: Signature, b: Signature, p: MatchParams) -> MatchResult:
        self.pairs.append((a.record_id, b.record_id))
        return match_score(a, b, p)

    @property
    def count(self) -> int:
        return len(self.pairs)
