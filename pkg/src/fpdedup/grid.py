"""Block-count index keys over an n x n grid on a signature's bounding box.

Every signature is reduced to a short text key: translate the minutiae
so the bounding box starts at the origin, split the box into n x n
blocks of equal real-valued size, count minutiae per block, and join the
counts with ``-``. Records sharing a key form one cluster. The emission
order (fixed x-block, y-block varying within it) is part of the on-disk
format and must not change.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .signature import Minutia, Signature


@dataclass(frozen=True)
class GridParams:
    """Side length of the square block matrix."""

    n: int = 5

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"grid side must be >= 1, got {self.n}")


@dataclass(frozen=True)
class IndexKey:
    """Per-block minutiae counts in emission order, plus their joined text."""

    counts: tuple[int, ...]
    key_text: str

    @classmethod
    def from_counts(cls, counts: list[int] | tuple[int, ...]) -> "IndexKey":
        counts = tuple(counts)
        return cls(counts, "-".join(str(c) for c in counts))


BoundingBox = tuple[int, int, int, int]  # (x_min, y_min, x_max, y_max)


def bounding_box(s: Signature) -> BoundingBox:
    """Componentwise min/max over the signature's minutiae coordinates."""
    if not s.minutiae:
        raise ValueError(f"signature {s.record_id!r} is empty")
    xs = [m.x for m in s.minutiae]
    ys = [m.y for m in s.minutiae]
    return min(xs), min(ys), max(xs), max(ys)


def _block_sizes(box: BoundingBox, n: int) -> tuple[float, float]:
    x_min, y_min, x_max, y_max = box
    # Real-valued block dimensions; truncating first would merge edge
    # blocks for small boxes.
    return (x_max - x_min + 1) / n, (y_max - y_min + 1) / n


def block_of(m: Minutia, box: BoundingBox, p: GridParams = GridParams()) -> tuple[int, int]:
    """Grid cell (x_block, y_block) of one minutia, both in [0, n-1]."""
    x_min, y_min, x_max, y_max = box
    if not (x_min <= m.x <= x_max and y_min <= m.y <= y_max):
        raise ValueError(f"minutia ({m.x}, {m.y}) lies outside box {box}")
    l_block, h_block = _block_sizes(box, p.n)
    # Clamp guards against float quotients landing exactly on n.
    xb = min(math.floor((m.x - x_min) / l_block), p.n - 1)
    yb = min(math.floor((m.y - y_min) / h_block), p.n - 1)
    return xb, yb


def compute_index(s: Signature, p: GridParams = GridParams()) -> IndexKey:
    """Compute the cluster key of a signature.

    The counts conserve the minutiae total and are invariant under any
    constant translation of the whole signature.
    """
    box = bounding_box(s)
    n = p.n
    counts = [0] * (n * n)
    l_block, h_block = _block_sizes(box, n)
    x_min, y_min = box[0], box[1]
    for m in s.minutiae:
        xb = min(math.floor((m.x - x_min) / l_block), n - 1)
        yb = min(math.floor((m.y - y_min) / h_block), n - 1)
        counts[xb * n + yb] += 1
    return IndexKey.from_counts(counts)
