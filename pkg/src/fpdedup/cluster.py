"""The cluster table: index key text -> ordered list of record ids.

Built in a single pass over (record_id, key) pairs; lookup is expected
constant time. Bucketing relies on Python's built-in string-keyed dict.
The additive character-code hash is also provided: it demonstrates why
buckets must hold lists (anagram keys collide), but it is not used for
bucketing.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from .grid import IndexKey

TABLE_FORMAT_HEADER = "fpdedup-cluster-table v1"


class DuplicateRecordIdError(ValueError):
    """A record id appeared more than once while building a table."""


def char_sum_hash(s: str) -> int:
    """Sum of the character codes of a string.

    Collision-heavy by construction: any two keys with the same multiset
    of characters (for example ``"1-0"`` and ``"0-1"``) hash alike.
    """
    return sum(map(ord, s))


@dataclass
class ClusterTable:
    """Buckets of record ids sharing one index key, in insertion order."""

    buckets: dict[str, list[str]] = field(default_factory=dict)
    size: int = 0

    def lookup(self, key: IndexKey | str) -> list[str]:
        """The bucket for a key, or an empty list when absent."""
        key_text = key.key_text if isinstance(key, IndexKey) else key
        return self.buckets.get(key_text, [])

    def add(self, record_id: str, key: IndexKey | str) -> None:
        key_text = key.key_text if isinstance(key, IndexKey) else key
        self.buckets.setdefault(key_text, []).append(record_id)
        self.size += 1

    def max_bucket_size(self) -> int:
        return max(map(len, self.buckets.values()), default=0)


def build_table(entries: Iterable[tuple[str, IndexKey | str]]) -> ClusterTable:
    """Load a cluster table from (record_id, key) pairs in one pass.

    Bucket lists preserve input order. Raises DuplicateRecordIdError,
    naming the offending id, if a record id repeats.
    """
    table = ClusterTable()
    seen: set[str] = set()
    for record_id, key in entries:
        if record_id in seen:
            raise DuplicateRecordIdError(f"duplicate record id {record_id!r}")
        seen.add(record_id)
        table.add(record_id, key)
    return table


# ---------------------------------------------------------------------------
# Persistence: versioned line-oriented text, human-diffable


def save_table(table: ClusterTable, path: str | Path) -> None:
    """Write ``key_text<TAB>id1,id2,...`` lines under a version header."""
    lines = [TABLE_FORMAT_HEADER]
    for key_text, ids in table.buckets.items():
        for record_id in ids:
            if "\t" in record_id or "," in record_id or "\n" in record_id:
                raise ValueError(f"record id {record_id!r} contains a separator character")
        lines.append(f"{key_text}\t{','.join(ids)}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_table(path: str | Path) -> ClusterTable:
    """Read a table written by save_table; lossless including order."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or lines[0] != TABLE_FORMAT_HEADER:
        raise ValueError(f"{path}: not a cluster table file (missing {TABLE_FORMAT_HEADER!r})")
    table = ClusterTable()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        try:
            key_text, joined = line.split("\t")
        except ValueError:
            raise ValueError(f"{path}:{line_no}: expected 'key<TAB>ids'") from None
        for record_id in joined.split(","):
            table.add(record_id, key_text)
    return table
