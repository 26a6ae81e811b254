"""Minutiae signatures and the semicolon-delimited signature file format.

A signature file carries one minutia per line as ``x;y;theta;type``:
integer pixel coordinates, a real ridge angle in radians, and a raw type
code. The angle field accepts both comma and dot decimal separators on
input; output always uses the dot. A corpus is either a directory with
one file per record (filename stem = record id) or a manifest file of
``record_id<TAB>path`` lines.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from pathlib import Path

TWO_PI = 2.0 * math.pi


class ParseError(ValueError):
    """Raised for malformed signature files, manifests, or corpus layouts."""


def normalize_angle(theta: float) -> float:
    """Reduce an angle into [0, 2*pi)."""
    r = math.fmod(theta, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    if r >= TWO_PI:  # fmod rounding can land exactly on 2*pi
        r = 0.0
    return r


@dataclass
class Minutia:
    """One feature point: pixel position, ridge angle, raw type code.

    The type code is stored as read from the file and never interpreted.
    """

    x: int
    y: int
    theta: float  # radians, [0, 2*pi)
    type_code: int


@dataclass
class Signature:
    """An ordered set of minutiae for one fingerprint record."""

    record_id: str
    minutiae: list[Minutia] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.record_id:
            raise ValueError("record_id must be non-empty")

    def __len__(self) -> int:
        return len(self.minutiae)


# ---------------------------------------------------------------------------
# Parsing and serialization


def _parse_int(text: str, line_no: int, what: str) -> int:
    try:
        value = int(text.strip())
    except ValueError:
        raise ParseError(f"line {line_no}: {what} {text!r} is not an integer") from None
    if value < 0:
        raise ParseError(f"line {line_no}: {what} {text!r} is negative")
    return value


def parse_signature(text: str, record_id: str) -> Signature:
    """Parse a signature file body into a Signature.

    Each non-empty line must have exactly four ``;``-separated fields:
    ``x;y;theta;type``. Coordinates must be non-negative integers; the
    angle may use ``,`` or ``.`` as decimal separator and is normalized
    into [0, 2*pi). Blank lines and surrounding whitespace are ignored.

    Raises:
        ParseError: on a malformed line (naming its line number) or when
            the text contains no minutiae at all.
    """
    minutiae: list[Minutia] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(";")
        if len(fields) != 4:
            raise ParseError(f"line {line_no}: expected 4 ';'-separated fields, got {len(fields)}")
        x = _parse_int(fields[0], line_no, "x coordinate")
        y = _parse_int(fields[1], line_no, "y coordinate")
        try:
            theta = float(fields[2].strip().replace(",", "."))
        except ValueError:
            raise ParseError(f"line {line_no}: angle {fields[2]!r} is not a number") from None
        if not math.isfinite(theta):
            raise ParseError(f"line {line_no}: angle {fields[2]!r} is not finite")
        try:
            type_code = int(fields[3].strip())
        except ValueError:
            raise ParseError(f"line {line_no}: type code {fields[3]!r} is not an integer") from None
        minutiae.append(Minutia(x, y, normalize_angle(theta), type_code))
    if not minutiae:
        raise ParseError(f"signature {record_id!r} has no minutiae")
    return Signature(record_id, minutiae)


def serialize_signature(s: Signature) -> str:
    """Render a signature in file format, one ``x;y;theta;type`` line per minutia.

    Emits the dot decimal separator; ``parse_signature`` round-trips the
    result exactly. Rejects signatures without minutiae.
    """
    if not s.minutiae:
        raise ValueError(f"signature {s.record_id!r} has no minutiae to serialize")
    return "\n".join(f"{m.x};{m.y};{m.theta!r};{m.type_code}" for m in s.minutiae)


# ---------------------------------------------------------------------------
# Corpus layouts


def read_signature_file(path: str | Path, record_id: str | None = None) -> Signature:
    """Read one signature file; record id defaults to the filename stem."""
    path = Path(path)
    rid = record_id if record_id is not None else path.stem
    return parse_signature(path.read_text(), rid)


def write_signature_file(s: Signature, path: str | Path) -> None:
    Path(path).write_text(serialize_signature(s) + "\n")


def iter_corpus_dir(directory: str | Path) -> Iterator[Signature]:
    """Yield every signature in a one-file-per-record corpus directory.

    Files are visited in sorted name order; hidden files are skipped.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError(f"corpus directory not found: {directory}")
    seen: set[str] = set()
    for path in sorted(directory.iterdir()):
        if not path.is_file() or path.name.startswith("."):
            continue
        if path.stem in seen:
            raise ParseError(f"duplicate record id {path.stem!r} in corpus directory")
        seen.add(path.stem)
        yield read_signature_file(path)


def load_corpus_dir(directory: str | Path) -> dict[str, Signature]:
    return {s.record_id: s for s in iter_corpus_dir(directory)}


def iter_manifest(path: str | Path) -> Iterator[Signature]:
    """Yield signatures from a ``record_id<TAB>path`` manifest.

    Relative paths resolve against the manifest's directory.
    """
    path = Path(path)
    base = path.parent
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ParseError(f"manifest line {line_no}: expected 'record_id<TAB>path'")
        record_id, rel = parts
        yield read_signature_file(base / rel, record_id)


def load_manifest(path: str | Path) -> dict[str, Signature]:
    return {s.record_id: s for s in iter_manifest(path)}


def write_corpus_dir(signatures: Iterator[Signature] | list[Signature],
                     directory: str | Path,
                     extension: str = ".sig") -> int:
    """Write signatures as one file per record; returns the record count."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    count = 0
    for s in signatures:
        write_signature_file(s, directory / f"{s.record_id}{extension}")
        count += 1
    return count


class DirectoryStore(Mapping):
    """Lazy record_id -> Signature mapping over a corpus directory.

    Scans filenames once; parses each file on first access and caches it.
    """

    def __init__(self, directory: str | Path):
        directory = Path(directory)
        if not directory.is_dir():
            raise ParseError(f"corpus directory not found: {directory}")
        self._paths: dict[str, Path] = {}
        for path in sorted(directory.iterdir()):
            if path.is_file() and not path.name.startswith("."):
                if path.stem in self._paths:
                    raise ParseError(f"duplicate record id {path.stem!r} in corpus directory")
                self._paths[path.stem] = path
        self._cache: dict[str, Signature] = {}

    def __getitem__(self, record_id: str) -> Signature:
        if record_id not in self._cache:
            self._cache[record_id] = read_signature_file(self._paths[record_id], record_id)
        return self._cache[record_id]

    def __iter__(self):
        return iter(self._paths)

    def __len__(self) -> int:
        return len(self._paths)


class SerializedStore(Mapping):
    """In-memory record_id -> Signature mapping holding serialized text.

    Keeps large corpora compact (roughly the on-disk size) and parses a
    record only when it is actually resolved.
    """

    def __init__(self):
        self._texts: dict[str, str] = {}

    def add(self, s: Signature) -> None:
        if s.record_id in self._texts:
            raise ValueError(f"duplicate record id {s.record_id!r}")
        self._texts[s.record_id] = serialize_signature(s)

    def __getitem__(self, record_id: str) -> Signature:
        return parse_signature(self._texts[record_id], record_id)

    def __iter__(self):
        return iter(self._texts)

    def __len__(self) -> int:
        return len(self._texts)
