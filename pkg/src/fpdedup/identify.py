"""Expected-O(1) identification of a query signature against a cluster table.

One identification computes the query's index key, fetches its bucket,
and scores the query against the bucket members only; the rest of the
database is never touched. The penetration of a query is the fraction
of the database forwarded to the matcher, i.e. bucket size over table
size.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass

from .cluster import ClusterTable
from .grid import GridParams, compute_index
from .matcher import (MatchParams, MatchResult, Signature, index_signature,
                      is_match, score_indexed)

Matcher = Callable[[Signature, Signature, MatchParams], MatchResult]


@dataclass
class IdentificationResult:
    """Scores for every bucket member, matches above threshold, penetration."""

    key_text: str
    candidates: list[tuple[str, float]]  # (record_id, score), best first
    matches: list[tuple[str, float]]
    penetration: float


def identify(query: Signature,
             table: ClusterTable,
             store: Mapping[str, Signature],
             grid: GridParams = GridParams(),
             params: MatchParams = MatchParams(),
             matcher: Matcher | None = None) -> IdentificationResult:
    """Identify a query against a loaded table.

    ``store`` must resolve every record id appearing in the table.
    Comparisons performed equal the bucket size exactly. Candidates come
    back sorted by descending score, ties broken by record id. Passing a
    ``matcher`` overrides the built-in triplet scorer.

    Raises:
        ValueError: empty query.
        KeyError: a bucket member missing from the store (table and
            store disagree about the corpus).
    """
    if not query.minutiae:
        raise ValueError(f"query signature {query.record_id!r} is empty")
    key = compute_index(query, grid)
    bucket = table.lookup(key)

    scored: list[tuple[str, float, MatchResult]] = []
    if matcher is None:
        query_index = index_signature(query, params)
        for record_id in bucket:
            candidate = _resolve(store, record_id)
            result = score_indexed(query_index, index_signature(candidate, params), params)
            scored.append((record_id, result.score, result))
    else:
        for record_id in bucket:
            candidate = _resolve(store, record_id)
            result = matcher(query, candidate, params)
            scored.append((record_id, result.score, result))

    scored.sort(key=lambda item: (-item[1], item[0]))
    candidates = [(rid, score) for rid, score, _ in scored]
    matches = [(rid, score) for rid, score, result in scored if is_match(result, params)]
    penetration = len(bucket) / table.size if table.size else 0.0
    return IdentificationResult(key.key_text, candidates, matches, penetration)


def _resolve(store: Mapping[str, Signature], record_id: str) -> Signature:
    try:
        return store[record_id]
    except KeyError:
        raise KeyError(
            f"record id {record_id!r} is in the table but not in the signature store"
        ) from None
