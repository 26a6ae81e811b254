"""Full-database duplicate detection via the in-cluster sweep.

Buckets never interact: a record is only ever compared with records
sharing its index key, so total work is the sum of per-bucket pair
counts instead of n^2. Within a bucket the sweep repeatedly pops the
head record, opens a group with it, and moves every remaining member it
matches into that group. Groups are exactly the sweep's output; they
are not transitively closed any further. The engine only reports
duplicates, it never deletes anything.

An exhaustive all-pairs oracle (connected components of the match
graph) is included for equivalence testing on small corpora.
"""

from __future__ import annotations

import time
from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .cluster import ClusterTable
from .identify import Matcher, _resolve
from .matcher import MatchParams, Signature, index_signature, is_match, score_indexed

REPORT_FORMAT_HEADER = "fpdedup-dedup-report v1"


class OracleCapExceededError(RuntimeError):
    """The exhaustive oracle refused a corpus larger than its cap."""


@dataclass
class DuplicateReport:
    """Groups of mutually matching record ids, per index key.

    Within one key the groups partition the bucket; singleton buckets
    become single one-member groups. Each group lists its members in
    sweep order, head (the representative) first. A group of size >= 2
    means duplicates were detected.
    """

    groups_by_key: dict[str, list[list[str]]] = field(default_factory=dict)
    comparisons: int = 0

    def total_records(self) -> int:
        return sum(len(g) for groups in self.groups_by_key.values() for g in groups)

    def duplicate_groups(self) -> list[list[str]]:
        return [g for groups in self.groups_by_key.values() for g in groups if len(g) >= 2]

    def duplicate_count(self) -> int:
        """Records over and above one representative per duplicate group."""
        return sum(len(g) - 1 for g in self.duplicate_groups())


def _sweep_bucket(bucket: list[str],
                  store: Mapping[str, Signature],
                  params: MatchParams,
                  matcher: Matcher | None) -> tuple[list[list[str]], int]:
    """Sweep one bucket into groups; returns (groups, comparisons)."""
    if matcher is None:
        indexes = {rid: index_signature(_resolve(store, rid), params) for rid in bucket}

        def matched(a: str, b: str) -> bool:
            return is_match(score_indexed(indexes[a], indexes[b], params), params)
    else:
        signatures = {rid: _resolve(store, rid) for rid in bucket}

        def matched(a: str, b: str) -> bool:
            return is_match(matcher(signatures[a], signatures[b], params), params)

    groups: list[list[str]] = []
    comparisons = 0
    worklist = list(bucket)
    while worklist:
        head = worklist.pop(0)
        group = [head]
        remaining: list[str] = []
        for other in worklist:
            comparisons += 1
            if matched(head, other):
                group.append(other)
            else:
                remaining.append(other)
        worklist = remaining
        groups.append(group)
    return groups, comparisons


def deduplicate(table: ClusterTable,
                store: Mapping[str, Signature],
                params: MatchParams = MatchParams(),
                matcher: Matcher | None = None,
                jobs: int = 1) -> DuplicateReport:
    """Run the duplicate sweep over every bucket of a loaded table.

    Buckets of size <= 1 are recorded as singleton groups without any
    comparison. Buckets are independent, so ``jobs > 1`` sweeps the
    multi-member buckets on a thread pool; results merge in bucket
    order and are identical to a sequential run.
    """
    report = DuplicateReport()
    heavy = {key: bucket for key, bucket in table.buckets.items() if len(bucket) >= 2}

    if jobs > 1 and heavy:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {key: pool.submit(_sweep_bucket, bucket, store, params, matcher)
                       for key, bucket in heavy.items()}
        swept = {key: future.result() for key, future in futures.items()}
    else:
        swept = {key: _sweep_bucket(bucket, store, params, matcher)
                 for key, bucket in heavy.items()}

    for key, bucket in table.buckets.items():
        if len(bucket) <= 1:
            report.groups_by_key[key] = [list(bucket)]
        else:
            groups, comparisons = swept[key]
            report.groups_by_key[key] = groups
            report.comparisons += comparisons
    return report


def comparison_count(table: ClusterTable) -> int:
    """Upper bound on sweep comparisons: sum of c*(c-1)/2 over buckets."""
    return sum(c * (c - 1) // 2 for c in map(len, table.buckets.values()))


# ---------------------------------------------------------------------------
# Exhaustive oracle


def exhaustive_dedup(store: Mapping[str, Signature],
                     params: MatchParams = MatchParams(),
                     cap: int = 5000,
                     matcher: Matcher | None = None) -> list[list[str]]:
    """All-pairs grouping: connected components of the match graph.

    Scores every one of the n*(n-1)/2 pairs, so it is only usable as a
    ground-truth oracle on small corpora; corpora above ``cap`` records
    are refused. Groups and their members come back in first-seen order.
    """
    ids = list(store)
    n = len(ids)
    if n > cap:
        raise OracleCapExceededError(
            f"corpus has {n} records, above the exhaustive-oracle cap of {cap}"
        )

    if matcher is None:
        indexes = [index_signature(_resolve(store, rid), params) for rid in ids]

        def matched(i: int, j: int) -> bool:
            return is_match(score_indexed(indexes[i], indexes[j], params), params)
    else:
        signatures = [_resolve(store, rid) for rid in ids]

        def matched(i: int, j: int) -> bool:
            return is_match(matcher(signatures[i], signatures[j], params), params)

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n - 1):
        for j in range(i + 1, n):
            if matched(i, j):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    members: dict[int, list[str]] = {}
    for i in range(n):
        members.setdefault(find(i), []).append(ids[i])
    return [members[root] for root in sorted(members)]


# ---------------------------------------------------------------------------
# Report persistence


def save_report(report: DuplicateReport,
                path: str | Path,
                wall_seconds: float = 0.0) -> None:
    """Write ``key<TAB>rep_id<TAB>member1,member2,...`` lines plus a summary."""
    Path(path).write_text(format_report(report, wall_seconds))


def format_report(report: DuplicateReport, wall_seconds: float = 0.0) -> str:
    lines = [REPORT_FORMAT_HEADER]
    buckets = 0
    for key, groups in report.groups_by_key.items():
        buckets += 1
        for group in groups:
            lines.append(f"{key}\t{group[0]}\t{','.join(group)}")
    lines.append(
        "# summary: n=%d buckets=%d duplicate_groups=%d comparisons=%d wall_s=%.4f"
        % (report.total_records(), buckets, len(report.duplicate_groups()),
           report.comparisons, wall_seconds)
    )
    return "\n".join(lines) + "\n"


def timed_deduplicate(table: ClusterTable,
                      store: Mapping[str, Signature],
                      params: MatchParams = MatchParams(),
                      matcher: Matcher | None = None,
                      jobs: int = 1) -> tuple[DuplicateReport, float]:
    """deduplicate() plus its wall time on a monotonic clock."""
    start = time.perf_counter()
    report = deduplicate(table, store, params, matcher=matcher, jobs=jobs)
    return report, time.perf_counter() - start
