"""Similarity scoring of two signatures via minutiae-triplet descriptors.

Each signature is reduced to a set of local descriptors: triangles built
from every minutia and pairs of its k nearest neighbors, filtered to
keep all edges within [min_edge, max_edge]. A triplet is described by
nine translation- and rotation-invariant features: the three side
lengths (ascending), the three interior angles (matching order), and
the three minutiae ridge angles expressed relative to the triangle's
own frame (direction from each vertex to the centroid).

Two signatures are scored by greedily pairing mutually best-matching
triplets under per-feature tolerances; the matched-pair count,
normalized by the smaller triplet-set size, gives a 0-100 score. The
scorer is deliberately pluggable: anything with the
``(Signature, Signature, MatchParams) -> MatchResult`` shape can stand
in for the built-in implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signature import Signature, normalize_angle

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MatchParams:
    """Matcher configuration; defaults mirror the common experiment setup."""

    min_edge: float = 15.0          # pixels, shortest admissible triangle side
    max_edge: float = 100.0         # pixels, longest admissible triangle side
    neighbors_k: int = 4            # nearest neighbors considered per minutia
    score_threshold: float = 90.0   # 0-100, inclusive match gate
    min_matched_descriptors: int = 0  # minimum paired triplets; 0 disables the gate
    side_tolerance: float = 5.0     # pixels, per-side pairing tolerance
    angle_tolerance: float = 0.2618  # radians (~15 deg), per-angle pairing tolerance

    def __post_init__(self) -> None:
        if not (0 < self.min_edge < self.max_edge):
            raise ValueError("require 0 < min_edge < max_edge")
        if self.neighbors_k < 2:
            raise ValueError("neighbors_k must be >= 2")
        if not (0 <= self.score_threshold <= 100):
            raise ValueError("score_threshold must be within [0, 100]")
        if self.min_matched_descriptors < 0:
            raise ValueError("min_matched_descriptors must be >= 0")
        if self.side_tolerance <= 0 or self.angle_tolerance <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class Triplet:
    """One local descriptor: a triangle of three minutiae.

    Vertices are ordered by their opposite side length, so ``sides`` is
    ascending and ``angles`` lists the interior angle at each ordered
    vertex (also ascending, by the law of sines). ``orientations`` holds
    each ordered vertex's ridge angle minus the direction toward the
    next ordered vertex, reduced into [0, 2*pi); vertices are at least
    min_edge apart, so the reference direction is always well defined
    (a centroid reference would degenerate on collinear triples).
    """

    indices: tuple[int, int, int]
    sides: tuple[float, float, float]
    angles: tuple[float, float, float]
    orientations: tuple[float, float, float]


@dataclass(frozen=True)
class MatchResult:
    score: float                # 0-100
    matched_descriptors: int    # paired triplet count


# ---------------------------------------------------------------------------
# Triplet construction


def _interior_angle(opposite: float, adj1: float, adj2: float) -> float:
    cos_a = (adj1 * adj1 + adj2 * adj2 - opposite * opposite) / (2.0 * adj1 * adj2)
    return math.acos(min(1.0, max(-1.0, cos_a)))


def _make_triplet(s: Signature, i: int, j: int, k: int) -> Triplet:
    idx = (i, j, k)
    pts = [(float(s.minutiae[v].x), float(s.minutiae[v].y)) for v in idx]
    thetas = [s.minutiae[v].theta for v in idx]
    d01 = math.dist(pts[0], pts[1])
    d12 = math.dist(pts[1], pts[2])
    d02 = math.dist(pts[0], pts[2])
    opposite = (d12, d02, d01)  # side opposite each vertex
    order = sorted(range(3), key=lambda v: (opposite[v], v))
    sides = tuple(opposite[v] for v in order)
    adjacent = ((d01, d02), (d01, d12), (d02, d12))
    angles = tuple(_interior_angle(opposite[v], *adjacent[v]) for v in order)
    orientations = []
    for pos in range(3):
        v, nxt = order[pos], order[(pos + 1) % 3]
        reference = math.atan2(pts[nxt][1] - pts[v][1], pts[nxt][0] - pts[v][0])
        orientations.append(normalize_angle(thetas[v] - reference))
    return Triplet(idx, sides, angles, tuple(orientations))


def build_triplets(s: Signature, p: MatchParams = MatchParams()) -> list[Triplet]:
    """Build the triplet descriptors of a signature.

    For each minutia, triangles are formed with every pair of its
    ``neighbors_k`` nearest neighbors; triangles sharing the same
    minutia index set are kept once, and any triangle with a side
    outside [min_edge, max_edge] is discarded. The count stays
    O(N * k^2) rather than O(N^3). Signatures with fewer than three
    minutiae yield an empty list.
    """
    n = len(s.minutiae)
    if n < 3:
        return []
    coords = np.array([(m.x, m.y) for m in s.minutiae], dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    k = min(p.neighbors_k, n - 1)
    # Stable sort keeps neighbor order deterministic under distance ties.
    neighbor_order = np.argsort(dist, axis=1, kind="stable")[:, :k]

    triplets: list[Triplet] = []
    seen: set[tuple[int, int, int]] = set()
    lo, hi = p.min_edge, p.max_edge
    for anchor in range(n):
        neighbors = neighbor_order[anchor]
        for a_pos in range(k - 1):
            for b_pos in range(a_pos + 1, k):
                na, nb = int(neighbors[a_pos]), int(neighbors[b_pos])
                idx = tuple(sorted((anchor, na, nb)))
                if idx in seen:
                    continue
                seen.add(idx)
                e1 = dist[anchor, na]
                e2 = dist[anchor, nb]
                e3 = dist[na, nb]
                if not (lo <= e1 <= hi and lo <= e2 <= hi and lo <= e3 <= hi):
                    continue
                triplets.append(_make_triplet(s, *idx))
    return triplets


# ---------------------------------------------------------------------------
# Scoring


@dataclass
class TripletIndex:
    """Matchable form of one signature: its triplet features as arrays.

    ``features`` columns: sides (0-2), interior angles (3-5), relative
    orientations (6-8). Rows are sorted by the largest side (column 2)
    so scoring can window side-compatible candidates directly.
    ``minutiae_key`` backs the degenerate case where no triplets exist
    and only exact minutiae equality can score.
    """

    features: np.ndarray  # (nt, 9) float64, sorted by column 2
    columns: np.ndarray   # (9, nt) contiguous transpose, for cheap column gathers
    minutiae_key: tuple


def index_signature(s: Signature, p: MatchParams = MatchParams()) -> TripletIndex:
    """Precompute a signature's matchable triplet features."""
    if not s.minutiae:
        raise ValueError(f"signature {s.record_id!r} is empty")
    triplets = build_triplets(s, p)
    features = np.array(
        [t.sides + t.angles + t.orientations for t in triplets], dtype=np.float64
    ).reshape(len(triplets), 9)
    if features.shape[0] > 1:
        order = np.lexsort((np.arange(features.shape[0]), features[:, 2]))
        features = features[order]
    key = tuple(sorted((m.x, m.y, m.theta, m.type_code) for m in s.minutiae))
    return TripletIndex(features, np.ascontiguousarray(features.T), key)


def _mutual_best_count(dist: list[float], ii: list[int], jj: list[int]) -> int:
    """Rounds of mutual-best pairing over sparse candidate pairs.

    Each round pairs every (i, j) where j is i's best candidate and i is
    j's best (ties going to the lower index, which keeps the outcome
    deterministic and symmetric in the two sides); paired rows and
    columns leave the pool. The globally closest surviving pair is
    always mutual, so every round makes progress.
    """
    candidates = list(zip(dist, ii, jj))
    matched = 0
    while candidates:
        row_best: dict[int, tuple[float, int]] = {}
        col_best: dict[int, tuple[float, int]] = {}
        for d, i, j in candidates:
            key = (d, j)
            if i not in row_best or key < row_best[i]:
                row_best[i] = key
            key = (d, i)
            if j not in col_best or key < col_best[j]:
                col_best[j] = key
        used_i: set[int] = set()
        used_j: set[int] = set()
        for i, (_, j) in row_best.items():
            if col_best[j][1] == i:
                used_i.add(i)
                used_j.add(j)
                matched += 1
        candidates = [c for c in candidates if c[1] not in used_i and c[2] not in used_j]
    return matched


def score_indexed(a: TripletIndex, b: TripletIndex, p: MatchParams = MatchParams()) -> MatchResult:
    """Score two precomputed triplet indexes."""
    na, nb = a.features.shape[0], b.features.shape[0]
    if na == 0 or nb == 0:
        # No geometry to compare; only exact minutiae equality counts.
        score = 100.0 if a.minutiae_key == b.minutiae_key else 0.0
        return MatchResult(score, 0)

    fa, fb = a.features, b.features
    side_tol, angle_tol = p.side_tolerance, p.angle_tolerance

    # Window on the largest side: only b-rows within +/- side_tol of
    # each a-row can be compatible, and column 2 is sorted.
    s3a, s3b = a.columns[2], b.columns[2]
    lo = np.searchsorted(s3b, s3a - side_tol, side="left")
    hi = np.searchsorted(s3b, s3a + side_tol, side="right")
    counts = hi - lo
    total = int(counts.sum())
    if total == 0:
        return MatchResult(0.0, 0)
    ii = np.repeat(np.arange(na), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    jj = np.arange(total) - np.repeat(offsets - lo, counts)

    # Second screen on the smallest side alone before touching full rows.
    keep = np.abs(a.columns[0][ii] - b.columns[0][jj]) <= side_tol
    if not keep.any():
        return MatchResult(0.0, 0)
    ii, jj = ii[keep], jj[keep]

    diff = np.abs(fa[ii] - fb[jj])
    keep = ((diff[:, 1] <= side_tol)
            & (diff[:, 3] <= angle_tol) & (diff[:, 4] <= angle_tol)
            & (diff[:, 5] <= angle_tol))
    if not keep.any():
        return MatchResult(0.0, 0)
    diff, ii, jj = diff[keep], ii[keep], jj[keep]
    orient_d = np.minimum(diff[:, 6:9], TWO_PI - diff[:, 6:9])
    keep = (orient_d <= angle_tol).all(axis=1)
    if not keep.any():
        return MatchResult(0.0, 0)
    diff, orient_d, ii, jj = diff[keep], orient_d[keep], ii[keep], jj[keep]

    combined = (diff[:, 0:3].sum(axis=1) / side_tol
                + diff[:, 3:6].sum(axis=1) / angle_tol
                + orient_d.sum(axis=1) / angle_tol)
    matched = _mutual_best_count(combined.tolist(), ii.tolist(), jj.tolist())
    return MatchResult(100.0 * matched / min(na, nb), matched)


def match_score(a: Signature, b: Signature, p: MatchParams = MatchParams()) -> MatchResult:
    """Score two signatures on the 0-100 scale.

    Deterministic for a given ordered pair; symmetric in its arguments;
    100 for identical minutiae sets. Raises ValueError when either
    signature is empty.
    """
    return score_indexed(index_signature(a, p), index_signature(b, p), p)


def is_match(r: MatchResult, p: MatchParams = MatchParams()) -> bool:
    """Threshold gate: score at or above the threshold, enough descriptors."""
    return r.score >= p.score_threshold and r.matched_descriptors >= p.min_matched_descriptors
