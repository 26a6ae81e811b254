"""
Identification in expected constant time
========================================

Enrolled records are bucketed by index key in a cluster table. To
identify a query we compute its key, fetch the one bucket, and score
only that bucket's members: the penetration (fraction of the database
sent to the matcher) stays far below 1%, independent of database size.
"""

from fpdedup import GridParams, MatchParams, Signature, build_table, compute_index, identify
from fpdedup.synth import GenSpec, generate

grid, params = GridParams(), MatchParams()

# Enroll 2,000 synthetic subjects, plus planted duplicates of a few.
signatures, truth = generate(GenSpec(subjects=2000, dup_fraction=0.01, seed=99))
store = {s.record_id: s for s in signatures}
table = build_table((s.record_id, compute_index(s, grid).key_text) for s in signatures)
print(f"enrolled {table.size} records in {len(table.buckets)} clusters "
      f"(largest cluster: {table.max_bucket_size()})")

# Query with a copy of an enrolled print, shifted as if re-scanned.
enrolled = signatures[123]
query = Signature("query", [type(m)(m.x + 18, m.y + 6, m.theta, m.type_code)
                            for m in enrolled.minutiae])
result = identify(query, table, store, grid, params)

print(f"\nquery key: {result.key_text}")
print(f"bucket size: {len(result.candidates)} of {table.size} records "
      f"(penetration {result.penetration:.6%})")
for record_id, score in result.candidates:
    print(f"  candidate {record_id}: score {score:.1f}")
print("matches at threshold 90:", [rid for rid, _ in result.matches])
assert result.matches[0][0] == enrolled.record_id

# A query that resembles nothing enrolled touches nothing at all.
stranger, = generate(GenSpec(subjects=1, seed=54321))[0]
result = identify(Signature("stranger", stranger.minutiae), table, store, grid, params)
print(f"\nunknown query: {len(result.candidates)} candidates, "
      f"penetration {result.penetration:.6%}")
