"""
Signature files: the minutiae record format
===========================================

A fingerprint record is a plain text file, one minutia per line:
``x;y;theta;type`` with integer pixel coordinates, a ridge angle in
radians, and an opaque type code. Angles may be written with a comma
or a dot decimal separator; the serializer always emits dots.
"""

from fpdedup import parse_signature, serialize_signature

# A small record as it would arrive from a feature extractor; note the
# locale-style comma decimals.
text = """\
207;45;3,33898830413818;1
149;62;0,19739556312561;1
192;51;0,19739556312561;1
245;78;3,75231862068176;1
169;82;3,14159274101257;1
"""

record = parse_signature(text, "demo-record")
print(f"parsed {len(record)} minutiae from {record.record_id!r}")
for m in record.minutiae:
    print(f"  ({m.x:3d}, {m.y:3d})  theta={m.theta:.6f}  type={m.type_code}")

# Serialization emits dot decimals; parsing it back gives the same record.
round_tripped = parse_signature(serialize_signature(record), "demo-record")
print("round trip exact:", round_tripped == record)

# Malformed lines are rejected with the offending line number.
try:
    parse_signature("207;45;3.33;1\nnot-a-minutia", "broken")
except ValueError as exc:
    print("parse error:", exc)
