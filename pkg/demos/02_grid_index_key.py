"""
The grid-count index key
========================

A signature's cluster key comes from a 5x5 grid laid over its bounding
box: translate the minutiae to the origin, split the box into blocks of
equal real-valued size, count minutiae per block, and join the counts
with "-" (scanning one x-block at a time, y within it). The key is
translation invariant and conserves the minutiae total, so identical
prints enrolled at different offsets land in the same cluster.
"""

from fpdedup import GridParams, Minutia, Signature, bounding_box, compute_index

points = [
    (207, 45), (149, 62), (192, 51), (245, 78), (169, 82), (298, 88),
    (172, 122), (224, 120), (115, 142), (164, 136), (177, 145), (184, 148),
    (216, 166), (264, 173), (169, 188), (196, 181), (148, 198), (160, 207),
    (227, 217), (176, 229), (146, 240), (185, 248), (238, 328),
]
record = Signature("demo", [Minutia(x, y, 0.0, 1) for x, y in points])

x_min, y_min, x_max, y_max = bounding_box(record)
print(f"bounding box: x in [{x_min}, {x_max}], y in [{y_min}, {y_max}]")
print(f"block size: {(x_max - x_min + 1) / 5} x {(y_max - y_min + 1) / 5} px")

key = compute_index(record, GridParams(n=5))
print("\nindex key:", key.key_text)
print("counts conserve the minutiae total:", sum(key.counts), "==", len(record))

# The counts, shown as the 5x5 block matrix (x-block across, y-block down):
print("\nblock matrix:")
for yb in range(5):
    print("  " + " ".join(str(key.counts[xb * 5 + yb]) for xb in range(5)))

# Translate the whole print: the key does not move.
shifted = Signature("shifted", [Minutia(m.x + 61, m.y + 17, m.theta, m.type_code)
                                for m in record.minutiae])
print("\nshifted key equal:", compute_index(shifted).key_text == key.key_text)

# A coarser 1x1 grid reduces the key to the minutiae count.
print("1x1 grid key:", compute_index(record, GridParams(n=1)).key_text)
