"""Walk through the seven TDD configurations and the two wire codecs.

Shows the per-subframe direction patterns, which subframes are fixed vs
flexible, and how a configuration travels as a 3-bit id and is expanded
back to the 5-bit flexible bitmap on receipt.
"""

from picotdd import frame

print("subframe:        " + " ".join(str(s) for s in range(10)))
for c in range(7):
    pattern = " ".join(frame.subframe_direction(c, s).value for s in range(10))
    print(f"configuration {c}: {pattern}   DL share {frame.downlink_fraction(c):.1f}")

print("\nfixed subframes:   ", frame.FIXED_SUBFRAMES)
print("flexible subframes:", frame.FLEXIBLE_SUBFRAMES)

print("\nconfiguration exchange over the 3-bit wire:")
for c in range(7):
    wire = frame.encode_config_id(c)
    bitmap = frame.decode_config_id(wire)
    print(f"  config {c} -> send {wire} -> receiver expands to {bitmap}")

print("\nconfig 0 never marks a flexible subframe as downlink, so it is")
print("never an eNB-to-eNB aggressor there:", frame.encode_flexible_bitmap(0))
