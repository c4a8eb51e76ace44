"""Heavy families must contain given posets; the extractors build the copy."""
from fractions import Fraction

from posetfree import (antichain, antichain_extractor, chain_extractor, extract_height2,
                       extract_parallel, extract_series, levels, lubell_mass)

F = levels(13, range(2, 12))
print("family mass", lubell_mass(F))

# two chains side by side
rep = extract_parallel(F, chain_extractor(2), chain_extractor(1))
print("parallel copy valid:", rep.validate())
for x, a in enumerate(rep.sets):
    print(f"  element {x} -> {sorted(i + 1 for i in range(13) if a >> i & 1)}")

# a chain below a point below an antichain
rep = extract_series(F, chain_extractor(2), antichain_extractor(2))
print("series copy valid:", rep.validate(), "steps recorded:", len(rep.trace))

# height-two targets need a much heavier family; the full 20-cube qualifies
cube = levels(20, range(21))
rep = extract_height2(cube, antichain(2))
print("height-two copy valid:", rep.validate(), "via", rep.tag)
print("first trace step:", {k: str(v) for k, v in rep.trace[0].items()
                            if isinstance(v, (int, Fraction, str))})
