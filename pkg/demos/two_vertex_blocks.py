# Characteristic polynomials of the black and red edges, and where the red
# edge has real spectrum.
from fractions import Fraction

from nlsblocks.blocks import build_CA
from nlsblocks.catalog import BLACK, RED, edge
from nlsblocks.certify import real_root_region, region_at
from nlsblocks.polycore import Xi, char_poly

for color in (BLACK, RED):
    B = build_CA(edge(color))
    print(color, "C_A =", B.mat.to_json())
    print("   chi =", char_poly(B.mat))

chi = char_poly(build_CA(edge(RED)).mat)
minors = real_root_region(chi)
print("red edge real-root region: every minor > 0:", [str(m) for m in minors])
for x2 in (2, 10, 14, 20):
    inside, sig, sturm = region_at(chi, {Xi(1): 1, Xi(2): Fraction(x2)})
    print(f"  x = (1, {x2}): inside={inside} signature={sig} real roots={sturm}")
