# The named four-vertex chains with every x_i set to y, factored.
from nlsblocks import catalog
from nlsblocks.certify import factor_witness, irreducible

for kind, colors in catalog.CHAIN_TYPES.items():
    p = catalog.chain_y_poly(kind)
    cert = irreducible(p)
    split = factor_witness(p) if cert.failed else None
    print(f"{kind} {'-'.join(colors):17s} {p}")
    print(f"  {cert.verdict} via {cert.method}" + (f": {[str(f) for f in split]}" if split else ""))
