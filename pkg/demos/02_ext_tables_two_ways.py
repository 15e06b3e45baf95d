"""Bigraded Ext of the residue field with itself, computed twice.

The free route resolves the first argument, the injective route resolves
the second; the two implementations share nothing past the resolution
engines, so their agreement is a real check.  Regraded along n = t - s the
table reproduces the exterior algebra on generators one below the
codegrees, which is the classical calculation this engine is built around.
"""
from koszuldg import ext_algebra, ext_bigraded, named_group, poly_algebra, residue_field

for name in ["T", "T^2", "SU(2)", "SU(3)"]:
    g = named_group(name)
    R = poly_algebra(g)
    k = residue_field(R)
    via_free = ext_bigraded(k, k, "via_free")
    via_inj = ext_bigraded(k, k, "via_injective")
    assert via_free == via_inj, "routes must agree"
    print(f"\n{name}:")
    for (s, t), d in sorted(via_free.entries.items()):
        print(f"  Ext^({s},{t}) has dimension {d}  ->  total degree {t - s}")
    print("  regraded:", via_free.abutment_dims())
    print("  exterior algebra dims:", ext_algebra(g).dims())
    assert via_free.abutment_dims() == ext_algebra(g).dims()
