"""Walk through the basic objects: the two graded algebras attached to a
group, the Koszul model of the residue field, and its one-line homology.

Every number here is exact rational arithmetic; run the script and read
along.
"""
from koszuldg import (
    GroupData, Window, ext_algebra, homology, koszul_model, named_group,
    poly_algebra, to_degreewise,
)

# A connected compact Lie group enters as the codegrees of the polynomial
# generators of its Borel cohomology.  The catalog knows the usual suspects.
for name in ["T", "T^2", "SU(2)", "SU(3)", "Sp(2)"]:
    g = named_group(name)
    print(f"{name:6s} codegrees {list(g.codegrees)}  rank {g.rank}  dim {g.dim_g}")

# The polynomial side lives in negative even degrees, the exterior side in
# positive odd degrees; their dimensions mirror each other through duality.
g = named_group("SU(3)")
R = poly_algebra(g)
L = ext_algebra(g)
print("\npolynomial dims (degrees 0..-12):",
      [R.dim(-n) for n in range(0, 13, 2)])
print("exterior dims by degree:", L.dims())

# The Koszul model of the residue field: free on the subset basis, with the
# contraction differential.  Expanding it degreewise and taking homology
# gives exactly one class, in degree zero - the regular-sequence statement.
for name in ["T", "T^2", "SU(3)"]:
    R = poly_algebra(named_group(name))
    kbar = koszul_model(R)
    depth = 2 * sum(R.codegrees) + 4
    M = to_degreewise(kbar, Window(-depth, 2))
    H = homology(M)
    print(f"\n{name}: Koszul model has rank {kbar.rank}; "
          f"homology {H.dims()} on {H.window()}")
