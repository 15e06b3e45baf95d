"""The endomorphism DGA of the Koszul model and the two rigidity checks.

The homology of the endomorphism algebra is the exterior algebra on the
contraction classes (the double-centralizer statement); evaluation at the
unit compares it multiplicatively with the commutative model Hom(kbar, k).
Intrinsic formality then produces a quasi-isomorphism from the polynomial
ring into any commutative DGA with polynomial homology, and the
recognition algorithm builds a verified comparison from the Koszul model
onto anything whose homology is one class in degree zero.
"""
from koszuldg import (
    Window, cartan_map, double_centralizer_check, end_dga, homology,
    named_group, poly_algebra, recognize_k, residue_field, to_degreewise,
    koszul_model,
)
from koszuldg.duality import acyclic_extension_dga, formality_map, poly_dga

for name in ["T", "SU(2)", "T^2"]:
    g = named_group(name)
    rep = double_centralizer_check(g)
    print(f"{name}: H(End) dims {rep.homology_dims} "
          f"(exterior {rep.exterior_dims}) -> {'ok' if rep.passed else 'FAIL'}")
    cr = cartan_map(end_dga(poly_algebra(g)))
    print(f"   comparison map: chain {cr.chain_map_ok}, iso {cr.homology_iso}, "
          f"multiplicative {cr.multiplicative_on_homology}")

# formality: the ring itself, and the ring with an acyclic square-zero ideal
R = poly_algebra(named_group("T"))
print("\nformality on R:", formality_map(poly_dga(R, Window(-8, 0)), R).passed)
A = acyclic_extension_dga(R, Window(-10, 2), -3)
print("formality on R + acyclic ideal:", formality_map(A, R).passed)

# recognition of the residue field, on the Koszul model itself
kbar = to_degreewise(koszul_model(R), Window(-12, 2))
out = recognize_k(kbar)
print("recognize kbar: cone acyclic", out.cone_acyclic,
      "| hits the generator", out.nonzero_in_degree_zero)
out2 = recognize_k(residue_field(R))
print("recognize k:   cone acyclic", out2.cone_acyclic)
