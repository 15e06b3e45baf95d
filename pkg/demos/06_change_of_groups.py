"""Change of groups along the circle inside the rank-one unitary group.

The ring map sends the codegree-four generator to the square of the
codegree-two one; the target is free of rank two over the image, the
derived dual is one copy of the target shifted by the relative dimension,
and the shift law and adjunction bijections fall out of that certificate.
"""
import random

from koszuldg import (
    Window, adjunction_check, basic_injective, catalog_ring_maps,
    coextend_scalars, derived_dual, extend_scalars, homology_dims,
    r_shriek_left, residue_field, restrict_scalars, shift_law_check,
)
from koszuldg.samples import random_zero_diff_module

rm = catalog_ring_maps()["T<SU(2)"]
print("ring map:", rm, "| relative dimension c =", rm.relative_dimension)
print("finiteness certificate: target generated in codegrees <=",
      rm.certificate.top_codegree,
      "by", rm.certificate.generator_count, "elements")

kS = residue_field(rm.source)
print("\nextension of the residue field:",
      {n: extend_scalars(rm, kS).dim(n)
       for n in extend_scalars(rm, kS).degrees()})
print("coextension of the residue field (homology):",
      homology_dims(coextend_scalars(rm, kS)))

dd = derived_dual(rm)
print("\nderived dual generators:", list(dd.dual.basis))
print("its homology is one shifted free copy of the target:",
      dd.free_rank_one, "| generator degree", dd.generator_degree)

I_T = basic_injective(rm.target, Window(0, 12), name="I_T")
rep = shift_law_check(rm, I_T, dd=dd)
print("\nshift law on the basic injective:", rep.passed,
      f"(computed shift {rep.computed_shift}, expected {rep.expected_shift})")

rng = random.Random(7)
agreements = 0
for _ in range(5):
    M = random_zero_diff_module(rm.source, rng)
    left = homology_dims(r_shriek_left(rm, M, dd=dd))
    right = homology_dims(coextend_scalars(rm, M))
    agreements += left == right
print(f"left and right coextension models agree on {agreements}/5 modules")

adj = adjunction_check(rm, kS, residue_field(rm.target))
print("adjunction dimension pairs (extension | coextension):")
for n in sorted(adj.extension_pair):
    print(f"  degree {n}: {adj.extension_pair[n]} | {adj.coextension_pair[n]}")
