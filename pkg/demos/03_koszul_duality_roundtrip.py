"""The duality functors in both directions, with strict module structures.

Hom from the Koszul model carries an exterior action through the
contraction cycles; the twisted tensor against divided powers carries the
polynomial action through differentiation.  Round trips preserve homology
with its action, which is the computable shadow of the equivalence between
exterior modules and torsion polynomial modules.
"""
import random

from koszuldg import (
    Window, basic_injective, functor_S, functor_T, homology, named_group,
    poly_algebra, residue_field, roundtrip_check,
)
from koszuldg.algebra import lambda_as_module, trivial_lambda_module
from koszuldg.duality import s_of_trivial_iso
from koszuldg import ext_algebra
from koszuldg.samples import random_lambda_module, random_torsion_dg_module

g = named_group("T^2")
R = poly_algebra(g)
L = ext_algebra(g)

# T of the basic injective: one class in degree zero, trivial action.
I = basic_injective(R, Window(0, 8))
print("H(T(I)) =", homology(functor_T(I)).dims())

# T of the residue field: the whole exterior pattern, one class per subset.
Tk = functor_T(residue_field(R))
print("T(k) dims:", {n: Tk.dim(n) for n in Tk.degrees()})

# S of the trivial module is the basic injective, by an explicit diagonal
# isomorphism (divided powers against dual monomials).
iso = s_of_trivial_iso(R, Window(0, 8))
print("S(trivial) = I, checked degreewise:",
      all(iso.source.dim(n) == iso.target.dim(n) for n in range(9)))

# S of the exterior algebra resolves the residue field.
SL = functor_S(lambda_as_module(L), R, Window(0, 10))
print("H(S(Lambda)) =", homology(SL).dims())

# Round trips on random inputs, both directions.
rng = random.Random(2026)
for _ in range(3):
    N = random_lambda_module(L, rng, max_total=6)
    print(roundtrip_check(N))
for _ in range(3):
    M = random_torsion_dg_module(R, rng, max_total=6)
    print(roundtrip_check(M))
