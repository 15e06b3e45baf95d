import random

import pytest

from koszuldg.grlin import Window
from koszuldg import algebra as alg
from koszuldg import groups as gr
from koszuldg import samples as sm


MAPS = gr.catalog_ring_maps()
RM = MAPS["T<SU(2)"]
S, T = RM.source, RM.target


def test_catalog_maps_validate():
    for name, rm in MAPS.items():
        assert rm.relative_dimension >= 0
        assert rm.certificate.generator_count >= 1


def test_relative_dimensions():
    assert RM.relative_dimension == 2
    assert MAPS["T<T^2-diag"].relative_dimension == 1
    assert MAPS["id-T"].relative_dimension == 0
    assert MAPS["T^2<SU(3)"].relative_dimension == 6


def test_finiteness_rejects_zero_map():
    t1 = alg.PolyAlgebra(alg.named_group("T"))
    with pytest.raises(gr.NotFinite):
        gr.RingMap(t1, t1, (t1.zero(),))


def test_finiteness_accepts_power_maps():
    t1 = alg.PolyAlgebra(alg.named_group("T"))
    for n in (1, 2, 3):
        img = t1.one()
        for _ in range(n):
            img = img * t1.gen(0)
        src = alg.PolyAlgebra(alg.GroupData((2 * n,)))
        rm = gr.RingMap(src, t1, (img,))
        assert rm.certificate.generator_count == n


def test_ring_map_rejects_inhomogeneous():
    t1 = alg.PolyAlgebra(alg.named_group("T"))
    su2 = alg.PolyAlgebra(alg.named_group("SU(2)"))
    with pytest.raises(alg.InvariantViolation):
        gr.RingMap(su2, t1, (t1.gen(0),))  # degree -2 image for a -4 generator


def test_restrict_identity_is_identity():
    k = alg.residue_field(MAPS["id-T"].target)
    out = gr.restrict_scalars(MAPS["id-T"], k)
    assert {n: out.dim(n) for n in out.degrees()} == {0: 1}


def test_restrict_squares_the_action():
    I_T = alg.basic_injective(T, Window(0, 8))
    out = gr.restrict_scalars(RM, I_T)
    # x acts as y^2: shifts four degrees down, kills the bottom two classes
    from koszuldg.grlin import is_zero_matrix
    assert is_zero_matrix(out.actions[0].block(0))
    assert is_zero_matrix(out.actions[0].block(2))
    assert not is_zero_matrix(out.actions[0].block(4))


def test_extend_scalars_residue_field():
    out = gr.extend_scalars(RM, alg.residue_field(S))
    assert {n: out.dim(n) for n in out.degrees()} == {0: 1, -2: 1}
    assert out.complete_below and out.is_torsion()


def test_extend_scalars_zero_and_identity():
    assert gr.extend_scalars(RM, alg.zero_module(S)).total_dim() == 0
    k = alg.residue_field(MAPS["id-T"].source)
    out = gr.extend_scalars(MAPS["id-T"], k)
    assert {n: out.dim(n) for n in out.degrees()} == {0: 1}


def test_extend_scalars_right_exact_on_cyclics():
    # extension of a cyclic quotient surjects onto the extension of its
    # further quotient (right exactness, checked through dimensions)
    M2 = sm.cyclic_quotient(S, [2])
    M1 = sm.cyclic_quotient(S, [1])
    e2 = gr.extend_scalars(RM, M2)
    e1 = gr.extend_scalars(RM, M1)
    assert all(e1.dim(n) <= e2.dim(n) for n in e1.degrees())


def test_coextend_scalars_injective_goes_to_injective():
    I_G = alg.basic_injective(S, Window(0, 16), name="I_G")
    out = gr.coextend_scalars(RM, I_G, w=Window(0, 8))
    I_H = alg.basic_injective(T, Window(0, 8))
    for n in range(0, 9):
        assert out.dim(n) == I_H.dim(n), n


def test_coextend_identity_and_zero():
    k = alg.residue_field(MAPS["id-T"].source)
    out = gr.coextend_scalars(MAPS["id-T"], k)
    assert alg.homology_dims(out) == {0: 1}
    assert gr.coextend_scalars(RM, alg.zero_module(S)).total_dim() == 0


@pytest.mark.parametrize("name,length,gamma", [
    ("T<SU(2)", 0, 2),
    ("id-T", 0, 0),
    ("T<T^2-diag", 1, 1),
    ("T<T^2-first", 1, 1),
    ("id-T^2", 0, 0),
])
def test_derived_dual_catalog(name, length, gamma):
    dd = gr.derived_dual(MAPS[name])
    assert dd.resolution.length == length
    assert dd.free_rank_one
    assert dd.generator_degree == gamma == MAPS[name].relative_dimension


def test_derived_dual_t_in_su2_generator_degrees():
    dd = gr.derived_dual(RM)
    assert sorted(deg for _, deg in dd.dual.basis) == [0, 2]
    # as a module over the target the homology is one shifted free copy
    want = {n: T.dim(n - 2) for n in dd.homology_dims}
    assert dd.homology_dims == {n: d for n, d in want.items() if d}


def test_shriek_left_matches_coextension():
    dd = gr.derived_dual(RM)
    rng = random.Random(7)
    k = alg.residue_field(S)
    assert alg.homology_dims(gr.r_shriek_left(RM, k, dd=dd)) == \
        alg.homology_dims(gr.coextend_scalars(RM, k))
    for _ in range(4):
        M = sm.random_zero_diff_module(S, rng)
        assert alg.homology_dims(gr.r_shriek_left(RM, M, dd=dd)) == \
            alg.homology_dims(gr.coextend_scalars(RM, M))


def test_shriek_left_diagonal_pair():
    # positive projective dimension: the left model computes the derived
    # coextension, so the honest comparison resolves injectively first
    rm = MAPS["T<T^2-diag"]
    dd = gr.derived_dual(rm)
    rng = random.Random(9)
    for _ in range(3):
        M = sm.random_zero_diff_module(rm.source, rng, max_power=2)
        assert alg.homology_dims(gr.r_shriek_left(rm, M, dd=dd)) == \
            gr.derived_coextension_dims(rm, M)


def test_upper_shriek_is_certified_shift():
    dd = gr.derived_dual(RM)
    N = sm.cyclic_quotient(T, [3])
    out = gr.r_upper_shriek(RM, N, dd=dd)
    assert {n: out.dim(n) for n in out.degrees()} == \
        {n - 2: N.dim(n) for n in N.degrees()}


def test_shift_law_on_injective_and_randoms():
    dd = gr.derived_dual(RM)
    I_T = alg.basic_injective(T, Window(0, 12), name="I_T")
    rep = gr.shift_law_check(RM, I_T, dd=dd)
    assert rep.passed and rep.expected_shift == 2 and rep.computed_shift == 2
    rng = random.Random(21)
    for _ in range(4):
        N = sm.random_zero_diff_module(T, rng)
        assert gr.shift_law_check(RM, N, dd=dd).passed


def test_shift_law_identity_and_diagonal():
    assert gr.shift_law_check(MAPS["id-T"], alg.residue_field(T)).passed
    rep = gr.shift_law_check(MAPS["T<T^2-diag"], sm.cyclic_quotient(T, [2]))
    assert rep.passed and rep.expected_shift == 1


def test_adjunction_identity_trivial():
    k = alg.residue_field(T)
    assert gr.adjunction_check(MAPS["id-T"], k, k).passed


def test_adjunction_t_in_su2():
    kS = alg.residue_field(S)
    kT = alg.residue_field(T)
    rep = gr.adjunction_check(RM, kS, kT)
    assert rep.passed
    assert rep.extension_pair[0] == (1, 1)


def test_adjunction_random_instances():
    rng = random.Random(33)
    for _ in range(3):
        M = sm.random_zero_diff_module(S, rng, max_power=2, max_shift=1)
        N = sm.random_zero_diff_module(T, rng, max_power=2, max_shift=1)
        assert gr.adjunction_check(RM, M, N).passed


def test_adjunction_zero_modules():
    rep = gr.adjunction_check(RM, alg.zero_module(S), alg.zero_module(T))
    assert rep.passed
    assert all(v == (0, 0) for v in rep.extension_pair.values())
