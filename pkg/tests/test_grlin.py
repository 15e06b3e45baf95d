import random
from fractions import Fraction as F

import pytest

from koszuldg.grlin import (
    CompositionNotZero,
    GradedMap,
    GradedVS,
    LinearSystem,
    Subspace,
    Window,
    homology_at,
    kernel_basis,
    mat_mul,
    rank,
    rref,
    solve,
)


def M(rows):
    return [[F(x) for x in row] for row in rows]


def test_rank_identity():
    assert rank(M([[1, 0], [0, 1]])) == 2


def test_rank_zero_matrix():
    assert rank(M([[0, 0, 0, 0]] * 3)) == 0


def test_rank_dependent_rows():
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_rank_fractions():
    # det of [[1/2, 1/3], [3/2, 1]] vanishes; bump one entry for full rank
    assert rank(M([[F(1, 2), F(1, 3)], [F(3, 2), F(1)]])) == 1
    assert rank(M([[F(1, 2), F(1, 3)], [F(3, 2), F(2)]])) == 2


def test_kernel_identity_empty():
    assert kernel_basis(M([[1, 0], [0, 1]])) == []


def test_kernel_zero_standard_basis():
    assert kernel_basis(M([[0, 0], [0, 0]])) == [[F(1), F(0)], [F(0), F(1)]]


def test_kernel_single_relation():
    assert kernel_basis(M([[1, 1]])) == [[F(1), F(-1)]]


def test_rank_nullity_random():
    rng = random.Random(1)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        m = [[F(rng.randint(-3, 3)) for _ in range(cols)] for _ in range(rows)]
        assert rank(m) + len(kernel_basis(m)) == cols


def test_solve_consistent_and_not():
    a = M([[1, 2], [2, 4]])
    assert solve(a, [F(1), F(2)]) is not None
    assert solve(a, [F(1), F(3)]) is None


def test_solve_free_vars_zero():
    sol = solve(M([[1, 1]]), [F(2)])
    assert sol == [F(2), F(0)]


def test_subspace_membership_and_complement():
    s = Subspace(3, [[F(1), F(0), F(1)]])
    assert s.contains([F(2), F(0), F(2)])
    assert not s.contains([F(1), F(1), F(0)])
    ext = s.complement_in([[F(1), F(0), F(1)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]])
    assert len(ext) == 2


def _three_term(dims, d1, d2):
    vs = GradedVS(dims)
    maps = {}
    if d1 is not None:
        maps[1] = d1
    out = GradedMap(vs, vs, -1, {})
    into = GradedMap(vs, vs, -1, {1: d1} if d1 else {})
    outof = GradedMap(vs, vs, -1, {0: d2} if d2 else {})
    return into, outof


def test_homology_at_zero_maps():
    vs = GradedVS({-1: 3, 0: 3, 1: 3})
    zero = GradedMap(vs, vs, -1, {})
    piece = homology_at(zero, zero, 0)
    assert piece.dim == 3


def test_homology_at_acyclic():
    vs = GradedVS({0: 1, 1: 1})
    d = GradedMap(vs, vs, -1, {1: M([[1]])})
    piece = homology_at(d, d, 0)
    assert piece.dim == 0
    piece = homology_at(d, d, 1)
    assert piece.dim == 0


def test_homology_at_composition_check():
    vs = GradedVS({0: 1, 1: 1, 2: 1})
    d = GradedMap(vs, vs, -1, {1: M([[1]]), 2: M([[1]])})
    with pytest.raises(CompositionNotZero):
        homology_at(d, d, 1)


def test_homology_conjugation_invariance():
    # change of basis in the middle degree does not change the dimension
    rng = random.Random(5)
    for _ in range(20):
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        d2 = [[F(rng.randint(-2, 2)) for _ in range(c)] for _ in range(b)]
        # build d1 into the kernel of d2 so the composite vanishes
        ker = kernel_basis(d2)
        d1 = [[F(0)] * a for _ in range(c)]
        for j in range(a):
            if ker:
                v = ker[rng.randrange(len(ker))]
                scale = rng.randint(-2, 2)
                for i in range(c):
                    d1[i][j] = v[i] * scale
        vs = GradedVS({0: b, 1: c, 2: a})
        din = GradedMap(vs, vs, -1, {2: d1})
        dout = GradedMap(vs, vs, -1, {1: d2})
        base = homology_at(din, dout, 1).dim
        # conjugate the middle degree
        while True:
            p = [[F(rng.randint(-2, 2)) for _ in range(c)] for _ in range(c)]
            if rank(p) == c:
                break
        from koszuldg.samples import mat_inverse
        pinv = mat_inverse(p)
        din2 = GradedMap(vs, vs, -1, {2: mat_mul(p, d1)})
        dout2 = GradedMap(vs, vs, -1, {1: mat_mul(d2, pinv)})
        assert homology_at(din2, dout2, 1).dim == base


def test_window_validation():
    w = Window(-3, 5)
    assert w.guaranteed_lo == -3 and w.guaranteed_hi == 5
    with pytest.raises(ValueError):
        Window(2, 1)
    with pytest.raises(ValueError):
        Window(0, 4, -1, 2)


def test_linear_system_roundtrip():
    sys = LinearSystem()
    sys.add_equation({"a": 1, "b": 1}, rhs=3)
    sys.add_equation({"a": 1, "b": -1}, rhs=1)
    sol = sys.solve()
    assert sol == {"a": F(2), "b": F(1)}


def test_linear_system_kernel_deterministic():
    sys = LinearSystem()
    sys.var("x")
    sys.var("y")
    sys.var("z")
    sys.add_equation({"x": 1, "y": 1, "z": 1})
    k1 = sys.kernel()
    sys2 = LinearSystem()
    sys2.var("x")
    sys2.var("y")
    sys2.var("z")
    sys2.add_equation({"x": 1, "y": 1, "z": 1})
    assert k1 == sys2.kernel()
    assert len(k1) == 2


def test_rref_canonical():
    red, piv = rref(M([[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1]
    assert red == M([[1, 0, -1], [0, 1, 2]])


def test_determinism_bit_for_bit():
    rng = random.Random(9)
    mats = [[[F(rng.randint(-4, 4)) for _ in range(4)] for _ in range(3)]
            for _ in range(10)]
    first = [(rank(m), kernel_basis(m)) for m in mats]
    second = [(rank(m), kernel_basis(m)) for m in mats]
    assert first == second
