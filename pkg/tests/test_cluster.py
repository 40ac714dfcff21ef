from __future__ import annotations

import pytest

from nangle import cluster as C
from nangle import engine as E
from nangle import graded as G
from nangle import sequences as S
from nangle.graded import GradedObject
from nangle.rng import generator

from conftest import oracle_exact

X = GradedObject({0: 2, 1: 1})
Y = GradedObject({0: 1, 1: 2, 2: 1})


def test_cone_of_identity_is_zero():
    t = C.cone_T(G.identity(X))
    assert t.objects[2].is_zero() and S.is_exact(t)


def test_cone_of_zero_map():
    t = C.cone_T(G.zero_map(X, Y))
    assert t.objects[2] == G.direct_sum(Y, G.shift_object(X, 1))
    assert S.is_exact(t)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cone_of_random_maps(p):
    for t in range(40):
        rng = generator(20, "cone", t)
        x = G.random_object(rng, 3, range(-2, 3))
        y = G.random_object(rng, 3, range(-2, 3))
        f = G.random_map(x, y, rng, p)
        tri = C.cone_T(f)
        assert tri.maps[0] == f and oracle_exact(tri)


def test_in_c():
    assert C.in_C(G.ZERO)
    assert not C.in_C(GradedObject({1: 1}))
    rng = generator(21)
    for _ in range(20):
        x = G.random_object(rng, 3, [-2, 0, 2])
        c = G.random_object(rng, 3, [-2, 0, 2, 4])
        assert C.in_C(x) and C.in_C(G.shift_object(x, C.SHIFT_HAT))
        assert G.hom_dim(x, G.shift_object(c, 1)) == 0


def test_octahedron_degenerate_cases():
    g = G.identity(Y)
    f = G.random_map(X, Y, generator(3), 5)
    o = C.octahedron_T(f, g)
    assert o.cone_g.objects[2].is_zero() and S.is_exact(o.third)
    o2 = C.octahedron_T(G.zero_map(X, Y), G.random_map(Y, X, generator(4), 5))
    assert o2.cone_gf.objects[2] == G.direct_sum(X, G.shift_object(X, 1))
    assert S.is_exact(o2.third)


def test_octahedron_seeded_pairs():
    for t in range(30):
        rng = generator(22, "oct", t)
        x, y, z = (G.random_object(rng, 2, range(-1, 2)) for _ in range(3))
        f, g = G.random_map(x, y, rng, 5), G.random_map(y, z, rng, 5)
        o = C.octahedron_T(f, g, rng=rng)
        i_f, i_gf = o.cone_f.maps[1], o.cone_gf.maps[1]
        assert G.compose(o.u, i_f) == G.compose(i_gf, g)
        assert G.compose(o.v, i_gf) == o.cone_g.maps[1]
        assert oracle_exact(o.third)


def test_three_by_three_identity_square():
    a = GradedObject({0: 1})
    row = C.cone_T(G.identity(a))
    column = C.triangle(G.zero_map(G.ZERO, a), G.identity(a), G.zero_map(a, G.ZERO))
    grid = C.three_by_three(row, column)
    assert grid.W.is_zero()
    assert S.is_exact(grid.row3) and S.is_exact(grid.column3)


def test_three_by_three_zero_edge():
    # column with zero middle map: the grid degenerates but all new triangles are exact
    a = GradedObject({0: 1})
    p_obj = GradedObject({0: 2})
    x = G.random_map(a, p_obj, generator(5), 5)
    row = C.cone_T(x)
    column = C.cone_T(G.zero_map(a, p_obj))
    grid = C.three_by_three(row, column)
    assert S.is_exact(grid.row3) and S.is_exact(grid.column3)


def test_trivial_splice():
    a = GradedObject({0: 1, 2: 1})
    d2 = C.cone_T(G.identity(a))
    d1 = C.cone_T(G.zero_map(G.ZERO, a))
    sp = C.splice_4angle(d1, d2)
    assert sp.angle.n == 4 and sp.angle.shift == 2 and S.is_exact(sp.angle)
    assert sp.angle.maps[3].is_zero()


def test_splice_rejects_odd_endpoints():
    odd = GradedObject({1: 1})
    with pytest.raises(ValueError):
        C.splice_4angle(C.cone_T(G.zero_map(G.ZERO, odd)), C.cone_T(G.identity(G.ZERO)))


@pytest.mark.parametrize("p", [2, 5])
def test_random_splices(p):
    for t in range(30):
        rng = generator(23, f"sp{p}", t)
        a1 = G.random_object(rng, 3, [-2, 0, 2])
        a2 = G.random_object(rng, 3, [-2, 0, 2])
        sp = C.random_splice(G.random_map(a1, a2, rng, p), rng)
        ang = sp.angle
        assert all(C.in_C(x) for x in ang.objects)
        assert ang.maps[1] == G.compose(sp.g, sp.f)
        assert ang.maps[3] == G.compose(G.shift_map(sp.partial2, 1), sp.partial1)
        assert oracle_exact(ang) and S.is_exact(sp.d1) and S.is_exact(sp.d2)


def test_steps_on_trivial_inputs():
    a = GradedObject({0: 1})
    one = G.identity(a)
    tri = C.cone_T(one)
    z = C.cone_T(G.zero_map(G.ZERO, G.ZERO))
    sp = C.splice_4angle(z, tri)
    octa = C.n4star_steps(sp, sp, sp, one)
    assert all(psi.is_zero() for psi in octa.psis)
    assert S.is_exact(octa.gamma_seq)


def test_steps_cross_check_with_engine():
    for t in range(20):
        rng = generator(24, "steps", t)
        a, b, c, phi2 = C.random_splice_triple(rng, 5)
        octa = C.n4star_steps(a, b, c, phi2, rng=rng)
        ref = E.higher_octahedron(a.angle, b.angle, c.angle, phi2, rng=rng)
        assert S.is_morphism(octa.morphism)
        assert oracle_exact(octa.gamma_seq)
        assert S.are_isomorphic(octa.gamma_seq, ref.gamma_seq)
        steps = octa.extras["steps"]
        assert G.compose(b.partial1, steps["w7"]) == -G.compose(G.shift_map(steps["phi"], 1), a.partial1)
