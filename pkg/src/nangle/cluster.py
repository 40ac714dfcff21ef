"""4-angles from a 2-cluster-tilting subcategory, and the octahedron for them.

The ambient triangulated category T is the graded model with Σ the unit
degree shift.  Its 2-cluster-tilting subcategory C consists of the objects
supported in even degrees; it is stable under Σ̂ = Σ².  A 4-angle of C is
spliced from two triangles of T

    Δ2: A1 -α1-> A2 -f-> X -∂2-> ΣA1,    Δ1: X -g-> A3 -α3-> A4 -∂1-> ΣX,

giving ``A1 -α1-> A2 -g∘f-> A3 -α3-> A4 -Σ∂2∘∂1-> Σ̂A1``.

:func:`n4star_steps` produces φ3, φ4, ψ1, ψ2, ψ3 for three such 4-angles
using only triangle-level constructions in T: cone completions, the 3×3
lemma and the octahedral axiom.  Each of these is realised as a linear
system in the unknown maps followed by a seeded search for a member whose
new triangle is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine as E
from . import graded as G
from . import sequences as S
from .errors import BudgetExceeded, ConstructionError
from .graded import GradedMap, GradedObject
from .linalg import field
from .rng import as_generator
from .sequences import NSeq
from .solver import MapSystem, Term

SHIFT_HAT = 2

Triangle = NSeq  # a 3-Σ-sequence with shift 1


def triangle(f: GradedMap, g: GradedMap, h: GradedMap) -> Triangle:
    return NSeq([f.source, g.source, h.source], [f, g, h], f.p, 1)


def in_C(x: GradedObject) -> bool:
    """Objects supported in even degrees only."""
    return all(d % 2 == 0 for d in x.support)


def even_part(x: GradedObject) -> GradedObject:
    return GradedObject({d: k for d, k in x.dims.items() if d % 2 == 0})


def cone_T(f: GradedMap) -> Triangle:
    """``X -f-> Y -> coker f ⊕ Σ ker f -> ΣX`` with canonical splittings."""
    p = f.p
    fld = field(p)
    x, y = f.source, f.target
    proj, coker_dims, incl, ker_dims = {}, {}, {}, {}
    for d in set(x.support) | set(y.support):
        m = f.block(d)
        if y.dim(d):
            im = fld.image_basis(m)
            comp = fld.complement_basis(im)
            if comp.shape[1]:
                basis = fld.matrix(np.concatenate([im, comp], axis=1))
                inv = fld.inverse(basis)
                proj[d] = inv[im.shape[1]:, :]
                coker_dims[d] = comp.shape[1]
        if x.dim(d):
            k = fld.kernel_basis(m)
            if k.shape[1]:
                incl[d + 1] = k
                ker_dims[d + 1] = k.shape[1]
    coker, sker = GradedObject(coker_dims), GradedObject(ker_dims)
    sx = G.shift_object(x, 1)
    pi = GradedMap(y, coker, proj, p)
    iota = GradedMap(sker, sx, incl, p)
    z = [coker, sker]
    g = G.block_map([[pi], [None]], [y], z, p)
    h = G.block_map([[None, iota]], z, [sx], p)
    return triangle(f, g, h)


def _search(ms: MapSystem, accept, rng, budget: int, step: str, what: str):
    space = ms.space()
    if space is None:
        raise ConstructionError(step, f"{what}: linear constraints inconsistent")
    try:
        sol = space.search(accept, rng, budget)
    except BudgetExceeded as exc:
        raise ConstructionError(step, f"{what}: {exc}") from exc
    if sol is None:
        raise ConstructionError(step, f"{what}: no solution makes the new triangle exact")
    return sol


# -- octahedral axiom in T -------------------------------------------------


@dataclass
class Octahedron:
    cone_f: Triangle
    cone_g: Triangle
    cone_gf: Triangle
    u: GradedMap  # cone(f) -> cone(gf)
    v: GradedMap  # cone(gf) -> cone(g)
    third: Triangle  # cone(f) -u-> cone(gf) -v-> cone(g) -> Σ cone(f)


def octahedron_T(f: GradedMap, g: GradedMap, rng=None, budget: int = 300) -> Octahedron:
    """Octahedron for composable ``X -f-> Y -g-> Z`` with all cones from :func:`cone_T`.

    Solves ``u i_f = i_gf g``, ``h_gf u = h_f``, ``v i_gf = i_g``,
    ``Σf h_gf = h_g v`` and the zero composites of the new triangle, then
    searches the solutions for one whose triangle is exact.
    """
    p = f.p
    rng = as_generator(rng)
    cf, cg, cgf = cone_T(f), cone_T(g), cone_T(G.compose(g, f))
    i_f, h_f = cf.maps[1], cf.maps[2]
    i_g, h_g = cg.maps[1], cg.maps[2]
    i_gf, h_gf = cgf.maps[1], cgf.maps[2]
    Cf, Cg, Cgf = cf.objects[2], cg.objects[2], cgf.objects[2]
    last = G.compose(G.shift_map(i_f, 1), h_g)
    ms = MapSystem(p)
    ms.unknown("u", Cf, Cgf)
    ms.unknown("v", Cgf, Cg)
    ms.equation([Term("u", right=i_f)], G.compose(i_gf, g))
    ms.equation([Term("u", left=h_gf)], h_f)
    ms.equation([Term("v", right=i_gf)], i_g)
    ms.equation([Term("v", left=h_g)], G.compose(G.shift_map(f, 1), h_gf))
    found = {}

    def accept(sol):
        tri = triangle(sol["u"], sol["v"], last)
        if S.is_exact(tri):
            found["t"] = tri
            return True
        return False

    sol = _search(ms, accept, rng, budget, "octahedron_T", "third triangle")
    return Octahedron(cf, cg, cgf, sol["u"], sol["v"], found["t"])


# -- 3×3 lemma ---------------------------------------------------------------


@dataclass
class GridData:
    """Completion of a 3×3 diagram whose first column is an identity.

    ``row`` is ``A -x-> P -y-> Q -z-> ΣA`` and ``column`` is
    ``K -k-> P -c-> P' -c'-> ΣK``.  The third row is ``cone_T(c∘x)`` with
    maps ``w_row: P' -> W`` and ``w4: W -> ΣA``; the third column is
    ``K -y∘k-> Q -w3-> W -w5-> ΣK``.
    """

    W: GradedObject
    w_row: GradedMap
    w4: GradedMap
    w3: GradedMap
    w5: GradedMap
    row3: Triangle
    column3: Triangle


def three_by_three(row: Triangle, column: Triangle, rng=None, budget: int = 300) -> GridData:
    p = row.p
    rng = as_generator(rng)
    x, y, z = row.maps
    k, c, c2 = column.maps
    if column.objects[1] != row.objects[1]:
        raise ValueError("row and column must share their middle object")
    for name, tri in (("row", row), ("column", column)):
        if not S.is_exact(tri):
            raise ConstructionError("three_by_three", f"{name} is not a triangle")
    row3 = cone_T(G.compose(c, x))
    w_row, w4 = row3.maps[1], row3.maps[2]
    W = row3.objects[2]
    K, Q = column.objects[0], row.objects[2]
    SK = G.shift_object(K, 1)
    yk = G.compose(y, k)
    ms = MapSystem(p)
    ms.unknown("w3", Q, W)
    ms.unknown("w5", W, SK)
    ms.equation([Term("w3", right=y)], G.compose(w_row, c))
    ms.equation([Term("w3", left=w4)], z)
    ms.equation([Term("w5", right=w_row)], c2)
    ms.equation([Term("w3", right=yk)], G.zero_map(K, W, p))
    ms.equation([Term("w5", left=G.shift_map(yk, 1))], G.zero_map(W, G.shift_object(Q, 1), p))
    found = {}

    def accept(sol):
        col = triangle(yk, sol["w3"], sol["w5"])
        if S.is_exact(col):
            found["c"] = col
            return True
        return False

    # w5 ∘ w3 = 0 is bilinear; exactness of the column enforces it
    sol = _search(ms, accept, rng, budget, "three_by_three", "third column")
    return GridData(W, w_row, w4, sol["w3"], sol["w5"], row3, found["c"])


@dataclass
class StepOctahedron:
    """Maps ``m6: W -> B`` and ``m7: ΣK -> B'`` completing the step octahedron."""

    m6: GradedMap
    m7: GradedMap
    column: Triangle


def step_octahedron(first: Triangle, second: Triangle, rng=None, budget: int = 300) -> StepOctahedron:
    """Octahedron attached to ``K -k-> Q -w3-> W -w5-> ΣK`` and ``Q -g-> B -b-> B' -d-> ΣQ``.

    Finds ``m6, m7`` with ``m6 w3 = g``, ``m7 w5 + b m6 = 0``, ``d m7 = Σk``
    such that ``W -[w5; m6]-> ΣK ⊕ B -[m7 b]-> B' -Σw3∘d-> ΣW`` is a triangle.
    """
    p = first.p
    rng = as_generator(rng)
    k, w3, w5 = first.maps
    g, b, d = second.maps
    if first.objects[1] != second.objects[0]:
        raise ValueError("the two triangles must share the object Q")
    W, SK = first.objects[2], G.shift_object(first.objects[0], 1)
    B, B2 = second.objects[1], second.objects[2]
    ms = MapSystem(p)
    ms.unknown("m6", W, B)
    ms.unknown("m7", SK, B2)
    ms.equation([Term("m6", right=w3)], g)
    ms.equation([Term("m7", right=w5), Term("m6", left=b)], G.zero_map(W, B2, p))
    ms.equation([Term("m7", left=d)], G.shift_map(k, 1))
    last = G.compose(G.shift_map(w3, 1), d)
    found = {}

    def accept(sol):
        col = triangle(G.block_map([[w5], [sol["m6"]]], [W], [SK, B], p),
                       G.block_map([[sol["m7"], b]], [SK, B], [B2], p), last)
        if S.is_exact(col):
            found["c"] = col
            return True
        return False

    sol = _search(ms, accept, rng, budget, "octahedron", "third column")
    return StepOctahedron(sol["m6"], sol["m7"], found["c"])


# -- splicing ------------------------------------------------------------------


@dataclass
class Splice4:
    """A 4-angle of C together with the two triangles it is spliced from."""

    d2: Triangle  # A1 -α1-> A2 -f-> X -∂2-> ΣA1
    d1: Triangle  # X -g-> A3 -α3-> A4 -∂1-> ΣX

    @property
    def f(self) -> GradedMap:
        return self.d2.maps[1]

    @property
    def g(self) -> GradedMap:
        return self.d1.maps[0]

    @property
    def partial2(self) -> GradedMap:
        return self.d2.maps[2]

    @property
    def partial1(self) -> GradedMap:
        return self.d1.maps[2]

    @property
    def X(self) -> GradedObject:
        return self.d2.objects[2]

    @property
    def angle(self) -> NSeq:
        a1, a2 = self.d2.objects[0], self.d2.objects[1]
        a3, a4 = self.d1.objects[1], self.d1.objects[2]
        alpha4 = G.compose(G.shift_map(self.partial2, 1), self.partial1)
        maps = [self.d2.maps[0], G.compose(self.g, self.f), self.d1.maps[1], alpha4]
        return NSeq([a1, a2, a3, a4], maps, self.d2.p, SHIFT_HAT)


def splice_4angle(d1: Triangle, d2: Triangle) -> Splice4:
    if d1.n != 3 or d2.n != 3 or d1.shift != 1 or d2.shift != 1:
        raise ValueError("splicing needs two triangles")
    if d2.objects[2] != d1.objects[0]:
        raise ValueError("third object of Δ2 must be the first object of Δ1")
    ends = [d2.objects[0], d2.objects[1], d1.objects[1], d1.objects[2]]
    if not all(in_C(x) for x in ends):
        raise ValueError("the four objects of a 4-angle must lie in C")
    return Splice4(d2, d1)


def _twist(tri: Triangle, pos: int, rng) -> Triangle:
    isos = [G.identity(x, tri.p) for x in tri.objects]
    isos[pos] = G.random_iso(tri.objects[pos], rng, tri.p)
    return S.conjugate(tri, isos)[0]


def random_splice(alpha1: GradedMap, rng, max_dim: int = 2, degrees: tuple[int, int] = (-2, 2),
                  twist: bool = True) -> Splice4:
    """Random 4-angle of C whose first map is ``alpha1``.

    Δ2 is the cone of α1.  The map g sends the even part of X injectively
    into A3 (its odd part must die since A3 is even), which keeps the cone
    A4 of g inside C.
    """
    p = alpha1.p
    rng = as_generator(rng)
    d2 = cone_T(alpha1)
    if twist:
        d2 = _twist(d2, 2, rng)
    x = d2.objects[2]
    xe = even_part(x)
    evens = [d for d in range(degrees[0], degrees[1] + 1) if d % 2 == 0]
    extra = G.random_object(rng, max_dim, evens, density=0.4)
    a3 = G.direct_sum(xe, extra)
    g = G.block_map([[GradedMap(x, xe, {d: field(p).eye(k) for d, k in xe.dims.items()}, p)], [None]],
                    [x], [xe, extra], p)
    if twist:
        g = G.compose(G.random_iso(a3, rng, p), g)
    d1 = cone_T(g)
    if twist:
        d1 = _twist(d1, 2, rng)
    return splice_4angle(d1, d2)


def random_splice_triple(rng, p: int = 5, max_dim: int = 2, degrees: tuple[int, int] = (-2, 2)):
    """Three spliced 4-angles forming an input diagram for the octahedron."""
    rng = as_generator(rng)
    evens = [d for d in range(degrees[0], degrees[1] + 1) if d % 2 == 0]
    a1 = G.random_object(rng, max_dim, evens)
    a2 = G.random_object(rng, max_dim, evens)
    b2 = G.random_object(rng, max_dim, evens)
    alpha1 = G.random_map(a1, a2, rng, p)
    phi2 = G.random_map(a2, b2, rng, p)
    a = random_splice(alpha1, rng, max_dim, degrees)
    b = random_splice(G.compose(phi2, alpha1), rng, max_dim, degrees)
    c = random_splice(phi2, rng, max_dim, degrees)
    return a, b, c, phi2


# -- the six steps ---------------------------------------------------------------


def _check(step: str, what: str, lhs: GradedMap, rhs: GradedMap, witness: dict) -> None:
    if lhs != rhs:
        raise ConstructionError(step, what, dict(witness, lhs=lhs, rhs=rhs))


def _check_exact(step: str, what: str, seq: NSeq, witness: dict) -> None:
    defect = S.exactness_defect(seq)
    if defect is not None:
        raise ConstructionError(step, f"{what} not exact at position {defect[0] + 1}, degree {defect[1]}",
                                dict(witness, sequence=seq))


def n4star_steps(a: Splice4, b: Splice4, c: Splice4, phi2: GradedMap, rng=None,
                 budget: int = 300) -> E.OctaData:
    """Higher octahedron for spliced 4-angles, built triangle by triangle in T."""
    p = phi2.p
    rng = as_generator(rng)
    A, B, Cq = a.angle, b.angle, c.angle
    al, be, ga = A.maps, B.maps, Cq.maps
    if A.objects[0] != B.objects[0]:
        raise ValueError("first two 4-angles must start at the same object")
    if Cq.maps[0] != phi2 or Cq.objects[0] != A.objects[1] or Cq.objects[1] != B.objects[1]:
        raise ValueError("third 4-angle must start with φ2")
    _check("input", "β1 = φ2 α1", be[0], G.compose(phi2, al[0]), {})
    for name, s in (("a", A), ("b", B), ("c", Cq)):
        _check_exact("input", f"4-angle {name}", s, {})
    a1, a2, a3, a4 = A.objects
    b1, b2, b3, b4 = B.objects
    X, Y, Z = a.X, b.X, c.X
    f, g, d1, d2 = a.f, a.g, a.partial1, a.partial2
    f1, g1, e1, e2 = b.f, b.g, b.partial1, b.partial2
    f2, g2, c1, c2 = c.f, c.g, c.partial1, c.partial2
    data: dict = {}

    # Step 1: φ: X -> Y with a triangle as cone, and its reduced triangle
    try:
        m, _ = E.cone_completion(a.d2, b.d2, G.identity(a1, p), phi2, rng=rng)
    except ConstructionError as exc:
        raise ConstructionError("step 1", exc.equation, exc.witness) from exc
    phi = m.components[2]
    data["phi"] = phi
    row2 = E.reduced_cone(m, check=False)  # A2 -[-f;φ2]-> X⊕B2 -[φ f']-> Y -Σα1∂'2-> ΣA2
    _check_exact("step 1", "reduced triangle", row2, {"phi": phi})

    # Step 2: 3×3 grid with column Σ^{-1}A4 -> X⊕B2 -> A3⊕B2 -> A4
    sa4 = G.shift_object(a4, -1)
    col2 = triangle(G.block_map([[-G.shift_map(d1, -1)], [None]], [sa4], [X, b2], p),
                    G.block_map([[g, None], [None, 1]], [X, b2], [a3, b2], p),
                    G.block_map([[al[2], None]], [a3, b2], [a4], p))
    _check_exact("step 2", "second column", col2, {})
    grid = three_by_three(row2, col2, rng, budget)
    w1, w2 = (G.compose(grid.w_row, G.inclusion([a3, b2], i, p)) for i in range(2))
    w3, w4, w5, W = grid.w3, grid.w4, grid.w5, grid.W
    _check("step 2", "w3 φ = w1 g", G.compose(w3, phi), G.compose(w1, g), {})
    _check("step 2", "w3 f' = w2", G.compose(w3, f1), w2, {})
    _check("step 2", "w4 w3 = Σα1 ∂'2", G.compose(w4, w3), G.compose(G.shift_map(al[0], 1), e2), {})
    _check("step 2", "w5 w1 = α3", G.compose(w5, w1), al[2], {})
    _check("step 2", "w5 w2 = 0", G.compose(w5, w2), G.zero_map(b2, a4, p), {})
    oct2 = step_octahedron(grid.column3, b.d1, rng, budget)
    w6, w7 = oct2.m6, oct2.m7
    _check("step 2", "∂'1 w7 = -Σφ ∂1", G.compose(e1, w7), -G.compose(G.shift_map(phi, 1), d1), {})
    data.update(W=W, w1=w1, w2=w2, w3=w3, w4=w4, w5=w5, w6=w6, w7=w7)

    # Step 3
    phi3 = G.compose(w6, w1)
    phi4 = -w7
    _check("step 3", "φ3 α2 = β2 φ2", G.compose(phi3, al[1]), G.compose(be[1], phi2), {})
    _check("step 3", "φ4 α3 = β3 φ3", G.compose(phi4, al[2]), G.compose(be[2], phi3), {})
    _check("step 3", "α4 = β4 φ4", al[3], G.compose(be[3], phi4), {})
    morphism = S.SeqMorphism(A, B, (G.identity(a1, p), phi2, phi3, phi4))

    # Step 4: ψ: W -> Z completing the third row against Δ''2
    row3 = grid.row3
    proj = G.block_map([[None, 1]], [a3, b2], [b2], p)
    try:
        m4, _ = E.cone_completion(row3, c.d2, G.identity(a2, p), proj, rng=rng)
    except ConstructionError as exc:
        raise ConstructionError("step 4", exc.equation, exc.witness) from exc
    psi = m4.components[2]
    summand = triangle(-w1, psi, -G.compose(G.shift_map(al[1], 1), c2))
    _check_exact("step 4", "summand triangle", summand, {"psi": psi})
    data["psi"] = psi

    # Step 5: 3×3 grid with row A3 -w1-> W -ψ-> Z and column Σ^{-1}B4 -> W -> A4⊕B3 -> B4
    row5 = triangle(w1, psi, G.compose(G.shift_map(al[1], 1), c2))
    _check_exact("step 5", "second row", row5, {})
    sb4 = G.shift_object(b4, -1)
    col5 = triangle(G.compose(w3, G.shift_map(e1, -1)),
                    G.block_map([[w5], [w6]], [W], [a4, b3], p),
                    G.block_map([[phi4, -be[2]]], [a4, b3], [b4], p))
    _check_exact("step 5", "second column", col5, {})
    grid5 = three_by_three(row5, col5, rng, budget)
    u1, u2 = (G.compose(grid5.w_row, G.inclusion([a4, b3], i, p)) for i in range(2))
    u3, u4, u5, U = grid5.w3, grid5.w4, grid5.w5, grid5.W
    _check("step 5", "u3 ψ = u1 w5 + u2 w6", G.compose(u3, psi), G.compose(u1, w5) + G.compose(u2, w6), {})
    _check("step 5", "u4 u3 = Σα2 ∂''2", G.compose(u4, u3), G.compose(G.shift_map(al[1], 1), c2), {})
    _check("step 5", "u5 u1 = φ4", G.compose(u5, u1), phi4, {})
    _check("step 5", "u5 u2 = -β3", G.compose(u5, u2), -be[2], {})
    oct5 = step_octahedron(grid5.column3, c.d1, rng, budget)
    u6, u7 = oct5.m6, oct5.m7
    _check("step 5", "∂''1 u7 = Σψ Σw3 ∂'1", G.compose(c1, u7),
           G.compose_all(G.shift_map(psi, 1), G.shift_map(w3, 1), e1), {})
    data.update(U=U, u1=u1, u2=u2, u3=u3, u4=u4, u5=u5, u6=u6, u7=u7)

    # Step 6
    psi1, psi2, psi3 = G.compose(u6, u2), G.compose(u6, u1), u7
    c3, c4 = Cq.objects[2], Cq.objects[3]
    gamma = NSeq(
        [a3, G.direct_sum(a4, b3), G.direct_sum(b4, c3), c4],
        [G.block_map([[al[2]], [phi3]], [a3], [a4, b3], p),
         G.block_map([[phi4, -be[2]], [psi2, psi1]], [a4, b3], [b4, c3], p),
         G.block_map([[psi3, ga[2]]], [b4, c3], [c4], p),
         G.compose(G.shift_map(al[1], SHIFT_HAT), ga[3])],
        p, SHIFT_HAT)
    _check_exact("step 6", "Γ", gamma, {})
    _check("step 6", "γ4 ψ3 = Σ̂α1 β4", G.compose(ga[3], psi3), G.compose(G.shift_map(al[0], SHIFT_HAT), be[3]), {})
    # the spliced form of Γ: Δ'''2 and Δ'''1 are triangles in T
    _check_exact("step 6", "Δ'''2", triangle(G.block_map([[al[2]], [phi3]], [a3], [a4, b3], p),
                                             grid5.w_row, u4), {})
    _check_exact("step 6", "Δ'''1", oct5.column, {})
    return E.OctaData([phi3, phi4], [psi1, psi2, psi3], gamma, morphism, None,
                      {"steps": data, "grid2": grid, "grid5": grid5})
