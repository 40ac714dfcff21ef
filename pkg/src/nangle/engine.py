"""Constructive axioms: completions, cones and the higher octahedron.

All completions are found by solving one joint linear system for the
missing components and taking the canonical solution.  Every construction
re-checks its advertised postconditions and raises
:class:`~nangle.errors.ConstructionError` naming the failed step.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import graded as G
from . import sequences as S
from .errors import BudgetExceeded, ConstructionError, NotExactError, NotMorphismError
from .graded import GradedMap, GradedObject
from .rng import as_generator
from .sequences import NSeq, SeqMorphism, sign
from .solver import MapSystem, Term

ZERO = G.ZERO


def _require_exact(s: NSeq, label: str) -> None:
    defect = S.exactness_defect(s)
    if defect is not None:
        raise NotExactError(f"{label} is not exact", *defect)


def _require_first_square(s: NSeq, t: NSeq, phi1: GradedMap, phi2: GradedMap) -> None:
    if phi1.source != s.objects[0] or phi1.target != t.objects[0]:
        raise ValueError("phi1 has the wrong source or target")
    if phi2.source != s.objects[1] or phi2.target != t.objects[1]:
        raise ValueError("phi2 has the wrong source or target")
    if G.compose(phi2, s.maps[0]) != G.compose(t.maps[0], phi1):
        raise NotMorphismError("first square does not commute", 0)


def completion_system(s: NSeq, t: NSeq, fixed: dict[int, GradedMap]) -> MapSystem:
    """Commutation constraints for a morphism ``s -> t`` with some components fixed.

    Unknowns are the components (0-based index) not in ``fixed``; the
    equation for square ``i`` is ``φ_{i+1} α_i - β_i φ_i = 0`` with
    ``φ_{n+1} = Σφ_1``.
    """
    n, p = s.n, s.p
    ms = MapSystem(p)
    for i in range(n):
        if i not in fixed:
            ms.unknown(i, s.objects[i], t.objects[i])
    for i in range(n):
        j, k = (i + 1) % n, s.shift if i + 1 == n else 0
        src, tgt = s.objects[i], (t.objects[i + 1] if i + 1 < n else t.sigma(t.objects[0]))
        rhs = G.zero_map(src, tgt, p)
        terms = []
        if j in fixed:
            rhs = rhs - G.compose(G.shift_map(fixed[j], k), s.maps[i])
        else:
            terms.append(Term(j, right=s.maps[i], shift=k))
        if i in fixed:
            rhs = rhs + G.compose(t.maps[i], fixed[i])
        else:
            terms.append(Term(i, left=t.maps[i], coeff=-1))
        if not terms:
            if not rhs.is_zero():
                raise NotMorphismError("fixed components do not commute", i)
            continue
        ms.equation(terms, rhs)
    return ms


def _morphism_from(s: NSeq, t: NSeq, fixed: dict, sol: dict) -> SeqMorphism:
    return SeqMorphism(s, t, tuple(fixed[i] if i in fixed else sol[i] for i in range(s.n)))


def complete_to_morphism(s: NSeq, t: NSeq, phi1: GradedMap, phi2: GradedMap,
                         check_exact: bool = True) -> SeqMorphism:
    """Canonical completion of ``(φ_1, φ_2)`` to a morphism of sequences."""
    if check_exact:
        _require_exact(s, "source")
        _require_exact(t, "target")
    _require_first_square(s, t, phi1, phi2)
    fixed = {0: phi1, 1: phi2}
    sol = completion_system(s, t, fixed).solve()
    if sol is None:
        raise ConstructionError("complete_to_morphism", "no solution",
                                {"source": s, "target": t, "phi1": phi1, "phi2": phi2})
    m = _morphism_from(s, t, fixed, sol)
    bad = S.failing_square(m)
    if bad is not None:
        raise ConstructionError("complete_to_morphism", f"square {bad + 1}", {"morphism": m})
    return m


def cone_completion(s: NSeq, t: NSeq, phi1: GradedMap, phi2: GradedMap,
                    rng=None, budget: int = 200) -> tuple[SeqMorphism, NSeq]:
    """A completion whose mapping cone is exact, together with that cone.

    The canonical completion is tried first; if its cone were not exact the
    affine space of completions is searched within ``budget``.
    """
    _require_exact(s, "source")
    _require_exact(t, "target")
    _require_first_square(s, t, phi1, phi2)
    fixed = {0: phi1, 1: phi2}
    space = completion_system(s, t, fixed).space()
    if space is None:
        raise ConstructionError("cone_completion", "no completion",
                                {"source": s, "target": t, "phi1": phi1, "phi2": phi2})
    found: dict = {}

    def accept(sol):
        m = _morphism_from(s, t, fixed, sol)
        cone = S.mapping_cone(m)
        if S.is_exact(cone):
            found["m"], found["cone"] = m, cone
            return True
        return False

    try:
        ok = space.search(accept, as_generator(rng), budget)
    except BudgetExceeded:
        ok = None
    if ok is None:
        m = _morphism_from(s, t, fixed, space.canonical())
        raise ConstructionError("cone_completion", "mapping cone not exact",
                                {"morphism": m, "cone": S.mapping_cone(m)})
    return found["m"], found["cone"]


def reduced_cone(m: SeqMorphism, check: bool = True) -> NSeq:
    """The cone of ``(1, φ_2, ..., φ_n)`` with the identity summand removed.

    ``A_2 -> A_3⊕B_2 -> ... -> A_n⊕B_{n-1} -> B_n -> ΣA_2`` with first map
    ``[-α_2; φ_2]``, middle maps ``[[α_{k+1}, 0], [(-1)^k φ_{k+1}, β_k]]``,
    then ``[(-1)^{n+1} φ_n, β_{n-1}]`` and finally ``Σα_1 ∘ β_n``.
    """
    s, t, phi = m.source, m.target, m.components
    n, p = s.n, s.p
    if not S.is_morphism(m):
        raise NotMorphismError("reduced cone needs a morphism", S.failing_square(m))
    if s.objects[0] != t.objects[0] or phi[0] != G.identity(s.objects[0], p):
        raise ValueError("reduced cone needs φ_1 = identity")
    a, b, al, be = s.objects, t.objects, s.maps, t.maps
    objs = [a[1]] + [G.direct_sum(a[k], b[k - 1]) for k in range(2, n)] + [b[n - 1]]
    maps = [G.block_map([[-al[1]], [phi[1]]], [a[1]], [a[2], b[1]], p)]
    for k in range(2, n - 1):  # 1-based k: A_{k+1}⊕B_k -> A_{k+2}⊕B_{k+1}
        maps.append(G.block_map([[al[k], None], [sign(k) * phi[k], be[k - 1]]],
                                [a[k], b[k - 1]], [a[k + 1], b[k]], p))
    maps.append(G.block_map([[sign(n + 1) * phi[n - 1], be[n - 2]]], [a[n - 1], b[n - 2]], [b[n - 1]], p))
    maps.append(G.compose(s.sigma(al[0]), be[n - 1]))
    r = NSeq(objs, maps, p, s.shift)
    if check:
        defect = S.exactness_defect(r)
        if defect is not None:
            raise ConstructionError("reduced_cone", f"not exact at position {defect[0] + 1}, degree {defect[1]}",
                                    {"morphism": m, "reduced": r})
    return r


@dataclass
class OctaData:
    """Output of the higher octahedral construction.

    ``phis`` holds φ_3..φ_n, ``psis`` holds ψ_1..ψ_{2n-5} and ``gamma_seq``
    the new n-angle Γ.  ``morphism`` is ``(1, φ_2, ..., φ_n)``.
    """

    phis: list
    psis: list
    gamma_seq: NSeq
    morphism: SeqMorphism
    reduced: NSeq | None = None
    extras: dict = dc_field(default_factory=dict)


def _obj(seq_objects: Sequence[GradedObject], i: int, lo: int, hi: int) -> GradedObject:
    return seq_objects[i - 1] if lo <= i <= hi else ZERO


def gamma_sequence(a: NSeq, b: NSeq, c: NSeq, phis: Sequence[GradedMap],
                   psis: Sequence[GradedMap]) -> NSeq:
    """Assemble Γ from the octahedral data.

    ``phis`` is the full list φ_1..φ_n and ``c`` is ``A_2 -> B_2 -> C_3 ->
    ... -> C_n -> ΣA_2``.  Object k is ``A_{k+2} ⊕ B_{k+1} ⊕ C_k`` with
    out-of-range summands zero.
    """
    n, p = a.n, a.p

    def A(i):
        return _obj(a.objects, i, 1, n)

    def B(i):
        return _obj(b.objects, i, 1, n)

    def C(i):
        return c.objects[i - 1] if 3 <= i <= n else ZERO

    def psi(j, src, tgt):
        return psis[j - 1] if 1 <= j <= len(psis) else G.zero_map(src, tgt, p)

    objs_parts = [[A(3), ZERO, ZERO]] + [[A(k + 2), B(k + 1), C(k)] for k in range(2, n + 1)]
    maps = [G.block_map([[a.maps[2] if n > 3 else None], [phis[2]]], [A(3)], [A(4), B(3)], p)]
    for k in range(2, n):
        src, tgt = objs_parts[k - 1], objs_parts[k]
        a_src, b_src, c_src = src
        a_tgt, b_tgt, c_tgt = tgt
        am = -a.maps[k + 1] if k + 2 <= n - 1 else None
        fm = sign(k) * phis[k + 1] if k + 2 <= n else None
        bm = -b.maps[k] if k + 1 <= n - 1 else None
        p2 = psi(2 * k - 2, a_src, c_tgt) if not a_src.is_zero() and not c_tgt.is_zero() else None
        p1 = psi(2 * k - 3, b_src, c_tgt) if not b_src.is_zero() and not c_tgt.is_zero() else None
        gm = c.maps[k - 1] if 3 <= k else None
        grid = [[am, None, None], [fm, bm, None], [p2, p1, gm]]
        maps.append(G.block_map(grid, src, tgt, p))
    maps.append(G.compose(c.sigma(a.maps[1]), c.maps[n - 1]))
    objs = [G.direct_sum(*parts) for parts in objs_parts]
    return NSeq(objs, maps, p, a.shift)


def higher_octahedron(a_seq: NSeq, b_seq: NSeq, c_seq: NSeq, phi2: GradedMap, rng=None) -> OctaData:
    """Constructive higher octahedral axiom.

    ``a_seq`` and ``b_seq`` share their first object with ``β_1 = φ_2 α_1``;
    ``c_seq`` is ``A_2 -φ_2-> B_2 -> C_3 -> ... -> C_n -> ΣA_2``.
    Completes ``(1, φ_2)`` with an exact cone, removes the identity summand
    of the cone, completes ``(1, [0 1])`` from that reduced cone to
    ``c_seq`` and reads ψ_1..ψ_{2n-5} off the new components.
    """
    n, p = a_seq.n, a_seq.p
    a1 = a_seq.objects[0]
    if b_seq.n != n or c_seq.n != n:
        raise ValueError("all three sequences need the same n")
    if b_seq.objects[0] != a1:
        raise ValueError("the first two sequences must start at the same object")
    if c_seq.objects[0] != a_seq.objects[1] or c_seq.objects[1] != b_seq.objects[1] or c_seq.maps[0] != phi2:
        raise ValueError("the third sequence must start with φ_2: A_2 -> B_2")
    if b_seq.maps[0] != G.compose(phi2, a_seq.maps[0]):
        raise NotMorphismError("input square does not commute", 0)
    _require_exact(c_seq, "third sequence")
    one = G.identity(a1, p)
    m, _cone = cone_completion(a_seq, b_seq, one, phi2, rng=rng)
    r = reduced_cone(m)
    a2, b2 = a_seq.objects[1], b_seq.objects[1]
    proj = G.block_map([[None, 1]], [a_seq.objects[2], b2], [b2], p)
    m2, _cone2 = cone_completion(r, c_seq, G.identity(a2, p), proj, rng=rng)
    psis = []
    for k in range(3, n):  # 1-based position k: A_{k+1}⊕B_k -> C_k
        parts = G.split(m2.components[k - 1], [a_seq.objects[k], b_seq.objects[k - 1]], [c_seq.objects[k - 1]])
        psis += [parts[0][1], parts[0][0]]  # ψ_{2k-5}, ψ_{2k-4}
    psis.append(m2.components[n - 1])
    phis = list(m.components)
    gamma = gamma_sequence(a_seq, b_seq, c_seq, phis, psis)
    defect = S.exactness_defect(gamma)
    if defect is not None:
        raise ConstructionError("higher_octahedron", f"Γ not exact at position {defect[0] + 1}, degree {defect[1]}",
                                {"a": a_seq, "b": b_seq, "c": c_seq, "gamma": gamma})
    lhs = G.compose(c_seq.maps[n - 1], psis[-1])
    rhs = G.compose(a_seq.sigma(a_seq.maps[0]), b_seq.maps[n - 1])
    if lhs != rhs:
        raise ConstructionError("higher_octahedron", "γ_n ψ_{2n-5} = Σα_1 β_n",
                                {"gamma_n_psi": lhs, "sigma_alpha_beta": rhs})
    return OctaData(phis[2:], psis, gamma, m, r, {"reduced_completion": m2})


# -- the converse direction ---------------------------------------------


def _aux_sequences(s: NSeq, t: NSeq, phi1: GradedMap, phi2: GradedMap):
    """The three auxiliary sequences fed to the octahedron (rows Y, Z and column X)."""
    n, p = s.n, s.p
    A, al = s.objects, s.maps
    B, be = t.objects, t.maps
    sg = s.sigma
    e = sign(n)
    a1b1 = [A[0], B[0]]
    y_parts = [a1b1, [B[1], A[1], B[0]], [A[2], B[1]]] + [[A[k]] for k in range(3, n)]
    z_parts = [a1b1] + [[B[k]] for k in range(1, n - 1)] + [[sg(A[0]), B[n - 1]]]
    sig_a1b1 = [sg(A[0]), sg(B[0])]

    ymaps = [G.block_map([[None, None], [e * al[0], None], [None, -1]], y_parts[0], y_parts[1], p),
             G.block_map([[None, -al[1], None], [1, None, None]], y_parts[1], y_parts[2], p)]
    if n == 3:
        ymaps.append(G.block_map([[al[2], None], [None, None]], y_parts[2], sig_a1b1, p))
    else:
        ymaps.append(G.block_map([[-al[2], None]], y_parts[2], y_parts[3], p))
        ymaps += [al[k] for k in range(3, n - 1)]
        ymaps.append(G.block_map([[e * al[n - 1]], [None]], [A[n - 1]], sig_a1b1, p))

    zmaps = [G.block_map([[-e * G.compose(phi2, al[0]), be[0]]], a1b1, [B[1]], p)]
    if n == 3:
        zmaps.append(G.block_map([[None], [be[1]]], [B[1]], z_parts[2], p))
    else:
        zmaps.append(be[1])
        zmaps += [-be[k] for k in range(2, n - 2)]
        zmaps.append(G.block_map([[None], [-be[n - 2]]], [B[n - 2]], z_parts[-1], p))
    zmaps.append(G.block_map([[-1, None], [-e * sg(phi1), -e * be[n - 1]]], z_parts[-1], sig_a1b1, p))

    x_first = G.block_map([[1, -phi2, -be[0]]], y_parts[1], [B[1]], p)
    x_objs = [G.direct_sum(*y_parts[1]), B[1]] + [ZERO] * (n - 3) + [G.direct_sum(sg(A[1]), sg(B[0]))]
    xmaps = [x_first]
    for k in range(1, n - 1):
        xmaps.append(G.zero_map(x_objs[k], x_objs[k + 1], p))
    xmaps.append(G.block_map([[e * sg(phi2), e * sg(be[0])], [e, None], [None, e]],
                             [sg(A[1]), sg(B[0])], [sg(B[1]), sg(A[1]), sg(B[0])], p))

    Y = NSeq([G.direct_sum(*q) for q in y_parts], ymaps, p, s.shift)
    Z = NSeq([G.direct_sum(*q) for q in z_parts], zmaps, p, s.shift)
    X = NSeq(x_objs, xmaps, p, s.shift)
    return X, Y, Z, y_parts, z_parts


def n4_from_n4star(s: NSeq, t: NSeq, phi1: GradedMap, phi2: GradedMap, rng=None) -> tuple[SeqMorphism, NSeq]:
    """Cone completion obtained from the higher octahedron alone.

    Builds auxiliary n-angles X, Y, Z from the input square, runs
    :func:`higher_octahedron` on them, reads φ_3..φ_n off the resulting
    σ_3..σ_n, checks the shape of ψ_{2n-5} and right-rotates Γ into the
    mapping cone of φ.
    """
    n, p = s.n, s.p
    _require_exact(s, "source")
    _require_exact(t, "target")
    _require_first_square(s, t, phi1, phi2)
    X, Y, Z, y_parts, z_parts = _aux_sequences(s, t, phi1, phi2)
    for name, seq in (("X", X), ("Y", Y), ("Z", Z)):
        defect = S.exactness_defect(seq)
        if defect is not None:
            raise ConstructionError("auxiliary sequences", f"{name} not exact at position {defect[0] + 1}",
                                    {name: seq})
    octa = higher_octahedron(Y, Z, X, X.maps[0], rng=rng)
    sig = octa.phis  # σ_3..σ_n
    A, al = s.objects, s.maps
    B, be = t.objects, t.maps
    e = sign(n)
    phis = [phi1, phi2]

    def fail(what, **kw):
        raise ConstructionError("σ extraction", what, kw)

    if n == 3:
        parts = G.split(sig[0], y_parts[2], z_parts[2])
        if parts[0][0] != -al[2] or not parts[0][1].is_zero() or parts[1][1] != be[1]:
            fail("σ_3 = [[-α_3, 0], [φ_3, β_2]]", sigma3=sig[0])
        phis.append(parts[1][0])
    else:
        parts = G.split(sig[0], y_parts[2], [B[2]])
        if parts[0][1] != be[1]:
            fail("σ_3 = [φ_3, β_2]", sigma3=sig[0])
        phis.append(parts[0][0])
        for k in range(4, n):
            phis.append(sign(k) * sig[k - 3])
        parts = G.split(sig[-1], [A[n - 1]], z_parts[-1])
        if parts[0][0] != -e * al[n - 1]:
            fail("σ_n = [(-1)^{n+1} α_n; (-1)^n φ_n]", sigma_n=sig[-1])
        phis.append(e * parts[1][0])
    m = SeqMorphism(s, t, tuple(phis))
    bad = S.failing_square(m)
    if bad is not None:
        raise ConstructionError("σ extraction", f"extracted φ fails square {bad + 1}", {"morphism": m})
    psi = octa.psis[-1]
    sa = s.sigma
    expect_psi = G.block_map([[-sa(al[0]), None], [sa(phi1), be[n - 1]]],
                             [sa(A[0]), B[n - 1]], [sa(A[1]), sa(B[0])], p)
    if psi != expect_psi:
        raise ConstructionError("ψ extraction", "ψ_{2n-5} = [[-Σα_1, 0], [Σφ_1, β_n]]",
                                {"psi": psi, "expected": expect_psi})
    cone = S.rotate_right(octa.gamma_seq)
    expected = S.mapping_cone(m)
    if cone != expected:
        raise ConstructionError("right rotation", "rotated Γ equals the mapping cone",
                                {"rotated": cone, "cone": expected})
    if not S.is_exact(cone):
        raise ConstructionError("right rotation", "mapping cone exact", {"cone": cone})
    return m, cone


# -- n = 3 and homotopy cartesian squares --------------------------------


def tr4_octahedron(a_tri: NSeq, b_tri: NSeq, c_tri: NSeq, phi2: GradedMap, rng=None) -> OctaData:
    """Higher octahedron for triangles plus the Θ-square ``ψ_1 β_2 = γ_2``."""
    if a_tri.n != 3:
        raise ValueError("TR4 needs triangles")
    octa = higher_octahedron(a_tri, b_tri, c_tri, phi2, rng=rng)
    psi1 = octa.psis[0]
    if G.compose(psi1, b_tri.maps[1]) != c_tri.maps[1]:
        raise ConstructionError("tr4", "Θ square ψ_1 β_2 = γ_2", {"psi1": psi1})
    lhs = G.compose(c_tri.maps[2], psi1)
    if lhs != G.compose(a_tri.sigma(a_tri.maps[0]), b_tri.maps[2]):
        raise ConstructionError("tr4", "γ_3 ψ_1 = Σα_1 β_3", {"psi1": psi1})
    octa.extras["theta"] = True
    return octa


@dataclass
class HomotopyCartesianWitness:
    partial: GradedMap
    angle: NSeq


def cartesian_sequence(a_objs: Sequence[GradedObject], a_maps: Sequence[GradedMap],
                       b_objs: Sequence[GradedObject], b_maps: Sequence[GradedMap],
                       verticals: Sequence[GradedMap], partial: GradedMap, shift: int = 1) -> NSeq:
    """The n-Σ-sequence attached to a ladder of two (n-1)-chains and a map ∂."""
    n = len(a_objs) + 1
    p = partial.p
    A, al, B, be, ph = a_objs, a_maps, b_objs, b_maps, verticals
    objs = [A[0]] + [G.direct_sum(A[k], B[k - 1]) for k in range(1, n - 1)] + [B[n - 2]]
    maps = [G.block_map([[-al[0]], [ph[0]]], [A[0]], [A[1], B[0]], p)]
    for k in range(2, n - 1):  # 1-based: A_k⊕B_{k-1} -> A_{k+1}⊕B_k
        maps.append(G.block_map([[al[k - 1], None], [sign(k) * ph[k - 1], be[k - 2]]],
                                [A[k - 1], B[k - 2]], [A[k], B[k - 1]], p))
    maps.append(G.block_map([[sign(n + 1) * ph[n - 2], be[n - 3]]], [A[n - 2], B[n - 3]], [B[n - 2]], p))
    maps.append(partial)
    return NSeq(objs, maps, p, shift)


def homotopy_cartesian(a_objs, a_maps, b_objs, b_maps, verticals, p: int = 5, shift: int = 1,
                       rng=None, budget: int = 500) -> HomotopyCartesianWitness | None:
    """Search for ∂ making the ladder's sequence exact.

    Solves the linear constraints ``∂ ∘ (last map) = 0`` and
    ``Σ(first map) ∘ ∂ = 0`` and then looks for an exact member of that
    affine space.  Returns None when none exists; raises
    :class:`BudgetExceeded` if the search could not decide.
    """
    k = len(a_objs)
    if k < 2 or len(b_objs) != k or len(verticals) != k or len(a_maps) != k - 1 or len(b_maps) != k - 1:
        raise ValueError("need two chains of equal length >= 2 with matching verticals")
    for i in range(k - 1):
        if G.compose(verticals[i + 1], a_maps[i]) != G.compose(b_maps[i], verticals[i]):
            raise NotMorphismError("ladder does not commute", i)
    sa1 = G.shift_object(a_objs[0], shift)
    dummy = G.zero_map(b_objs[-1], sa1, p)
    base = cartesian_sequence(a_objs, a_maps, b_objs, b_maps, verticals, dummy, shift)
    ms = MapSystem(p)
    ms.unknown("d", b_objs[-1], sa1)
    last, first = base.maps[-2], base.maps[0]
    ms.equation([Term("d", right=last)], G.zero_map(last.source, sa1, p))
    sfirst = G.shift_map(first, shift)
    ms.equation([Term("d", left=sfirst)], G.zero_map(b_objs[-1], sfirst.target, p))
    space = ms.space()
    if space is None:
        return None
    found = {}

    def accept(sol):
        seq = cartesian_sequence(a_objs, a_maps, b_objs, b_maps, verticals, sol["d"], shift)
        if S.is_exact(seq):
            found["w"] = HomotopyCartesianWitness(sol["d"], seq)
            return True
        return False

    if space.search(accept, as_generator(rng), budget) is None:
        return None
    return found["w"]
