"""n-Σ-sequences, their morphisms, rotations, exactness and mapping cones.

Positions are 1-based in docstrings (``A_1 .. A_n``) and 0-based in code.
``NSeq.shift`` is the exponent ``s`` of the suspension in use, so the last
map lands in ``Σ^s A_1``.  The triangulated model uses ``s = 1``; the
cluster-tilting model of 4-angles uses ``s = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import graded as G
from .errors import NotExactError, NotMorphismError
from .graded import GradedMap, GradedObject
from .linalg import field
from .rng import as_generator


def sign(n: int) -> int:
    return -1 if n % 2 else 1


class NSeq:
    """``A_1 -> A_2 -> ... -> A_n -> Σ A_1`` with validated shapes."""

    __slots__ = ("objects", "maps", "p", "shift")

    def __init__(self, objects: Sequence[GradedObject], maps: Sequence[GradedMap],
                 p: int | None = None, shift: int = 1):
        objects, maps = tuple(objects), tuple(maps)
        n = len(objects)
        if n < 3:
            raise ValueError(f"n-Σ-sequences need n >= 3, got {n}")
        if len(maps) != n:
            raise ValueError("need exactly one map per object")
        self.p = maps[0].p if p is None else int(p)
        for i, f in enumerate(maps):
            tgt = objects[i + 1] if i + 1 < n else G.shift_object(objects[0], shift)
            if f.source != objects[i] or f.target != tgt:
                raise ValueError(f"map {i + 1} has the wrong source or target")
            if f.p != self.p:
                raise ValueError(f"map {i + 1} lives over F_{f.p}, expected F_{self.p}")
        self.objects = objects
        self.maps = maps
        self.shift = int(shift)

    @property
    def n(self) -> int:
        return len(self.objects)

    def sigma(self, x, k: int = 1):
        """Apply ``Σ^k`` (in this sequence's suspension) to an object or map."""
        if isinstance(x, GradedObject):
            return G.shift_object(x, k * self.shift)
        return G.shift_map(x, k * self.shift)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NSeq):
            return NotImplemented
        return (self.shift == other.shift and self.p == other.p
                and self.objects == other.objects and self.maps == other.maps)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        objs = ", ".join(repr(o) for o in self.objects)
        return f"NSeq(n={self.n}, p={self.p}, shift={self.shift}, objects=[{objs}])"


@dataclass(frozen=True, eq=False)
class SeqMorphism:
    source: NSeq
    target: NSeq
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if self.source.n != self.target.n or len(comps) != self.source.n:
            raise ValueError("component count must equal n of both sequences")
        if self.source.shift != self.target.shift:
            raise ValueError("sequences use different suspensions")
        for i, f in enumerate(comps):
            if f.source != self.source.objects[i] or f.target != self.target.objects[i]:
                raise ValueError(f"component {i + 1} has the wrong source or target")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeqMorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.components == other.components)

    __hash__ = None  # type: ignore[assignment]


# -- morphisms ---------------------------------------------------------


def failing_square(m: SeqMorphism) -> int | None:
    """0-based index of the first non-commuting square, or None."""
    s, t, phi = m.source, m.target, m.components
    n = s.n
    for i in range(n):
        nxt = phi[i + 1] if i + 1 < n else s.sigma(phi[0])
        if G.compose(nxt, s.maps[i]) != G.compose(t.maps[i], phi[i]):
            return i
    return None


def is_morphism(m: SeqMorphism) -> bool:
    return failing_square(m) is None


def identity_morphism(s: NSeq) -> SeqMorphism:
    return SeqMorphism(s, s, tuple(G.identity(x, s.p) for x in s.objects))


def zero_morphism(s: NSeq, t: NSeq) -> SeqMorphism:
    return SeqMorphism(s, t, tuple(G.zero_map(x, y, s.p) for x, y in zip(s.objects, t.objects)))


def compose_morphisms(g: SeqMorphism, f: SeqMorphism) -> SeqMorphism:
    return SeqMorphism(f.source, g.target, tuple(G.compose(b, a) for b, a in zip(g.components, f.components)))


def is_weak_iso(m: SeqMorphism) -> bool:
    """Some two consecutive components (cyclically, via Σφ_1) are invertible."""
    if not is_morphism(m):
        raise NotMorphismError("not a morphism of sequences", failing_square(m))
    iso = [G.is_isomorphism(f) for f in m.components]
    n = len(iso)
    return any(iso[i] and iso[(i + 1) % n] for i in range(n))


def is_isomorphism(m: SeqMorphism) -> bool:
    return is_morphism(m) and all(G.is_isomorphism(f) for f in m.components)


# -- rotations ---------------------------------------------------------


def rotate_left(s: NSeq) -> NSeq:
    """``(A_2, ..., A_n, ΣA_1)`` with last map ``(-1)^n Σα_1``."""
    last = G.scale(sign(s.n), s.sigma(s.maps[0]))
    return NSeq(s.objects[1:] + (s.sigma(s.objects[0]),), s.maps[1:] + (last,), s.p, s.shift)


def rotate_right(s: NSeq) -> NSeq:
    """``(Σ^{-1}A_n, A_1, ..., A_{n-1})`` with first map ``(-1)^n Σ^{-1}α_n``."""
    first = G.scale(sign(s.n), s.sigma(s.maps[-1], -1))
    return NSeq((s.sigma(s.objects[-1], -1),) + s.objects[:-1], (first,) + s.maps[:-1], s.p, s.shift)


def rotate(s: NSeq, k: int) -> NSeq:
    """``k``-fold left rotation (right rotation for negative ``k``)."""
    for _ in range(abs(k)):
        s = rotate_left(s) if k > 0 else rotate_right(s)
    return s


def shift_seq(s: NSeq, k: int = 1, sgn: int = 1) -> NSeq:
    """Apply ``Σ^k`` to every object and map, scaling every map by ``sgn``."""
    return NSeq(tuple(s.sigma(x, k) for x in s.objects),
                tuple(G.scale(sgn, s.sigma(f, k)) for f in s.maps), s.p, s.shift)


# -- basic constructions -----------------------------------------------


def zero_seq(n: int, p: int = 5, shift: int = 1) -> NSeq:
    z = G.ZERO
    return NSeq([z] * n, [G.zero_map(z, z, p)] * n, p, shift)


def trivial_seq(a: GradedObject, j: int = 0, n: int = 3, p: int = 5, shift: int = 1) -> NSeq:
    """``A =1=> A -> 0 -> ... -> 0 -> ΣA`` rotated ``j`` times to the left."""
    if not 0 <= j < n:
        raise ValueError(f"rotation index {j} outside 0..{n - 1}")
    z = G.ZERO
    objs = [a, a] + [z] * (n - 2)
    maps = [G.identity(a, p)]
    maps += [G.zero_map(objs[i], objs[i + 1] if i + 1 < n else G.shift_object(a, shift), p)
             for i in range(1, n)]
    return rotate(NSeq(objs, maps, p, shift), j)


def direct_sum_seq(*seqs: NSeq) -> NSeq:
    first = seqs[0]
    for t in seqs[1:]:
        if t.n != first.n or t.shift != first.shift or t.p != first.p:
            raise ValueError("cannot sum sequences of different n, shift or prime")
    n = first.n
    objs = [G.direct_sum(*(t.objects[i] for t in seqs)) for i in range(n)]
    maps = [G.direct_sum_maps(*(t.maps[i] for t in seqs)) for i in range(n)]
    return NSeq(objs, maps, first.p, first.shift)


def direct_sum_morphism(*ms: SeqMorphism) -> SeqMorphism:
    n = ms[0].source.n
    return SeqMorphism(direct_sum_seq(*(m.source for m in ms)), direct_sum_seq(*(m.target for m in ms)),
                       tuple(G.direct_sum_maps(*(m.components[i] for m in ms)) for i in range(n)))


def conjugate(s: NSeq, isos: Sequence[GradedMap]) -> tuple[NSeq, SeqMorphism]:
    """Transport ``s`` along isomorphisms ``φ_i: A_i -> X_i``.

    Returns the sequence with maps ``φ_{i+1} α_i φ_i^{-1}`` (the last one
    using ``Σφ_1``) together with the isomorphism ``s -> result``.
    """
    n = s.n
    inv = [G.inverse(f) for f in isos]
    maps = []
    for i in range(n):
        nxt = isos[i + 1] if i + 1 < n else s.sigma(isos[0])
        maps.append(G.compose_all(nxt, s.maps[i], inv[i]))
    t = NSeq([f.target for f in isos], maps, s.p, s.shift)
    return t, SeqMorphism(s, t, tuple(isos))


# -- exactness ---------------------------------------------------------


def _incoming_block(s: NSeq, i: int, d: int) -> np.ndarray:
    """Degree-``d`` block of the map into position ``i`` (wrapping via Σ^{-1}α_n)."""
    if i > 0:
        return s.maps[i - 1].block(d)
    return s.maps[-1].block(d + s.shift)


def exactness_defect(s: NSeq) -> tuple[int, int] | None:
    """First (0-based position, degree) where the unrolled complex is not exact."""
    fld = field(s.p)
    for i, x in enumerate(s.objects):
        for d, k in x.dims.items():
            into = _incoming_block(s, i, d)
            out = s.maps[i].block(d)
            if out.shape[0] and into.shape[1] and fld.mul(out, into).any():
                return i, d
            if fld.rank(into) + fld.rank(out) != k:
                return i, d
    return None


def is_exact(s: NSeq) -> bool:
    return exactness_defect(s) is None


def mapping_cone(m: SeqMorphism) -> NSeq:
    """Cone with objects ``A_{i+1} ⊕ B_i`` and maps ``[[-α_{i+1}, 0], [φ_{i+1}, β_i]]``."""
    if not is_morphism(m):
        raise NotMorphismError("mapping cone needs a morphism", failing_square(m))
    s, t, phi = m.source, m.target, m.components
    n, p = s.n, s.p
    a = list(s.objects[1:]) + [s.sigma(s.objects[0])]
    alpha = list(s.maps[1:]) + [s.sigma(s.maps[0])]
    nxt_phi = list(phi[1:]) + [s.sigma(phi[0])]
    objs = [G.direct_sum(a[i], t.objects[i]) for i in range(n)]
    maps = []
    for i in range(n):
        if i + 1 < n:
            tgt = [a[i + 1], t.objects[i + 1]]
        else:
            tgt = [s.sigma(a[0]), s.sigma(t.objects[0])]
        maps.append(G.block_map([[-alpha[i], None], [nxt_phi[i], t.maps[i]]],
                                [a[i], t.objects[i]], tgt, p))
    return NSeq(objs, maps, p, s.shift)


# -- decomposition into trivial pieces ---------------------------------


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``pieces[k] = (object, j)`` and an isomorphism ``⊕ trivial_seq(object, j) -> s``."""

    pieces: tuple
    witness: SeqMorphism

    @property
    def model(self) -> NSeq:
        return self.witness.source


def _piece_sign(n: int, j: int) -> int:
    return 1 if j == 0 else sign(n)


def decompose_exact(s: NSeq) -> Decomposition:
    """Split an exact sequence into rotated trivial pieces.

    For every arrow ``α_i`` the pivot columns of each block span a
    complement ``C_i`` of ``ker α_i``.  Arrow ``i`` contributes the trivial
    piece whose identity arrow sits at position ``i`` (rotation index
    ``(1 - i) mod n``).  The witness sends that piece to ``C_i`` and to
    ``±α_i C_i``.  Raises :class:`NotExactError` if the resulting map is
    not an isomorphism of sequences onto ``s``.
    """
    n, p, sh = s.n, s.p, s.shift
    fld = field(p)
    bases = []  # basis of C_i as a map C_i -> A_i
    for i, f in enumerate(s.maps):
        blocks, dims = {}, {}
        for d, k in s.objects[i].dims.items():
            b = fld.coimage_basis(f.block(d))
            if b.shape[1]:
                dims[d] = b.shape[1]
                blocks[d] = b
        c = GradedObject(dims)
        bases.append(GradedMap(c, s.objects[i], blocks, p))
    pieces, models, comp_src, comp_tgt = [], [], [], []
    for i in range(n):
        j = (-i) % n  # arrow index i+1 in 1-based terms
        obj = bases[i].source if i == 0 else G.shift_object(bases[i].source, -sh)
        pieces.append((obj, j))
        models.append(trivial_seq(obj, j, n, p, sh))
        eps = _piece_sign(n, j)
        image = G.scale(eps, G.compose(s.maps[i], bases[i]))
        if i + 1 == n:
            image = G.shift_map(image, -sh)
        comp_src.append(bases[i])
        comp_tgt.append(image)
    # position k carries piece k (source side) and piece k-1 (target side)
    comps = []
    for k in range(n):
        prev = (k - 1) % n
        grid = [comp_src[k] if a == k else comp_tgt[a] if a == prev else None for a in range(n)]
        comps.append(G.block_map([grid], [m.objects[k] for m in models], [s.objects[k]], p))
    model = direct_sum_seq(*models) if models else zero_seq(n, p, sh)
    witness = SeqMorphism(model, s, tuple(comps))
    for k, f in enumerate(comps):
        if not G.is_isomorphism(f):
            bad = next(d for d in set(f.source.support) | set(f.target.support)
                       if f.source.dim(d) != f.target.dim(d) or not fld.is_invertible(f.block(d)))
            raise NotExactError("trivial pieces do not span the sequence", k, bad)
    square = failing_square(witness)
    if square is not None:
        raise NotExactError("reconstruction does not match the sequence", square)
    kept = tuple((o, j) for o, j in pieces if not o.is_zero())
    return Decomposition(kept, witness)


def piece_signature(s: NSeq) -> dict[int, GradedObject]:
    """Isomorphism invariant of an exact sequence: rotation index -> summed object."""
    out: dict[int, GradedObject] = {}
    for obj, j in decompose_exact(s).pieces:
        out[j] = G.direct_sum(out.get(j, G.ZERO), obj)
    return out


def are_isomorphic(s: NSeq, t: NSeq) -> bool:
    """Isomorphism test for exact sequences via their trivial-piece content."""
    if s.n != t.n or s.shift != t.shift or s.p != t.p:
        return False
    return piece_signature(s) == piece_signature(t)


# -- generators ----------------------------------------------------------


def random_exact(n: int, max_dim: int = 3, degrees: tuple[int, int] = (-2, 2), rng=None,
                 p: int = 5, pieces: int | None = None, max_pieces: int = 3, shift: int = 1,
                 twist: bool = True) -> NSeq:
    """Random direct sum of rotated trivial pieces, conjugated by random isomorphisms."""
    rng = as_generator(rng)
    if pieces is None:
        pieces = int(rng.integers(1, max_pieces + 1)) if max_pieces > 0 else 0
    window = range(degrees[0], degrees[1] + 1)
    models = []
    for _ in range(pieces):
        obj = G.random_object(rng, max_dim, window)
        models.append(trivial_seq(obj, int(rng.integers(0, n)), n, p, shift))
    s = direct_sum_seq(*models) if models else zero_seq(n, p, shift)
    if twist:
        s, _ = conjugate(s, [G.random_iso(x, rng, p) for x in s.objects])
    return s


def random_sequence(n: int, max_dim: int = 3, degrees: tuple[int, int] = (-2, 2), rng=None,
                    p: int = 5, shift: int = 1) -> NSeq:
    """Random objects and random maps; exact only by accident."""
    rng = as_generator(rng)
    window = range(degrees[0], degrees[1] + 1)
    objs = [G.random_object(rng, max_dim, window) for _ in range(n)]
    tgts = objs[1:] + [G.shift_object(objs[0], shift)]
    maps = [G.random_map(x, y, rng, p) for x, y in zip(objs, tgts)]
    return NSeq(objs, maps, p, shift)


def perturb(s: NSeq, rng=None) -> NSeq:
    """Change one random nonzero-size block entry of one map (if any exists)."""
    rng = as_generator(rng)
    slots = [(i, d) for i, f in enumerate(s.maps) for d, m in f.blocks.items() if m.size]
    if not slots:
        return s
    i, d = slots[int(rng.integers(len(slots)))]
    m = np.array(s.maps[i].block(d))
    r, c = int(rng.integers(m.shape[0])), int(rng.integers(m.shape[1]))
    m[r, c] = (m[r, c] + int(rng.integers(1, s.p))) % s.p
    blocks = s.maps[i].blocks
    blocks[d] = m
    maps = list(s.maps)
    maps[i] = GradedMap(s.maps[i].source, s.maps[i].target, blocks, s.p)
    return NSeq(s.objects, maps, s.p, s.shift)


def complete_first_morphism(alpha: GradedMap, n: int, shift: int = 1) -> NSeq:
    """An exact sequence whose first map is exactly ``alpha``.

    Splits ``A_1 = C ⊕ K`` (coimage and kernel) and ``A_2 = αC ⊕ D``
    (image and a complement).  The model is the sum of the trivial pieces
    carrying ``C`` at arrow 1, ``D`` at arrow 2 and ``K`` at arrow n,
    transported back along these splittings.
    """
    p = alpha.p
    fld = field(p)
    a1, a2 = alpha.source, alpha.target
    cb, kb, db = {}, {}, {}
    for d in set(a1.support) | set(a2.support):
        m = alpha.block(d)
        if a1.dim(d):
            cb[d] = fld.coimage_basis(m)
            kb[d] = fld.kernel_basis(m)
        if a2.dim(d):
            db[d] = fld.complement_basis(fld.image_basis(m))

    def obj(bs):
        return GradedObject({d: b.shape[1] for d, b in bs.items()})

    c_obj, k_obj, d_obj = obj(cb), obj(kb), obj(db)
    c_map = GradedMap(c_obj, a1, {d: b for d, b in cb.items() if b.shape[1]}, p)
    k_map = GradedMap(k_obj, a1, {d: b for d, b in kb.items() if b.shape[1]}, p)
    d_map = GradedMap(d_obj, a2, {d: b for d, b in db.items() if b.shape[1]}, p)
    models = [trivial_seq(c_obj, 0, n, p, shift),
              trivial_seq(G.shift_object(d_obj, -shift), n - 1, n, p, shift),
              trivial_seq(k_obj, 1, n, p, shift)]
    model = direct_sum_seq(*models)
    isos = []
    for k in range(n):
        srcs = [m.objects[k] for m in models]
        if k == 0:
            isos.append(G.block_map([[c_map, None, k_map]], srcs, [a1], p))
        elif k == 1:
            isos.append(G.block_map([[G.compose(alpha, c_map), d_map, None]], srcs, [a2], p))
        else:
            isos.append(G.identity(model.objects[k], p))
    out, _ = conjugate(model, isos)
    return out
