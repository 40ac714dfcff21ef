"""Graded vector spaces over F_p and degree-preserving maps.

An object is a finitely supported dimension vector ``degree -> dim``.  A map
``X -> Y`` stores one matrix per degree in ``supp X ∩ supp Y``; every other
degree is implicitly zero.  The shift Σ moves degree ``d`` to ``d + 1``:
``(ΣX)_d = X_{d-1}``.

Direct sums are ordered: in every degree the basis of ``X ⊕ Y`` lists the
basis of ``X_d`` first and then that of ``Y_d``.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .linalg import field


class GradedObject:
    """Finitely supported dimension vector, stored without zero entries."""

    __slots__ = ("_dims", "_hash")

    def __init__(self, dims: Mapping[int, int] | None = None):
        clean = {}
        for d, k in (dims or {}).items():
            k = int(k)
            if k < 0:
                raise ValueError(f"negative dimension {k} in degree {d}")
            if k:
                clean[int(d)] = k
        self._dims = dict(sorted(clean.items()))
        self._hash = hash(tuple(self._dims.items()))

    @property
    def dims(self) -> dict[int, int]:
        return dict(self._dims)

    @property
    def support(self) -> list[int]:
        return list(self._dims)

    def dim(self, d: int) -> int:
        return self._dims.get(d, 0)

    @property
    def total(self) -> int:
        return sum(self._dims.values())

    def is_zero(self) -> bool:
        return not self._dims

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GradedObject) and self._dims == other._dims

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{d}:{k}" for d, k in self._dims.items())
        return f"GradedObject({{{inner}}})"


ZERO = GradedObject()


class GradedMap:
    """Degree-preserving linear map between graded objects over F_p."""

    __slots__ = ("source", "target", "p", "_blocks")

    def __init__(self, source: GradedObject, target: GradedObject,
                 blocks: Mapping[int, np.ndarray] | None = None, p: int = 5):
        self.source = source
        self.target = target
        self.p = int(p)
        fld = field(self.p)
        blocks = blocks or {}
        for d in blocks:
            if source.dim(d) == 0 or target.dim(d) == 0:
                if np.asarray(blocks[d]).size:
                    raise ValueError(f"block in degree {d} outside the common support")
        clean = {}
        for d in source.support:
            r, c = target.dim(d), source.dim(d)
            if r == 0:
                continue
            if d in blocks:
                m = fld.matrix(blocks[d], r, c)
            else:
                m = fld.zeros(r, c)
            clean[d] = m
        self._blocks = clean

    def block(self, d: int) -> np.ndarray:
        """Matrix in degree ``d`` (an explicit zero matrix outside the support)."""
        m = self._blocks.get(d)
        if m is None:
            return field(self.p).zeros(self.target.dim(d), self.source.dim(d))
        return m

    @property
    def blocks(self) -> dict[int, np.ndarray]:
        return dict(self._blocks)

    def degrees(self) -> list[int]:
        return list(self._blocks)

    def is_zero(self) -> bool:
        return not any(m.any() for m in self._blocks.values())

    def rank(self, d: int) -> int:
        return field(self.p).rank(self.block(d))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target or self.p != other.p:
            return False
        return all(np.array_equal(m, other._blocks[d]) for d, m in self._blocks.items())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        inner = ", ".join(f"{d}: {m.tolist()}" for d, m in self._blocks.items())
        return f"GradedMap({self.source!r} -> {self.target!r}, {{{inner}}}, p={self.p})"

    # arithmetic sugar
    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        return compose(self, other)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        _check_parallel(self, other)
        fld = field(self.p)
        return GradedMap(self.source, self.target,
                         {d: fld.add(m, other._blocks[d]) for d, m in self._blocks.items()}, self.p)

    def __neg__(self) -> "GradedMap":
        return scale(-1, self)

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        return self + (-other)

    def __rmul__(self, c: int) -> "GradedMap":
        return scale(c, self)


def _check_parallel(f: GradedMap, g: GradedMap) -> None:
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps are not parallel")
    if f.p != g.p:
        raise ValueError("maps live over different primes")


MapLike = Union[GradedMap, int, None]


def identity(x: GradedObject, p: int = 5) -> GradedMap:
    fld = field(p)
    return GradedMap(x, x, {d: fld.eye(k) for d, k in x.dims.items()}, p)


def zero_map(x: GradedObject, y: GradedObject, p: int = 5) -> GradedMap:
    return GradedMap(x, y, {}, p)


def scale(c: int, f: GradedMap) -> GradedMap:
    fld = field(f.p)
    return GradedMap(f.source, f.target, {d: fld.scale(c, m) for d, m in f.blocks.items()}, f.p)


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """``g ∘ f``; requires ``f.target == g.source``."""
    if f.target != g.source:
        raise ValueError(f"cannot compose: {f.target!r} != {g.source!r}")
    if f.p != g.p:
        raise ValueError("maps live over different primes")
    fld = field(f.p)
    blocks = {}
    for d in f.degrees():
        if g.target.dim(d):
            blocks[d] = fld.mul(g.block(d), f.block(d))
    return GradedMap(f.source, g.target, blocks, f.p)


def compose_all(*maps: GradedMap) -> GradedMap:
    """``compose_all(h, g, f) = h ∘ g ∘ f``."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        out = compose(g, out)
    return out


def shift_object(x: GradedObject, k: int = 1) -> GradedObject:
    if k == 0:
        return x
    return GradedObject({d + k: n for d, n in x.dims.items()})


def shift_map(f: GradedMap, k: int = 1) -> GradedMap:
    if k == 0:
        return f
    return GradedMap(shift_object(f.source, k), shift_object(f.target, k),
                     {d + k: m for d, m in f.blocks.items()}, f.p)


def direct_sum(*objs: GradedObject) -> GradedObject:
    dims: dict[int, int] = {}
    for x in objs:
        for d, k in x.dims.items():
            dims[d] = dims.get(d, 0) + k
    return GradedObject(dims)


def block_map(grid: Sequence[Sequence[MapLike]], sources: Sequence[GradedObject],
              targets: Sequence[GradedObject], p: int = 5) -> GradedMap:
    """Map ``⊕ sources -> ⊕ targets`` from a grid of components.

    ``grid[i][j]`` is the component ``sources[j] -> targets[i]``; an integer
    ``c`` means ``c`` times the identity (source and target must agree) and
    ``None`` means zero.
    """
    if len(grid) != len(targets) or any(len(row) != len(sources) for row in grid):
        raise ValueError("grid shape does not match the summand lists")
    src, tgt = direct_sum(*sources), direct_sum(*targets)
    blocks = {}
    for d in src.support:
        rows = tgt.dim(d)
        if rows == 0:
            continue
        m = np.zeros((rows, src.dim(d)), dtype=np.int64)
        r0 = 0
        for i, t in enumerate(targets):
            c0 = 0
            for j, s in enumerate(sources):
                entry = grid[i][j]
                h, w = t.dim(d), s.dim(d)
                if isinstance(entry, GradedMap):
                    if entry.source != s or entry.target != t:
                        raise ValueError(f"grid entry ({i},{j}) has wrong source/target")
                    if h and w:
                        m[r0:r0 + h, c0:c0 + w] = entry.block(d)
                elif entry is not None and int(entry) % p:
                    if s != t:
                        raise ValueError(f"scalar grid entry ({i},{j}) needs equal source and target")
                    m[r0:r0 + h, c0:c0 + w] = int(entry) * np.eye(h, dtype=np.int64)
                c0 += w
            r0 += t.dim(d)
        blocks[d] = m
    return GradedMap(src, tgt, blocks, p)


def direct_sum_maps(*maps: GradedMap) -> GradedMap:
    """Block-diagonal sum ``f ⊕ g ⊕ ...``."""
    p = maps[0].p
    k = len(maps)
    grid = [[maps[i] if i == j else None for j in range(k)] for i in range(k)]
    return block_map(grid, [f.source for f in maps], [f.target for f in maps], p)


def inclusion(summands: Sequence[GradedObject], j: int, p: int = 5) -> GradedMap:
    return block_map([[1 if i == j else None] for i in range(len(summands))],
                     [summands[j]], summands, p)


def projection(summands: Sequence[GradedObject], j: int, p: int = 5) -> GradedMap:
    return block_map([[1 if i == j else None for i in range(len(summands))]],
                     summands, [summands[j]], p)


def split(f: GradedMap, sources: Sequence[GradedObject], targets: Sequence[GradedObject]) -> list[list[GradedMap]]:
    """Inverse of :func:`block_map`: the component grid of ``f``."""
    return [[compose_all(projection(targets, i, f.p), f, inclusion(sources, j, f.p))
             for j in range(len(sources))] for i in range(len(targets))]


def is_isomorphism(f: GradedMap) -> bool:
    if f.source != f.target and any(f.source.dim(d) != f.target.dim(d)
                                    for d in set(f.source.support) | set(f.target.support)):
        return False
    fld = field(f.p)
    return all(fld.is_invertible(f.block(d)) for d in f.source.support)


def inverse(f: GradedMap) -> GradedMap:
    if not is_isomorphism(f):
        raise ValueError("map is not an isomorphism")
    fld = field(f.p)
    return GradedMap(f.target, f.source, {d: fld.inverse(f.block(d)) for d in f.source.support}, f.p)


def hom_dim(x: GradedObject, y: GradedObject) -> int:
    """Dimension of ``Hom(x, y)`` in the graded model."""
    return sum(k * y.dim(d) for d, k in x.dims.items())


def random_map(x: GradedObject, y: GradedObject, rng: np.random.Generator, p: int = 5) -> GradedMap:
    fld = field(p)
    return GradedMap(x, y, {d: fld.random_matrix(rng, y.dim(d), k) for d, k in x.dims.items()}, p)


def random_iso(x: GradedObject, rng: np.random.Generator, p: int = 5) -> GradedMap:
    fld = field(p)
    return GradedMap(x, x, {d: fld.random_invertible(rng, k) for d, k in x.dims.items()}, p)


def random_object(rng: np.random.Generator, max_dim: int, degrees: Iterable[int],
                  density: float = 0.6) -> GradedObject:
    """Each degree gets a dimension in ``1..max_dim`` with probability ``density``."""
    dims = {}
    for d in degrees:
        if max_dim > 0 and rng.random() < density:
            dims[d] = int(rng.integers(1, max_dim + 1))
    return GradedObject(dims)


def map_from_matrix_function(x: GradedObject, y: GradedObject, fn, p: int = 5) -> GradedMap:
    """Build a map whose degree-``d`` block is ``fn(d)``."""
    return GradedMap(x, y, {d: fn(d) for d in x.support if y.dim(d)}, p)

