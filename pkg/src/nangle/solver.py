"""Linear equations whose unknowns are graded maps.

Every diagram completion in the package reduces to equations of the form

    sum_k  c_k * L_k ∘ Σ^{s_k} X_k ∘ R_k  =  C

with ``X_k`` unknown graded maps.  :class:`MapSystem` expands such
equations degree by degree into a :class:`~nangle.linalg.LinearSystem`,
so unknown blocks that never meet (typically different degrees) are
solved independently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable

import numpy as np

from . import graded as G
from .errors import BudgetExceeded
from .graded import GradedMap, GradedObject
from .linalg import LinearSystem, field


@dataclass(frozen=True)
class Term:
    """``coeff * left ∘ Σ^shift X ∘ right``; ``None`` factors are identities."""

    name: Hashable
    left: GradedMap | None = None
    right: GradedMap | None = None
    coeff: int = 1
    shift: int = 0


class MapSystem:
    def __init__(self, p: int):
        self.p = p
        self.field = field(p)
        self.unknowns: dict[Hashable, tuple[GradedObject, GradedObject]] = {}
        self._lin = LinearSystem(self.field)

    def unknown(self, name: Hashable, source: GradedObject, target: GradedObject) -> None:
        self.unknowns[name] = (source, target)
        for d, k in source.dims.items():
            if target.dim(d):
                self._lin.unknown((name, d), target.dim(d), k)

    def equation(self, terms: Iterable[Term], rhs: GradedMap) -> None:
        terms = list(terms)
        src, tgt = rhs.source, rhs.target
        for t in terms:
            xs, xt = self.unknowns[t.name]
            if t.right is not None and (t.right.source != src or t.right.target != G.shift_object(xs, t.shift)):
                raise ValueError(f"right factor of {t.name!r} does not fit")
            if t.left is not None and (t.left.target != tgt or t.left.source != G.shift_object(xt, t.shift)):
                raise ValueError(f"left factor of {t.name!r} does not fit")
            if t.right is None and G.shift_object(xs, t.shift) != src:
                raise ValueError(f"term {t.name!r} needs a right factor")
            if t.left is None and G.shift_object(xt, t.shift) != tgt:
                raise ValueError(f"term {t.name!r} needs a left factor")
        fld = self.field
        for d, k in src.dims.items():
            rows = tgt.dim(d)
            if rows == 0:
                continue
            lin_terms = []
            for t in terms:
                xs, xt = self.unknowns[t.name]
                e = d - t.shift
                if xs.dim(e) == 0 or xt.dim(e) == 0:
                    continue
                left = fld.eye(rows) if t.left is None else t.left.block(d)
                if t.coeff % self.p != 1:
                    left = fld.scale(t.coeff, left)
                right = fld.eye(k) if t.right is None else t.right.block(d)
                lin_terms.append((left, (t.name, e), right))
            self._lin.equation(lin_terms, rhs.block(d))

    def _pack(self, flat: dict) -> dict[Hashable, GradedMap]:
        out = {}
        for name, (xs, xt) in self.unknowns.items():
            blocks = {d: flat[(name, d)] for d in xs.support if xt.dim(d)}
            out[name] = GradedMap(xs, xt, blocks, self.p)
        return out

    def solve(self) -> dict[Hashable, GradedMap] | None:
        sol = self._lin.solve()
        return None if sol is None else self._pack(sol)

    def space(self) -> "SolutionSpace | None":
        res = self._lin.solution_space()
        if res is None:
            return None
        particular, basis = res
        return SolutionSpace(self, particular, basis)


class SolutionSpace:
    """Affine space ``particular + span(basis)`` of solutions."""

    def __init__(self, system: MapSystem, particular: dict, basis: list[dict]):
        self.system = system
        self.p = system.p
        self._particular = particular
        self._basis = basis

    @property
    def dimension(self) -> int:
        return len(self._basis)

    def size(self) -> int:
        return self.p ** self.dimension

    def point(self, coords: Iterable[int]) -> dict[Hashable, GradedMap]:
        flat = {k: np.array(v) for k, v in self._particular.items()}
        for c, direction in zip(coords, self._basis):
            c = int(c) % self.p
            if c:
                for k, v in direction.items():
                    flat[k] = (flat[k] + c * v) % self.p
        return self.system._pack(flat)

    def canonical(self) -> dict[Hashable, GradedMap]:
        return self.point([])

    def sample(self, rng: np.random.Generator) -> dict[Hashable, GradedMap]:
        return self.point(rng.integers(0, self.p, size=self.dimension))

    def search(self, accept: Callable[[dict], bool], rng: np.random.Generator,
               budget: int = 200) -> dict[Hashable, GradedMap] | None:
        """Find a solution satisfying ``accept``.

        Tries the canonical point first.  Small spaces are enumerated in
        full; larger ones are sampled ``budget`` times, and exhausting the
        budget raises :class:`BudgetExceeded` because "no solution" was not
        established.
        """
        cand = self.canonical()
        if accept(cand):
            return cand
        if self.dimension == 0:
            return None
        if self.size() <= budget:
            for coords in itertools.product(range(self.p), repeat=self.dimension):
                cand = self.point(coords)
                if accept(cand):
                    return cand
            return None
        for _ in range(budget):
            cand = self.sample(rng)
            if accept(cand):
                return cand
        raise BudgetExceeded(f"no acceptable solution among {budget} samples "
                             f"of a {self.dimension}-dimensional space over F_{self.p}")
