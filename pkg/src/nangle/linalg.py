"""Dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays whose entries lie in ``[0, p)``.
Every function returns fresh, read-only arrays so results can be shared
freely between callers.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Hashable, Iterable, Sequence

import numpy as np


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class PrimeField:
    """Arithmetic and Gaussian elimination modulo a small prime ``p``."""

    # products of two reduced entries summed over a row must fit in int64
    MAX_PRIME = 1 << 20

    def __init__(self, p: int = 5):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p > self.MAX_PRIME:
            raise ValueError(f"prime {p} too large for int64 elimination")
        self.p = p
        self._inv = np.zeros(p, dtype=np.int64)
        for x in range(1, p):
            self._inv[x] = pow(x, -1, p)

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    # -- construction -------------------------------------------------

    def matrix(self, entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
        """Reduce ``entries`` modulo p into a read-only 2-d array.

        ``rows``/``cols`` are only needed for empty matrices, whose shape
        cannot be inferred from nested lists.
        """
        a = np.array(entries, dtype=np.int64)
        if a.size == 0:
            r = rows if rows is not None else (a.shape[0] if a.ndim == 2 else 0)
            c = cols if cols is not None else (a.shape[1] if a.ndim == 2 else 0)
            return frozen(np.zeros((r, c), dtype=np.int64))
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
        if (rows is not None and a.shape[0] != rows) or (cols is not None and a.shape[1] != cols):
            raise ValueError(f"matrix shape {a.shape} != ({rows}, {cols})")
        return frozen(a % self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return frozen(np.zeros((rows, cols), dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return frozen(np.eye(n, dtype=np.int64))

    def random_matrix(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return frozen(rng.integers(0, self.p, size=(rows, cols), dtype=np.int64))

    def random_invertible(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Uniform-ish invertible matrix as ``L @ U @ P`` (always invertible)."""
        lower = np.tril(rng.integers(0, self.p, size=(n, n), dtype=np.int64), -1)
        lower += np.eye(n, dtype=np.int64)
        upper = np.triu(rng.integers(0, self.p, size=(n, n), dtype=np.int64), 1)
        upper += np.diag(rng.integers(1, self.p, size=n, dtype=np.int64))
        perm = np.eye(n, dtype=np.int64)[rng.permutation(n)]
        return frozen((lower @ upper % self.p) @ perm % self.p)

    # -- arithmetic ---------------------------------------------------

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self._inv[x])

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
        return frozen((a @ b) % self.p)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise ValueError(f"cannot add {a.shape} and {b.shape}")
        return frozen((a + b) % self.p)

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        return frozen((int(c) % self.p) * a % self.p)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return frozen((-a) % self.p)

    # -- elimination --------------------------------------------------

    def rref(self, m: np.ndarray, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
        """Reduced row-echelon form and pivot columns.

        Only the first ``ncols`` columns are eligible as pivots (the rest
        are carried along, as for an augmented matrix).
        """
        p = self.p
        a = np.array(m, dtype=np.int64) % p
        rows, cols = a.shape
        limit = cols if ncols is None else ncols
        pivots: list[int] = []
        r = 0
        for c in range(limit):
            if r == rows:
                break
            nz = np.flatnonzero(a[r:, c])
            if nz.size == 0:
                continue
            k = r + int(nz[0])
            if k != r:
                a[[r, k]] = a[[k, r]]
            a[r] = a[r] * self._inv[a[r, c]] % p
            col = a[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
            pivots.append(c)
            r += 1
        return frozen(a), pivots

    def rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        return len(self.rref(m)[1])

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """Canonical solution of ``a @ x = b`` (free variables zero), or None."""
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
        n = a.shape[1]
        if a.shape[0] == 0:
            return self.zeros(n, b.shape[1])
        aug = np.concatenate([a, b], axis=1)
        r, pivots = self.rref(aug, ncols=n)
        k = len(pivots)
        if np.any(r[k:, n:]):
            return None
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        for i, c in enumerate(pivots):
            x[c] = r[i, n:]
        return frozen(x)

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns form a basis of ``{v : m v = 0}``."""
        cols = m.shape[1]
        if m.shape[0] == 0:
            return self.eye(cols)
        r, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in set(pivots)]
        basis = np.zeros((cols, len(free)), dtype=np.int64)
        for j, f in enumerate(free):
            basis[f, j] = 1
            for i, c in enumerate(pivots):
                basis[c, j] = (-r[i, f]) % self.p
        return frozen(basis)

    def image_basis(self, m: np.ndarray) -> np.ndarray:
        """The pivot columns of ``m``: a basis of its column space."""
        if m.size == 0:
            return self.zeros(m.shape[0], 0)
        _, pivots = self.rref(m)
        return frozen(np.array(m[:, pivots], dtype=np.int64).reshape(m.shape[0], len(pivots)))

    def coimage_basis(self, m: np.ndarray) -> np.ndarray:
        """Unit vectors at the pivot columns of ``m``; a complement of its kernel."""
        cols = m.shape[1]
        pivots = self.rref(m)[1] if m.size else []
        return frozen(np.eye(cols, dtype=np.int64)[:, pivots].reshape(cols, len(pivots)))

    def complement_basis(self, basis: np.ndarray) -> np.ndarray:
        """Unit vectors completing the column span of ``basis`` to the whole space."""
        n = basis.shape[0]
        taken = set(self.rref(basis.T)[1]) if basis.size else set()
        keep = [j for j in range(n) if j not in taken]
        return frozen(np.eye(n, dtype=np.int64)[:, keep].reshape(n, len(keep)))

    def inverse(self, m: np.ndarray) -> np.ndarray | None:
        if m.shape[0] != m.shape[1]:
            return None
        x = self.solve(m, self.eye(m.shape[0]))
        return x

    def is_invertible(self, m: np.ndarray) -> bool:
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]


@lru_cache(maxsize=None)
def field(p: int) -> PrimeField:
    return PrimeField(p)


# -- linear systems over unknown matrix blocks ---------------------------


class LinearSystem:
    """Equations ``sum_k L_k X_k R_k = C`` in unknown matrices ``X_k``.

    Unknowns are addressed by hashable keys. The system is vectorised with
    Kronecker products and solved one connected component at a time, so
    decoupled blocks (e.g. different degrees) never meet in one matrix.
    """

    def __init__(self, fld: PrimeField):
        self.field = fld
        self.shapes: dict[Hashable, tuple[int, int]] = {}
        self._equations: list[tuple[list[tuple[np.ndarray, Hashable, np.ndarray]], np.ndarray]] = []
        self.inconsistent = False

    def unknown(self, key: Hashable, rows: int, cols: int) -> None:
        if key in self.shapes and self.shapes[key] != (rows, cols):
            raise ValueError(f"unknown {key!r} redeclared with another shape")
        self.shapes[key] = (rows, cols)

    def equation(self, terms: Iterable[tuple[np.ndarray | None, Hashable, np.ndarray | None]], rhs: np.ndarray) -> None:
        """Add ``sum L X R = rhs``; ``None`` stands for an identity factor."""
        if rhs.size == 0:
            return
        live = []
        for left, key, right in terms:
            r, c = self.shapes[key]
            left = self.field.eye(r) if left is None else left
            right = self.field.eye(c) if right is None else right
            if left.shape != (rhs.shape[0], r) or right.shape != (c, rhs.shape[1]):
                raise ValueError(f"term for {key!r} has shape mismatch")
            if r == 0 or c == 0 or not left.any() or not right.any():
                continue
            live.append((left, key, right))
        if not live:
            if rhs.any():
                self.inconsistent = True
            return
        self._equations.append((live, rhs))

    def _components(self) -> list[tuple[list[Hashable], list[int]]]:
        parent: dict[Hashable, Hashable] = {k: k for k in self.shapes}

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for terms, _ in self._equations:
            keys = [k for _, k, _ in terms]
            for k in keys[1:]:
                a, b = find(keys[0]), find(k)
                if a != b:
                    parent[a] = b
        groups: dict[Hashable, list[Hashable]] = {}
        for k in self.shapes:
            groups.setdefault(find(k), []).append(k)
        eqs: dict[Hashable, list[int]] = {}
        for i, (terms, _) in enumerate(self._equations):
            eqs.setdefault(find(terms[0][1]), []).append(i)
        return [(keys, eqs.get(root, [])) for root, keys in groups.items()]

    def _assemble(self, keys: Sequence[Hashable], eq_ids: Sequence[int]) -> tuple[np.ndarray, np.ndarray, dict]:
        offsets = {}
        n = 0
        for k in keys:
            offsets[k] = n
            r, c = self.shapes[k]
            n += r * c
        blocks, rhs = [], []
        for i in eq_ids:
            terms, c = self._equations[i]
            m = np.zeros((c.size, n), dtype=np.int64)
            for left, key, right in terms:
                r, cc = self.shapes[key]
                # row-major vec: vec(L X R) = (L kron R^T) vec(X)
                m[:, offsets[key]:offsets[key] + r * cc] += np.kron(left, right.T)
            blocks.append(m % self.field.p)
            rhs.append(c.reshape(-1, 1))
        if blocks:
            return np.concatenate(blocks), np.concatenate(rhs), offsets
        return np.zeros((0, n), dtype=np.int64), np.zeros((0, 1), dtype=np.int64), offsets

    def _unpack(self, vec: np.ndarray, keys, offsets, out: dict) -> None:
        for k in keys:
            r, c = self.shapes[k]
            o = offsets[k]
            out[k] = frozen(np.array(vec[o:o + r * c], dtype=np.int64).reshape(r, c))

    def solve(self) -> dict[Hashable, np.ndarray] | None:
        """Canonical solution (free variables zero), or None if inconsistent."""
        space = self.solution_space()
        return None if space is None else space[0]

    def solution_space(self) -> tuple[dict[Hashable, np.ndarray], list[dict[Hashable, np.ndarray]]] | None:
        """``(particular, basis)`` with basis spanning the homogeneous solutions."""
        if self.inconsistent:
            return None
        fld = self.field
        particular: dict[Hashable, np.ndarray] = {}
        basis: list[dict[Hashable, np.ndarray]] = []
        for keys, eq_ids in self._components():
            a, b, offsets = self._assemble(keys, eq_ids)
            x = fld.solve(a, b)
            if x is None:
                return None
            self._unpack(x[:, 0], keys, offsets, particular)
            kern = fld.kernel_basis(a)
            for j in range(kern.shape[1]):
                direction: dict[Hashable, np.ndarray] = {}
                self._unpack(kern[:, j], keys, offsets, direction)
                basis.append(direction)
        return particular, basis
