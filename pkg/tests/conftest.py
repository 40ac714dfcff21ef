"""Shared helpers: an independent pure-Python rank oracle and sequence generators."""

from __future__ import annotations

import itertools


def oracle_rank(rows, p):
    """Rank of a list-of-lists matrix mod p by plain Gaussian elimination."""
    m = [[int(x) % p for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    rank, cols = 0, len(m[0])
    for c in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def oracle_product(a, b, p):
    return [[sum(int(a[i][k]) * int(b[k][j]) for k in range(len(b))) % p for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def oracle_exact(seq) -> bool:
    """Exactness of an n-Σ-sequence from degreewise ranks, independent of the package's elimination."""
    n, p, sh = seq.n, seq.p, seq.shift
    degrees = set()
    for x in seq.objects:
        degrees.update(x.support)
    for i in range(n):
        for d in degrees:
            dim = seq.objects[i].dim(d)
            if dim == 0:
                continue
            out = seq.maps[i].block(d).tolist()
            inc = seq.maps[i - 1].block(d).tolist() if i else seq.maps[-1].block(d + sh).tolist()
            r_out = oracle_rank(out, p) if out and out[0] else 0
            r_in = oracle_rank(inc, p) if inc and inc[0] else 0
            if inc and inc[0] and out:
                comp = oracle_product(out, inc, p)
                if any(any(r) for r in comp):
                    return False
            if r_in + r_out != dim:
                return False
    return True


def all_matrices(rows, cols, p):
    for ents in itertools.product(range(p), repeat=rows * cols):
        yield [list(ents[r * cols:(r + 1) * cols]) for r in range(rows)]


ACCEPTANCE: dict[str, str] = {}


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
            terminalreporter.write_line(ACCEPTANCE[key])
