"""Acceptance criteria, one test per criterion, each printing a pass/fail line.

All checks are exact (finite-field arithmetic); counts are the required
minimum sample sizes.
"""

from __future__ import annotations

import pytest

from nangle import cluster as C
from nangle import engine as E
from nangle import graded as G
from nangle import sequences as S
from nangle import serialize as Z
from nangle.cli import main
from nangle.errors import NotExactError
from nangle.graded import GradedObject
from nangle.rng import generator
from nangle.suite import octa_input, random_square

from conftest import oracle_exact, record

NS = (3, 4, 5, 6)
PRIMES = (2, 5)
SEED = 20240601


def corpus(count: int):
    """Seeded mix of exact, perturbed and random sequences over n in 3..6 and p in {2, 5}."""
    out = []
    for i in range(count):
        rng = generator(SEED, "corpus", i)
        n, p = NS[i % 4], PRIMES[(i // 4) % 2]
        kind = i % 3
        s = S.random_exact(n, 3, (-2, 2), rng, p)
        if kind == 1:
            s = S.perturb(s, rng)
        elif kind == 2:
            s = S.random_sequence(n, 2, (-2, 2), rng, p)
        out.append(s)
    return out


@pytest.fixture(scope="module")
def sequences():
    return corpus(1000)


@pytest.fixture(scope="module")
def octahedra():
    runs = {}
    for n in NS:
        runs[n] = []
        for t in range(200):
            rng = generator(SEED, f"octa{n}", t)
            a, b, c, phi2 = octa_input(n, 5 if t % 2 else 2, rng, 3)
            try:
                runs[n].append((a, b, c, phi2, E.higher_octahedron(a, b, c, phi2, rng=rng)))
            except Exception as exc:  # recorded as a failure below
                runs[n].append((a, b, c, phi2, exc))
    return runs


def test_1_exactness_oracle(sequences):
    bad = 0
    exact = 0
    for s in sequences:
        ex = S.is_exact(s)
        exact += ex
        try:
            dec = S.decompose_exact(s)
            decomposed = S.conjugate(dec.model, dec.witness.components)[0] == s
        except NotExactError:
            decomposed = False
        bad += not (ex == decomposed == oracle_exact(s))
    ok = bad == 0 and len(sequences) >= 1000
    record("1 exactness oracle", ok, f"{len(sequences) - bad}/{len(sequences)} agree ({exact} exact)")
    assert ok


def test_2_rotations(sequences):
    bad = 0
    for s in sequences:
        left, right = S.rotate_left(s), S.rotate_right(s)
        bad += not (S.rotate_right(left) == s == S.rotate_left(right))
        bad += S.is_exact(s) != S.is_exact(left) or S.is_exact(s) != S.is_exact(right)
    a = GradedObject({0: 1})
    signs = {n: int(S.rotate_left(S.trivial_seq(a, 0, n, 5)).maps[-1].block(1)[0, 0]) for n in (3, 4)}
    ok = bad == 0 and signs == {3: 4, 4: 1}
    record("2 rotations", ok, f"{bad} violations on {len(sequences)} sequences; last-map sign n=3 -> {signs[3]}, "
           f"n=4 -> {signs[4]} in F_5")
    assert ok


def test_3_completion_and_cone():
    counts = {}
    for n in NS:
        good = 0
        for t in range(200):
            rng = generator(SEED, f"n3n4_{n}", t)
            p = PRIMES[t % 2]
            s, u = S.random_exact(n, 3, (-2, 2), rng, p), S.random_exact(n, 3, (-2, 2), rng, p)
            phi1, phi2 = random_square(s, u, rng)
            try:
                m = E.complete_to_morphism(s, u, phi1, phi2)
                m2, cone = E.cone_completion(s, u, phi1, phi2, rng=rng)
                good += S.is_morphism(m) and S.is_morphism(m2) and S.is_exact(S.mapping_cone(m2))
            except Exception:
                pass
        counts[n] = good
    ok = all(v == 200 for v in counts.values())
    record("3 (N3)/(N4)", ok, ", ".join(f"n={n}: {v}/200" for n, v in counts.items()))
    assert ok


def test_4_reduced_cone(octahedra):
    counts = {}
    for n, runs in octahedra.items():
        good = 0
        for a, b, c, phi2, octa in runs:
            if isinstance(octa, Exception):
                continue
            r = E.reduced_cone(octa.morphism, check=False)
            good += r == octa.reduced and S.is_exact(r) and oracle_exact(r)
        counts[n] = good
    ok = all(v == 200 for v in counts.values())
    record("4 reduced cone", ok, ", ".join(f"n={n}: {v}/200" for n, v in counts.items()))
    assert ok


def test_5_higher_octahedron(octahedra):
    counts = {}
    for n, runs in octahedra.items():
        good = 0
        for a, b, c, phi2, octa in runs:
            if isinstance(octa, Exception):
                continue
            rel = G.compose(c.maps[-1], octa.psis[-1]) == G.compose(a.sigma(a.maps[0]), b.maps[-1])
            good += S.is_morphism(octa.morphism) and S.is_exact(octa.gamma_seq) and rel
        counts[n] = good
    ok = all(v == 200 for v in counts.values())
    record("5 (N4*)", ok, ", ".join(f"n={n}: {v}/200" for n, v in counts.items()))
    assert ok


def test_6_n4_from_n4star():
    good = 0
    for t in range(100):
        rng = generator(SEED, "roundtrip", t)
        n, p = NS[t % 4], PRIMES[(t // 4) % 2]
        s, u = S.random_exact(n, 3, (-2, 2), rng, p), S.random_exact(n, 3, (-2, 2), rng, p)
        phi1, phi2 = random_square(s, u, rng)
        try:
            m, cone = E.n4_from_n4star(s, u, phi1, phi2, rng=rng)
        except Exception:
            continue
        good += cone == S.mapping_cone(m) and S.is_exact(cone)
    ok = good == 100
    record("6 (N4*) => (N4)", ok, f"{good}/100 cones exact with ψ_(2n-5) = [[-Σα1, 0], [Σφ1, βn]]")
    assert ok


def test_7_tr4():
    theta = cartesian = 0
    for t in range(200):
        rng = generator(SEED, "tr4", t)
        p = PRIMES[t % 2]
        a, b, c, phi2 = octa_input(3, p, rng, 3)
        try:
            octa = E.tr4_octahedron(a, b, c, phi2, rng=rng)
        except Exception:
            continue
        psi1 = octa.psis[0]
        theta += (G.compose(psi1, b.maps[1]) == c.maps[1]
                  and G.compose(c.maps[2], psi1) == G.compose(a.sigma(a.maps[0]), b.maps[2]))
        w = E.homotopy_cartesian([a.objects[1], a.objects[2]], [a.maps[1]], [b.objects[1], b.objects[2]],
                                 [b.maps[1]], [phi2, octa.phis[0]], p, 1, rng)
        cartesian += w is not None and S.is_exact(w.angle)
    ok = theta == cartesian == 200
    record("7 TR4 / TR4*", ok, f"Θ and γ3ψ1 = Σα1β3: {theta}/200; homotopy cartesian witness: {cartesian}/200")
    assert ok


def test_8_cluster_pipeline():
    good = iso = 0
    for t in range(50):
        rng = generator(SEED, "cluster", t)
        a, b, c, phi2 = C.random_splice_triple(rng, PRIMES[t % 2], 2)
        try:
            octa = C.n4star_steps(a, b, c, phi2, rng=rng)
        except Exception:
            continue
        A, B, Cq = a.angle, b.angle, c.angle
        phi3, phi4 = octa.phis
        step3 = (G.compose(phi3, A.maps[1]) == G.compose(B.maps[1], phi2)
                 and G.compose(phi4, A.maps[2]) == G.compose(B.maps[2], phi3)
                 and A.maps[3] == G.compose(B.maps[3], phi4))
        step6 = G.compose(Cq.maps[3], octa.psis[2]) == G.compose(G.shift_map(A.maps[0], 2), B.maps[3])
        good += step3 and step6 and S.is_exact(octa.gamma_seq)
        ref = E.higher_octahedron(A, B, Cq, phi2, rng=rng)
        iso += S.are_isomorphic(octa.gamma_seq, ref.gamma_seq)
    ok = good == 50
    record("8 cluster-tilting n=4", ok, f"{good}/50 triples pass Steps 3 and 6; Γ isomorphic to the general "
           f"construction in {iso}/50")
    assert ok


def test_9_cli(tmp_path, capsys):
    trips = 0
    for i in range(1000):
        rng = generator(SEED, "ser", i)
        n, p = NS[i % 4], (2, 3, 5, 7)[i % 4]
        kind = i % 4
        if kind == 0:
            v = S.random_exact(n, 3, (-2, 2), rng, p)
        elif kind == 1:
            v = S.random_sequence(n, 3, (-2, 2), rng, p)
        elif kind == 2:
            s = S.random_exact(n, 3, (-2, 2), rng, p)
            v = S.conjugate(s, [G.random_iso(x, rng, p) for x in s.objects])[1]
        else:
            v = C.random_splice_triple(rng, p, 2)[0]
        trips += Z.loads(Z.dumps(v)) == v
    code_default = main(["check", "--out", str(tmp_path / "report.txt")])
    good = tmp_path / "good.txt"
    main(["gen", "--seed", "11", "--pieces", "3", "--out", str(good)])
    lines = good.read_text().splitlines()
    i = next(k for k, ln in enumerate(lines) if ln.startswith("block"))
    row = lines[i + 1].split(" ")
    row[0] = str((int(row[0]) + 1) % 5)
    lines[i + 1] = " ".join(row)
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    code_bad = main(["check", "--in", str(bad)])
    witness = Z.loads(capsys.readouterr().out)
    parsed = isinstance(witness, dict) and witness["sequence"] == Z.load(str(bad))
    ok = trips == 1000 and code_default == 0 and code_bad == 1 and parsed
    record("9 CLI", ok, f"round trips {trips}/1000; default check exit {code_default}; corrupted fixture exit "
           f"{code_bad} with {'a parseable' if parsed else 'no'} witness")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
