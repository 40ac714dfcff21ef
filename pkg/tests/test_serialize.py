from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from nangle import cluster as C
from nangle import graded as G
from nangle import sequences as S
from nangle import serialize as Z
from nangle.graded import GradedObject
from nangle.rng import generator


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2 ** 63), n=st.integers(3, 6), p=st.sampled_from([2, 3, 5, 7]))
def test_round_trip(seed, n, p):
    rng = generator(seed)
    s = S.random_exact(n, 3, (-2, 2), rng, p)
    t = S.random_sequence(n, 2, (-2, 2), rng, p)
    m = S.SeqMorphism(s, s, tuple(G.identity(x, p) for x in s.objects))
    for v in (s, t, m, s.objects[0], s.maps[0], {"s": s, "xs": [1, "a b", t]}):
        assert Z.loads(Z.dumps(v)) == v


def test_splice_round_trip():
    a, _, _, _ = C.random_splice_triple(generator(1), 5)
    assert Z.loads(Z.dumps(a)) == a


def test_printing_is_canonical():
    s = S.random_exact(4, 3, (-2, 2), generator(2), 5)
    text = Z.dumps(s)
    assert Z.dumps(Z.loads(text)) == text


def test_object_format():
    assert Z.dumps(GradedObject({-1: 2, 3: 1})) == "nangle 1\nobject -1:2 3:1\n"
    assert Z.loads("# comment\nnangle 1\n\nobject\n") == G.ZERO


@pytest.mark.parametrize("text", [
    "",
    "nangle 2\nobject\n",
    "nangle 1\nthing\n",
    "nangle 1\nobject 0:0\n",
    "nangle 1\nobject 1:1 0:1\n",
    "nangle 1\nmap p=5\nobject 0:1\nobject 0:1\nend\n",
    "nangle 1\nmap p=5\nobject 0:1\nobject 0:1\nblock 0 1x1\n7\nend\n",
    "nangle 1\nmap p=5\nobject 0:1\nobject 0:1\nblock 0 1x1\nx\nend\n",
    "nangle 1\nint 3\nint 4\n",
    "nangle 1\nstr nope\n",
])
def test_malformed_input(text):
    with pytest.raises(Z.ParseError):
        Z.loads(text)


def test_shape_mismatch_in_nseq():
    text = ("nangle 1\nnseq n=3 p=5 shift=1\n"
            "map p=5\nobject 0:1\nobject 0:1\nblock 0 1x1\n1\nend\n"
            "map p=5\nobject 0:1\nobject\nend\n"
            "map p=5\nobject\nobject 0:1\nend\nend\n")
    with pytest.raises(Z.ParseError):
        Z.loads(text)
