import itertools
from fractions import Fraction

import pytest

from hfkn.kr import (
    BraidDiagram,
    conjecture_grading,
    crossing_complex,
    edge_ring,
    euler_char,
    is_null_homotopy,
    kr_complex,
    kr_homology,
    null_homotopies,
    p_pair,
    parse_braid_diagram,
    power_homotopies,
    square_is,
)
from hfkn.poly import braid_closure, homfly, quantum_int, sln_specialize
from hfkn.ring import LaurentPoly, MultiPoly

q = LaurentPoly.var("q")
TREFOIL = BraidDiagram.from_word([1, 1, 1], 2)
UNKNOT = BraidDiagram.from_word([], 1)


def test_parse_braid_diagram():
    D = parse_braid_diagram("strands=2 word=1,1,1 mark=2")
    assert D.strands == 2 and D.crossings == 3 and D.word == (1, 1, 1)
    assert parse_braid_diagram("strands=2 word=1,1,1") == TREFOIL
    assert D != TREFOIL


def test_edge_rings():
    R = edge_ring(UNKNOT)
    assert R.variables == ("U1",) and not R.relations
    R = edge_ring(TREFOIL)
    # the marked closure arc is split, adding one edge to the 6 of the plain graph
    assert len(R.variables) == 7 and len(R.relations) == 3 and len(R.surviving) == 4
    R = edge_ring(BraidDiagram.from_word([1, 1], 2))
    assert len(R.variables) == 5 and len(R.relations) == 2


def test_p_pair_examples():
    R = edge_ring(TREFOIL)
    v = TREFOIL.vertices[0]
    a1, b1, b2 = (MultiPoly.var(f"U{i}") for i in (v.a1, v.b1, v.b2))
    assert p_pair(v, 1, R) == (MultiPoly(), MultiPoly())
    assert p_pair(v, 2, R) == (2 * (a1 - b2), MultiPoly(-2))
    assert p_pair(v, 3, R) == (R.reduce(3 * (b1 + b2) * (a1 - b2)), R.reduce(-3 * (b1 + b2)))


def test_p_pair_at_a_kink_is_defined():
    D = BraidDiagram.from_word([1], 2)
    R = edge_ring(D)
    (v,) = D.vertices
    p1, p2 = p_pair(v, 2, R)
    assert p2 == MultiPoly(-2)


def test_crossing_squares():
    R = edge_ring(TREFOIL)
    v = TREFOIL.vertices[0]
    C = crossing_complex(v, R, None)
    assert C.curvature == MultiPoly()
    D = BraidDiagram.from_word([-1, -1, -1], 2)
    R2 = edge_ring(D)
    for n in (1, 2, 3):
        Cn = crossing_complex(D.vertices[0], R2, n)
        assert Cn.square() or Cn.curvature == MultiPoly()
    C2 = crossing_complex(v, R, 1)
    back = [c for (s, t), c in C2.differential.items() if C2.entry_degree(s, t, c)[1] < 0]
    assert sorted(map(str, back)) == sorted(map(str, p_pair(v, 2, R)))


def test_unknot_middle_generator():
    K = kr_complex(UNKNOT, "middle", None)
    assert K.complex.generators == ("o",)
    assert K.complex.gradings["o"] == (1, 0, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unknot_sl_n(n):
    H = kr_homology(kr_complex(UNKNOT, "unreduced", n))
    assert H.total() == n
    assert euler_char(H) == quantum_int(n)
    R = kr_homology(kr_complex(UNKNOT, "reduced", n))
    assert R.total() == 1 and euler_char(R) == LaurentPoly(1)


def test_unknot_reduced_homfly():
    H = kr_homology(kr_complex(UNKNOT, "reduced", None))
    assert H.total() == 1 and euler_char(H) == LaurentPoly(1)


def test_trefoil_sl2():
    H = kr_homology(kr_complex(TREFOIL, "unreduced", 2), cutoff=40)
    assert H.total() == 4 and not H.truncated
    conj = conjecture_grading(H, 2)
    lo = min(conj)
    assert {k - lo: v for k, v in conj.items()} == {0: 2, 2: 2}


def test_quotient_agrees_with_direct():
    D = BraidDiagram.from_word([1, 1], 2)
    K = kr_complex(D, "unreduced", 2)
    a = kr_homology(K, method="auto")
    b = kr_homology(K, cutoff=max(k[0] for k in a.table) + 2, method="direct")
    cut = max(k[0] for k in a.table)
    assert {k: v for k, v in b.table.items() if k[0] <= cut} == a.table


def test_homotopies_verify():
    K = kr_complex(TREFOIL, "unreduced", 2)
    for x, H in null_homotopies(K):
        assert is_null_homotopy(K, H, x)
    powers = power_homotopies(K)
    assert set(powers) == set(K.ring.surviving)
    for s, (k, H) in powers.items():
        assert is_null_homotopy(K, H, K.complex.ring.reduce(MultiPoly.var(s) ** k))


@pytest.mark.parametrize("word,strands", [([], 1), ([1, 1], 2), ([-1, -1], 2),
                                          ([1, 1, 1], 2), ([-1, -1, -1], 2), ([1, -2], 3)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_euler_characteristic(word, strands, n):
    D = BraidDiagram.from_word(word, strands)
    H = kr_homology(kr_complex(D, "unreduced", n))
    assert euler_char(H) == sln_specialize(homfly(braid_closure(word, strands)), n)


def _words(max_len):
    for length in range(max_len + 1):
        if length == 0:
            yield [], 1
        for w in itertools.product([1, -1], repeat=length):
            if length:
                yield list(w), 2
        for w in itertools.product([1, -1, 2, -2], repeat=length):
            if {abs(g) for g in w} == {1, 2}:
                yield list(w), 3


# the exhaustive sweep over all words of length <= 3 runs in the acceptance suite
SAMPLE = list(_words(2)) + [([1, 1, 1], 2), ([1, -1, 1], 2), ([1, -2, 1], 3), ([-2, -1, 2], 3)]


@pytest.mark.parametrize("flavor", ["middle", "reduced", "unreduced"])
def test_total_square_vanishes(flavor):
    for word, strands in SAMPLE:
        D = BraidDiagram.from_word(word, strands)
        for n in (None, 1, 2, 3):
            assert square_is(kr_complex(D, flavor, n), 0), (word, n)


def test_parity_is_koszul():
    K = kr_complex(TREFOIL, "unreduced", 2)
    C = K.complex
    for g in C.generators:
        q_, h, v = C.gradings[g]
        assert Fraction(v - h, 2).denominator == 1
        assert C.parity[g] == int((v - h) / 2) % 2
