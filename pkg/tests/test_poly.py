import pytest
from hypothesis import given, settings, strategies as st

from hfkn.poly import (
    BRAIDS,
    BadWord,
    HomflyValue,
    PoleAtSpecialization,
    braid_closure,
    homfly,
    parse_braid,
    quantum_int,
    skein_check,
    sln_specialize,
)
from hfkn.ring import LaurentPoly, parse_laurent

q, a = LaurentPoly.var("q"), LaurentPoly.var("a")


def _value(P):
    """Numerator over (q - q^-1)^zpow, as a pair for comparison."""
    P = P.normalized()
    return P.numerator, P.zpow


def test_quantum_int():
    assert quantum_int(1) == LaurentPoly(1)
    assert quantum_int(2) == q + q**-1
    assert quantum_int(3) == q**2 + 1 + q**-2


def test_parse_braid():
    assert parse_braid("strands=2 word=1,1,1") == (2, [1, 1, 1])
    assert parse_braid("strands=3 word=") == (3, [])
    with pytest.raises(BadWord):
        parse_braid("word=1")


def test_closure_shapes():
    assert len(braid_closure([], 1).crossings) == 0
    D = braid_closure([1], 2)
    assert len(D.crossings) == 1 and D.components == 1
    T = braid_closure([1, 1, 1], 2)
    assert len(T.crossings) == 3 and T.components == 1 and T.writhe == 3
    assert braid_closure([1, 1], 2).components == 2
    with pytest.raises(BadWord):
        braid_closure([2], 2)


def test_unknot_and_unlink():
    P = homfly(braid_closure([], 1))
    assert _value(P) == (a - a**-1, 1)
    assert _value(homfly(braid_closure([], 1), reduced=True)) == (LaurentPoly(1), 0)
    assert _value(homfly(braid_closure([1], 2))) == (a - a**-1, 1)
    assert _value(homfly(braid_closure([], 2))) == ((a - a**-1) ** 2, 2)


def test_trefoil_by_hand():
    # a P(L+) - a^-1 P(L-) = z P(L0) at one crossing of σ1³: L- is an unknot,
    # L0 the Hopf link; at a crossing of σ1², L- is the 2-unlink, L0 an unknot
    O = HomflyValue(a - a**-1, 1)
    O2 = HomflyValue((a - a**-1) ** 2, 2)
    hopf = (O2.times(a**-1) + O.times_z()).times(a**-1)
    tref = (O.times(a**-1) + hopf.times_z()).times(a**-1)
    assert homfly(braid_closure([1, 1], 2)) == hopf
    assert homfly(braid_closure([1, 1, 1], 2)) == tref
    red = homfly(braid_closure([1, 1, 1], 2), reduced=True).laurent
    assert red == a**-2 * q**2 + a**-2 * q**-2 - a**-4


@pytest.mark.parametrize("name", sorted(BRAIDS))
def test_skein_identity_everywhere(name):
    s, w = BRAIDS[name]
    D = braid_closure(w, s)
    assert all(skein_check(D, i) for i in range(len(D.crossings)))


def test_specialisations():
    U = homfly(braid_closure([], 1))
    for n in (1, 2, 3, 5):
        assert sln_specialize(U, n) == quantum_int(n)
    T = homfly(braid_closure([1, 1, 1], 2), reduced=True)
    assert sln_specialize(T, 0, reduced=True) == q**2 - 1 + q**-2
    with pytest.raises(PoleAtSpecialization):
        sln_specialize(U, 0)


@pytest.mark.parametrize("name", ["trefoil", "figure-eight", "5_2", "T2,5"])
def test_reduced_at_one_is_one(name):
    s, w = BRAIDS[name]
    assert sln_specialize(homfly(braid_closure(w, s), reduced=True), 1, reduced=True) == LaurentPoly(1)


def test_figure_eight_amphichiral():
    P = homfly(braid_closure([1, -2, 1, -2], 3), reduced=True).laurent
    assert P == P.subs({"a": a**-1})


def test_parse_laurent_specialised_value():
    assert parse_laurent("q^-2 + 1 + q^2") == quantum_int(3)


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=5)


@settings(max_examples=30, deadline=None)
@given(words)
def test_markov_conjugation_invariance(w):
    # conjugating by σ1 and a positive stabilisation keep the link type
    P = homfly(braid_closure(w, 3))
    assert homfly(braid_closure([1] + w + [-1], 3)) == P
    assert homfly(braid_closure(w + [3], 4)) == P
