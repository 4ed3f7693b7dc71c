from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hfkn.complex import (
    CurvedComplex,
    GradedDims,
    NotCurved,
    RingSpec,
    curvature,
    gaussian_cancel,
    graded_homology,
    snf_homology,
    tensor,
    two_step_homology,
)
from hfkn.hfk import builtin, cfk_n
from hfkn.kr import BraidDiagram, crossing_complex, edge_ring
from hfkn.ring import MultiPoly

U = MultiPoly.var("U1")
QU = RingSpec(("U1",), {"U1": (2,)})
FLAT = RingSpec(("U1", "U2", "V1", "V2"), {v: (0,) for v in ("U1", "U2", "V1", "V2")})


def _koszul(ring, a, b, tag):
    return CurvedComplex(ring, [(f"x{tag}", (0,)), (f"y{tag}", (0,))],
                         {(f"x{tag}", f"y{tag}"): a, (f"y{tag}", f"x{tag}"): b},
                         curvature=a * b, parity={f"x{tag}": 0, f"y{tag}": 1}, check=False)


def test_curvature_unknot_master_is_zero():
    assert curvature(builtin("unknot-punctured").complex) == MultiPoly()


def test_curvature_two_components():
    U1, U2, V1, V2 = (MultiPoly.var(v) for v in ("U1", "U2", "V1", "V2"))
    C = tensor(_koszul(FLAT, U1 - U2, V1, 1), _koszul(FLAT, U2 - U1, V2, 2))
    assert curvature(C) == (U1 - U2) * V1 + (U2 - U1) * V2


def test_curvature_rejects_stray_entry():
    C = CurvedComplex(QU, [("a", (0,)), ("b", (2,)), ("c", (4,))],
                      {("a", "b"): 1, ("b", "c"): U}, check=False)
    with pytest.raises(NotCurved):
        curvature(C)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_snf_cone_of_nU_n(n):
    C = CurvedComplex(QU, [("x", (0,)), ("y", (1 - 2 * n,))], {("x", "y"): n * U**n},
                      parity={"x": 0, "y": 1})
    M = snf_homology(C)
    assert [s.exponent for s in M.summands] == [n]


def test_snf_zero_differential_is_free():
    C = CurvedComplex(QU, [(f"g{i}", (i,)) for i in range(4)])
    M = snf_homology(C)
    assert M.free_rank == 4 and not M.torsion


def test_cfk_n_unknot_shape():
    for n in (1, 2, 4):
        K = cfk_n(builtin("unknot-punctured"), n)
        assert len(K.generators) == 2
        (entry,) = K.differential.values()
        assert entry == n * U**n
        H = graded_homology(K, cutoff=max(g[0] for g in K.gradings.values()) + 2 * n)
        degs = sorted(k[0] for k in H.table)
        assert H.total() == n and all(b - a == 2 for a, b in zip(degs, degs[1:]))


def test_tensor_of_unknots_has_n_squared():
    for n in (1, 2, 3):
        K = cfk_n(builtin("unknot-punctured"), n)
        U2 = RingSpec(("U1", "U2"), {"U1": (2,), "U2": (2,)})
        K2 = K.rename_variables({"U1": "U2"}, U2)
        T = tensor(K.substitute({}, U2), K2)
        top = max(g[0] for g in T.gradings.values())
        assert graded_homology(T, cutoff=top + 4 * n).total() == n * n


def test_graded_homology_empty():
    assert graded_homology(CurvedComplex(QU, []), cutoff=10).table == {}


def test_trefoil_cfk2_total_matches_snf():
    K = cfk_n(builtin("trefoil-punctured"), 2)
    top = max(g[0] for g in K.gradings.values())
    assert graded_homology(K, cutoff=top + 8).total() == 4
    M = snf_homology(gaussian_cancel(K))
    assert M.total_dim() == 4


def test_gaussian_cancel_leaves_unit_free_complex_alone():
    C = CurvedComplex(QU, [("x", (0,)), ("y", (1,))], {("x", "y"): U}, parity={"x": 0, "y": 1})
    G = gaussian_cancel(C)
    assert G.generators == C.generators and G.differential == C.differential


def test_gaussian_cancel_on_positive_crossing_square():
    D = BraidDiagram.from_word([1, 1, 1], 2)
    R = edge_ring(D)
    C = crossing_complex(D.vertices[0], R, None)
    assert any(c == MultiPoly(1) for c in C.differential.values())
    G = gaussian_cancel(C)
    assert len(G.generators) == 2
    # d_+ has degree (2,2,0) and d_v (0,0,2); both forms below see one degree
    forms = [(1, 0, 1), (1, -1, 0)]
    assert graded_homology(C, 12, forms).table == graded_homology(G, 12, forms).table


def test_two_step_with_trivial_second_differential():
    K = cfk_n(builtin("trefoil-punctured"), 3)
    top = max(g[0] for g in K.gradings.values())
    a = graded_homology(K, cutoff=top + 6)
    b = two_step_homology(K.replace(generators=[(g, K.gradings[g] + (0,)) for g in K.generators],
                                    ring=RingSpec(("U1",), {"U1": (2, 0)})),
                          split_coord=1, cutoff=top + 6, forms=[(1, 0)])
    assert a.table == b.table


def test_json_roundtrip_bit_exact():
    K = cfk_n(builtin("trefoil-punctured"), 3)
    text = K.to_json()
    assert CurvedComplex.from_json(text).to_json() == text


def test_graded_dims_poincare_and_shift():
    G = GradedDims({(Fraction(-1),): 1, (Fraction(1),): 2})
    assert G.total() == 3
    assert G.shifted((2,)).table == {(Fraction(1),): 1, (Fraction(3),): 2}


# random direct sums of cones and commuting squares over Q[U]
@st.composite
def small_complexes(draw):
    gens, diff, par = [], {}, {}
    for i in range(draw(st.integers(1, 4))):
        kind = draw(st.sampled_from(["point", "cone", "square"]))
        base = 2 * draw(st.integers(0, 4))
        if kind == "point":
            gens.append((f"p{i}", (base,)))
            par[f"p{i}"] = 0
        elif kind == "cone":
            e, c = draw(st.integers(0, 3)), draw(st.integers(1, 3))
            gens += [(f"x{i}", (base,)), (f"y{i}", (base - 1 - 2 * e,))]
            diff[(f"x{i}", f"y{i}")] = c * U**e
            par.update({f"x{i}": 0, f"y{i}": 1})
        else:
            e, f = draw(st.integers(0, 2)), draw(st.integers(0, 2))
            x, y, z, w = (f"{t}{i}" for t in "xyzw")
            gens += [(x, (base,)), (y, (base - 1 - 2 * e,)), (z, (base - 1 - 2 * f,)),
                     (w, (base - 2 - 2 * e - 2 * f,))]
            diff.update({(x, y): U**e, (x, z): U**f, (y, w): U**f, (z, w): -(U**e)})
            par.update({x: 0, y: 1, z: 1, w: 0})
    return CurvedComplex(QU, gens, diff, parity=par)


@settings(max_examples=40, deadline=None)
@given(small_complexes())
def test_gaussian_cancel_preserves_graded_homology(C):
    cut = 30
    assert graded_homology(C, cut).table == graded_homology(gaussian_cancel(C), cut).table
