"""Acceptance suite: ten criteria, one summary line each.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
The summary is printed at the end of the pytest session (see conftest.py).
"""
from __future__ import annotations

import itertools
import time

import pytest

from hfkn.complex import gaussian_cancel, graded_homology
from hfkn.hfk import (
    alexander_from_exponents,
    builtin,
    disjoint_union,
    e1_page,
    hfk_n,
    reduced_hfk_n,
    stabilize,
    staircase,
    torus_knot,
    validate_master,
    BUILTINS,
    cfk_n,
)
from hfkn.kr import BraidDiagram, conjecture_grading, euler_char, kr_complex, kr_homology, square_is
from hfkn.poly import BRAIDS, braid_closure, homfly, skein_check, sln_specialize
from hfkn.ring import LaurentPoly
from hfkn.sscheck import (
    cautis_conjecture,
    cautis_total,
    t3_3k1_khovanov,
    t3_3k1_hfk2,
    gorsky_lewark_dim,
    quantum_int,
    ss_step,
)

q = LaurentPoly.var("q")

# criterion number -> list of (ok, text); filled as tests run
RESULTS: dict[int, list] = {}


def record(num: int, ok: bool, text: str) -> bool:
    RESULTS.setdefault(num, []).append((bool(ok), text))
    return bool(ok)


def summary_lines() -> list[str]:
    out = []
    for num in range(1, 11):
        parts = RESULTS.get(num)
        if not parts:
            out.append(f"criterion {num:2d}: NOT RUN")
            continue
        ok = all(p for p, _ in parts)
        detail = "; ".join(t for _, t in parts)
        out.append(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return out


def _shape(P: LaurentPoly) -> tuple:
    """Coefficients with the lowest degree moved to 0."""
    c = {}
    for m, v in P.items():
        c[dict(m).get("q", 0)] = int(v)
    lo = min(c)
    return tuple(sorted((e - lo, v) for e, v in c.items()))


# -- 1 ----------------------------------------------------------------------

def test_criterion_1_unknot():
    t = time.perf_counter()
    ok = True
    for n in range(1, 7):
        r = hfk_n(builtin("unknot"), n)
        degs = sorted(k[0] for k in r.dims.table)
        ok &= r.torsion_exponents == [n] and r.total_dim() == n
        ok &= set(r.dims.table.values()) == {1} and all(b - a == 2 for a, b in zip(degs, degs[1:]))
        ok &= _shape(r.poincare()) == _shape(quantum_int(n))
    dt = time.perf_counter() - t
    assert record(1, ok and dt < 1, f"Q[U]/(U^n) with dims [n] for n=1..6 in {dt:.3f}s")


# -- 2 ----------------------------------------------------------------------

def test_criterion_2_trefoil():
    ok = True
    C = staircase([1, 0, -1], "out_of_odd")
    for n in range(2, 6):
        a = hfk_n(C, n, route="A")
        b = hfk_n(C, n, route="B")
        ok &= a.dims.table == b.dims.table
        (tor,) = [s for s in a.module.summands if s.exponent == n]
        singles = sorted(s.shift[0] for s in a.module.summands if s.exponent == 1)
        centre = tor.shift[0] + (n - 1)
        # expected [n]{2} + [1]{n-1} + [1]{2n-1}: offsets from the [n] centre
        ok &= [s - centre for s in singles] == [n - 3, 2 * n - 3]
        ok &= len(a.module.summands) == 3
    assert record(2, ok, "[n]+[1]+[1] at relative {2},{n-1},{2n-1}, n=2..5; routes A=B")


# -- 3 ----------------------------------------------------------------------

def test_criterion_3_t3():
    ok = True
    for k in range(1, 5):
        r = hfk_n(torus_knot(3, 3 * k + 1, "out_of_odd"), 2)
        ok &= _shape(r.poincare()) == _shape(t3_3k1_hfk2(k))
        ok &= r.total_dim() == 2 + 4 * k
    for n in (3, 4, 5):
        for k in (1, 2, 3):
            ok &= hfk_n(torus_knot(3, 3 * k + 1), n).total_dim() == n + 6 * k
    assert record(3, ok, "HFK_2(T3,3k+1) matches its closed form up to shift k=1..4; dims 2+4k and n+6k")


# -- 4 ----------------------------------------------------------------------

def _c4(n_values):
    bad = []
    for n in n_values:
        for k in range(1, 5):
            r = hfk_n(torus_knot(2, 2 * k + 1), n)
            if _shape(r.poincare()) != _shape(cautis_conjecture(k, n)):
                bad.append((k, n, r.total_dim(), cautis_total(k, n)))
    return bad


def test_criterion_4_low_n():
    bad = _c4((1, 2))
    assert record(4, not bad, "equal to the displayed sum for n=1,2, k<=4")


@pytest.mark.xfail(strict=True, reason="for n >= 3 the displayed sum is the E1 page; HFK_n is smaller")
def test_criterion_4_n3_n4():
    bad = _c4((3, 4))
    # the spectral sequence still connects the two with (1+q^n)-pairs
    paired = all(ss_step(cautis_conjecture(k, n), hfk_n(torus_knot(2, 2 * k + 1), n).poincare(), n).compatible
                 for k in range(1, 5) for n in (3, 4))
    example = ", ".join(f"k={k},n={n}: {h} vs {c}" for k, n, h, c in bad[:2])
    record(4, not bad, f"n=3,4 differ ({example}, ...); ss-compatible with step n: {paired}")
    assert not bad


# -- 5 ----------------------------------------------------------------------

def test_criterion_5_harness():
    ok54 = all(ss_step(t3_3k1_khovanov(k), t3_3k1_hfk2(k), 2).compatible for k in range(1, 5))
    okc = all(ss_step(cautis_conjecture(k, n), hfk_n(torus_knot(2, 2 * k + 1), n).poincare(), n).compatible
              for k in range(1, 4) for n in range(1, 5))
    okg = True
    for n in range(2, 7):
        for k in range(1, 6):
            g, h = gorsky_lewark_dim(k, n), hfk_n(torus_knot(3, 3 * k + 1), n).total_dim()
            okg &= g >= h and (g - h) % 2 == 0
    assert record(5, ok54 and okc and okg,
                  f"Khovanov->HFK_2 for T3,3k+1 {ok54}; Cautis->HFK_n {okc}; GL >= HFK_n mod 2 {okg}")


# -- 6 ----------------------------------------------------------------------

def test_criterion_6_kr():
    ok = True
    O = BraidDiagram.from_word([], 1)
    for n in (2, 3):
        ok &= kr_homology(kr_complex(O, "reduced", n)).total() == 1
        H = kr_homology(kr_complex(O, "unreduced", n))
        P = sum((v * q ** int(k[0]) for k, v in H.table.items()), LaurentPoly())
        ok &= _shape(P) == _shape(quantum_int(n))
    t = time.perf_counter()
    H = kr_homology(kr_complex(BraidDiagram.from_word([1, 1, 1], 2), "unreduced", 2), cutoff=40)
    dt = time.perf_counter() - t
    conj = conjecture_grading(H, 2)
    lo = min(conj)
    ok &= H.total() == 4 == cautis_total(1, 2) and {k - lo: v for k, v in conj.items()} == {0: 2, 2: 2}
    assert record(6, ok and dt <= 300, f"unknot 1 / [n]; sl_2 trefoil dim {H.total()} in {dt:.1f}s")


# -- 7 ----------------------------------------------------------------------

def test_criterion_7_euler():
    ok = True
    cases = {"unknot": ([], 1), "hopf": ([1, 1], 2), "trefoil": ([1, 1, 1], 2)}
    for name, (w, s) in cases.items():
        D = BraidDiagram.from_word(w, s)
        P = homfly(braid_closure(w, s))
        Pr = homfly(braid_closure(w, s), reduced=True)
        for n in (1, 2, 3):
            ok &= euler_char(kr_homology(kr_complex(D, "unreduced", n))) == sln_specialize(P, n)
            if name != "trefoil":
                chi = euler_char(kr_homology(kr_complex(D, "reduced", n)))
                ok &= chi == sln_specialize(Pr, n, reduced=True)
    H = kr_homology(kr_complex(BraidDiagram.from_word([], 1), "reduced", None))
    ok &= euler_char(H) == LaurentPoly(1)
    assert record(7, ok, "chi = sln_specialize(homfly) for unknot/Hopf/trefoil, n=1..3; reduced HOMFLY unknot 1")


# -- 8 ----------------------------------------------------------------------

def test_criterion_8_skein():
    a = LaurentPoly.var("a")
    U = homfly(braid_closure([], 1))
    ok = U.normalized().numerator == a - a**-1 and U.normalized().zpow == 1
    T = homfly(braid_closure([1, 1, 1], 2), reduced=True)
    alex = alexander_from_exponents([1, 0, -1])
    ok &= sln_specialize(T, 0, reduced=True) == sum((c * q ** (2 * e) for e, c in alex.items()), LaurentPoly())
    count = 0
    for name, (s, w) in BRAIDS.items():
        D = braid_closure(w, s)
        for i in range(len(D.crossings)):
            ok &= skein_check(D, i)
            count += 1
    assert record(8, ok, f"P(unknot) exact; P0(trefoil) = Alexander; skein at {count} crossings")


# -- 9 ----------------------------------------------------------------------

def _words3():
    yield [], 1
    for length in range(1, 4):
        for w in itertools.product([1, -1], repeat=length):
            yield list(w), 2
        for w in itertools.product([1, -1, 2, -2], repeat=length):
            if {abs(g) for g in w} == {1, 2}:
                yield list(w), 3


def test_criterion_9_properties():
    parts = {}
    parts["curvature"] = all(validate_master(builtin(n)).ok for n in BUILTINS) and \
        all(validate_master(torus_knot(p, m)).ok for p, m in ((2, 5), (3, 4), (3, 5), (2, 9)))
    sq = True
    for w, s in _words3():
        D = BraidDiagram.from_word(w, s)
        for flavor in ("middle", "reduced", "unreduced"):
            for n in (None, 1, 2, 3):
                sq &= square_is(kr_complex(D, flavor, n), 0)
    parts["d^2=0"] = sq
    u = builtin("unknot")
    parts["union"] = all(hfk_n(disjoint_union(u, u), n).total_dim() == n * n for n in (1, 2, 3, 4))
    parts["stabilize"] = all(
        hfk_n(stabilize(builtin(k), 1), n).dims.table == hfk_n(builtin(k), n).dims.table
        for k in ("unknot", "trefoil", "4_1") for n in (1, 2, 3))
    gc = True
    for k in ("trefoil-punctured", "unknot-punctured"):
        for n in (1, 2, 3):
            K = cfk_n(builtin(k), n)
            cut = max(g[0] for g in K.gradings.values()) + 2 * n
            gc &= graded_homology(K, cut).table == graded_homology(gaussian_cancel(K), cut).table
    parts["cancel"] = gc
    tor, e1 = True, True
    for name in ("unknot", "trefoil", "4_1", "T3,4", "T2,5", "T3,5"):
        for n in (1, 2, 3, 4):
            r = hfk_n(builtin(name), n)
            tor &= all(e <= n for e in r.torsion_exponents)
            e = e1_page(builtin(name), n)
            e1 &= ss_step(e.poincare(), r.poincare(), n, shift=0).compatible
    parts["torsion<=n"] = tor
    parts["E1>=HFK_n"] = e1
    ok = all(parts.values())
    assert record(9, ok, ", ".join(f"{k} {'ok' if v else 'FAIL'}" for k, v in parts.items()))


# -- 10 ---------------------------------------------------------------------

def test_criterion_10_two_bridge():
    ok = True
    for n in (2, 3, 4):
        R = reduced_hfk_n(builtin("trefoil"), n)
        ok &= R.total() == 3 and (n != 2 or len(R.table) == 1)
    dims = hfk_n(builtin("trefoil"), 2).dims.project(0)
    r = 3
    ok &= sorted(dims.values()) == [(r + 1) // 2, (r + 1) // 2]
    assert record(10, ok, "reduced HFK_n(T2,3) dim 3 (one degree at n=2); HFK_2 dims 2+2 (r=3)")


if __name__ == "__main__":
    import sys

    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
