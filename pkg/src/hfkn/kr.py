"""Khovanov-Rozansky complexes of braid closures.

Gradings are ``(q, h, v)``; every edge variable has weight ``(2, 0, 0)``.
Degree conventions (``deg = grading[target] + weight - grading[source]``):

* ``d_+`` (vertex maps) has degree ``(2, 2, 0)``;
* ``d_v`` (edge maps) has degree ``(0, 0, 2)``;
* ``d_-`` (sl_n back-arrows) has degree ``(2n, -2, 0)``.

Both ``d_+`` and ``d_-`` then have degree ``n + 1`` for
``gr_n = q + (n-1)/2 * h``.  The Koszul parity of a generator is
``(v - h)/2 mod 2``, which every differential flips.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complex import (
    CurvedComplex,
    GradedDims,
    RingSpec,
    graded_homology,
    tensor,
    two_step_homology,
)
from .poly import BadWord, parse_braid
from .ring import LaurentPoly, MultiPoly, exact_div

log = logging.getLogger(__name__)

__all__ = [
    "BraidDiagram",
    "Vertex",
    "EdgeRing",
    "KRComplex",
    "parse_braid_diagram",
    "edge_ring",
    "p_pair",
    "crossing_complex",
    "kr_complex",
    "kr_homology",
    "null_homotopies",
    "power_homotopies",
    "is_null_homotopy",
    "euler_char",
    "square_is",
    "conjecture_grading",
    "first_page_homology",
    "gr_n_form",
]

HOMFLY = "homfly"


@dataclass(frozen=True)
class Vertex:
    """A crossing: incoming edges b1, b2 and outgoing a1, a2 (left, right)."""

    index: int
    sign: int
    b1: int
    b2: int
    a1: int
    a2: int


@dataclass(frozen=True)
class BraidDiagram:
    """Closed braid viewed as an oriented graph with one marked bivalent vertex.

    Edge 1 is the edge leaving the marked vertex; the edge entering it is
    ``marked_in``.
    """

    strands: int
    word: tuple
    n_edges: int
    vertices: tuple
    marked_in: int
    marked_out: int = 1

    @property
    def writhe(self) -> int:
        return sum(v.sign for v in self.vertices)

    @property
    def crossings(self) -> int:
        return len(self.vertices)

    @classmethod
    def from_word(cls, word: Sequence[int], strands: int, mark: int = 1) -> "BraidDiagram":
        """Build the closure graph.  ``mark`` is a 1-based arc of the closure:
        arcs ``1..strands`` are the closing arcs at the top (positions), then
        two arcs per crossing in word order (left, right)."""
        word = tuple(int(g) for g in word)
        if strands < 1:
            raise BadWord("need at least one strand")
        for g in word:
            if g == 0 or abs(g) >= strands:
                raise BadWord(f"generator {g} out of range for {strands} strands")
        cur = list(range(strands))
        nxt = strands
        raw = []
        for g in word:
            i = abs(g) - 1
            b1, b2 = cur[i], cur[i + 1]
            a1, a2 = nxt, nxt + 1
            nxt += 2
            raw.append((1 if g > 0 else -1, b1, b2, a1, a2))
            cur[i], cur[i + 1] = a1, a2
        close = {cur[j]: j for j in range(strands)}
        raw = [(s,) + tuple(close.get(x, x) for x in e) for s, *e in raw]
        arcs = sorted({x for r in raw for x in r[1:]} | set(range(strands)))
        # connectivity of the underlying graph
        parent = {x: x for x in arcs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for _, b1, b2, a1, a2 in raw:
            for y in (b2, a1, a2):
                parent[find(y)] = find(b1)
        if len({find(x) for x in arcs}) != 1:
            raise BadWord("braid closure diagram is not connected")
        if not 1 <= mark <= len(arcs):
            raise BadWord(f"mark {mark} out of range 1..{len(arcs)}")
        marked_arc = arcs[mark - 1]
        # edge numbering: marked outgoing part is 1, remaining arcs follow,
        # the marked incoming part is last
        number = {marked_arc: 1}
        k = 2
        for x in arcs:
            if x != marked_arc:
                number[x] = k
                k += 1
        marked_in = k
        verts = []
        for idx, (s, b1, b2, a1, a2) in enumerate(raw):
            # marked arc: the tail end (where it leaves a crossing) is the incoming part
            a1n = marked_in if a1 == marked_arc else number[a1]
            a2n = marked_in if a2 == marked_arc else number[a2]
            verts.append(Vertex(idx, s, number[b1], number[b2], a1n, a2n))
        if not raw:
            # a single closed loop through the marked vertex
            return cls(strands, word, 1, (), 1, 1)
        return cls(strands, word, marked_in, tuple(verts), marked_in, 1)


def parse_braid_diagram(text: str) -> BraidDiagram:
    """Parse ``"strands=2 word=1,1,1 mark=1"``."""
    strands, word = parse_braid(text)
    fields = dict(p.split("=", 1) for p in text.replace(";", " ").split() if "=" in p)
    mark = int(fields["mark"]) if fields.get("mark", "").strip() else 1
    return BraidDiagram.from_word(word, strands, mark)


def _u(i: int) -> MultiPoly:
    return MultiPoly.var(f"U{i}")


def L_of(v: Vertex) -> MultiPoly:
    return _u(v.a1) + _u(v.a2) - _u(v.b1) - _u(v.b2)


def Q_of(v: Vertex) -> MultiPoly:
    return _u(v.a1) * _u(v.a2) - _u(v.b1) * _u(v.b2)


@dataclass(frozen=True)
class EdgeRing:
    diagram: BraidDiagram
    spec: RingSpec

    @property
    def variables(self) -> tuple:
        return self.spec.variables

    @property
    def surviving(self) -> tuple:
        return self.spec.free_variables

    @property
    def relations(self) -> tuple:
        return self.spec.relations

    def reduce(self, f: MultiPoly) -> MultiPoly:
        return self.spec.reduce(f)

    def L(self, v: Vertex) -> MultiPoly:
        return self.reduce(L_of(v))

    def Q(self, v: Vertex) -> MultiPoly:
        return self.reduce(Q_of(v))


def edge_ring(D: BraidDiagram) -> EdgeRing:
    names = tuple(f"U{i}" for i in range(1, D.n_edges + 1))
    spec = RingSpec(
        names,
        {x: (Fraction(2), Fraction(0), Fraction(0)) for x in names},
        relations=tuple(L_of(v) for v in D.vertices),
    )
    return EdgeRing(D, spec)


def potential(v: Vertex, m: int) -> MultiPoly:
    return _u(v.a1) ** m + _u(v.a2) ** m - _u(v.b1) ** m - _u(v.b2) ** m


def p_pair(v: Vertex, m: int, R: EdgeRing) -> tuple[MultiPoly, MultiPoly]:
    """``(p_1, p_2)`` with ``(U_{a1} - U_{b1}) p_1 = Q(v) p_2 = w_m(v)`` in R.

    The quotients are taken in the local ring of the crossing (four edge
    variables modulo ``L(v)``) and then mapped to R, so they stay canonical
    when two edges of the crossing are the same edge of the diagram.
    """
    if m < 1:
        raise ValueError("exponent m must be >= 1")
    a1, a2, b1, b2 = (MultiPoly.var(f"W{i}") for i in range(1, 5))
    a2 = b1 + b2 - a1
    w = a1 ** m + a2 ** m - b1 ** m - b2 ** m
    p1 = exact_div(w, a1 - b1)
    p2 = exact_div(w, a1 * a2 - b1 * b2)
    back = {"W1": _u(v.a1), "W3": _u(v.b1), "W4": _u(v.b2)}
    return R.reduce(p1.subs(back)), R.reduce(p2.subs(back))


def _gr(*xs):
    return tuple(Fraction(x) for x in xs)


def _parity(gr) -> int:
    return int((gr[2] - gr[1]) / 2) % 2


def crossing_complex(v: Vertex, R: EdgeRing, n: int | None = None) -> CurvedComplex:
    """Crossing square; with ``n`` the sl_n back-arrows (exponent n+1) are added."""
    tag = f"c{v.index}"
    TL, TR, BL, BR = (f"{tag}{s}" for s in ("TL", "TR", "BL", "BR"))
    a1b1 = _u(v.a1) - _u(v.b1)
    a1b2 = _u(v.a1) - _u(v.b2)
    Q = Q_of(v)
    if v.sign > 0:
        gens = [(TL, _gr(2, -2, -2)), (TR, _gr(0, 0, -2)), (BL, _gr(0, -2, 0)), (BR, _gr(0, 0, 0))]
        diff = {(TL, TR): Q, (BL, BR): a1b1, (TR, BR): MultiPoly(1), (TL, BL): a1b2}
    else:
        gens = [(TL, _gr(0, -2, 0)), (TR, _gr(0, 0, 0)), (BL, _gr(0, -2, 2)), (BR, _gr(-2, 0, 2))]
        diff = {(TL, TR): a1b1, (BL, BR): Q, (TL, BL): MultiPoly(1), (TR, BR): a1b2}
    omega = MultiPoly()
    if n is not None:
        p1, p2 = p_pair(v, n + 1, R)
        if v.sign > 0:
            diff[(TR, TL)] = p2
            diff[(BR, BL)] = p1
        else:
            diff[(TR, TL)] = p1
            diff[(BR, BL)] = p2
        omega = R.reduce(potential(v, n + 1))
    par = {g: _parity(gr) for g, gr in gens}
    return CurvedComplex(R.spec, gens, diff, omega, par, check=True)


@dataclass(frozen=True)
class KRComplex:
    """Triply graded KR complex with its differential split into parts."""

    complex: CurvedComplex
    diagram: BraidDiagram
    ring: EdgeRing
    flavor: str
    n: int | None

    def part(self, name: str) -> dict:
        """Entries of ``d_+``, ``d_-`` or ``d_v`` (name ``"+"``, ``"-"``, ``"v"``)."""
        out = {}
        for (s, t), c in self.complex.differential.items():
            q, h, vv = self.complex.entry_degree(s, t, c)
            kind = "v" if vv else ("+" if h > 0 else "-")
            if kind == name:
                out[(s, t)] = c
        return out

    def total_square(self) -> dict:
        return self.complex.square()

    @property
    def mode(self) -> str:
        return HOMFLY if self.n is None else f"sl{self.n}"


def square_is(K: KRComplex, value: MultiPoly | int = 0) -> bool:
    """Check ``(d_+ + d_- + d_v)^2 = value * Id``."""
    C = K.complex
    sq = C.square()
    value = C.ring.reduce(MultiPoly(value) if not isinstance(value, MultiPoly) else value)
    for (s, t), c in sq.items():
        if s != t or c != value:
            return False
    return not value or all((g, g) in sq for g in C.generators)


def kr_complex(D: BraidDiagram, flavor: str = "reduced", n: int | None = None) -> KRComplex:
    """Tensor of crossing squares with the global shift and a flavour factor.

    ``flavor`` is ``"middle"``, ``"reduced"`` or ``"unreduced"``; ``n=None``
    gives the HOMFLY-PT complex, an integer ``n >= 1`` the sl_n complex.
    """
    if flavor not in ("middle", "reduced", "unreduced"):
        raise ValueError(f"unknown flavour {flavor!r}")
    if n is not None and n < 1:
        raise ValueError("n must be >= 1")
    if D.crossings > 4 or (n or 0) > 4:
        log.warning("outside the desk-scale envelope (<= 4 crossings, n <= 4); this may be slow")
    R = edge_ring(D)
    unit = CurvedComplex(R.spec, [("o", _gr(0, 0, 0))], parity={"o": 0})
    C = unit
    for v in D.vertices:
        C = tensor(C, crossing_complex(v, R, n), sep=".")
    b, w = D.strands, D.writhe
    x = w - b + 1
    C = C.shift((-w + b, w + b - 1, x))
    if n is not None:
        # aligns gr_n with the sl_n specialisation of the skein polynomial
        C = C.shift((x, x, x))
    if flavor == "reduced":
        F = CurvedComplex(R.spec, [("r1", _gr(1, 0, -2)), ("r0", _gr(-1, 0, 0))],
                          {("r1", "r0"): _u(D.marked_out)}, parity={"r1": 1, "r0": 0})
        C = tensor(C, F, sep=".")
    elif flavor == "unreduced" and n is None:
        F = CurvedComplex(R.spec, [("u-", _gr(0, -1, -1)), ("u+", _gr(0, 1, -1))],
                          parity={"u-": 0, "u+": 1})
        C = tensor(C, F, sep=".")
    elif flavor == "unreduced":
        # shift -(n+1)/2 in q puts the unknot at exactly [n]_q
        s = Fraction(-(n + 1), 2)
        F = CurvedComplex(R.spec, [("u+", _gr(s, 1, -1)), ("u-", _gr(s, -1, -1))],
                          {("u+", "u-"): _u(D.marked_out) ** n * (n + 1)},
                          parity={"u+": 1, "u-": 0})
        C = tensor(C, F, sep=".")
    # absolute Koszul parity, so that the Euler sign is (-1)^((v-h)/2)
    C = C.replace(parity={g: _parity(C.gradings[g]) for g in C.generators})
    C.check()
    return KRComplex(C, D, R, flavor, n)


def gr_n_form(n: int) -> tuple:
    return (Fraction(1), Fraction(n - 1, 2), Fraction(0))


def default_kr_cutoff(K: KRComplex, margin: int = 4) -> Fraction:
    C = K.complex
    if K.n is None:
        f = (1, 0, 0)
        top = max(C.gradings[g][0] for g in C.generators)
        nv = len(K.ring.surviving)
        return top + 2 * 2 * nv + margin
    f = gr_n_form(K.n)
    top = max(sum(a * b for a, b in zip(C.gradings[g], f)) for g in C.generators)
    return top + 2 * K.n * len(K.ring.surviving) + margin


def _factor_of(s: str, t: str) -> int | None:
    a, b = s.split("."), t.split(".")
    d = [i for i, (x, y) in enumerate(zip(a, b)) if x != y]
    return d[0] if len(d) == 1 else None


def _compose(A: dict, B: dict) -> dict:
    """Entries of ``B o A`` (apply A first) in the ``(source, target)`` convention."""
    by_src: dict = {}
    for (m, t), c in B.items():
        by_src.setdefault(m, []).append((t, c))
    out: dict = {}
    for (s, m), c in A.items():
        for t, c2 in by_src.get(m, ()):
            k = (s, t)
            out[k] = out.get(k, MultiPoly()) + c * c2
    return out


def is_null_homotopy(K: KRComplex, H: dict, x: MultiPoly, differential: dict | None = None) -> bool:
    """``D H + H D == x * Id`` over the edge ring."""
    D = K.complex.differential if differential is None else differential
    tot = _compose(H, D)
    for k, c in _compose(D, H).items():
        tot[k] = tot.get(k, MultiPoly()) + c
    x = K.ring.reduce(x)
    gens = set(K.complex.generators)
    for (s, t), c in tot.items():
        c = K.ring.reduce(c)
        if s == t:
            if c != x:
                return False
            gens.discard(s)
        elif c:
            return False
    return not x or not gens


def null_homotopies(K: KRComplex) -> list:
    """Pairs ``(x, H)`` with ``D H + H D = x * Id`` and ``H`` filtered.

    Each crossing factor satisfies ``D_v^2 = w_v``, so differentiating its
    entries by a variable ``t`` gives a homotopy for ``dw_v/dt``.  The
    unreduced sl_n factor contributes ``U_1^n``.
    """
    if K.n is None:
        return []
    R = K.ring
    D = K.complex.differential
    by_factor: dict = {}
    for (s, t), c in D.items():
        by_factor.setdefault(_factor_of(s, t), []).append((s, t, c))
    out = []
    for i, v in enumerate(K.diagram.vertices):
        w = R.reduce(potential(v, K.n + 1))
        for t in R.surviving:
            x = w.derivative(t)
            if not x:
                continue
            H = {}
            for s_, t_, c in by_factor.get(i + 1, ()):
                dc = c.derivative(t)
                if dc:
                    H[(s_, t_)] = dc
            out.append((x, H))
    if K.flavor == "unreduced":
        x = R.reduce(_u(K.diagram.marked_out) ** K.n)
        pos = len(K.diagram.vertices) + 1
        H = {}
        for s_, t_, c in by_factor.get(pos, ()):
            eps = exact_div(c, x * (K.n + 1))
            H[(t_, s_)] = eps.scale(Fraction(1, K.n + 1))
        out.append((x, H))
    return out


def _monomials(vars_: tuple, deg: int):
    if not vars_:
        if deg == 0:
            yield ()
        return
    for e in range(deg, -1, -1):
        for rest in _monomials(vars_[1:], deg - e):
            yield ((vars_[0], e),) + rest


def _poly_degree(f: MultiPoly) -> int:
    degs = {sum(e for _, e in m) for m, _ in f.items()}
    if len(degs) != 1:
        raise ValueError("expected a homogeneous polynomial")
    return degs.pop()


def power_homotopies(K: KRComplex, max_power: int | None = None) -> dict:
    """For each surviving variable ``s`` the least ``k`` with ``s^k`` null-homotopic
    (found by ideal membership in the span of :func:`null_homotopies`), with an
    explicit, verified homotopy.  Returns ``{s: (k, H)}``.
    """
    from .linalg import Echelon

    R = K.ring
    gens = [(x, _poly_degree(x), H) for x, H in null_homotopies(K) if x]
    if max_power is None:
        max_power = 2 * (K.n or 1) + 2
    found: dict = {}
    for s in R.surviving:
        for k in range(1, max_power + 1):
            ech = Echelon(track=True)
            monos = {}
            for j, (x, d, H) in enumerate(gens):
                if d > k:
                    continue
                for m in _monomials(R.surviving, k - d):
                    mono = MultiPoly({m: 1})
                    monos[(j, m)] = mono
                    ech.add(dict((mono * x).items()), label=(j, m))
            rem, combo = ech.coordinates({((s, k),): Fraction(1)})
            if rem:
                continue
            Hs: dict = {}
            for (j, m), c in combo.items():
                mono = monos[(j, m)].scale(c)
                for key, e in gens[j][2].items():
                    Hs[key] = Hs.get(key, MultiPoly()) + mono * e
            Hs = {key: e for key, e in ((key, R.reduce(e)) for key, e in Hs.items()) if e}
            if not is_null_homotopy(K, Hs, MultiPoly.var(s) ** k):
                raise ArithmeticError(f"homotopy for {s}^{k} failed verification")
            found[s] = (k, Hs)
            break
    return found


def _flip(k: tuple, a) -> tuple:
    return (k[0] + a,) + tuple(k[1:-1]) + ((k[-1] + 1) % 2,)


def _deconvolve(table: dict, a: Fraction, exact: bool) -> dict:
    """Solve ``table = P * (1 + e q^a)`` for ``P``, where ``e`` flips parity
    and ``a > 0``.  With ``exact`` the product is re-expanded and compared."""
    P: dict = {}
    for k in sorted(table, key=lambda k: k[0]):
        val = table[k] - P.get(_flip(k, -a), 0)
        if val:
            P[k] = val
    if any(v < 0 for v in P.values()):
        raise ArithmeticError("negative dimension after deconvolution")
    if exact:
        back: dict = {}
        for k, v in P.items():
            back[k] = back.get(k, 0) + v
            back[_flip(k, a)] = back.get(_flip(k, a), 0) + v
        if {k: v for k, v in back.items() if v} != {k: v for k, v in table.items() if v}:
            raise ArithmeticError("quotient homology is not divisible by (1 + q^a)")
    return P


def kr_homology(K: KRComplex, cutoff=None, method: str = "auto") -> GradedDims:
    """``H(H(C, d_+ [+ d_-]), d_v^*)``.

    HOMFLY: keys ``(q, h, v, parity)``.  sl_n: keys ``(gr_n, gr_v, parity)``
    with ``gr_n = q + (n-1)/2 h``.  Use :func:`conjecture_grading` for
    ``gr_n + n/2 gr_v``.

    For sl_n the default method quotients by powers ``s^k`` of edge variables
    that act null-homotopically (filtered), computes the much smaller quotient
    and divides out the factors ``(1 + q^{2k-n-1})``; ``method="direct"``
    works over the full edge ring up to ``cutoff``.
    """
    if cutoff is None:
        cutoff = default_kr_cutoff(K)
    if K.n is None:
        forms = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    else:
        forms = [gr_n_form(K.n), (0, 0, 1)]
    if K.n is None or method == "direct":
        return two_step_homology(K.complex, split_coord=2, cutoff=cutoff, forms=forms,
                                 use_parity=True, check=True, keep_parity=True)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    powers = power_homotopies(K)
    zero = []
    shifts = []
    for s, (k, _) in powers.items():
        while 2 * k <= K.n + 1:
            k += 1
        zero.append(((s, k),))
        shifts.append(Fraction(2 * k - (K.n + 1)))
    C = K.complex
    ring = C.ring.with_(zero_monomials=tuple(zero))
    diff = {key: ring.reduce(c) for key, c in C.differential.items()}
    Cq = C.replace(ring=ring, differential={k: c for k, c in diff.items() if c})
    complete = len(powers) == len(K.ring.surviving)
    if complete:
        f = gr_n_form(K.n)
        top = max(sum(a * b for a, b in zip(C.gradings[g], f)) for g in C.generators)
        inner = top + sum(2 * (k - 1) for ((_, k),) in zero) + 1
    else:
        inner = Fraction(cutoff) + sum(shifts)
    H = two_step_homology(Cq, split_coord=2, cutoff=inner, forms=forms,
                          use_parity=True, check=False, keep_parity=True)
    table = dict(H.table)
    for a in shifts:
        table = _deconvolve(table, a, exact=complete)
    table = {k: v for k, v in table.items() if k[0] <= Fraction(cutoff)} if not complete else table
    truncated = False if complete else H.truncated
    return GradedDims(table, cutoff, truncated)


def first_page_homology(K: KRComplex, cutoff=None) -> GradedDims:
    """``H(C, d_+ [+ d_-])`` alone."""
    if cutoff is None:
        cutoff = default_kr_cutoff(K)
    forms = [(1, 0, 0), (0, 1, 0), (0, 0, 1)] if K.n is None else [gr_n_form(K.n), (0, 0, 1)]
    first = {k: c for k, c in K.complex.differential.items()
             if K.complex.entry_degree(k[0], k[1], c)[2] == 0}
    C1 = K.complex.replace(differential=first, curvature=MultiPoly())
    return graded_homology(C1, cutoff, forms, use_parity=True, keep_parity=True)


def conjecture_grading(H: GradedDims, n: int) -> dict:
    """Collapse sl_n homology keys ``(gr_n, gr_v, parity)`` to ``gr_n + n/2 gr_v``."""
    out: dict = {}
    for k, d in H.table.items():
        g = k[0] + Fraction(n, 2) * k[1]
        out[g] = out.get(g, 0) + d
    return dict(sorted(out.items()))


def euler_char(H: GradedDims) -> LaurentPoly:
    """Graded Euler characteristic.

    Crossings are built in the orientation whose characteristic is the skein
    polynomial of the mirror, so exponents are negated: sl_n keys give
    ``sum (-1)^parity q^(-gr_n)``, which equals ``sln_specialize(homfly(D), n)``,
    and HOMFLY keys give ``sum (-1)^parity a^(-h) q^(-q)``.  A truncated
    table yields the matching truncation of the power series.
    """
    terms: dict = {}
    for k, d in H.table.items():
        sign = -1 if int(k[-1]) % 2 else 1
        if len(k) == 4:
            q, h = k[0], k[1]
            if q.denominator != 1 or h.denominator != 1:
                raise ValueError("non-integral HOMFLY degree")
            mono = (("a", -int(h)), ("q", -int(q)))
        else:
            g = k[0]
            if g.denominator != 1:
                raise ValueError(f"gr_n degree {g} is not an integer")
            mono = (("q", -int(g)),)
        terms[mono] = terms.get(mono, 0) + sign * d
    return LaurentPoly(terms)
