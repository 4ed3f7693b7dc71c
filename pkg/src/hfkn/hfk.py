"""Knot Floer side: master complexes, CFK_n, HFK_n and friends.

A master complex lives over ``Q[U_1..U_k, V_1..V_k]`` with bigrading (M, A).
``U_i`` has weight (-2, -1) and ``V_i`` weight (0, 1), so every differential
entry has bidegree (-1, 0).  Its curvature is ``sum_i (U_{a(i)} - U_{b(i)}) V_i``.

CFK_n substitutes ``V_i = (U_{a(i)}^n - U_{b(i)}^n) / (U_{a(i)} - U_{b(i)})``
(``n U^{n-1}`` when ``a(i) = b(i)``) and collapses the bigrading to
``gr_n = -n M + 2 (n-1) A``; each ``U_i`` then has weight 2 and the
differential has degree ``n``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .complex import (
    CurvedComplex,
    GradedDims,
    ModuleDecomp,
    RingMismatch,
    RingSpec,
    gaussian_cancel,
    graded_homology,
    snf_homology,
    tensor,
)
from .ring import MultiPoly

__all__ = [
    "MasterComplex",
    "HFKnResult",
    "E1Page",
    "SpecInvalid",
    "RouteMismatch",
    "GR_N_CONVENTION",
    "master_ring",
    "validate_master",
    "staircase",
    "torus_exponents",
    "alexander_from_exponents",
    "add_puncture",
    "cfk_n",
    "hfk_n",
    "reduced_hfk_n",
    "e1_page",
    "stabilize",
    "stabilization_homotopy",
    "is_basepoint_homotopy",
    "disjoint_union",
    "builtin",
    "BUILTINS",
    "Diagnostic",
    "unknot",
    "punctured_unknot",
    "empty_link",
    "trefoil_figure",
    "figure_eight",
    "torus_knot",
    "gr_n",
    "route_b_complex",
]

GR_N_CONVENTION = "gr_n = -n*M + 2*(n-1)*A"
U_WEIGHT = (Fraction(-2), Fraction(-1))
V_WEIGHT = (Fraction(0), Fraction(1))
ENTRY_DEGREE = (Fraction(-1), Fraction(0))


class SpecInvalid(ValueError):
    pass


class RouteMismatch(AssertionError):
    pass


def U(i: int) -> str:
    return f"U{i}"


def V(i: int) -> str:
    return f"V{i}"


def master_ring(k: int) -> RingSpec:
    names = [U(i) for i in range(1, k + 1)] + [V(i) for i in range(1, k + 1)]
    w = {U(i): U_WEIGHT for i in range(1, k + 1)}
    w.update({V(i): V_WEIGHT for i in range(1, k + 1)})
    return RingSpec(tuple(names), w)


def _expected_curvature(a: Sequence[int], b: Sequence[int]) -> MultiPoly:
    om = MultiPoly()
    for i, (ai, bi) in enumerate(zip(a, b), start=1):
        om = om + (MultiPoly.var(U(ai)) - MultiPoly.var(U(bi))) * MultiPoly.var(V(i))
    return om


@dataclass(frozen=True)
class MasterComplex:
    """Master complex with basepoint matchings.

    ``a_match[i-1] = a(i)`` and ``b_match[i-1] = b(i)``; ``components[i-1]``
    is the link component carrying the pair ``(w_i, z_i)``.
    """

    complex: CurvedComplex
    a_match: tuple
    b_match: tuple
    components: tuple
    punctured: bool = False
    name: str = ""

    @property
    def k(self) -> int:
        return len(self.a_match)

    @property
    def generators(self) -> tuple:
        return self.complex.generators

    def maslov(self, g: str) -> Fraction:
        return self.complex.gradings[g][0]

    def alexander(self, g: str) -> Fraction:
        return self.complex.gradings[g][1]

    @property
    def n_components(self) -> int:
        return len(set(self.components))

    def to_dict(self) -> dict:
        d = self.complex.to_dict()
        d["maslov"] = {g: str(self.maslov(g)) for g in self.generators}
        d["alexander"] = {g: str(self.alexander(g)) for g in self.generators}
        d["a_match"] = list(self.a_match)
        d["b_match"] = list(self.b_match)
        d["components"] = list(self.components)
        d["punctured"] = self.punctured
        if self.name:
            d["name"] = self.name
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping, check: bool = True) -> "MasterComplex":
        d = dict(d)
        if "generators" in d and "maslov" in d:
            # maslov/alexander fields take precedence over the grading tuples
            gens = []
            for g in d["generators"]:
                name = g["name"]
                gens.append({"name": name, "grading": [d["maslov"][name], d["alexander"][name]]})
            d["generators"] = gens
        if "parity" not in d:
            d["parity"] = {g["name"]: int(Fraction(g["grading"][0])) % 2 for g in d["generators"]}
        C = CurvedComplex.from_dict(d, check=check)
        k = len(d["a_match"])
        return cls(C, tuple(d["a_match"]), tuple(d["b_match"]),
                   tuple(d.get("components", [1] * k)), bool(d.get("punctured", False)), d.get("name", ""))

    @classmethod
    def from_json(cls, text: str, check: bool = True) -> "MasterComplex":
        return cls.from_dict(json.loads(text), check=check)


def _make_master(k, gens, diff, a, b, comps, punctured=False, name="", check=True) -> MasterComplex:
    ring = master_ring(k)
    parity = {g: int(gr[0]) % 2 for g, gr in gens}
    C = CurvedComplex(ring, gens, diff, _expected_curvature(a, b), parity, check=check)
    return MasterComplex(C, tuple(a), tuple(b), tuple(comps), punctured, name)


@dataclass(frozen=True)
class Diagnostic:
    ok: bool
    message: str = "ok"

    def __bool__(self):
        return self.ok


def validate_master(C: MasterComplex) -> Diagnostic:
    """Check matchings, gradings and the curvature identity."""
    k = C.k
    for nm, m in (("a", C.a_match), ("b", C.b_match)):
        if sorted(m) != list(range(1, k + 1)):
            return Diagnostic(False, f"{nm} is not a permutation of 1..{k}: {list(m)}")
    if len(C.components) != k:
        return Diagnostic(False, "component list has wrong length")
    ring = C.complex.ring
    for i in range(1, k + 1):
        if tuple(ring.weights.get(U(i), ())) != U_WEIGHT or tuple(ring.weights.get(V(i), ())) != V_WEIGHT:
            return Diagnostic(False, f"ring weights of U{i}/V{i} are not (-2,-1)/(0,1)")
    for (s, t), c in C.complex.differential.items():
        for m, coef in c.items():
            one = MultiPoly({m: coef})
            try:
                deg = C.complex.entry_degree(s, t, one)
            except ValueError as e:
                return Diagnostic(False, str(e))
            if deg != ENTRY_DEGREE:
                i = sum(e for v, e in m if v.startswith("U"))
                j = sum(e for v, e in m if v.startswith("V"))
                return Diagnostic(
                    False,
                    f"entry {s}->{t} term {one}: grading rule violated "
                    f"(M diff {C.maslov(s) - C.maslov(t)} vs {1 - 2 * i}, "
                    f"A diff {C.alexander(s) - C.alexander(t)} vs {j - i})",
                )
    sq = C.complex.square()
    want = C.complex.ring.reduce(_expected_curvature(C.a_match, C.b_match))
    for g in C.generators:
        got = sq.get((g, g), MultiPoly())
        if got != want:
            return Diagnostic(False, f"d^2 on {g} is {got}, expected {want}")
    for (s, t), c in sq.items():
        if s != t:
            return Diagnostic(False, f"d^2 has off-diagonal entry {s}->{t}: {c}")
    return Diagnostic(True)


# ---------------------------------------------------------------------------
# staircases


def _check_exponents(exps: Sequence[int]) -> list:
    exps = [int(e) for e in exps]
    if not exps or len(exps) % 2 == 0:
        raise SpecInvalid("staircase needs an odd number of exponents")
    if any(x <= y for x, y in zip(exps, exps[1:])):
        raise SpecInvalid("exponents must be strictly decreasing")
    if exps != [-e for e in reversed(exps)]:
        raise SpecInvalid("exponents must be symmetric about 0")
    return exps


def staircase(exponents: Sequence[int], orientation: str = "into_odd", name: str = "") -> MasterComplex:
    """Staircase master complex from Alexander exponents ``a_0 > ... > a_{2m}``.

    ``orientation="into_odd"`` is the zigzag ``x_0 ->U^g x_1 <-V^g x_2 -> ...``
    (arrows start at even generators).  ``"out_of_odd"`` reverses every arrow,
    ``d x_odd = U^g x_{i-1} + V^g x_{i+1}``.  Maslov gradings are normalised so
    the generator of largest Alexander grading sits in M = 0.
    """
    exps = _check_exponents(exponents)
    if orientation not in ("into_odd", "out_of_odd"):
        raise SpecInvalid(f"unknown orientation {orientation!r}")
    m = len(exps)
    M = [Fraction(0)]
    A = [Fraction(0)]
    diff = {}
    for i in range(1, m):
        g = exps[i - 1] - exps[i]
        x_prev, x_cur = f"x{i - 1}", f"x{i}"
        if orientation == "into_odd":
            if i % 2:
                diff[(x_prev, x_cur)] = MultiPoly.var(U(1), g)
                M.append(M[-1] - 1 + 2 * g)
            else:
                diff[(x_cur, x_prev)] = MultiPoly.var(V(1), g)
                M.append(M[-1] + 1)
            A.append(A[-1] + g)
        else:
            if i % 2:
                diff[(x_cur, x_prev)] = MultiPoly.var(U(1), g)
                M.append(M[-1] + 1 - 2 * g)
            else:
                diff[(x_prev, x_cur)] = MultiPoly.var(V(1), g)
                M.append(M[-1] - 1)
            A.append(A[-1] - g)
    top = max(range(m), key=lambda j: A[j])
    a_shift = -A[top] + max(exps)
    gens = [(f"x{j}", (M[j] - M[top], A[j] + a_shift)) for j in range(m)]
    return _make_master(1, gens, diff, (1,), (1,), (1,), False, name or f"staircase{exps}")


def alexander_from_exponents(exps: Sequence[int]) -> dict:
    """Symmetrised Alexander polynomial with alternating signs, as ``{exp: coeff}``."""
    exps = _check_exponents(exps)
    return {e: (-1) ** i for i, e in enumerate(exps)}


def torus_exponents(p: int, q: int) -> list:
    """Exponents of the symmetrised Alexander polynomial of T(p, q)."""
    if p < 2 or q < 2:
        raise SpecInvalid("torus knot needs p, q >= 2")
    from math import gcd
    if gcd(p, q) != 1:
        raise SpecInvalid("T(p,q) is a knot only for coprime p, q")
    # (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1)) by long division on coefficient lists
    num = [0] * (p * q + 2)
    num[p * q + 1] += 1
    num[p * q] -= 1
    num[1] -= 1
    num[0] += 1
    den = [0] * (p + q + 1)
    den[p + q] += 1
    den[p] -= 1
    den[q] -= 1
    den[0] += 1
    quo = [0] * (len(num) - len(den) + 1)
    rem = num[:]
    for i in range(len(quo) - 1, -1, -1):
        c = rem[i + len(den) - 1]
        quo[i] = c
        for j, d in enumerate(den):
            rem[i + j] -= c * d
    if any(rem):
        raise ArithmeticError("Alexander polynomial division was not exact")
    deg = len(quo) - 1
    half = deg // 2
    coeffs = {i - half: c for i, c in enumerate(quo) if c}
    exps = sorted(coeffs, reverse=True)
    if [coeffs[e] for e in exps] != [(-1) ** i for i in range(len(exps))]:
        raise SpecInvalid("Alexander polynomial is not of staircase type")
    return exps


# ---------------------------------------------------------------------------
# built-in library


def _puncture_factor(i: int = 1) -> CurvedComplex:
    ring = master_ring(i)
    gens = [("p", (Fraction(-1), Fraction(-1, 2))), ("q", (Fraction(0), Fraction(-1, 2)))]
    return CurvedComplex(ring, gens, {("p", "q"): MultiPoly.var(U(i)) * MultiPoly.var(V(i))},
                         0, {"p": 1, "q": 0})


def add_puncture(C: MasterComplex, i: int = 1) -> MasterComplex:
    """Punctured complex ``C{-1,-1/2} --U_i V_i--> C{0,-1/2}`` of an unpunctured one."""
    if C.punctured:
        raise ValueError("complex is already punctured")
    if C.k == 0:
        P = CurvedComplex(master_ring(0), [("e", (0, 0))], parity={"e": 0})
        return MasterComplex(P, (), (), (), True, C.name)
    T = tensor(C.complex, _puncture_factor(i).replace(ring=C.complex.ring), sep="")
    return MasterComplex(T, C.a_match, C.b_match, C.components, True, C.name)


def unknot() -> MasterComplex:
    return staircase([0], name="unknot")


def punctured_unknot() -> MasterComplex:
    return add_puncture(unknot())


def empty_link() -> MasterComplex:
    """Punctured sphere with no basepoints: the unit for disjoint union."""
    C = CurvedComplex(master_ring(0), [("e", (0, 0))], parity={"e": 0})
    return MasterComplex(C, (), (), (), True, "empty")


def trefoil_figure() -> MasterComplex:
    """Six-generator punctured complex of the right-handed trefoil."""
    T = add_puncture(staircase([1, 0, -1], orientation="out_of_odd"))
    return MasterComplex(T.complex, T.a_match, T.b_match, T.components, True, "T2,3-punctured")


def figure_eight() -> MasterComplex:
    """Figure-eight knot: a square ``s -> t, u -> w`` plus an isolated generator.

    Literature-derived data (not a staircase); used only in optional checks.
    """
    gens = [
        ("s", (0, 0)), ("t", (1, 1)), ("u", (-1, -1)), ("w", (0, 0)), ("x", (0, 0)),
    ]
    diff = {
        ("s", "t"): MultiPoly.var(U(1)),
        ("s", "u"): MultiPoly.var(V(1)),
        ("t", "w"): MultiPoly.var(V(1)),
        ("u", "w"): -MultiPoly.var(U(1)),
    }
    return _make_master(1, gens, diff, (1,), (1,), (1,), False, "4_1")


def torus_knot(p: int, q: int, orientation: str = "into_odd") -> MasterComplex:
    return staircase(torus_exponents(p, q), orientation, name=f"T{p},{q}")


def builtin(name: str) -> MasterComplex:
    """Look up a built-in master complex.

    Accepted names: ``unknot``, ``unknot-punctured``, ``trefoil`` (3-generator
    zigzag), ``trefoil-punctured`` (6 generators), ``4_1``, and torus knots as
    ``T2,5`` / ``T(3,4)``.
    """
    key = name.strip().lower().replace(" ", "")
    if key in BUILTINS:
        return BUILTINS[key]()
    k = key.replace("(", "").replace(")", "")
    if k.startswith("t") and "," in k:
        p, q = (int(x) for x in k[1:].split(","))
        return torus_knot(p, q)
    raise KeyError(f"unknown knot {name!r}; known: {sorted(BUILTINS)} and T<p>,<q>")


BUILTINS = {
    "unknot": unknot,
    "unknot-punctured": punctured_unknot,
    "empty": empty_link,
    "trefoil": lambda: staircase([1, 0, -1], name="T2,3"),
    "t2,3": lambda: staircase([1, 0, -1], name="T2,3"),
    "trefoil-punctured": trefoil_figure,
    "4_1": figure_eight,
    "figure-eight": figure_eight,
}


# ---------------------------------------------------------------------------
# CFK_n and HFK_n


def _v_value(a: int, b: int, n: int) -> MultiPoly:
    if a == b:
        return MultiPoly.var(U(a), n - 1).scale(n) if n > 1 else MultiPoly(n)
    ua, ub = MultiPoly.var(U(a)), MultiPoly.var(U(b))
    out = MultiPoly()
    for j in range(n):
        out = out + ua ** j * ub ** (n - 1 - j)
    return out


def gr_n(M, A, n: int) -> Fraction:
    return -n * Fraction(M) + 2 * (n - 1) * Fraction(A)


def _u_ring(k: int, zero_power: int | None = None) -> RingSpec:
    names = tuple(U(i) for i in range(1, k + 1))
    zm = tuple(((U(i), zero_power),) for i in range(1, k + 1)) if zero_power else ()
    return RingSpec(names, {v: (Fraction(2),) for v in names}, zero_monomials=zm)


def cfk_n(C: MasterComplex, n: int) -> CurvedComplex:
    """Substitute for the V_i and collapse to the single grading gr_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    assign = {V(i): _v_value(C.a_match[i - 1], C.b_match[i - 1], n) for i in range(1, C.k + 1)}
    ring = _u_ring(C.k)
    return C.complex.substitute(
        assign, ring, gradings=lambda g: (gr_n(g[0], g[1], n),), curvature_value=0, check=True,
    )


@dataclass(frozen=True)
class HFKnResult:
    n: int
    module: ModuleDecomp | None
    dims: GradedDims
    convention: str = GR_N_CONVENTION
    route: str = "A"

    def poincare(self):
        return self.dims.poincare()

    def total_dim(self) -> int:
        return self.dims.total()

    @property
    def torsion_exponents(self) -> list:
        return [] if self.module is None else [s.exponent for s in self.module.summands]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "convention": self.convention,
            "route": self.route,
            "module": None if self.module is None else [str(s) for s in self.module.summands],
            "dims": {str(k[0]): v for k, v in self.dims.table.items()},
            "total": self.total_dim(),
            "poincare": str(self.poincare()),
        }


def _route_a(C: MasterComplex, n: int) -> HFKnResult:
    P = C if C.punctured else add_puncture(C)
    K = cfk_n(P, n)
    mod = snf_homology(gaussian_cancel(K))
    if mod.free_rank:
        raise ArithmeticError("HFK_n has a free summand; complex is not a valid knot complex")
    return HFKnResult(n, mod, mod.dims(), route="A")


def route_b_complex(C: MasterComplex, n: int, keep: str = "all") -> CurvedComplex:
    """``CFK_{U,V}/(UV = 0, V = n U^{n-1})`` over ``Q[U]/(U^n)``.

    ``keep`` selects the entries retained before substituting: ``"all"``,
    ``"no_v"`` (discs avoiding z) or ``"no_u"`` (discs avoiding w).
    """
    if C.k != 1 or C.punctured:
        raise ValueError("route B needs an unpunctured complex with one basepoint pair")
    diff = {}
    for key, c in C.complex.differential.items():
        terms = {}
        for m, coef in c.items():
            md = dict(m)
            hu, hv = md.get(U(1), 0) > 0, md.get(V(1), 0) > 0
            if hu and hv:
                continue
            if (keep == "no_v" and hv) or (keep == "no_u" and hu):
                continue
            terms[m] = coef
        if terms:
            diff[key] = MultiPoly(terms)
    base = C.complex.replace(differential=diff, curvature=MultiPoly())
    ring = _u_ring(1, zero_power=n)
    shift = gr_n(0, Fraction(-1, 2), n)
    return base.substitute({V(1): _v_value(1, 1, n)}, ring,
                           gradings=lambda g: (gr_n(g[0], g[1], n) + shift,),
                           curvature_value=0, check=True)


def _route_b(C: MasterComplex, n: int) -> HFKnResult:
    K = route_b_complex(C, n)
    top = max((K.gradings[g][0] for g in K.generators), default=Fraction(0))
    dims = graded_homology(K, cutoff=top + 2 * n)
    return HFKnResult(n, None, dims, route="B")


def _route_c(C: MasterComplex, n: int, margin: int = 2) -> HFKnResult:
    P = C if C.punctured else add_puncture(C)
    K = gaussian_cancel(cfk_n(P, n))
    top = max((K.gradings[g][0] for g in K.generators), default=Fraction(0))
    cutoff = top + 2 * n * max(1, P.k) + margin
    dims = graded_homology(K, cutoff=cutoff)
    if dims.truncated:
        raise ArithmeticError("HFK_n did not vanish below the cutoff; raise the margin")
    return HFKnResult(n, None, dims, route="C")


def hfk_n(C: MasterComplex, n: int, route: str = "auto") -> HFKnResult:
    """HFK_n by the punctured cone (A), the UV = 0 quotient (B) or degreewise (C).

    ``auto`` uses A when one U variable survives and, for an unpunctured knot
    complex, cross-checks it against B (raising :class:`RouteMismatch`).
    Multi-basepoint complexes use C.
    """
    if route == "A":
        return _route_a(C, n)
    if route == "B":
        return _route_b(C, n)
    if route == "C":
        return _route_c(C, n)
    if route != "auto":
        raise ValueError(f"unknown route {route!r}")
    if C.k == 1:
        a = _route_a(C, n)
        if not C.punctured:
            b = _route_b(C, n)
            if a.dims.table != b.dims.table:
                raise RouteMismatch(f"route A {a.dims} != route B {b.dims}")
        return a
    return _route_c(C, n)


def reduced_hfk_n(C: MasterComplex, n: int, component: int | None = None) -> GradedDims:
    """Homology of CFK_n with U_i = 0 for the first basepoint on the marked component."""
    if C.punctured:
        raise ValueError("reduced theory is defined from an unpunctured complex")
    if C.k == 0:
        raise ValueError("no basepoints")
    comp = C.components[0] if component is None else component
    idx = [i for i, c in enumerate(C.components, start=1) if c == comp]
    if not idx:
        raise ValueError(f"no basepoint on component {comp}")
    i = idx[0]
    K = cfk_n(C, n)
    others = tuple(U(j) for j in range(1, C.k + 1) if j != i)
    ring = RingSpec(others, {v: (Fraction(2),) for v in others})
    Kr = K.substitute({U(i): MultiPoly()}, ring, curvature_value=0)
    Kr = gaussian_cancel(Kr)
    top = max((Kr.gradings[g][0] for g in Kr.generators), default=Fraction(0))
    return graded_homology(Kr, cutoff=top + 2 * n * max(1, len(others)) + 2)


@dataclass(frozen=True)
class E1Page:
    """First page of the basepoint filtration.

    ``module`` is the homology over Q[U] of the master complex with the
    blocked variable set to zero; ``dims`` is the same filtration applied to
    the finite ``UV = 0, V = nU^{n-1}`` model (unpunctured knots only).
    """

    n: int
    blocked: str
    module: ModuleDecomp | None
    dims: GradedDims | None

    def poincare(self):
        return None if self.dims is None else self.dims.poincare()


def e1_page(C: MasterComplex, n: int, block: str = "z") -> E1Page:
    """E_1 page for the filtration that blocks discs through ``z`` (or ``w``).

    Blocking ``z`` keeps the entries with zero V-degree; blocking ``w`` keeps
    those with zero U-degree.
    """
    if block not in ("z", "w"):
        raise ValueError("block must be 'z' or 'w'")
    var_prefix = "V" if block == "z" else "U"
    diff = {}
    for key, c in C.complex.differential.items():
        keep = {m: v for m, v in c.items() if not any(x.startswith(var_prefix) for x, _ in m)}
        if keep:
            diff[key] = MultiPoly(keep)
    blocked = C.complex.replace(differential=diff, curvature=MultiPoly())
    module = None
    if C.k == 1:
        zero = {V(1): MultiPoly()} if block == "z" else {U(1): MultiPoly()}
        live = U(1) if block == "z" else V(1)
        wt = (Fraction(2),) if block == "z" else (Fraction(2 * (n - 1)),)
        ring = RingSpec((live,), {live: wt})
        K = blocked.substitute(zero, ring, gradings=lambda g: (gr_n(g[0], g[1], n),),
                               curvature_value=0, check=True)
        if block == "w" and n == 1:
            module = None
        else:
            module = snf_homology(gaussian_cancel(K))
    dims = None
    if C.k == 1 and not C.punctured:
        K = route_b_complex(C, n, keep="no_v" if block == "z" else "no_u")
        top = max((K.gradings[g][0] for g in K.generators), default=Fraction(0))
        dims = graded_homology(K, cutoff=top + 2 * n)
    return E1Page(n, block, module, dims)


# ---------------------------------------------------------------------------
# structural moves


def stabilize(C: MasterComplex, i: int, check: bool = True) -> MasterComplex:
    """(0,3)-stabilisation at basepoint ``z_i``.

    Doubles the generators into copies ``g/x`` (shifted by (-1,-1)) and
    ``g/y``; the differential is ``[[d, V_{k+1} - V_i], [U_{a(i)} - U_{k+1}, -d]]``
    and the matchings become ``a(i) = k+1``, ``a(k+1) = a_old(i)``,
    ``b(k+1) = k+1``.
    """
    k = C.k
    if not 1 <= i <= k:
        raise ValueError(f"basepoint index {i} out of range 1..{k}")
    new = k + 1
    a_old = C.a_match[i - 1]
    ring = master_ring(new)
    src = C.complex
    gens, par = [], {}
    for g in src.generators:
        M, A = src.gradings[g]
        gens.append((f"{g}/x", (M - 1, A - 1)))
        gens.append((f"{g}/y", (M, A)))
        p = src.parity[g] if src.parity else int(M) % 2
        par[f"{g}/x"] = (p + 1) % 2
        par[f"{g}/y"] = p
    diff = {}
    for (s, t), c in src.differential.items():
        diff[(f"{s}/x", f"{t}/x")] = c
        diff[(f"{s}/y", f"{t}/y")] = -c
    up = MultiPoly.var(U(a_old)) - MultiPoly.var(U(new))
    vp = MultiPoly.var(V(new)) - MultiPoly.var(V(i))
    for g in src.generators:
        diff[(f"{g}/x", f"{g}/y")] = up
        diff[(f"{g}/y", f"{g}/x")] = vp
    a = list(C.a_match) + [a_old]
    a[i - 1] = new
    b = list(C.b_match) + [new]
    comps = list(C.components) + [C.components[i - 1]]
    Cx = CurvedComplex(ring, gens, diff, _expected_curvature(a, b), par, check=check)
    return MasterComplex(Cx, tuple(a), tuple(b), tuple(comps), C.punctured, C.name)


def stabilization_homotopy(S: MasterComplex) -> dict:
    """Homotopy ``H`` (from ``g/y`` to ``g/x``) on a stabilised complex with
    ``dH + Hd = U_{a(k)} - U_{b(k)}`` for the newest basepoint ``k``."""
    gens = [g[:-2] for g in S.generators if g.endswith("/y")]
    return {(f"{g}/y", f"{g}/x"): MultiPoly(1) for g in gens}


def is_basepoint_homotopy(C: MasterComplex, H: Mapping, j: int) -> bool:
    """Check ``dH + Hd = (U_{a(j)} - U_{b(j)}) Id`` on the master complex."""
    d = C.complex.differential
    ring = C.complex.ring
    total: dict = {}

    def add(key, val):
        total[key] = total.get(key, MultiPoly()) + val

    for (s, m), h in H.items():
        for (s2, t), c in d.items():
            if s2 == m:
                add((s, t), h * c)     # H then d
    for (s, m), c in d.items():
        for (s2, t), h in H.items():
            if s2 == m:
                add((s, t), c * h)     # d then H
    want = ring.reduce(MultiPoly.var(U(C.a_match[j - 1])) - MultiPoly.var(U(C.b_match[j - 1])))
    for g in C.generators:
        if ring.reduce(total.pop((g, g), MultiPoly())) != want:
            return False
    return all(not ring.reduce(v) for v in total.values())


def disjoint_union(C1: MasterComplex, C2: MasterComplex) -> MasterComplex:
    """Punctured complex of the split union: tensor product with disjoint variables."""
    P1 = C1 if C1.punctured else add_puncture(C1)
    P2 = C2 if C2.punctured else add_puncture(C2)
    k1, k2 = P1.k, P2.k
    if set(P1.complex.ring.variables) - set(master_ring(k1).variables):
        raise RingMismatch("first complex has unexpected variables")
    ring = master_ring(k1 + k2)
    ren = {U(i): MultiPoly.var(U(i + k1)) for i in range(1, k2 + 1)}
    ren.update({V(i): MultiPoly.var(V(i + k1)) for i in range(1, k2 + 1)})
    B = P2.complex.substitute(ren, ring, curvature_value=P2.complex.curvature.subs(ren), check=False)
    A = P1.complex.replace(ring=ring)
    T = tensor(A, B)
    if T.parity is None:
        T = T.replace(parity={g: int(T.gradings[g][0]) % 2 for g in T.generators})
    a = tuple(P1.a_match) + tuple(x + k1 for x in P2.a_match)
    b = tuple(P1.b_match) + tuple(x + k1 for x in P2.b_match)
    off = max(P1.components, default=0)
    comps = tuple(P1.components) + tuple(c + off for c in P2.components)
    T.check()
    return MasterComplex(T, a, b, comps, True, f"{P1.name}+{P2.name}")
