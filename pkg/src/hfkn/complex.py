"""Graded curved chain complexes over polynomial rings.

A :class:`CurvedComplex` is a finitely generated free module with an
endomorphism ``d`` such that ``d^2 = curvature * Id``.  Entries are
:class:`~hfkn.ring.MultiPoly` objects over a :class:`RingSpec`, which may carry
linear relations (eliminated on the fly) and monomial relations (monomials
that are zero in the ring, e.g. ``U1*V1`` or ``U1^n``).

Convention: ``differential[(x, y)] = c`` means ``d(x)`` contains ``c*y``.  The
degree of such an entry in each grading coordinate is
``grading[y] + weight(c) - grading[x]``.

Homology engines:

* :func:`snf_homology` -- module decomposition over ``Q[U]`` by graded Smith
  normal form;
* :func:`graded_homology` -- dimensions over ``Q`` degree by degree;
* :func:`two_step_homology` -- ``H(H(C, d_first), d_second)`` for a split of
  the differential by one grading coordinate.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .linalg import dense, mat_rank
from .ring import LinearRelations, LaurentPoly, MultiPoly, parse_poly, var_key

log = logging.getLogger(__name__)

__all__ = [
    "RingSpec",
    "CurvedComplex",
    "ModuleDecomp",
    "Summand",
    "GradedDims",
    "NotCurved",
    "RingMismatch",
    "NotPID",
    "InfiniteDegreePiece",
    "SplitInvalid",
    "curvature",
    "tensor",
    "gaussian_cancel",
    "snf_homology",
    "graded_homology",
    "two_step_homology",
]


class NotCurved(ValueError):
    pass


class RingMismatch(ValueError):
    pass


class NotPID(ValueError):
    pass


class InfiniteDegreePiece(ValueError):
    pass


class SplitInvalid(ValueError):
    pass


def _frac_tuple(t: Iterable) -> tuple:
    return tuple(Fraction(x) for x in t)


def _fmt_frac(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# ring descriptor


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring over Q with optional linear and monomial relations.

    ``weights[v]`` is the grading vector of variable ``v``; it must have one
    entry per grading coordinate of the complexes built over this ring.
    """

    variables: tuple
    weights: Mapping[str, tuple]
    relations: tuple = ()
    zero_monomials: tuple = ()
    _lin: LinearRelations = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(sorted(self.variables, key=var_key)))
        object.__setattr__(self, "weights", {v: _frac_tuple(w) for v, w in self.weights.items()})
        rels = tuple(r if isinstance(r, MultiPoly) else parse_poly(r) for r in self.relations)
        object.__setattr__(self, "relations", rels)
        zm = []
        for m in self.zero_monomials:
            m = dict(m) if not isinstance(m, dict) else m
            zm.append(tuple(sorted(m.items(), key=lambda ve: var_key(ve[0]))))
        object.__setattr__(self, "zero_monomials", tuple(sorted(zm)))
        object.__setattr__(self, "_lin", LinearRelations(rels))
        missing = [v for v in self.variables if v not in self.weights]
        if missing:
            raise ValueError(f"no grading weights for {missing}")

    @property
    def free_variables(self) -> tuple:
        """Variables that survive linear elimination."""
        elim = set(self._lin.substitution)
        return tuple(v for v in self.variables if v not in elim)

    @property
    def ngradings(self) -> int:
        ws = list(self.weights.values())
        return len(ws[0]) if ws else 0

    def reduce(self, f: MultiPoly) -> MultiPoly:
        f = self._lin.reduce(f)
        if self.zero_monomials and f:
            keep = {}
            for m, c in f.items():
                md = dict(m)
                if any(all(md.get(v, 0) >= e for v, e in z) for z in self.zero_monomials):
                    continue
                keep[m] = c
            f = MultiPoly(keep)
        return f

    def weight(self, mono) -> tuple:
        n = self.ngradings
        out = [Fraction(0)] * n
        for v, e in mono:
            w = self.weights[v]
            for i in range(n):
                out[i] += w[i] * e
        return tuple(out)

    def with_(self, **changes) -> "RingSpec":
        d = dict(
            variables=self.variables,
            weights=self.weights,
            relations=self.relations,
            zero_monomials=self.zero_monomials,
        )
        d.update(changes)
        return RingSpec(**d)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "weights": {v: [_fmt_frac(x) for x in self.weights[v]] for v in self.variables},
            "relations": [str(r) for r in self.relations],
            "zero_monomials": [str(MultiPoly({m: 1})) for m in self.zero_monomials],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "RingSpec":
        zm = []
        for s in d.get("zero_monomials", []):
            p = parse_poly(s)
            (m, _), = p.items()
            zm.append(m)
        return cls(
            variables=tuple(d["variables"]),
            weights={v: tuple(Fraction(x) for x in w) for v, w in d["weights"].items()},
            relations=tuple(parse_poly(r) for r in d.get("relations", [])),
            zero_monomials=tuple(zm),
        )


# ---------------------------------------------------------------------------
# complexes


class CurvedComplex:
    """Free graded module with a curved differential.

    Parameters
    ----------
    ring : RingSpec
    generators : sequence of (name, grading) pairs
    differential : mapping ``(source, target) -> MultiPoly`` (strings are parsed)
    curvature : declared ``omega`` with ``d^2 = omega * Id``
    parity : optional ``name -> 0/1`` homological parity, used for Koszul signs
    check : verify the curvature identity and entry homogeneity
    """

    def __init__(
        self,
        ring: RingSpec,
        generators: Sequence[tuple[str, Sequence]],
        differential: Mapping[tuple[str, str], MultiPoly | str] | None = None,
        curvature: MultiPoly | str | int = 0,
        parity: Mapping[str, int] | None = None,
        check: bool = True,
    ):
        self.ring = ring
        names = [g for g, _ in generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators: tuple = tuple(names)
        self.gradings: dict = {g: _frac_tuple(gr) for g, gr in generators}
        self._index = {g: i for i, g in enumerate(names)}
        diff = {}
        for (s, t), c in (differential or {}).items():
            if s not in self._index or t not in self._index:
                raise KeyError(f"unknown generator in entry {(s, t)}")
            if isinstance(c, str):
                c = parse_poly(c)
            elif not isinstance(c, MultiPoly):
                c = MultiPoly(c)
            c = ring.reduce(c)
            if c:
                diff[(s, t)] = c
        self.differential: dict = diff
        if isinstance(curvature, str):
            curvature = parse_poly(curvature)
        elif not isinstance(curvature, MultiPoly):
            curvature = MultiPoly(curvature)
        self.curvature: MultiPoly = ring.reduce(curvature)
        self.parity = None if parity is None else {g: int(parity[g]) % 2 for g in names}
        if check:
            self.check()

    # -- basic structure --------------------------------------------------
    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        return f"CurvedComplex({len(self)} generators, {len(self.differential)} entries, curvature={self.curvature})"

    def entries_from(self, x: str) -> list:
        return [(t, c) for (s, t), c in self.differential.items() if s == x]

    def entry_degree(self, s: str, t: str, c: MultiPoly | None = None) -> tuple:
        c = self.differential[(s, t)] if c is None else c
        degs = {self.ring.weight(m) for m in c.terms}
        if len(degs) != 1:
            raise ValueError(f"entry {s}->{t} = {c} is not homogeneous")
        w = degs.pop()
        return tuple(self.gradings[t][i] + w[i] - self.gradings[s][i] for i in range(len(w)))

    def square(self) -> dict:
        """Entries of ``d^2`` as ``(source, target) -> MultiPoly``."""
        out_by_src: dict = {}
        for (s, m), c in self.differential.items():
            out_by_src.setdefault(s, []).append((m, c))
        sq: dict = {}
        for s, outs in out_by_src.items():
            for m, c1 in outs:
                for t, c2 in out_by_src.get(m, ()):
                    sq[(s, t)] = sq.get((s, t), MultiPoly()) + c1 * c2
        return {k: self.ring.reduce(v) for k, v in sq.items() if self.ring.reduce(v)}

    def check(self) -> None:
        for (s, t), c in self.differential.items():
            self.entry_degree(s, t, c)
        if self.parity is not None:
            for (s, t) in self.differential:
                if self.parity[s] == self.parity[t]:
                    raise ValueError(f"entry {s}->{t} does not change parity")
        omega = curvature(self)
        if omega != self.curvature:
            raise NotCurved(f"d^2 = ({omega})*Id but declared curvature is {self.curvature}")

    # -- transformations --------------------------------------------------
    def replace(self, **changes) -> "CurvedComplex":
        d = dict(
            ring=self.ring,
            generators=[(g, self.gradings[g]) for g in self.generators],
            differential=self.differential,
            curvature=self.curvature,
            parity=self.parity,
            check=False,
        )
        d.update(changes)
        return CurvedComplex(**d)

    def shift(self, vector: Sequence) -> "CurvedComplex":
        v = _frac_tuple(vector)
        gens = [(g, tuple(a + b for a, b in zip(self.gradings[g], v))) for g in self.generators]
        return self.replace(generators=gens)

    def substitute(self, assignments: Mapping[str, MultiPoly], ring: RingSpec,
                   gradings: Callable[[tuple], tuple] | None = None,
                   curvature_value: MultiPoly | int | None = None, check: bool = True) -> "CurvedComplex":
        """Apply a ring map ``var -> polynomial`` landing in ``ring``."""
        diff = {k: c.subs(assignments) for k, c in self.differential.items()}
        gens = [(g, gradings(self.gradings[g]) if gradings else self.gradings[g]) for g in self.generators]
        omega = self.curvature.subs(assignments) if curvature_value is None else curvature_value
        return CurvedComplex(ring, gens, diff, omega, self.parity, check=check)

    def rename_variables(self, mapping: Mapping[str, str], ring: RingSpec) -> "CurvedComplex":
        assign = {a: MultiPoly.var(b) for a, b in mapping.items()}
        return self.substitute(assign, ring, check=False)

    def restrict(self, keep: Callable[[str, str, MultiPoly], bool]) -> "CurvedComplex":
        """Keep only the entries accepted by ``keep(source, target, coeff)``."""
        diff = {k: c for k, c in self.differential.items() if keep(k[0], k[1], c)}
        return self.replace(differential=diff, curvature=MultiPoly())

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        d = {
            "ring": self.ring.to_dict(),
            "generators": [
                {"name": g, "grading": [_fmt_frac(x) for x in self.gradings[g]]} for g in self.generators
            ],
            "differential": [[s, t, str(c)] for (s, t), c in sorted(
                self.differential.items(), key=lambda kv: (self._index[kv[0][0]], self._index[kv[0][1]]))],
            "curvature": str(self.curvature),
        }
        if self.parity is not None:
            d["parity"] = {g: self.parity[g] for g in self.generators}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: Mapping, check: bool = True) -> "CurvedComplex":
        ring = RingSpec.from_dict(d["ring"])
        gens = [(g["name"], tuple(Fraction(x) for x in g["grading"])) for g in d["generators"]]
        diff = {(s, t): parse_poly(c) for s, t, c in d["differential"]}
        return cls(ring, gens, diff, parse_poly(d.get("curvature", "0")), d.get("parity"), check=check)

    @classmethod
    def from_json(cls, text: str, check: bool = True) -> "CurvedComplex":
        return cls.from_dict(json.loads(text), check=check)


def curvature(C: CurvedComplex) -> MultiPoly:
    """Return ``omega`` with ``d^2 = omega * Id``; raise :class:`NotCurved` otherwise."""
    sq = C.square()
    omega = None
    for (s, t), c in sq.items():
        if s != t:
            raise NotCurved(f"d^2 has off-diagonal entry {s}->{t}: {c}")
    for g in C.generators:
        c = sq.get((g, g), MultiPoly())
        if omega is None:
            omega = c
        elif c != omega:
            raise NotCurved(f"d^2 is not scalar: {omega} vs {c} on {g}")
    return omega if omega is not None else MultiPoly()


def tensor(C1: CurvedComplex, C2: CurvedComplex, sep: str = "|") -> CurvedComplex:
    """Tensor product over the common ring.

    ``d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy`` with ``|x|`` the parity of
    ``x``; gradings add and curvatures add.
    """
    r1, r2 = C1.ring, C2.ring
    if r1 != r2:
        shared = set(r1.variables) & set(r2.variables)
        if any(r1.weights[v] != r2.weights[v] for v in shared):
            raise RingMismatch("shared variables carry different weights")
        if r1.ngradings and r2.ngradings and r1.ngradings != r2.ngradings:
            raise RingMismatch("grading lengths differ")
        if (r1.relations or r2.relations) and set(r1.relations) != set(r2.relations) and shared:
            raise RingMismatch("rings share variables but have different relations")
        ring = RingSpec(
            variables=tuple(set(r1.variables) | set(r2.variables)),
            weights={**r1.weights, **r2.weights},
            relations=tuple(dict.fromkeys(r1.relations + r2.relations)),
            zero_monomials=tuple(dict.fromkeys(r1.zero_monomials + r2.zero_monomials)),
        )
    else:
        ring = r1
    if C1.parity is None and C1.differential and C2.differential:
        raise ValueError("tensor needs a parity on the first factor")
    p1 = C1.parity or {g: 0 for g in C1.generators}
    gens, par = [], {}
    for x, y in product(C1.generators, C2.generators):
        name = f"{x}{sep}{y}"
        gens.append((name, tuple(a + b for a, b in zip(C1.gradings[x], C2.gradings[y]))))
        if C1.parity is not None and C2.parity is not None:
            par[name] = (C1.parity[x] + C2.parity[y]) % 2
    diff: dict = {}
    for (x, x2), c in C1.differential.items():
        for y in C2.generators:
            diff[(f"{x}{sep}{y}", f"{x2}{sep}{y}")] = c
    for (y, y2), c in C2.differential.items():
        for x in C1.generators:
            sign = -1 if p1[x] else 1
            key = (f"{x}{sep}{y}", f"{x}{sep}{y2}")
            diff[key] = diff.get(key, MultiPoly()) + c.scale(sign)
    return CurvedComplex(ring, gens, diff, C1.curvature + C2.curvature,
                         par if par else None, check=False)


def gaussian_cancel(C: CurvedComplex, allowed: Callable[[str, str], bool] | None = None) -> CurvedComplex:
    """Cancel invertible (nonzero constant) entries by the zig-zag formula.

    ``allowed(source, target)`` can restrict which arrows may be cancelled.
    The result is chain homotopy equivalent to ``C``.
    """
    diff = dict(C.differential)
    alive = list(C.generators)
    out_of: dict = {}
    into: dict = {}
    for (s, t), c in diff.items():
        out_of.setdefault(s, {})[t] = c
        into.setdefault(t, {})[s] = c
    while True:
        pick = None
        for s in alive:
            for t, c in sorted(out_of.get(s, {}).items()):
                if s != t and c.is_constant() and (allowed is None or allowed(s, t)):
                    pick = (s, t, c.constant_value())
                    break
            if pick:
                break
        if pick is None:
            break
        x, y, c = pick
        srcs = {z: a for z, a in into.get(y, {}).items() if z not in (x, y)}
        tgts = {w: b for w, b in out_of.get(x, {}).items() if w not in (x, y)}
        for z, a in srcs.items():
            for w, b in tgts.items():
                old = out_of.get(z, {}).get(w, MultiPoly())
                new = C.ring.reduce(old - (a * b).scale(Fraction(1) / c))
                if new:
                    out_of.setdefault(z, {})[w] = new
                    into.setdefault(w, {})[z] = new
                else:
                    out_of.get(z, {}).pop(w, None)
                    into.get(w, {}).pop(z, None)
        for g in (x, y):
            for t in list(out_of.get(g, {})):
                into.get(t, {}).pop(g, None)
            for s in list(into.get(g, {})):
                out_of.get(s, {}).pop(g, None)
            out_of.pop(g, None)
            into.pop(g, None)
        alive = [g for g in alive if g not in (x, y)]
    new_diff = {(s, t): c for s in alive for t, c in out_of.get(s, {}).items()}
    return CurvedComplex(
        C.ring,
        [(g, C.gradings[g]) for g in alive],
        new_diff,
        C.curvature,
        None if C.parity is None else {g: C.parity[g] for g in alive},
        check=False,
    )


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True, order=True)
class Summand:
    """``Free`` (exponent 0) or ``Torsion`` summand ``Q[U]/(U^exponent)`` with
    generator in degree ``shift``."""

    exponent: int
    shift: tuple

    @property
    def free(self) -> bool:
        return self.exponent == 0

    def __str__(self):
        sh = ",".join(_fmt_frac(x) for x in self.shift)
        if self.free:
            return f"Q[U]{{{sh}}}"
        if self.exponent == 1:
            return f"Q{{{sh}}}"
        return f"Q[U]/(U^{self.exponent}){{{sh}}}"


@dataclass(frozen=True)
class ModuleDecomp:
    """Direct sum decomposition of a graded module over ``Q[U]``."""

    summands: tuple
    u_weight: tuple = (Fraction(2),)

    def __post_init__(self):
        object.__setattr__(self, "summands", tuple(sorted(self.summands, key=lambda s: (s.free, -s.exponent, s.shift))))

    @property
    def torsion(self) -> list:
        return [s for s in self.summands if not s.free]

    @property
    def free_rank(self) -> int:
        return sum(1 for s in self.summands if s.free)

    def exponents(self) -> list:
        return [s.exponent for s in self.summands]

    def dims(self) -> "GradedDims":
        if self.free_rank:
            raise InfiniteDegreePiece("module has free summands")
        table: dict = {}
        for s in self.summands:
            for j in range(s.exponent):
                key = tuple(a + j * w for a, w in zip(s.shift, self.u_weight))
                table[key] = table.get(key, 0) + 1
        return GradedDims(table)

    def total_dim(self) -> int:
        return self.dims().total()

    def __str__(self):
        return " + ".join(str(s) for s in self.summands) if self.summands else "0"


@dataclass(frozen=True)
class GradedDims:
    """Dimensions of graded pieces.  Keys are grading tuples (Fractions).

    ``cutoff`` records the primary-degree bound when the table was truncated.
    """

    table: Mapping
    cutoff: Fraction | None = None
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for k, v in self.table.items():
            k = _frac_tuple(k if isinstance(k, tuple) else (k,))
            if v:
                clean[k] = clean.get(k, 0) + int(v)
        object.__setattr__(self, "table", dict(sorted(clean.items())))

    def total(self) -> int:
        return sum(self.table.values())

    def project(self, coord: int = 0, weights: Sequence | None = None) -> dict:
        """Collapse to a single degree, either one coordinate or a linear form."""
        out: dict = {}
        for k, v in self.table.items():
            d = k[coord] if weights is None else sum(Fraction(w) * x for w, x in zip(weights, k))
            out[d] = out.get(d, 0) + v
        return dict(sorted(out.items()))

    def poincare(self, coord: int = 0, weights: Sequence | None = None, var: str = "q",
                 sign: Callable[[tuple], int] | None = None) -> LaurentPoly:
        """Poincare (or, with ``sign``, Euler) polynomial in ``var``.

        Half-integer degrees are not representable; use :meth:`project` for them.
        """
        terms: dict = {}
        for k, v in self.table.items():
            d = k[coord] if weights is None else sum(Fraction(w) * x for w, x in zip(weights, k))
            d = Fraction(d)
            if d.denominator != 1:
                raise ValueError(f"degree {d} is not an integer")
            s = 1 if sign is None else sign(k)
            terms[d] = terms.get(d, 0) + s * v
        return LaurentPoly({((var, int(d)),): c for d, c in terms.items()})

    def shifted(self, vector: Sequence) -> "GradedDims":
        v = _frac_tuple(vector)
        return GradedDims({tuple(a + b for a, b in zip(k, v)): n for k, n in self.table.items()},
                          self.cutoff, self.truncated)

    def __str__(self):
        def fk(k):
            return "(" + ",".join(_fmt_frac(x) for x in k) + ")" if len(k) > 1 else _fmt_frac(k[0])
        body = ", ".join(f"{fk(k)}: {v}" for k, v in self.table.items())
        tail = f" [truncated at {_fmt_frac(self.cutoff)}]" if self.truncated else ""
        return "{" + body + "}" + tail


# ---------------------------------------------------------------------------
# Smith normal form over Q[U]


def snf_homology(C: CurvedComplex) -> ModuleDecomp:
    """Homology of a graded complex over ``Q[U]`` (or ``Q``) as a module decomposition.

    Entries must be homogeneous, hence monomials ``c*U^k``.  The entry of
    smallest ``U``-power divides every other entry, so it can be isolated by
    unipotent changes of basis; each isolated arrow ``x -> c U^k y`` leaves a
    summand ``Q[U]/(U^k)`` at ``y`` (nothing when ``k = 0``).
    """
    free = C.ring.free_variables
    if len(free) > 1:
        raise NotPID(f"ring has {len(free)} surviving variables")
    if C.ring.zero_monomials:
        raise NotPID("ring has monomial relations; use graded_homology")
    if C.curvature:
        raise NotCurved("snf_homology needs a complex with d^2 = 0")
    u = free[0] if free else None
    # entry -> (power, coeff)
    mat: dict = {}
    for (s, t), c in C.differential.items():
        if len(c) != 1:
            raise ValueError(f"entry {s}->{t} = {c} is not a monomial; complex not graded")
        (m, coef), = c.items()
        mat[(s, t)] = (dict(m).get(u, 0), coef)
    out_of: dict = {}
    into: dict = {}
    for (s, t), v in mat.items():
        out_of.setdefault(s, {})[t] = v
        into.setdefault(t, {})[s] = v

    def setv(s, t, v):
        if v[1]:
            out_of.setdefault(s, {})[t] = v
            into.setdefault(t, {})[s] = v
        else:
            out_of.get(s, {}).pop(t, None)
            into.get(t, {}).pop(s, None)

    def addv(a, b):
        # add monomials of equal power (graded complexes guarantee equal powers)
        if not a[1]:
            return b
        if not b[1]:
            return a
        if a[0] != b[0]:
            raise ValueError("inhomogeneous combination in SNF")
        return (a[0], a[1] + b[1])

    alive = set(C.generators)
    summands = []
    order = {g: i for i, g in enumerate(C.generators)}
    while True:
        best = None
        for s in sorted(alive, key=order.get):
            for t, (k, c) in out_of.get(s, {}).items():
                key = (k, order[s], order[t])
                if best is None or key < best[0]:
                    best = (key, s, t, k, c)
        if best is None:
            break
        _, x, y, k, c = best
        # clear column: other targets w of x; new basis y' = y + (b/c U^{p-k}) w
        for w, (p, b) in list(out_of.get(x, {}).items()):
            if w == y:
                continue
            f = (p - k, b / c)
            # row op: row_w -= f * row_y  (entries into w from sources s)
            for s, (q, a) in list(into.get(y, {}).items()):
                cur = out_of.get(s, {}).get(w, (0, Fraction(0)))
                setv(s, w, addv(cur, (q + f[0], -a * f[1])))
            # column op: col_{y'} += f * col_w  (entries out of w added to y)
            for t, (q, a) in list(out_of.get(w, {}).items()):
                cur = out_of.get(y, {}).get(t, (0, Fraction(0)))
                setv(y, t, addv(cur, (q + f[0], a * f[1])))
        # clear row: other sources z into y; new basis z' = z - (e/c U^{p-k}) x
        for z, (p, e) in list(into.get(y, {}).items()):
            if z == x:
                continue
            f = (p - k, e / c)
            # column op: col_z -= f * col_x
            for t, (q, a) in list(out_of.get(x, {}).items()):
                cur = out_of.get(z, {}).get(t, (0, Fraction(0)))
                setv(z, t, addv(cur, (q + f[0], -a * f[1])))
            # row op: row_x += f * row_z
            for s, (q, a) in list(into.get(z, {}).items()):
                cur = out_of.get(s, {}).get(x, (0, Fraction(0)))
                setv(s, x, addv(cur, (q + f[0], a * f[1])))
        leftovers = [t for t in out_of.get(x, {}) if t != y] + [s for s in into.get(y, {}) if s != x]
        leftovers += list(out_of.get(y, {})) + list(into.get(x, {}))
        if leftovers:
            raise ValueError("SNF elimination failed; is d^2 = 0?")
        for g in (x, y):
            for t in list(out_of.get(g, {})):
                into.get(t, {}).pop(g, None)
            out_of.pop(g, None)
            into.pop(g, None)
        alive -= {x, y}
        if k > 0:
            summands.append(Summand(k, C.gradings[y]))
    for g in sorted(alive, key=order.get):
        summands.append(Summand(0, C.gradings[g]))
    uw = C.ring.weights[u] if u else (Fraction(2),) * max(1, C.ring.ngradings)
    return ModuleDecomp(tuple(summands), uw)


# ---------------------------------------------------------------------------
# degreewise engines


def _num(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


class _Graded:
    """Degreewise view of a complex: basis elements are (generator, monomial).

    Block keys are integer tuples: every form value is multiplied by
    ``self.scale`` (a common denominator); :meth:`unscale` converts back.
    """

    def __init__(self, C: CurvedComplex, forms: Sequence[Sequence], use_parity: bool):
        from math import lcm

        self.C = C
        ring = C.ring
        self.vars = ring.free_variables
        self.forms = [_frac_tuple(f) for f in forms]
        self.use_parity = use_parity and C.parity is not None
        raw_w = [tuple(self._apply(ring.weights[v], f) for f in self.forms) for v in self.vars]
        raw_g = {g: tuple(self._apply(C.gradings[g], f) for f in self.forms) for g in C.generators}
        dens = [x.denominator for w in raw_w for x in w] + [x.denominator for k in raw_g.values() for x in k]
        self.scale = lcm(1, *dens)
        if any(w[0] <= 0 for w in raw_w):
            raise InfiniteDegreePiece("every surviving variable needs positive primary weight")
        self.var_w = [tuple(int(x * self.scale) for x in w) for w in raw_w]
        self.gen_key = {}
        for g in C.generators:
            k = tuple(int(x * self.scale) for x in raw_g[g])
            if self.use_parity:
                k = k + (C.parity[g],)
            self.gen_key[g] = k
        self.zero = [tuple(dict(z).get(v, 0) for v in self.vars) for z in ring.zero_monomials]
        elim = set(ring._lin.substitution)
        for z in ring.zero_monomials:
            if any(v in elim for v, _ in z):
                raise ValueError("monomial relations must use surviving variables")
        # compile differential: source -> list of (target, [(exps, coeff)])
        self.out: dict = {g: [] for g in C.generators}
        for (s, t), c in C.differential.items():
            terms = [(tuple(dict(m).get(v, 0) for v in self.vars), _num(coef)) for m, coef in c.items()]
            self.out[s].append((t, terms))
        self._mono_cache: dict = {}

    @staticmethod
    def _apply(vec, form):
        return sum((a * b for a, b in zip(vec, form)), Fraction(0))

    def scaled(self, vec) -> tuple:
        """Form values of a raw grading vector, scaled to integers."""
        out = []
        for f in self.forms:
            x = self._apply(vec, f) * self.scale
            if x.denominator != 1:
                raise ValueError("degree is not compatible with the block lattice")
            out.append(int(x))
        return tuple(out)

    def unscale(self, key) -> tuple:
        n = len(self.forms)
        return tuple(Fraction(x, self.scale) for x in key[:n]) + tuple(key[n:])

    def scaled_cutoff(self, cutoff) -> int:
        from math import floor
        return floor(Fraction(cutoff) * self.scale)

    def is_zero_mono(self, e) -> bool:
        return any(all(ei >= zi for ei, zi in zip(e, z)) for z in self.zero)

    def _monos(self, deg: int) -> dict:
        """Exponent tuples of primary weight ``deg``, grouped by full weight."""
        if deg in self._mono_cache:
            return self._mono_cache[deg]
        res = []
        ws = [w[0] for w in self.var_w]

        def rec(i, left, acc):
            if i == len(ws):
                if left == 0:
                    res.append(tuple(acc))
                return
            e = 0
            while e * ws[i] <= left:
                rec(i + 1, left - e * ws[i], acc + [e])
                e += 1

        if deg >= 0:
            rec(0, deg, [])
        groups: dict = {}
        n = len(self.forms)
        for e in res:
            if self.zero and self.is_zero_mono(e):
                continue
            w = tuple(sum(ei * vw[i] for ei, vw in zip(e, self.var_w)) for i in range(n))
            groups.setdefault(w, []).append(e)
        self._mono_cache[deg] = groups
        return groups

    def monomials(self, deg: int) -> list:
        return [e for grp in self._monos(deg).values() for e in grp]

    def key_of(self, g, e) -> tuple:
        base = self.gen_key[g]
        n = len(self.forms)
        k = tuple(base[i] + sum(ei * w[i] for ei, w in zip(e, self.var_w)) for i in range(n))
        if self.use_parity:
            k = k + (base[n],)
        return k

    def basis(self, key) -> list:
        out = []
        n = len(self.forms)
        for g in self.C.generators:
            gk = self.gen_key[g]
            if self.use_parity and gk[-1] != key[-1]:
                continue
            grp = self._monos(key[0] - gk[0]).get(tuple(key[i] - gk[i] for i in range(n)))
            if grp:
                gi = self.C._index[g]
                out.extend((gi, e) for e in grp)
        out.sort()
        return out

    def image(self, elem, entries=None) -> dict:
        gi, e = elem
        g = self.C.generators[gi]
        vec: dict = {}
        for t, terms in (entries if entries is not None else self.out)[g]:
            ti = self.C._index[t]
            for ex, c in terms:
                m = tuple(a + b for a, b in zip(e, ex))
                if self.zero and self.is_zero_mono(m):
                    continue
                k = (ti, m)
                s = vec.get(k, 0) + c
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
        return vec

    def keys_upto(self, cutoff: int) -> list:
        """All block keys whose (scaled) primary degree is <= cutoff."""
        keys = set()
        n = len(self.forms)
        for g in self.C.generators:
            gk = self.gen_key[g]
            for d in range(0, cutoff - gk[0] + 1):
                for w in self._monos(d):
                    k = tuple(gk[i] + w[i] for i in range(n))
                    keys.add(k + gk[n:])
        return sorted(keys)


def _entry_key_degree(G: _Graded, s, t, c) -> tuple:
    return G.scaled(G.C.entry_degree(s, t, c))


def _uniform_degree(G: _Graded, entries: Iterable) -> tuple | None:
    degs = {_entry_key_degree(G, s, t, c) for s, t, c in entries}
    if len(degs) > 1:
        raise ValueError(f"differential is not homogeneous for the chosen gradings: {sorted(degs)}")
    return degs.pop() if degs else None


def _default_forms(C: CurvedComplex) -> list:
    n = C.ring.ngradings or len(next(iter(C.gradings.values()), ()))
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


def _shift_key(key, step, use_parity):
    if step is None:
        return None
    n = len(step)
    k = tuple(key[i] + step[i] for i in range(n))
    if use_parity:
        k = k + ((key[n] + 1) % 2,)
    return k


def _unshift_key(key, step, use_parity):
    if step is None:
        return None
    n = len(step)
    k = tuple(key[i] - step[i] for i in range(n))
    if use_parity:
        k = k + ((key[n] + 1) % 2,)
    return k


def default_cutoff(C: CurvedComplex, forms: Sequence | None = None, n: int = 1, margin: int = 0) -> Fraction:
    """Max generator degree + 2 * n * (#variables) + margin, in the primary form."""
    forms = forms or _default_forms(C)
    f0 = _frac_tuple(forms[0])
    top = max((sum(a * b for a, b in zip(C.gradings[g], f0)) for g in C.generators), default=Fraction(0))
    return top + 2 * n * len(C.ring.free_variables) + margin


def graded_homology(C: CurvedComplex, cutoff=None, forms: Sequence | None = None,
                    use_parity: bool = True, keep_parity: bool = False) -> GradedDims:
    """Dimensions of homology over Q in every block with primary degree <= cutoff.

    ``forms`` are linear forms on the grading vector; the differential must be
    homogeneous for each of them and the first (primary) form must give every
    surviving variable positive weight.  Blocks are keyed by the values of the
    forms (and by parity when available).  With ``keep_parity`` the parity
    stays as the last coordinate of every table key.
    """
    if C.curvature:
        raise NotCurved("graded_homology needs d^2 = 0")
    forms = forms or _default_forms(C)
    G = _Graded(C, forms, use_parity)
    if cutoff is None:
        cutoff = default_cutoff(C, forms)
    cutoff = Fraction(cutoff)
    step = _uniform_degree(G, [(s, t, c) for (s, t), c in C.differential.items()])
    keys = G.keys_upto(G.scaled_cutoff(cutoff))
    ranks: dict = {}

    def rank_out(key):
        if key not in ranks:
            src = G.basis(key)
            tgt = G.basis(_shift_key(key, step, G.use_parity)) if src else []
            ranks[key] = mat_rank(_block_matrix(G, src, tgt, G.out)) if tgt else 0
        return ranks[key]

    table = {}
    for key in keys:
        dim = len(G.basis(key))
        if not dim:
            continue
        r_out = rank_out(key) if step is not None else 0
        prev = _unshift_key(key, step, G.use_parity)
        r_in = rank_out(prev) if prev is not None and prev[0] >= min(G.gen_key[g][0] for g in C.generators) else 0
        h = dim - r_out - r_in
        if h:
            tk = G.unscale(key if keep_parity and G.use_parity else key[: len(forms)])
            table[tk] = table.get(tk, 0) + h
    truncated = _maybe_truncated(table, cutoff)
    return GradedDims(table, cutoff, truncated)


def _maybe_truncated(table: Mapping, cutoff) -> bool:
    return any(k[0] > cutoff - 4 for k in table)


def _block_matrix(G: _Graded, basis: list, tgt_basis: list, out) -> "object":
    cols = {b: i for i, b in enumerate(tgt_basis)}
    rows = [G.image(el, out) for el in basis]
    for r in rows:
        for k in r:
            if k not in cols:
                raise ValueError("differential leaves the target block; gradings inconsistent")
    return dense(rows, cols)


def two_step_homology(C: CurvedComplex, split_coord: int, cutoff=None,
                      forms: Sequence | None = None, use_parity: bool = True,
                      check: bool = True, keep_parity: bool = False) -> GradedDims:
    """``H(H(C, d_first), d_second^*)`` block by block.

    Entries preserving grading coordinate ``split_coord`` form ``d_first``;
    the rest form ``d_second``.  Both pieces must be homogeneous for every
    form.  The rank of the induced map on a block is
    ``rank[d_second(Z) ; B'] - rank B'`` with ``Z`` the cycles of the source
    and ``B'`` the boundaries of the target block.
    """
    if C.curvature:
        raise NotCurved("two_step_homology needs d^2 = 0")
    forms = forms or _default_forms(C)
    first = {k: c for k, c in C.differential.items() if C.entry_degree(k[0], k[1], c)[split_coord] == 0}
    second = {k: c for k, c in C.differential.items() if k not in first}
    if check:
        C1 = C.replace(differential=first, curvature=MultiPoly())
        C2 = C.replace(differential=second, curvature=MultiPoly())
        if C1.square():
            raise SplitInvalid("d_first does not square to zero")
        if C2.square():
            raise SplitInvalid("d_second does not square to zero")
    G = _Graded(C, forms, use_parity)
    if cutoff is None:
        cutoff = default_cutoff(C, forms)
    cutoff = Fraction(cutoff)
    s1 = _uniform_degree(G, [(s, t, c) for (s, t), c in first.items()])
    s2 = _uniform_degree(G, [(s, t, c) for (s, t), c in second.items()])
    out1 = {g: [] for g in C.generators}
    out2 = {g: [] for g in C.generators}
    for src, dst in ((first, out1), (second, out2)):
        for (s, t), c in src.items():
            dst[s].append((t, [(tuple(dict(m).get(v, 0) for v in G.vars), _num(coef)) for m, coef in c.items()]))
    min_primary = min((G.gen_key[g][0] for g in C.generators), default=0)

    bases: dict = {}

    def basis(key):
        if key is None or key[0] < min_primary:
            return []
        if key not in bases:
            bases[key] = G.basis(key)
        return bases[key]

    up1 = lambda k: _shift_key(k, s1, G.use_parity)
    down1 = lambda k: _unshift_key(k, s1, G.use_parity)
    r1s: dict = {}

    def r1(key):
        """rank of d_first leaving block ``key``."""
        if key is None or s1 is None:
            return 0
        if key not in r1s:
            src, tgt = basis(key), basis(up1(key))
            r1s[key] = mat_rank(_block_matrix(G, src, tgt, out1)) if src and tgt else 0
        return r1s[key]

    def h1(key):
        return len(basis(key)) - r1(key) - r1(down1(key))

    ranks: dict = {}

    def rank2(key):
        # rank [[D1_k, D2_k], [0, D1_(t-s1)]] = r1(k) + rank(d2(Z_k) + B_t)
        if key in ranks:
            return ranks[key]
        r = 0
        tgt = _shift_key(key, s2, G.use_parity)
        if s2 is not None and basis(key) and basis(tgt) and h1(key) and h1(tgt):
            rows = []
            for el in basis(key):
                row = {("b", k): v for k, v in G.image(el, out2).items()}
                if s1 is not None:
                    row.update({("a", k): v for k, v in G.image(el, out1).items()})
                rows.append(row)
            prev_t = down1(tgt) if s1 is not None else None
            for el in basis(prev_t):
                rows.append({("b", k): v for k, v in G.image(el, out1).items()})
            cols = {}
            for tag, blk in (("a", basis(up1(key)) if s1 is not None else []), ("b", basis(tgt))):
                for b in blk:
                    cols[(tag, b)] = len(cols)
            r = mat_rank(dense(rows, cols)) - r1(key) - r1(prev_t)
        ranks[key] = r
        return r

    table = {}
    for key in G.keys_upto(G.scaled_cutoff(cutoff)):
        if not basis(key):
            continue
        d1 = h1(key)
        if not d1:
            continue
        prev = _unshift_key(key, s2, G.use_parity)
        r_in = rank2(prev) if prev is not None and prev[0] >= min_primary else 0
        h = d1 - rank2(key) - r_in
        if h:
            tk = G.unscale(key if keep_parity and G.use_parity else key[: len(forms)])
            table[tk] = table.get(tk, 0) + h
    return GradedDims(table, cutoff, _maybe_truncated(table, cutoff))


def first_page(C: CurvedComplex, split_coord: int, cutoff=None, forms: Sequence | None = None,
               use_parity: bool = True) -> GradedDims:
    """Dimensions of ``H(C, d_first)`` alone (entries preserving ``split_coord``)."""
    first = {k: c for k, c in C.differential.items() if C.entry_degree(k[0], k[1], c)[split_coord] == 0}
    return graded_homology(C.replace(differential=first, curvature=MultiPoly()), cutoff, forms, use_parity)
