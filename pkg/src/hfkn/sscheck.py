"""Spectral-sequence bookkeeping between Poincaré polynomials.

A spectral sequence whose differentials all have degree ``step`` can only
cancel generators in pairs sitting in degrees ``d`` and ``d + step``.  So a
source polynomial ``P`` can converge to a target ``Q`` only if, after moving
``Q`` by some overall shift ``q^s``,

    P - q^s Q = (1 + q^step) W

with ``W`` having nonnegative integer coefficients.  :func:`ss_step` searches
for such a shift.  The closed forms used as sl_n-side oracles for torus knots
are collected in :data:`ORACLES`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .ring import LaurentPoly

__all__ = [
    "SSVerdict",
    "UnknownOracle",
    "ss_step",
    "oracle",
    "ORACLES",
    "quantum_int",
    "t3_3k1_khovanov",
    "t3_3k1_hfk2",
    "t3_3k2_khovanov",
    "t3_3k2_hfk2",
    "cautis",
    "cautis_conjecture",
    "cautis_total",
    "gorsky_lewark_dim",
    "hfkn_dim_t3",
    "kr_conjecture_poly",
    "ReportRow",
    "conjecture_report",
    "format_report",
]

_q = LaurentPoly.var("q")


class UnknownOracle(KeyError):
    pass


def _coeffs(P: LaurentPoly) -> dict[int, int]:
    out = {}
    for m, c in P.items():
        d = dict(m)
        if set(d) - {"q"}:
            raise ValueError(f"expected a polynomial in q alone, got {P}")
        if Fraction(c).denominator != 1:
            raise ValueError(f"non-integer coefficient in {P}")
        out[d.get("q", 0)] = int(c)
    return out


def _poly(c: dict[int, int]) -> LaurentPoly:
    return LaurentPoly({(("q", e),): v for e, v in c.items() if v})


@dataclass(frozen=True)
class SSVerdict:
    """Outcome of :func:`ss_step`.

    When ``compatible``: ``source - q^shift * target == (1 + q^step) * witness``.
    Otherwise ``certificate`` says why the best aligned shift failed.
    """

    compatible: bool
    step: int
    shift: int | None = None
    witness: LaurentPoly | None = None
    certificate: str | None = None
    dim_source: int = 0
    dim_target: int = 0
    parity_ok: bool = True
    minus_one_ok: bool | None = None

    @property
    def dim_difference(self) -> int:
        return self.dim_source - self.dim_target

    def to_dict(self) -> dict:
        return {
            "compatible": self.compatible,
            "step": self.step,
            "shift": self.shift,
            "witness": None if self.witness is None else str(self.witness),
            "certificate": self.certificate,
            "dim_source": self.dim_source,
            "dim_target": self.dim_target,
            "parity_ok": self.parity_ok,
            "minus_one_ok": self.minus_one_ok,
        }


def _divide_pairs(diff: dict[int, int], step: int) -> tuple[dict | None, str | None]:
    """Solve ``diff = (1 + q^step) W`` with ``W >= 0``; ascending long division."""
    rest = dict(diff)
    W: dict[int, int] = {}
    for d in sorted(diff):
        c = rest.get(d, 0)
        if c == 0:
            continue
        if c < 0:
            return None, f"residual coefficient {c} at q^{d} after pairing lower terms"
        W[d] = c
        rest[d] = 0
        rest[d + step] = rest.get(d + step, 0) - c
    left = {d: c for d, c in rest.items() if c}
    if left:
        d = min(left)
        return None, f"coefficient {left[d]} at q^{d} is left unpaired"
    return W, None


def ss_step(source: LaurentPoly, target: LaurentPoly, step: int,
            shift: int | None = None) -> SSVerdict:
    """Is there a spectral sequence from ``source`` to ``target`` with all
    differentials of degree ``step``, up to an overall shift of ``target``?

    Shifts are tried outward from the one aligning the lowest degrees, within
    the span of ``source`` plus ``step`` on either side.  Passing ``shift``
    fixes the alignment instead of searching.
    """
    if step < 1:
        raise ValueError("step must be >= 1")
    P, Q = _coeffs(source), _coeffs(target)
    dim_p, dim_q = sum(P.values()), sum(Q.values())
    parity_ok = (dim_p - dim_q) % 2 == 0
    minus_one = None
    if step % 2:
        ep = sum(c * (-1) ** (e % 2) for e, c in P.items())
        eq = sum(c * (-1) ** (e % 2) for e, c in Q.items())
        minus_one = abs(ep) == abs(eq)
    common = dict(step=step, dim_source=dim_p, dim_target=dim_q,
                  parity_ok=parity_ok, minus_one_ok=minus_one)
    if any(c < 0 for c in list(P.values()) + list(Q.values())):
        return SSVerdict(False, certificate="negative coefficient in an input", **common)
    if shift is not None:
        shifts = [shift]
    elif not Q:
        shifts = [0]
    else:
        base = (min(P) - min(Q)) if P else 0
        span = (max(P) - min(P)) if P else 0
        r = span + step
        shifts = sorted(range(base - r, base + r + 1), key=lambda s: (abs(s - base), s))
    first_failure = None
    for s in shifts:
        diff = dict(P)
        for e, c in Q.items():
            diff[e + s] = diff.get(e + s, 0) - c
        diff = {e: c for e, c in diff.items() if c}
        W, why = _divide_pairs(diff, step)
        if W is not None:
            return SSVerdict(True, shift=s, witness=_poly(W), **common)
        if first_failure is None:
            first_failure = (s, why)
    s, why = first_failure
    return SSVerdict(False, shift=s, certificate=why, **common)


# ---------------------------------------------------------------------------
# closed forms


def quantum_int(n: int) -> LaurentPoly:
    """``[n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}``."""
    return _poly({n - 1 - 2 * j: 1 for j in range(n)})


def t3_3k1_khovanov(k: int) -> LaurentPoly:
    """δ-graded Khovanov homology of T(3, 3k+1):
    ``q^{4k-1}(1 + 4q^2 + 6q^4 + ... + 6q^{2k} + 3q^{2k+2})``.

    The 6s fill degrees ``4 .. 2k``, so for ``k = 1`` there are none; this
    reading makes the total ``6k + 2``, the Gorsky-Lewark count at n = 2.
    """
    _k_ok(k)
    c = {0: 1, 2: 4, 2 * k + 2: 3}
    for j in range(2, k + 1):
        c[2 * j] = 6
    return _poly(c).shift(4 * k - 1)


def t3_3k1_hfk2(k: int) -> LaurentPoly:
    """HFK_2 of T(3, 3k+1): ``q^{4k-1}(1 + 3q^2 + 4q^4 + ... + 4q^{2k} + 2q^{2k+2})``."""
    _k_ok(k)
    c = {0: 1, 2: 3, 2 * k + 2: 2}
    for j in range(2, k + 1):
        c[2 * j] = 4
    return _poly(c).shift(4 * k - 1)


def t3_3k2_khovanov(k: int) -> LaurentPoly:
    """δ-graded Khovanov homology of T(3, 3k+2):
    ``q^{4k+1}(2 + 5q^2 + 6q^4 + ... + 6q^{2k} + 3q^{2k+2})``."""
    _k_ok(k)
    c = {0: 2, 2: 5, 2 * k + 2: 3}
    for j in range(2, k + 1):
        c[2 * j] = 6
    return _poly(c).shift(4 * k + 1)


def t3_3k2_hfk2(k: int) -> LaurentPoly:
    """HFK_2 of T(3, 3k+2): ``q^{4k+1}(2 + 4q^2 + ... + 4q^{2k} + 2q^{2k+2})``."""
    _k_ok(k)
    c = {0: 2, 2 * k + 2: 2}
    for j in range(1, k + 1):
        c[2 * j] = 4
    return _poly(c).shift(4 * k + 1)


def cautis(k: int, n: int, t: LaurentPoly | None = None) -> LaurentPoly:
    """Cautis' sl_n Poincaré polynomial of T(2, 2k+1), two-variable form

        1 + [n-1] (q^n sum_{i=0}^{k} t^{2i} q^{-4i} + t^3 q^{-n-4} sum_{i<k} t^{2i} q^{-4i}).

    ``t`` defaults to the variable ``t``; pass ``q**n`` for the conjecture grading.
    """
    _k_ok(k, allow_zero=True)
    if n < 1:
        raise ValueError("n must be >= 1")
    if t is None:
        t = LaurentPoly.var("t")
    q = _q
    s1 = sum((t ** (2 * i) * q ** (-4 * i) for i in range(k + 1)), LaurentPoly())
    s2 = sum((t ** (2 * i) * q ** (-4 * i) for i in range(k)), LaurentPoly())
    return LaurentPoly(1) + quantum_int(n - 1) * (q ** n * s1 + t ** 3 * q ** (-n - 4) * s2)


def cautis_conjecture(k: int, n: int) -> LaurentPoly:
    """:func:`cautis` at ``t = q^n``."""
    return cautis(k, n, _q ** n)


def cautis_total(k: int, n: int) -> int:
    """Total dimension, ``cautis`` at ``q = t = 1``: ``1 + (n-1)(2k+1)``."""
    return int(cautis(k, n).evaluate({"q": 1, "t": 1}))


def gorsky_lewark_dim(k: int, n: int) -> int:
    """Conjectured dimension of sl_n homology of T(3, 3k+1), n >= 2:
    ``n - 2k + 4nk + 6k^2 (n - 2)`` (the rank count printed with an ``N``
    that is read as ``n``)."""
    _k_ok(k)
    if n < 2:
        raise ValueError("formula stated for n >= 2")
    return n - 2 * k + 4 * n * k + 6 * k * k * (n - 2)


def hfkn_dim_t3(k: int, n: int) -> int:
    """``dim HFK_n(T(3, 3k+1))``: ``2 + 4k`` for n = 2 and ``n + 6k`` for n >= 3."""
    _k_ok(k)
    if n < 2:
        raise ValueError("formula stated for n >= 2")
    return 2 + 4 * k if n == 2 else n + 6 * k


def _k_ok(k: int, allow_zero: bool = False) -> None:
    if not isinstance(k, int) or k < (0 if allow_zero else 1):
        raise ValueError(f"k must be an integer >= {0 if allow_zero else 1}")


ORACLES: dict[str, Callable] = {
    "t3_3k1_khovanov": t3_3k1_khovanov,
    "t3_3k1_hfk2": t3_3k1_hfk2,
    "t3_3k2_khovanov": t3_3k2_khovanov,
    "t3_3k2_hfk2": t3_3k2_hfk2,
    "cautis": cautis,
    "cautis_conjecture": cautis_conjecture,
    "cautis_total": cautis_total,
    "gorsky_lewark_dim": gorsky_lewark_dim,
    "hfkn_dim_t3": hfkn_dim_t3,
}


def oracle(name: str, **params):
    """Evaluate a named closed form, e.g. ``oracle("gorsky_lewark_dim", k=1, n=2)``."""
    key = name.strip().lower()
    aliases = {"gl": "gorsky_lewark_dim",
               "gorsky_lewark": "gorsky_lewark_dim"}
    key = aliases.get(key, key)
    if key not in ORACLES:
        raise UnknownOracle(f"unknown oracle {name!r}; known: {sorted(ORACLES)}")
    return ORACLES[key](**params)


# ---------------------------------------------------------------------------
# report


@dataclass
class ReportRow:
    knot: str
    n: int
    source: str
    dim_sl: int | None
    dim_hfk: int
    verdict: SSVerdict | None
    dims_ok: bool | None = None
    parity_ok: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def compatible(self) -> bool | None:
        if self.verdict is not None:
            return self.verdict.compatible
        if self.dims_ok is None:
            return None
        return bool(self.dims_ok and self.parity_ok)

    def to_dict(self) -> dict:
        return {
            "knot": self.knot,
            "n": self.n,
            "sl_source": self.source,
            "dim_sl": self.dim_sl,
            "dim_hfk": self.dim_hfk,
            "compatible": self.compatible,
            "verdict": None if self.verdict is None else self.verdict.to_dict(),
            "dims_ok": self.dims_ok,
            "parity_ok": self.parity_ok,
            "notes": list(self.notes),
        }


def _torus_params(name: str) -> tuple[int, int] | None:
    k = name.strip().lower().replace("(", "").replace(")", "").replace(" ", "")
    if k in ("trefoil", "t2,3"):
        return 2, 3
    if k.startswith("t") and "," in k:
        try:
            p, q = (int(x) for x in k[1:].split(","))
        except ValueError:
            return None
        return min(p, q), max(p, q)
    return None


# closed forms graded by the quantum (delta) grading run opposite to gr_n
_REVERSED = {"t3_3k1_khovanov", "t3_3k2_khovanov"}


def _sl_side(name: str, n: int) -> tuple[str, LaurentPoly | None, int | None]:
    """(label, graded polynomial or None, total dimension or None)."""
    key = name.strip().lower()
    if key == "unknot":
        return "[n]_q", quantum_int(n), n
    tp = _torus_params(name)
    if tp is not None:
        p, m = tp
        if p == 2 and m % 2 == 1:
            P = cautis_conjecture((m - 1) // 2, n)
            return "cautis(t=q^n)", P, int(P.evaluate({"q": 1}))
        if p == 3 and m % 3 == 1:
            k = (m - 1) // 3
            if n == 2:
                return "t3_3k1_khovanov", t3_3k1_khovanov(k), 6 * k + 2
            if n >= 3:
                return "gorsky_lewark_dim", None, gorsky_lewark_dim(k, n)
        if p == 3 and m % 3 == 2 and n == 2:
            k = (m - 2) // 3
            P = t3_3k2_khovanov(k)
            return "t3_3k2_khovanov", P, int(P.evaluate({"q": 1}))
    braid = _BRAID_NAMES.get(key)
    if braid is not None:
        P, scale = kr_conjecture_poly(braid, n)
        return ("kr" if scale == 1 else "kr(doubled)"), P, int(P.evaluate({"q": 1}))
    return "none", None, None


# knots whose sl_n side can be computed from a braid when no closed form applies
_BRAID_NAMES = {"4_1": "figure-eight", "figure-eight": "figure-eight"}


def kr_conjecture_poly(braid: str, n: int) -> tuple[LaurentPoly, int]:
    """Unreduced sl_n homology of a built-in braid closure in the grading
    ``gr_n + n/2 gr_v``, read with the same mirror convention as
    :func:`hfkn.kr.euler_char` and moved to start in degree 0 (the
    comparison is up to shift anyway).  Half-integral degrees are doubled;
    the second return value is that scale."""
    from .kr import BraidDiagram, conjecture_grading, kr_complex, kr_homology
    from .poly import BRAIDS

    strands, word = BRAIDS[braid]
    D = BraidDiagram.from_word(word, strands)
    dims = conjecture_grading(kr_homology(kr_complex(D, "unreduced", n)), n)
    degs = {-Fraction(d): c for d, c in dims.items() if c}
    lo = min(degs)
    scale = 1 if all((d - lo).denominator == 1 for d in degs) else 2
    return _poly({int((d - lo) * scale): c for d, c in degs.items()}), scale


def _reverse(P: LaurentPoly) -> LaurentPoly:
    return _poly({-e: c for e, c in _coeffs(P).items()})


def conjecture_report(knot: str, n_range: Iterable[int], hfk_poly: Callable | None = None) -> list[ReportRow]:
    """One row per ``n``: HFK_n from the knot Floer module against the sl_n
    side (a closed form when one is known), with step ``n``.

    The δ-graded closed forms for T(3, m) run opposite to ``gr_n``, so the
    HFK polynomial is reversed (``q -> q^-1``) before comparing with them.
    Rows with only an sl_n dimension check ``dim_sl >= dim_hfk`` and
    equality mod 2.
    """
    from .hfk import builtin, hfk_n

    rows = []
    for n in n_range:
        if hfk_poly is not None:
            H = hfk_poly(knot, n)
        else:
            H = hfk_n(builtin(knot), n).poincare()
        dim_h = int(H.evaluate({"q": 1})) if H else 0
        label, P, dim_s = _sl_side(knot, n)
        row = ReportRow(knot, n, label, dim_s, dim_h, None)
        if P is not None:
            target = _reverse(H) if label in _REVERSED else H
            if label == "kr(doubled)":
                target = _poly({2 * e: c for e, c in _coeffs(target).items()})
                row.verdict = ss_step(P, target, 2 * n)
            else:
                row.verdict = ss_step(P, target, n)
        if dim_s is not None:
            row.dims_ok = dim_s >= dim_h
            row.parity_ok = (dim_s - dim_h) % 2 == 0
            if dim_s % 2 != n % 2 or dim_h % 2 != n % 2:
                row.notes.append("dimension not congruent to n mod 2")
        else:
            row.notes.append("no sl_n oracle for this knot")
        if label == "gorsky_lewark_dim":
            row.notes.append("conjectural count; N read as n")
        rows.append(row)
    return rows


def format_report(rows: list[ReportRow], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in rows], indent=2, sort_keys=True)
    header = ("knot", "n", "sl_n side", "dim sl_n", "dim HFK_n", "shift", "witness", "verdict")
    lines = [header]
    for r in rows:
        v = r.verdict
        verdict = {True: "compatible", False: "incompatible", None: "n/a"}[r.compatible]
        lines.append((
            r.knot, str(r.n), r.source,
            "-" if r.dim_sl is None else str(r.dim_sl), str(r.dim_hfk),
            "-" if v is None or v.shift is None else str(v.shift),
            "-" if v is None or v.witness is None else str(v.witness),
            verdict,
        ))
    widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
    out = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in lines]
    notes = sorted({f"n={r.n}: {x}" for r in rows for x in r.notes})
    if notes:
        out.append("")
        out.extend("note " + x for x in notes)
    return "\n".join(out)
