"""HOMFLY-PT polynomial by skein recursion, with sl_n and Alexander specialisations.

Normalisation: ``a P(D+) - a^{-1} P(D-) = (q - q^{-1}) P(D0)`` and
``P(unknot) = (a - a^{-1}) / (q - q^{-1})``.  Unreduced values carry the
denominator ``(q - q^{-1})^k`` formally; see :class:`HomflyValue`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .ring import LaurentPoly, NotDivisible, exact_div

__all__ = [
    "PDCode",
    "HomflyValue",
    "BadWord",
    "RecursionBudgetExceeded",
    "PoleAtSpecialization",
    "braid_closure",
    "parse_braid",
    "homfly",
    "sln_specialize",
    "quantum_int",
    "skein_check",
    "BRAIDS",
]


class BadWord(ValueError):
    pass


class RecursionBudgetExceeded(RuntimeError):
    pass


class PoleAtSpecialization(ArithmeticError):
    pass


_a = LaurentPoly.var("a")
_q = LaurentPoly.var("q")
Z = _q - _q ** -1                 # q - q^{-1}
A_DIFF = _a - _a ** -1           # a - a^{-1}


def quantum_int(n: int) -> LaurentPoly:
    """``[n]_q = q^{n-1} + q^{n-3} + ... + q^{1-n}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return LaurentPoly({(("q", n - 1 - 2 * j),): 1 for j in range(n)})


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class PDCode:
    """Oriented link diagram.

    Each crossing is ``(over_in, over_out, under_in, under_out, sign)`` with
    integer arc labels; ``loops`` counts crossingless circles.
    """

    crossings: tuple
    loops: int = 0

    def __post_init__(self):
        ins, outs = [], []
        for c in self.crossings:
            if len(c) != 5 or c[4] not in (1, -1):
                raise ValueError(f"bad crossing {c}")
            ins += [c[0], c[2]]
            outs += [c[1], c[3]]
        if sorted(ins) != sorted(outs) or len(set(ins)) != len(ins):
            raise ValueError("every arc must enter exactly one crossing and leave exactly one")

    @property
    def writhe(self) -> int:
        return sum(c[4] for c in self.crossings)

    def _next(self) -> dict:
        """arc -> (crossing index, role of entry 'o'/'u', outgoing arc)."""
        nxt = {}
        for i, (oi, oo, ui, uo, _) in enumerate(self.crossings):
            nxt[oi] = (i, "o", oo)
            nxt[ui] = (i, "u", uo)
        return nxt

    def component_cycles(self) -> list:
        nxt = self._next()
        seen, cycles = set(), []
        for start in sorted(nxt):
            if start in seen:
                continue
            cyc, arc = [], start
            while arc not in seen:
                seen.add(arc)
                cyc.append(arc)
                arc = nxt[arc][2]
            cycles.append(cyc)
        return cycles

    @property
    def components(self) -> int:
        return len(self.component_cycles()) + self.loops

    def canonical(self) -> tuple:
        mapping: dict = {}
        out = []
        for c in self.crossings:
            row = []
            for x in c[:4]:
                if x not in mapping:
                    mapping[x] = len(mapping)
                row.append(mapping[x])
            out.append(tuple(row) + (c[4],))
        return tuple(out), self.loops

    # -- skein moves -----------------------------------------------------
    def switched(self, i: int) -> "PDCode":
        oi, oo, ui, uo, s = self.crossings[i]
        cr = list(self.crossings)
        cr[i] = (ui, uo, oi, oo, -s)
        return PDCode(tuple(cr), self.loops)

    def smoothed(self, i: int) -> "PDCode":
        """Oriented resolution: over_in continues into under_out, under_in into over_out."""
        oi, oo, ui, uo, _ = self.crossings[i]
        rest = [c for j, c in enumerate(self.crossings) if j != i]
        loops = self.loops
        ren = {}
        for a_in, a_out in ((oi, uo), (ui, oo)):
            a_in, a_out = ren.get(a_in, a_in), ren.get(a_out, a_out)
            if a_in == a_out:
                loops += 1
                continue
            # arc a_out is merged into a_in
            for k, v in list(ren.items()):
                if v == a_out:
                    ren[k] = a_in
            ren[a_out] = a_in
        cr = tuple(tuple(ren.get(x, x) for x in c[:4]) + (c[4],) for c in rest)
        return PDCode(cr, loops)


def parse_braid(text: str) -> tuple[int, list[int]]:
    """Parse ``"strands=2 word=1,1,1"`` (the word may be empty)."""
    fields = dict(part.split("=", 1) for part in text.replace(";", " ").split() if "=" in part)
    if "strands" not in fields:
        raise BadWord("missing strands=")
    strands = int(fields["strands"])
    w = fields.get("word", "").strip()
    word = [int(x) for x in w.split(",") if x.strip()] if w else []
    return strands, word


def braid_closure(word: Sequence[int], strands: int) -> PDCode:
    """Closure of a braid; ``i`` is sigma_i (positive), ``-i`` its inverse.

    Strands run downward.  In a positive crossing the strand moving from
    position ``i+1`` to ``i`` passes over.
    """
    if strands < 1:
        raise BadWord("need at least one strand")
    for g in word:
        if g == 0 or abs(g) >= strands:
            raise BadWord(f"generator {g} out of range for {strands} strands")
    cur = list(range(strands))
    nxt_label = strands
    crossings = []
    for g in word:
        i = abs(g) - 1
        b1, b2 = cur[i], cur[i + 1]
        a1, a2 = nxt_label, nxt_label + 1
        nxt_label += 2
        if g > 0:
            crossings.append([b2, a1, b1, a2, 1])
        else:
            crossings.append([b1, a2, b2, a1, -1])
        cur[i], cur[i + 1] = a1, a2
    # close: bottom arc at position j is the top arc j
    ren = {cur[j]: j for j in range(strands)}
    loops = sum(1 for j in range(strands) if cur[j] == j)
    cr = tuple(tuple(ren.get(x, x) for x in c[:4]) + (c[4],) for c in crossings)
    return PDCode(cr, loops)


BRAIDS = {
    "unknot": (1, ()),
    "unknot-kink": (2, (1,)),
    "unlink2": (2, ()),
    "hopf": (2, (1, 1)),
    "hopf-negative": (2, (-1, -1)),
    "trefoil": (2, (1, 1, 1)),
    "trefoil-left": (2, (-1, -1, -1)),
    "figure-eight": (3, (1, -2, 1, -2)),
    "T2,5": (2, (1, 1, 1, 1, 1)),
    "5_2": (3, (1, 1, 1, 2, -1, 2)),
    "T2,6-link": (2, (1,) * 6),
    "6_1": (4, (1, 1, 2, -1, -3, 2, -3)),
}


# ---------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class HomflyValue:
    """``numerator / (q - q^{-1})^zpow`` with numerator a Laurent polynomial in a, q."""

    numerator: LaurentPoly
    zpow: int = 0

    def normalized(self) -> "HomflyValue":
        num, k = self.numerator, self.zpow
        while k > 0 and num:
            try:
                num = exact_div(num, Z)
            except NotDivisible:
                break
            k -= 1
        if not num:
            k = 0
        return HomflyValue(num, k)

    def _lift(self, k: int) -> LaurentPoly:
        return self.numerator * Z ** (k - self.zpow)

    def __add__(self, other: "HomflyValue") -> "HomflyValue":
        k = max(self.zpow, other.zpow)
        return HomflyValue(self._lift(k) + other._lift(k), k)

    def __sub__(self, other: "HomflyValue") -> "HomflyValue":
        k = max(self.zpow, other.zpow)
        return HomflyValue(self._lift(k) - other._lift(k), k)

    def times(self, f: LaurentPoly) -> "HomflyValue":
        return HomflyValue(self.numerator * f, self.zpow)

    def times_z(self) -> "HomflyValue":
        if self.zpow:
            return HomflyValue(self.numerator, self.zpow - 1)
        return HomflyValue(self.numerator * Z, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomflyValue):
            other = HomflyValue(LaurentPoly(other) if not isinstance(other, LaurentPoly) else other)
        k = max(self.zpow, other.zpow)
        return self._lift(k) == other._lift(k)

    def __hash__(self):
        n = self.normalized()
        return hash((n.numerator, n.zpow))

    @property
    def laurent(self) -> LaurentPoly:
        n = self.normalized()
        if n.zpow:
            raise ArithmeticError("value still has a (q - q^-1) denominator")
        return n.numerator

    def __str__(self):
        n = self.normalized()
        if not n.zpow:
            return str(n.numerator)
        den = "(q - q^-1)" if n.zpow == 1 else f"(q - q^-1)^{n.zpow}"
        return f"({n.numerator})/{den}"


def _unlink(c: int) -> HomflyValue:
    return HomflyValue(A_DIFF ** c, c)


# ---------------------------------------------------------------------------
# skein engine


def _first_discrepancy(D: PDCode) -> int | None:
    """Index of the first crossing met from below on a descending traversal."""
    nxt = D._next()
    visited = set()
    seen_arcs = set()
    for start in sorted(nxt):
        if start in seen_arcs:
            continue
        arc = start
        while arc not in seen_arcs:
            seen_arcs.add(arc)
            i, role, out = nxt[arc]
            if i not in visited:
                if role == "u":
                    return i
                visited.add(i)
            arc = out
    return None


def homfly(D: PDCode, reduced: bool = False, budget: int = 200_000) -> HomflyValue:
    """HOMFLY-PT polynomial of ``D``; reduced divides by the unknot value."""
    calls = [0]
    memo: dict = {}

    def rec(E: PDCode) -> HomflyValue:
        key = E.canonical()
        if key in memo:
            return memo[key]
        calls[0] += 1
        if calls[0] > budget:
            raise RecursionBudgetExceeded(f"more than {budget} skein states")
        i = _first_discrepancy(E)
        if i is None:
            val = _unlink(E.components)
        else:
            s = E.crossings[i][4]
            other = rec(E.switched(i))
            smooth = rec(E.smoothed(i))
            if s > 0:
                # P(D+) = a^-2 P(D-) + a^-1 z P(D0)
                val = other.times(_a ** -2) + smooth.times_z().times(_a ** -1)
            else:
                # P(D-) = a^2 P(D+) - a z P(D0)
                val = other.times(_a ** 2) - smooth.times_z().times(_a)
            val = val.normalized()
        memo[key] = val
        return val

    val = rec(D)
    if reduced:
        num = exact_div(val.numerator, A_DIFF)
        val = HomflyValue(num, val.zpow - 1) if val.zpow >= 1 else HomflyValue(num * Z, 0)
        val = val.normalized()
    return val


def skein_check(D: PDCode, i: int) -> bool:
    """Verify ``a P(D+) - a^{-1} P(D-) = z P(D0)`` at crossing ``i``."""
    Dp = D if D.crossings[i][4] > 0 else D.switched(i)
    Dm = Dp.switched(i)
    D0 = D.smoothed(i)
    lhs = homfly(Dp).times(_a) - homfly(Dm).times(_a ** -1)
    rhs = homfly(D0).times_z()
    return lhs == rhs


def sln_specialize(P: HomflyValue | LaurentPoly, n: int, reduced: bool | None = None) -> LaurentPoly:
    """Set ``a = q^n`` and cancel the formal denominator exactly."""
    if not isinstance(P, HomflyValue):
        P = HomflyValue(P, 0)
    P = P.normalized()
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0 and (reduced is False or P.zpow):
        raise PoleAtSpecialization("n = 0 is only defined for reduced values")
    num = P.numerator.subs({"a": _q ** n})
    if P.zpow:
        try:
            num = exact_div(num, Z ** P.zpow)
        except NotDivisible as e:
            raise PoleAtSpecialization(f"(q - q^-1)^{P.zpow} does not divide {num}") from e
    return num
