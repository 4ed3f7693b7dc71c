"""Exact polynomial arithmetic over the rationals.

Two immutable types live here:

* :class:`MultiPoly` -- polynomials in named indeterminates (``U1``, ``V2``,
  ``W1_2``, ...) with :class:`fractions.Fraction` coefficients.
* :class:`LaurentPoly` -- the same, but negative exponents are allowed; used
  for Poincare polynomials and knot polynomials in ``a``, ``q``, ``t``.

Monomials are stored as sorted tuples of ``(variable, exponent)`` pairs and
terms are printed in graded lexicographic order, so the text form is
canonical and round-trips through :func:`parse_poly`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

__all__ = [
    "MultiPoly",
    "LaurentPoly",
    "NotDivisible",
    "InconsistentRelations",
    "ExponentOverflow",
    "LinearRelations",
    "exact_div",
    "eliminate_linear",
    "specialize",
    "parse_poly",
    "parse_laurent",
    "var_key",
    "EXPONENT_LIMIT",
]

EXPONENT_LIMIT = 512

Number = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[str, int], ...]


class NotDivisible(ArithmeticError):
    pass


class InconsistentRelations(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


_LETTER_ORDER = {"U": 0, "V": 1, "W": 2, "a": 3, "q": 4, "t": 5}
_VAR_RE = re.compile(r"^([A-Za-z]+)(\d+(?:_\d+)*)?$")


def var_key(name: str) -> tuple:
    """Sort key for variable names: U < V < W < a < q < t < others, then indices."""
    m = _VAR_RE.match(name)
    if not m:
        return (99, name, ())
    letters, idx = m.groups()
    nums = tuple(int(x) for x in idx.split("_")) if idx else ()
    return (_LETTER_ORDER.get(letters, 50), letters, nums)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        s = d.get(v, 0) + e
        if s:
            d[v] = s
        else:
            del d[v]
    return tuple(sorted(d.items(), key=lambda ve: var_key(ve[0])))


def _mono_deg(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_order_key(m: Monomial) -> tuple:
    # graded lex: higher total degree first, then lex on variable order
    return (-_mono_deg(m), tuple((var_key(v), -e) for v, e in m))


def _check_exp(e: int) -> None:
    if abs(e) > EXPONENT_LIMIT:
        raise ExponentOverflow(f"exponent {e} exceeds limit {EXPONENT_LIMIT}")


@total_ordering
class _Poly:
    """Shared implementation; subclasses fix whether negative exponents are legal."""

    __slots__ = ("_terms", "_hash")
    _allow_negative = False

    def __init__(self, terms: Mapping[Monomial, Number] | Number | str | None = None):
        if terms is None:
            terms = {}
        elif isinstance(terms, str):
            terms = self._parse(terms)._terms
        elif isinstance(terms, (int, Fraction)):
            terms = {(): terms} if terms else {}
        clean = {}
        for mono, c in terms.items():
            c = Fraction(c)
            if not c:
                continue
            mono = tuple(sorted(((v, e) for v, e in mono if e), key=lambda ve: var_key(ve[0])))
            for _, e in mono:
                _check_exp(e)
                if e < 0 and not self._allow_negative:
                    raise ValueError(f"negative exponent in {type(self).__name__}")
            clean[mono] = clean.get(mono, 0) + c
            if not clean[mono]:
                del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def _parse(cls, text: str):
        raise NotImplementedError

    # construction helpers
    @classmethod
    def var(cls, name: str, exp: int = 1):
        _check_exp(exp)
        return cls._from_clean({((name, exp),): Fraction(1)} if exp else {(): Fraction(1)})

    @classmethod
    def const(cls, c: Number):
        return cls(c)

    @classmethod
    def monomial(cls, coeff: Number, exps: Mapping[str, int]):
        return cls({tuple(exps.items()): coeff})

    # inspection
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self._terms.get((), Fraction(0))

    def degree(self, weights: Mapping[str, int] | None = None, default_weight: int = 1) -> int:
        """Maximum weighted degree of a term; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        w = weights or {}
        return max(sum(w.get(v, default_weight) * e for v, e in m) for m in self._terms)

    def is_homogeneous(self, weights: Mapping[str, int] | None = None, default_weight: int = 2) -> bool:
        w = weights or {}
        degs = {sum(w.get(v, default_weight) * e for v, e in m) for m in self._terms}
        return len(degs) <= 1

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: _mono_order_key(mc[0]))

    def leading_term(self):
        return self.sorted_terms()[0]

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, _Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return type(self)(other)
        return NotImplemented

    def _result_type(self, other):
        if isinstance(self, LaurentPoly) or isinstance(other, LaurentPoly):
            return LaurentPoly
        return type(self)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._result_type(other)._from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._from_clean({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        for m in out:
            for _, e in m:
                _check_exp(e)
        return self._result_type(other)._from_clean(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) == 1 and isinstance(self, LaurentPoly):
                (m, c), = self._terms.items()
                return LaurentPoly._from_clean({tuple((v, e * k) for v, e in m): Fraction(1) / c ** (-k)})
            raise ValueError("negative power of a non-monomial")
        result = type(self)(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number):
        c = Fraction(c)
        if not c:
            return type(self)()
        return type(self)._from_clean({m: v * c for m, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self)(other)
        if not isinstance(other, _Poly):
            return NotImplemented
        return self._terms == other._terms

    def __lt__(self, other):
        return str(self) < str(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            coef = str(a)
            if mono:
                body = mono if a == 1 else f"{coef}*{mono}"
            else:
                body = coef
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def derivative(self, var: str):
        """Formal partial derivative with respect to ``var``."""
        out: dict = {}
        for m, c in self._terms.items():
            md = dict(m)
            e = md.get(var, 0)
            if not e:
                continue
            md[var] = e - 1
            mono = tuple(sorted(((v, x) for v, x in md.items() if x), key=lambda ve: var_key(ve[0])))
            out[mono] = out.get(mono, 0) + c * e
        return type(self)._from_clean({m: c for m, c in out.items() if c})

    def subs(self, assignments: Mapping[str, "_Poly | Number"]):
        """Substitute polynomials for variables."""
        cache: dict = {}
        total = type(self)()
        for m, c in self._terms.items():
            term = type(self)(c)
            for v, e in m:
                if v in assignments:
                    val = assignments[v]
                    if not isinstance(val, _Poly):
                        val = type(self)(val)
                    key = (v, e)
                    if key not in cache:
                        cache[key] = val ** e
                    term = term * cache[key]
                else:
                    term = term * type(self).var(v, e)
            total = total + term
        return total

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                t *= Fraction(values[v]) ** e
            total += t
        return total


_NUM_RE = re.compile(r"\d+(?:/\d+)?")
_NAME_RE = re.compile(r"[A-Za-z]+\d*(?:_\d+)*")
_INT_RE = re.compile(r"-?\d+")


def _parse_generic(text: str, cls):
    """Recursive descent: expr := ['+'|'-'] term (('+'|'-') term)*,
    term := factor ('*' factor)*, factor := atom ['^' int],
    atom := number | name | '(' expr ')'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    pos = 0

    def fail():
        raise ValueError(f"cannot parse {text!r} at position {pos}")

    def expr():
        nonlocal pos
        sign = 1
        if pos < len(s) and s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
        out = term().scale(sign)
        while pos < len(s) and s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            out = out + term().scale(sign)
        return out

    def term():
        nonlocal pos
        out = factor()
        while pos < len(s) and s[pos] == "*":
            pos += 1
            out = out * factor()
        return out

    def factor():
        nonlocal pos
        base = atom()
        if pos < len(s) and s[pos] == "^":
            pos += 1
            m = _INT_RE.match(s, pos)
            if not m:
                fail()
            pos = m.end()
            base = base ** int(m.group())
        return base

    def atom():
        nonlocal pos
        if pos >= len(s):
            fail()
        if s[pos] == "(":
            pos += 1
            inner = expr()
            if pos >= len(s) or s[pos] != ")":
                fail()
            pos += 1
            return inner
        m = _NUM_RE.match(s, pos)
        if m:
            pos = m.end()
            return cls(Fraction(m.group()))
        m = _NAME_RE.match(s, pos)
        if m:
            pos = m.end()
            return cls.var(m.group())
        fail()

    result = expr()
    if pos != len(s):
        fail()
    return result


class MultiPoly(_Poly):
    """Polynomial with rational coefficients and nonnegative exponents."""

    __slots__ = ()

    @classmethod
    def _parse(cls, text):
        return _parse_generic(text, cls)


class LaurentPoly(_Poly):
    """Laurent polynomial; exponents may be negative."""

    __slots__ = ()
    _allow_negative = True

    @classmethod
    def _parse(cls, text):
        return _parse_generic(text, cls)

    @classmethod
    def from_dims(cls, dims: Mapping, var: str = "q"):
        """Build ``sum dims[d] * var^d``; degrees must be integers."""
        terms = {}
        for d, n in dims.items():
            d = Fraction(d)
            if d.denominator != 1:
                raise ValueError(f"non-integer degree {d}")
            if n:
                terms[((var, int(d)),)] = n
        return cls(terms)

    def exponents(self, var: str = "q") -> list:
        return sorted(dict(m).get(var, 0) for m in self._terms)

    def coefficient(self, exps: Mapping[str, int] | int, var: str = "q") -> Fraction:
        if isinstance(exps, int):
            exps = {var: exps}
        key = tuple(sorted(((v, e) for v, e in exps.items() if e), key=lambda ve: var_key(ve[0])))
        return self._terms.get(key, Fraction(0))

    def shift(self, d: int, var: str = "q") -> "LaurentPoly":
        return self * LaurentPoly.var(var, d)

    def min_degree(self, var: str = "q") -> int:
        return min(dict(m).get(var, 0) for m in self._terms)

    def max_degree(self, var: str = "q") -> int:
        return max(dict(m).get(var, 0) for m in self._terms)


def parse_poly(text: str) -> MultiPoly:
    """Parse e.g. ``"3*U1^2*V1 - 1/2*U2"``."""
    return MultiPoly._parse(text)


def parse_laurent(text: str) -> LaurentPoly:
    return LaurentPoly._parse(text)


def exact_div(f: _Poly, g: _Poly) -> _Poly:
    """Return ``h`` with ``g*h == f``; raise :class:`NotDivisible` otherwise."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    cls = type(f) if isinstance(f, LaurentPoly) or not isinstance(g, LaurentPoly) else LaurentPoly
    if cls is LaurentPoly:
        # monomials are units: strip each side's monomial content, divide the
        # content-free parts as polynomials, then restore the monomial ratio
        if f.is_zero():
            return LaurentPoly()

        def content(p):
            vs = {v for m in p._terms for v, _ in m}
            return {v: min(dict(m).get(v, 0) for m in p._terms) for v in vs}

        cf, cg = content(f), content(g)
        fp = MultiPoly._from_clean(dict((f * LaurentPoly.monomial(1, {v: -e for v, e in cf.items()}))._terms))
        gp = MultiPoly._from_clean(dict((g * LaurentPoly.monomial(1, {v: -e for v, e in cg.items()}))._terms))
        h = LaurentPoly._from_clean(dict(exact_div(fp, gp)._terms))
        ratio = {v: cf.get(v, 0) - cg.get(v, 0) for v in set(cf) | set(cg)}
        return h * LaurentPoly.monomial(1, ratio)
    lm_g, lc_g = g.leading_term()
    gd = dict(lm_g)
    rem = f
    quot: dict = {}
    while not rem.is_zero():
        lm_r, lc_r = rem.leading_term()
        rd = dict(lm_r)
        if any(rd.get(v, 0) < e for v, e in gd.items()):
            raise NotDivisible(f"{f} is not divisible by {g}")
        qm = tuple((v, e - gd.get(v, 0)) for v, e in lm_r if e - gd.get(v, 0))
        qc = lc_r / lc_g
        quot[qm] = qc
        rem = rem - g * cls({qm: qc})
    return cls(quot)


class LinearRelations:
    """A triangularized system of linear relations ``r = 0``.

    Each relation gets a leading variable, chosen as the last variable in the
    canonical order unless given explicitly; :meth:`reduce` substitutes the
    leading variables away.
    """

    def __init__(self, relations: Iterable[_Poly] = (), leads: Iterable[str] | None = None):
        rels = [MultiPoly(dict(r.items())) if not isinstance(r, MultiPoly) else r for r in relations]
        leads = list(leads) if leads is not None else None
        self.substitution: dict[str, MultiPoly] = {}
        for idx, r in enumerate(rels):
            r = self.reduce(r)
            if r.is_zero():
                continue
            if r.degree() > 1:
                raise InconsistentRelations(f"relation {r} is not linear")
            vars_ = sorted(r.variables(), key=var_key)
            if not vars_:
                raise InconsistentRelations(f"relation reduces to nonzero constant {r}")
            lead = leads[idx] if leads is not None else vars_[-1]
            if lead not in vars_:
                raise InconsistentRelations(f"leading variable {lead} does not occur in {r}")
            c = r.terms[((lead, 1),)]
            rhs = -(r - MultiPoly.var(lead).scale(c)).scale(Fraction(1) / c)
            # back-substitute into existing rules
            for v in list(self.substitution):
                self.substitution[v] = self.substitution[v].subs({lead: rhs})
            self.substitution[lead] = rhs

    @property
    def eliminated(self) -> list:
        return sorted(self.substitution, key=var_key)

    def __len__(self):
        return len(self.substitution)

    def reduce(self, f: _Poly) -> _Poly:
        if not self.substitution:
            return f
        if not (f.variables() & self.substitution.keys()):
            return f
        return f.subs(self.substitution)


def eliminate_linear(relations: Iterable[_Poly], f: _Poly) -> _Poly:
    """Canonical representative of ``f`` modulo the linear ``relations``."""
    return LinearRelations(relations).reduce(f)


def specialize(f: _Poly, assignments: Mapping[str, "_Poly | Number"]) -> _Poly:
    """Exact substitution ``var -> value``; result uses the remaining variables."""
    return f.subs(assignments)
