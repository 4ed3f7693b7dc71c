"""Sparse exact linear algebra over Q.

Vectors are ``dict`` objects mapping a hashable column key to a nonzero
:class:`~fractions.Fraction` (or ``int``).  Column keys must be mutually
comparable; pivots are chosen as the smallest key so that results are
deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable


def _axpy(row: dict, coef, other: dict) -> None:
    """row += coef * other, in place, dropping zeros."""
    for k, v in other.items():
        s = row.get(k, 0) + coef * v
        if s:
            row[k] = s
        else:
            row.pop(k, None)


class Echelon:
    """Incrementally built echelon basis of a subspace.

    Each stored row is normalized to pivot coefficient 1.  When ``track`` is
    set every row also carries its expression in terms of the vectors that
    were inserted, so membership tests can return coordinates.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[Hashable, dict] = {}
        self.combos: dict[Hashable, dict] = {}
        self.track = track
        self._order: list = []

    def __len__(self) -> int:
        return len(self.rows)

    def _reduce_fast(self, vec: dict, combo: dict | None):
        # rows only carry keys >= their pivot, so ascending pivot order
        # never reintroduces an already cleared pivot
        rows = self.rows
        if not rows:
            return vec, combo
        done: set = set()
        while True:
            cands = [k for k in vec if k in rows and k not in done]
            if not cands:
                return vec, combo
            k = min(cands)
            c = vec.get(k)
            done.add(k)
            if not c:
                continue
            _axpy(vec, -c, rows[k])
            if combo is not None:
                _axpy(combo, -c, self.combos[k])

    def add(self, vec: dict, label: Hashable | None = None) -> dict | None:
        """Insert a vector.  Returns the dependency combo if it reduced to zero
        (only meaningful when tracking), else ``None``."""
        vec = dict(vec)
        combo = {label: Fraction(1)} if self.track else None
        vec, combo = self._reduce_fast(vec, combo)
        if not vec:
            return combo if self.track else {}
        piv = min(vec)
        inv = Fraction(1) / vec[piv]
        vec = {k: v * inv for k, v in vec.items()}
        if self.track:
            combo = {k: v * inv for k, v in combo.items()}
        self.rows[piv] = vec
        if self.track:
            self.combos[piv] = combo
        self._order.append(piv)
        return None

    def contains(self, vec: dict) -> bool:
        rem, _ = self._reduce_fast(dict(vec), None)
        return not rem

    def coordinates(self, vec: dict) -> tuple[dict, dict]:
        """Return (remainder, combo) where ``vec - remainder = sum combo[l]*inserted[l]``."""
        rem, combo = self._reduce_fast(dict(vec), {} if self.track else None)
        if combo is not None:
            combo = {k: -v for k, v in combo.items()}
        return rem, combo


def rank(vectors: Iterable[dict]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(images: list[dict]) -> list[dict]:
    """Basis of the kernel of the map sending basis vector ``i`` to ``images[i]``.

    Kernel vectors are returned as dicts over the source indices.
    """
    ech = Echelon(track=True)
    out = []
    for i, img in enumerate(images):
        dep = ech.add(img, label=i)
        if dep is not None:
            out.append(dep)
    return out


# ---------------------------------------------------------------------------
# dense exact matrices (python-flint) for the degreewise engines


def dense(rows: list[dict], cols: dict):
    """Matrix with one row per sparse vector; ``cols`` maps column key -> index.

    Integer data gives an ``fmpz_mat``, anything else an ``fmpq_mat``.
    """
    import flint

    integral = all(Fraction(v).denominator == 1 for r in rows for v in r.values())
    M = (flint.fmpz_mat if integral else flint.fmpq_mat)(len(rows), len(cols))
    for i, r in enumerate(rows):
        for k, v in r.items():
            if integral:
                M[i, cols[k]] = int(v)
            else:
                v = Fraction(v)
                M[i, cols[k]] = flint.fmpq(v.numerator, v.denominator)
    return M


def mat_rank(M) -> int:
    if M.nrows() == 0 or M.ncols() == 0:
        return 0
    return M.rank()


def left_kernel(M):
    """Integer rows spanning ``{x : x M = 0}``."""
    import flint

    n = M.nrows()
    if n == 0 or M.ncols() == 0:
        return flint.fmpz_mat(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])
    T = M.transpose()
    if isinstance(T, flint.fmpq_mat):
        T, _ = T.numer_denom()
    X, nullity = T.nullspace()
    return flint.fmpz_mat(nullity, n, [X[i, j] for j in range(nullity) for i in range(n)])


def _as_q(M):
    import flint

    if isinstance(M, flint.fmpq_mat):
        return M
    return flint.fmpq_mat(M)


def product(A, B):
    import flint

    if isinstance(A, flint.fmpz_mat) and isinstance(B, flint.fmpz_mat):
        return A * B
    return _as_q(A) * _as_q(B)


def stack(A, B):
    """Vertical concatenation of two matrices with equal column counts."""
    import flint

    if A.nrows() == 0:
        return B
    if B.nrows() == 0:
        return A
    if isinstance(A, flint.fmpz_mat) and isinstance(B, flint.fmpz_mat):
        return flint.fmpz_mat(A.nrows() + B.nrows(), A.ncols(), A.entries() + B.entries())
    A, B = _as_q(A), _as_q(B)
    return flint.fmpq_mat(A.nrows() + B.nrows(), A.ncols(), A.entries() + B.entries())
