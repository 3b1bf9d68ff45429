"""Homogeneous matrices over the ambient polynomial ring, stored by columns.

A `Matrix` is a graded map ``F(source) -> F(target)``: row i of the target free module has
twist ``target[i]`` and column j maps the basis vector of degree ``source[j]``. Homogeneity
means entry (i, j) is zero or homogeneous of degree ``source[j] - target[i]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

from torvan.algebra.polyalg import PolyRing, Polynomial
from torvan.core.errors import InvalidInput

Column = tuple[Polynomial, ...]


def column_degree(col: Sequence[Polynomial], twists: Sequence[int]) -> Optional[int]:
    """Degree of a column as an element of the free module with the given twists."""
    degrees = set()
    for f, t in zip(col, twists):
        for m, _ in f.terms:
            degrees.add(f.ring.degree(m) + t)
    if not degrees:
        return None
    if len(degrees) > 1:
        raise InvalidInput("column is not homogeneous", field="relations")
    return degrees.pop()


@dataclass(frozen=True)
class Matrix:
    ring: PolyRing
    target: tuple[int, ...]
    source: tuple[int, ...]
    columns: tuple[Column, ...]

    def __post_init__(self):
        if len(self.columns) != len(self.source):
            raise InvalidInput("column count does not match source twists", field="matrix")
        for col in self.columns:
            if len(col) != len(self.target):
                raise InvalidInput("column length does not match target twists", field="matrix")

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_columns(
        cls,
        ring: PolyRing,
        target: Sequence[int],
        columns: Iterable[Sequence[Polynomial]],
        source: Optional[Sequence[int]] = None,
    ) -> "Matrix":
        """Build a matrix, inferring column degrees when ``source`` is not given."""
        cols = tuple(tuple(c) for c in columns)
        if source is None:
            inferred = []
            for c in cols:
                d = column_degree(c, target)
                if d is None:
                    raise InvalidInput("cannot infer the degree of a zero column", field="matrix")
                inferred.append(d)
            source = inferred
        else:
            for c, s in zip(cols, source):
                d = column_degree(c, target)
                if d is not None and d != s:
                    raise InvalidInput(f"column degree {d} does not match declared twist {s}", field="matrix")
        return cls(ring, tuple(target), tuple(source), cols)

    @classmethod
    def zero(cls, ring: PolyRing, target: Sequence[int], source: Sequence[int]) -> "Matrix":
        z = ring.zero()
        return cls(ring, tuple(target), tuple(source), tuple(tuple(z for _ in target) for _ in source))

    @classmethod
    def identity(cls, ring: PolyRing, twists: Sequence[int]) -> "Matrix":
        n = len(twists)
        cols = tuple(tuple(ring.one() if i == j else ring.zero() for i in range(n)) for j in range(n))
        return cls(ring, tuple(twists), tuple(twists), cols)

    # -- shape -------------------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.target)

    @property
    def ncols(self) -> int:
        return len(self.source)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j][i]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return tuple(c[i] for c in self.columns)

    def is_zero(self) -> bool:
        return all(f.is_zero() for c in self.columns for f in c)

    # -- algebra -----------------------------------------------------------
    def transpose(self) -> "Matrix":
        """The dual map F(-target)^* <- ... : rows become columns and twists are negated."""
        cols = tuple(self.row(i) for i in range(self.nrows))
        return Matrix(self.ring, tuple(-s for s in self.source), tuple(-t for t in self.target), cols)

    def apply(self, v: Sequence[Polynomial]) -> Column:
        """self * v for a vector v indexed by the source basis."""
        out = [self.ring.zero() for _ in self.target]
        for coeff, col in zip(v, self.columns):
            if coeff.is_zero():
                continue
            for i, f in enumerate(col):
                if f:
                    out[i] = out[i] + coeff * f
        return tuple(out)

    def compose(self, other: "Matrix") -> "Matrix":
        """self ∘ other."""
        if len(other.target) != len(self.source):
            raise InvalidInput("matrices are not composable", field="matrix")
        cols = tuple(self.apply(c) for c in other.columns)
        return Matrix(self.ring, self.target, other.source, cols)

    def scale(self, f: Polynomial) -> "Matrix":
        return Matrix(self.ring, self.target, self.source, tuple(tuple(f * g for g in c) for c in self.columns))

    def select_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.ring, self.target, tuple(self.source[j] for j in idx), tuple(self.columns[j] for j in idx))

    def drop_zero_columns(self) -> "Matrix":
        keep = [j for j, c in enumerate(self.columns) if any(f for f in c)]
        return self.select_columns(keep)

    def shift(self, k: int) -> "Matrix":
        """Twist both free modules by k."""
        return Matrix(
            self.ring, tuple(t + k for t in self.target), tuple(s + k for s in self.source), self.columns
        )

    # -- text --------------------------------------------------------------
    def to_rows_text(self) -> list[list[str]]:
        return [[f.to_text() for f in self.row(i)] for i in range(self.nrows)]

    def to_columns_text(self) -> list[list[str]]:
        return [[f.to_text() for f in c] for c in self.columns]


def hstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise InvalidInput("nothing to stack", field="matrix")
    first = mats[0]
    for m in mats[1:]:
        if m.target != first.target:
            raise InvalidInput("stacked matrices need the same target", field="matrix")
    source = tuple(s for m in mats for s in m.source)
    cols = tuple(c for m in mats for c in m.columns)
    return Matrix(first.ring, first.target, source, cols)


def block_diagonal(a: Matrix, b: Matrix) -> Matrix:
    za = tuple(a.ring.zero() for _ in b.target)
    zb = tuple(a.ring.zero() for _ in a.target)
    cols = tuple(c + za for c in a.columns) + tuple(zb + c for c in b.columns)
    return Matrix(a.ring, a.target + b.target, a.source + b.source, cols)


def kronecker(a: Matrix, b: Matrix) -> Matrix:
    """a ⊗ b with basis index (i, j) -> i * len(b) + j and summed twists."""
    target = tuple(s + t for s in a.target for t in b.target)
    source = tuple(s + t for s in a.source for t in b.source)
    cols = []
    for ca in a.columns:
        for cb in b.columns:
            cols.append(tuple(f * g for f in ca for g in cb))
    return Matrix(a.ring, target, source, tuple(cols))


def ideal_times_free(ring: PolyRing, ideal: Sequence[Polynomial], twists: Sequence[int]) -> Matrix:
    """Columns f_j * e_k spanning I * F for F with the given twists."""
    cols, source = [], []
    n = len(twists)
    for k in range(n):
        for f in ideal:
            if f.is_zero():
                continue
            cols.append(tuple(f if i == k else ring.zero() for i in range(n)))
            source.append(twists[k] + f.degree())
    return Matrix(ring, tuple(twists), tuple(source), tuple(cols))


def determinant(rows: Sequence[Sequence[Polynomial]], ring: PolyRing) -> Polynomial:
    """Laplace expansion along the first row; inputs are small."""
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j, f in enumerate(rows[0]):
        if f.is_zero():
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = f * determinant(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def minors(mat: Matrix, k: int) -> list[Polynomial]:
    """All nonzero k x k minors (k = 0 gives the unit)."""
    ring = mat.ring
    if k == 0:
        return [ring.one()]
    if k > min(mat.nrows, mat.ncols):
        return []
    out = []
    for rows in combinations(range(mat.nrows), k):
        for cols in combinations(range(mat.ncols), k):
            sub = [[mat.columns[j][i] for j in cols] for i in rows]
            d = determinant(sub, ring)
            if d:
                out.append(d)
    return out
