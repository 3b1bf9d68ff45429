"""Degree-by-degree Tor oracle built from dense linear algebra only.

Each graded piece R_d = Q_d / I_d is computed by row reduction of the span of m·f_k,
the resolution of M is built one degree at a time from nullspaces, and Tor_i(M, N)_d is the
homology of (F ⊗ N)_d with N_e = W_e / U_e. No Gröbner basis is involved, so the oracle
is an independent check of the resolution path in degrees up to the configured bound.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from torvan.algebra.linalg import extend_basis, nullspace_modp, rank_modp, rref_modp
from torvan.algebra.matrix import Matrix, kronecker
from torvan.algebra.polyalg import Monomial, Polynomial
from torvan.core.config import settings
from torvan.core.errors import InvalidInput, RingMismatch
from torvan.core.logging import logger
from torvan.services.module_service import FPModule
from torvan.services.ring_service import CIRing

MAX_ORACLE_PRIME = 2**20


@dataclass
class _Piece:
    monomials: tuple[Monomial, ...]
    index: dict
    rows: np.ndarray
    pivots: list[int]
    standard: list[int]

    @property
    def dim(self) -> int:
        return len(self.standard)


class GradedPieces:
    """R_d as a quotient of Q_d, with normal-form coordinates over the standard monomials."""

    def __init__(self, R: CIRing):
        if R.p >= MAX_ORACLE_PRIME:
            raise InvalidInput(f"the dense oracle needs p < {MAX_ORACLE_PRIME}", field="p")
        self.R = R
        self.ring = R.ambient
        self.p = R.p
        self._pieces: dict[int, _Piece] = {}

    def piece(self, d: int) -> _Piece:
        if d not in self._pieces:
            self._pieces[d] = self._build(d)
        return self._pieces[d]

    def _build(self, d: int) -> _Piece:
        monos = self.ring.monomials_of_degree(d)
        index = {m: k for k, m in enumerate(monos)}
        vectors = []
        for f in self.R.relations:
            for m in self.ring.monomials_of_degree(d - f.degree()):
                v = np.zeros(len(monos), dtype=np.int64)
                for mono, c in f.mul_term(m).term_dict().items():
                    v[index[mono]] = c
                vectors.append(v)
        if vectors and monos:
            rows, pivots = rref_modp(np.array(vectors), self.p)
            rows = rows[: len(pivots)]
        else:
            rows, pivots = np.zeros((0, len(monos)), dtype=np.int64), []
        pivot_set = set(pivots)
        standard = [k for k in range(len(monos)) if k not in pivot_set]
        return _Piece(monos, index, rows, pivots, standard)

    def basis(self, d: int) -> list[Monomial]:
        P = self.piece(d)
        return [P.monomials[k] for k in P.standard]

    def coords(self, f: Polynomial, d: int) -> np.ndarray:
        """Coordinates of f (homogeneous of degree d, or zero) in R_d."""
        P = self.piece(d)
        v = np.zeros(len(P.monomials), dtype=np.int64)
        for mono, c in f.term_dict().items():
            v[P.index[mono]] = c
        if P.pivots:
            v = (v - (v[P.pivots][:, None] * P.rows).sum(axis=0)) % self.p
        return v[P.standard]


def free_dim(pieces: GradedPieces, twists, d: int) -> int:
    return sum(pieces.piece(d - t).dim for t in twists)


def map_in_degree(pieces: GradedPieces, mat: Matrix, d: int) -> np.ndarray:
    """Matrix of F(source)_d -> F(target)_d; rows follow the target basis."""
    offsets = np.cumsum([0] + [pieces.piece(d - t).dim for t in mat.target])
    out_cols = []
    for col, s in zip(mat.columns, mat.source):
        for m in pieces.basis(d - s):
            v = np.zeros(int(offsets[-1]), dtype=np.int64)
            for row, (f, t) in enumerate(zip(col, mat.target)):
                if f.is_zero():
                    continue
                v[offsets[row]:offsets[row + 1]] = pieces.coords(f.mul_term(m), d - t)
            out_cols.append(v)
    if not out_cols:
        return np.zeros((int(offsets[-1]), 0), dtype=np.int64)
    return np.array(out_cols, dtype=np.int64).T


def column_from_coords(pieces: GradedPieces, twists, d: int, v: np.ndarray) -> tuple[Polynomial, ...]:
    ring = pieces.ring
    col = []
    pos = 0
    for t in twists:
        basis = pieces.basis(d - t)
        terms = {m: int(v[pos + k]) for k, m in enumerate(basis) if v[pos + k] % pieces.p}
        col.append(Polynomial(ring, terms))
        pos += len(basis)
    return tuple(col)


def _rank(A: np.ndarray, p: int) -> int:
    return rank_modp(A.T, p) if A.size else 0


def _minimal_generators(pieces: GradedPieces, target, spans, dmin: int, dmax: int) -> Matrix:
    """Choose minimal generators degree by degree from ``spans(d)`` (columns in F(target)_d)."""
    ring = pieces.ring
    p = pieces.p
    cols: list[tuple[Polynomial, ...]] = []
    source: list[int] = []
    for d in range(dmin, dmax + 1):
        S = spans(d)
        if S.shape[1] == 0:
            continue
        chosen = Matrix(ring, tuple(target), tuple(source), tuple(cols))
        G = map_in_degree(pieces, chosen, d) if cols else np.zeros((S.shape[0], 0), dtype=np.int64)
        for j in extend_basis(G, S, p):
            cols.append(column_from_coords(pieces, target, d, S[:, j]))
            source.append(d)
    return Matrix(ring, tuple(target), tuple(source), tuple(cols))


@dataclass
class OracleResolution:
    module: FPModule
    degree_bound: int
    steps: list[Matrix] = field(default_factory=list)

    def twists(self, i: int) -> tuple[int, ...]:
        if i == 0:
            return self.module.gens
        return self.steps[i - 1].source if i <= len(self.steps) else ()

    def d(self, i: int) -> Matrix:
        """d_i: F_i -> F_{i-1} for i >= 1; zero past the computed length."""
        if i > len(self.steps):
            return Matrix(self.module.ring.ambient, self.twists(i - 1), (), ())
        return self.steps[i - 1]


def oracle_resolution(M: FPModule, length: int, degree_bound: int, pieces: Optional[GradedPieces] = None) -> OracleResolution:
    """Minimal resolution of M, exact in internal degrees <= degree_bound."""
    pieces = pieces or GradedPieces(M.ring)
    p = pieces.p
    res = OracleResolution(M, degree_bound)
    dmin = min(M.gens, default=0)
    rel = M.relations
    d1 = _minimal_generators(pieces, M.gens, lambda d: map_in_degree(pieces, rel, d), dmin, degree_bound)
    res.steps.append(d1)
    for _ in range(length - 1):
        prev = res.steps[-1]
        if prev.ncols == 0:
            break

        def kernel(d, prev=prev):
            A = map_in_degree(pieces, prev, d)
            if A.shape[1] == 0:
                return A
            if A.shape[0] == 0:
                return np.eye(A.shape[1], dtype=np.int64)
            return nullspace_modp(A, p)

        lo = min(prev.source)
        res.steps.append(_minimal_generators(pieces, prev.source, kernel, lo, degree_bound))
    return res


def oracle_tor(
    M: FPModule,
    N: FPModule,
    max_index: int = 6,
    degree_bound: Optional[int] = None,
) -> dict[int, dict[int, int]]:
    """dim_k Tor_i(M, N)_d for 0 <= i <= max_index and d <= degree_bound."""
    if M.ring != N.ring:
        raise RingMismatch("Tor needs modules over one ring", field="N")
    D = settings.ORACLE_DEGREE_BOUND if degree_bound is None else degree_bound
    R = M.ring
    ring = R.ambient
    p = R.p
    pieces = GradedPieces(R)
    res = oracle_resolution(M, max_index + 1, D - min(N.gens, default=0), pieces)
    dlo = min(M.gens, default=0) + min(N.gens, default=0)
    idN = Matrix.identity(ring, N.gens)

    def tensored(i: int) -> tuple[tuple[int, ...], Matrix, Matrix]:
        tw = res.twists(i)
        W = tuple(a + b for a in tw for b in N.gens)
        boundary = kronecker(res.d(i), idN) if i >= 1 else None
        U = kronecker(Matrix.identity(ring, tw), N.relations) if tw and N.relations.ncols else Matrix(ring, W, (), ())
        return W, boundary, U

    terms = [tensored(i) for i in range(max_index + 2)]
    out: dict[int, dict[int, int]] = {}
    for i in range(max_index + 1):
        W, bnd, U = terms[i]
        Wprev, _, Uprev = terms[i - 1] if i >= 1 else ((), None, None)
        _, bnext, _ = terms[i + 1]
        dims = {}
        for d in range(dlo, D + 1):
            n = free_dim(pieces, W, d)
            if n == 0:
                dims[d] = 0
                continue
            if i >= 1 and free_dim(pieces, Wprev, d):
                X = map_in_degree(pieces, bnd, d)
                Up = map_in_degree(pieces, Uprev, d)
                z = n - (_rank(np.concatenate([X, Up], axis=1), p) - _rank(Up, p))
            else:
                z = n
            Ui = map_in_degree(pieces, U, d)
            Xn = map_in_degree(pieces, bnext, d) if bnext is not None and bnext.ncols else np.zeros((n, 0), dtype=np.int64)
            b = _rank(np.concatenate([Ui, Xn], axis=1), p)
            dims[d] = z - b
        out[i] = dims
    logger.info(f"[oracle] {M.name or 'M'} x {N.name or 'N'}: lengths up to degree {D}: {[sum(v.values()) for v in out.values()]}")
    return out


def oracle_hilbert(M: FPModule, degree_bound: Optional[int] = None) -> dict[int, int]:
    """dim_k M_d for min(gens) <= d <= degree_bound."""
    D = settings.ORACLE_DEGREE_BOUND if degree_bound is None else degree_bound
    pieces = GradedPieces(M.ring)
    out = {}
    for d in range(min(M.gens, default=0), D + 1):
        n = free_dim(pieces, M.gens, d)
        out[d] = n - _rank(map_in_degree(pieces, M.relations, d), pieces.p) if n else 0
    return out
