"""Gröbner bases for submodules of graded free modules over F_p[x_1..x_n].

Elements of a free module are handled internally as sparse dicts ``{(pos, exps): coeff}``.
The public API speaks `Matrix` columns. Everything about a quotient ring R = Q/I is done
by adjoining the columns ``f_j * e_k`` (see `matrix.ideal_times_free`) before calling in here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence, Union

from sympy import Rational, Symbol, interpolate

from torvan.algebra.matrix import Matrix
from torvan.algebra.polyalg import (
    Monomial,
    MonomialOrder,
    PolyRing,
    Polynomial,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)
from torvan.core.config import settings
from torvan.core.errors import InvalidInput
from torvan.core.logging import logger

Term = tuple[int, Monomial]
Vec = dict[Term, int]
FrozenVec = tuple[tuple[Term, int], ...]

NEG_INF = float("-inf")


@dataclass(frozen=True)
class FreeModule:
    """Q^r with generator twists."""

    ring: PolyRing
    twists: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)

    def term_degree(self, t: Term) -> int:
        return self.ring.degree(t[1]) + self.twists[t[0]]


# ---------------------------------------------------------------------------
# conversions
# ---------------------------------------------------------------------------

def to_vec(col: Sequence[Polynomial]) -> Vec:
    out: Vec = {}
    for pos, f in enumerate(col):
        for m, c in f.term_dict().items():
            out[(pos, m)] = c
    return out


def from_vec(v: Union[Vec, FrozenVec], module: FreeModule) -> tuple[Polynomial, ...]:
    items = v.items() if isinstance(v, dict) else v
    parts: list[dict] = [{} for _ in range(module.rank)]
    for (pos, m), c in items:
        parts[pos][m] = c
    return tuple(Polynomial(module.ring, d) for d in parts)


def _key_fn(order: MonomialOrder, twists: Sequence[int]):
    mk = order.module_key

    def key(t: Term):
        return mk(t[0], t[1], twists)

    return key


def _freeze(v: Vec, key) -> FrozenVec:
    return tuple(sorted(v.items(), key=lambda it: key(it[0]), reverse=True))


def _vec_degree(v: Vec, module: FreeModule) -> Optional[int]:
    degrees = {module.term_degree(t) for t in v}
    if not degrees:
        return None
    if len(degrees) > 1:
        raise InvalidInput("inhomogeneous module element", field="generators")
    return degrees.pop()


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------

class _Reducer:
    """Division by a list of monic module elements, first-divisor-wins."""

    def __init__(self, module: FreeModule, order: MonomialOrder):
        self.p = module.ring.p
        self.key = _key_fn(order, module.twists)
        self.elements: list[Vec] = []
        self.leads: list[Term] = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, v: Vec) -> int:
        lead = max(v, key=self.key)
        self.elements.append(v)
        self.leads.append(lead)
        idx = len(self.elements) - 1
        self.by_pos.setdefault(lead[0], []).append(idx)
        return idx

    def reduce(self, v: Vec, skip: Optional[int] = None) -> Vec:
        p, key = self.p, self.key
        f = dict(v)
        rem: Vec = {}
        while f:
            t = max(f, key=key)
            c = f.pop(t)
            idx = None
            pos, m = t
            for j in self.by_pos.get(pos, ()):
                if j == skip:
                    continue
                if mono_divides(self.leads[j][1], m):
                    idx = j
                    break
            if idx is None:
                rem[t] = c
                continue
            g = self.elements[idx]
            glead = self.leads[idx]
            q = mono_div(m, glead[1])
            for (gp, gm), gc in g.items():
                if (gp, gm) == glead:
                    continue
                s = (gp, mono_mul(gm, q))
                val = (f.get(s, 0) - c * gc) % p
                if val:
                    f[s] = val
                else:
                    f.pop(s, None)
        return rem


def _monic(v: Vec, key, p: int) -> Vec:
    lead = max(v, key=key)
    inv = pow(v[lead], -1, p)
    return {t: (c * inv) % p for t, c in v.items()}


def _spoly(a: Vec, la: Term, b: Vec, lb: Term, p: int) -> Vec:
    lcm = mono_lcm(la[1], lb[1])
    qa, qb = mono_div(lcm, la[1]), mono_div(lcm, lb[1])
    out: Vec = {}
    for (pos, m), c in a.items():
        t = (pos, mono_mul(m, qa))
        out[t] = (out.get(t, 0) + c) % p
    for (pos, m), c in b.items():
        t = (pos, mono_mul(m, qb))
        out[t] = (out.get(t, 0) - c) % p
    return {t: c for t, c in out.items() if c}


# ---------------------------------------------------------------------------
# Gröbner bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    module: FreeModule
    order: MonomialOrder
    elements: tuple[FrozenVec, ...]
    reduced: bool = True

    @cached_property
    def _reducer(self) -> _Reducer:
        r = _Reducer(self.module, self.order)
        for e in self.elements:
            r.add(dict(e))
        return r

    @property
    def leads(self) -> list[Term]:
        return [e[0][0] for e in self.elements]

    def __len__(self):
        return len(self.elements)

    def columns(self) -> list[tuple[Polynomial, ...]]:
        return [from_vec(e, self.module) for e in self.elements]

    def degrees(self) -> list[int]:
        return [self.module.term_degree(e[0][0]) for e in self.elements]

    def reduce_vec(self, v: Vec) -> Vec:
        return self._reducer.reduce(v)

    def is_unit(self) -> bool:
        """True when the basis generates the whole free module."""
        units = {lead[0] for lead in self.leads if not any(lead[1])}
        return len(units) == self.module.rank

    def contains(self, col: Sequence[Polynomial]) -> bool:
        return not self.reduce_vec(to_vec(col))


def _update(reducer: _Reducer, pairs: set, idx: int, rank_one: bool) -> None:
    """Register the pairs created by basis element idx."""
    lead = reducer.leads[idx]
    for j in range(idx):
        lj = reducer.leads[j]
        if lj[0] != lead[0]:
            continue
        # coprime leads: S-polynomial reduces to zero (ideals only)
        if rank_one and mono_coprime(lj[1], lead[1]):
            continue
        pairs.add((j, idx))


def _select(reducer: _Reducer, pairs: set, key) -> tuple[int, int]:
    """Normal strategy: smallest lcm first, ties by index."""

    def pair_key(pair):
        i, j = pair
        li, lj = reducer.leads[i], reducer.leads[j]
        return (key((li[0], mono_lcm(li[1], lj[1]))), pair)

    return min(pairs, key=pair_key)


def _chain_skip(reducer: _Reducer, pairs: set, pair: tuple[int, int]) -> bool:
    i, j = pair
    li, lj = reducer.leads[i], reducer.leads[j]
    lcm = mono_lcm(li[1], lj[1])
    for k, lk in enumerate(reducer.leads):
        if k in (i, j) or lk[0] != li[0] or not mono_divides(lk[1], lcm):
            continue
        if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
            return True
    return False


def _buchberger(module: FreeModule, order: MonomialOrder, gens: tuple[FrozenVec, ...]) -> tuple[FrozenVec, ...]:
    p = module.ring.p
    key = _key_fn(order, module.twists)
    reducer = _Reducer(module, order)
    pairs: set = set()
    rank_one = module.rank == 1

    for g in gens:
        v = reducer.reduce(dict(g))
        if v:
            _update(reducer, pairs, reducer.add(_monic(v, key, p)), rank_one)

    steps = 0
    while pairs:
        pair = _select(reducer, pairs, key)
        pairs.discard(pair)
        if _chain_skip(reducer, pairs, pair):
            continue
        i, j = pair
        s = _spoly(reducer.elements[i], reducer.leads[i], reducer.elements[j], reducer.leads[j], p)
        r = reducer.reduce(s)
        steps += 1
        if r:
            _update(reducer, pairs, reducer.add(_monic(r, key, p)), rank_one)

    leads = reducer.leads
    chosen = [
        i for i, li in enumerate(leads)
        if not any(j != i and lj[0] == li[0] and mono_divides(lj[1], li[1]) for j, lj in enumerate(leads))
    ]
    logger.debug(f"[groebner] {steps} S-pair reductions, {len(chosen)} minimal leads")

    final = _Reducer(module, order)
    for idx in chosen:
        final.add(reducer.elements[idx])
    out = []
    for pos in range(len(chosen)):
        v = _monic(final.reduce(final.elements[pos], skip=pos), key, p)
        final.elements[pos] = v
        out.append(_freeze(v, key))
    return _sort_basis(out, module, key)


def _sort_basis(elements: list[FrozenVec], module: FreeModule, key) -> tuple[FrozenVec, ...]:
    ordered = sorted(elements, key=lambda e: key(e[0][0]), reverse=True)
    ordered.sort(key=lambda e: module.term_degree(e[0][0]))
    return tuple(ordered)


@lru_cache(maxsize=settings.GB_CACHE_SIZE)
def _cached_basis(module: FreeModule, order: MonomialOrder, gens: tuple[FrozenVec, ...]) -> tuple[FrozenVec, ...]:
    return _buchberger(module, order, gens)


def groebner_basis(
    gens: Sequence[Sequence[Polynomial]],
    module: FreeModule,
    order: Optional[MonomialOrder] = None,
    homogeneous: bool = True,
) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule spanned by ``gens`` (each a column of length rank)."""
    order = order or module.ring.order
    key = _key_fn(order, module.twists)
    frozen = []
    for col in gens:
        if len(col) != module.rank:
            raise InvalidInput("generator length does not match the free module", field="generators")
        for f in col:
            if f.ring != module.ring:
                raise InvalidInput("generator lives in another ring", field="generators")
        v = to_vec(col)
        if not v:
            continue
        if homogeneous:
            _vec_degree(v, module)
        frozen.append(_freeze(v, key))
    elements = _cached_basis(module, order, tuple(frozen))
    return GroebnerBasis(module, order, elements)


def matrix_basis(mat: Matrix, order: Optional[MonomialOrder] = None) -> GroebnerBasis:
    return groebner_basis(mat.columns, FreeModule(mat.ring, mat.target), order)


def normal_form(f: Sequence[Polynomial], G: GroebnerBasis) -> tuple[Polynomial, ...]:
    if len(f) != G.module.rank or any(g.ring != G.module.ring for g in f):
        raise InvalidInput("element does not live in the basis' free module", field="f")
    return from_vec(G.reduce_vec(to_vec(f)), G.module)


# ---------------------------------------------------------------------------
# syzygies
# ---------------------------------------------------------------------------

def syzygies(mat: Matrix) -> Matrix:
    """Generators of the kernel of ``mat: F(source) -> F(target)`` over Q.

    Computed from a Gröbner basis of the augmented columns (g_i, e_i) under an order in
    which the target block dominates; basis elements with vanishing target block span
    the syzygy module.
    """
    ring = mat.ring
    r = mat.nrows
    m = mat.ncols
    if m == 0:
        return Matrix(ring, (), (), ())
    module = FreeModule(ring, mat.target + mat.source)
    order = ring.order.with_module("elim", split=r)
    gens = []
    for j, col in enumerate(mat.columns):
        unit = tuple(ring.one() if k == j else ring.zero() for k in range(m))
        gens.append(tuple(col) + unit)
    G = groebner_basis(gens, module, order)
    cols, degrees = [], []
    for e in G.elements:
        if e[0][0][0] < r:
            continue
        v = {(pos - r, mono): c for (pos, mono), c in e}
        cols.append(from_vec(v, FreeModule(ring, mat.source)))
        degrees.append(module.term_degree(e[0][0]))
    logger.debug(f"[groebner] syzygies of {r}x{m} matrix: {len(cols)} generators")
    return Matrix(ring, mat.source, tuple(degrees), tuple(cols))


# ---------------------------------------------------------------------------
# lead-term combinatorics
# ---------------------------------------------------------------------------

def _minimalize_monomials(gens: list[Monomial]) -> list[Monomial]:
    out: list[Monomial] = []
    for m in sorted(set(gens), key=lambda e: (sum(e), e)):
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return out


def laurent_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def laurent_add(a: dict[int, int], b: dict[int, int], shift: int = 0) -> dict[int, int]:
    out = dict(a)
    for k, v in b.items():
        out[k + shift] = out.get(k + shift, 0) + v
    return {k: v for k, v in out.items() if v}


def hilbert_numerator(gens: Sequence[Monomial], weights: Sequence[int]) -> dict[int, int]:
    """K-polynomial of Q/J for a monomial ideal J, by pivoting on variables."""
    gens = _minimalize_monomials(list(gens))
    if not gens:
        return {0: 1}
    if any(not any(m) for m in gens):
        return {}
    mixed = [m for m in gens if sum(1 for e in m if e) > 1]
    if not mixed:
        out = {0: 1}
        for m in gens:
            d = sum(w * e for w, e in zip(weights, m))
            out = laurent_mul(out, {0: 1, d: -1})
        return out
    counts = [sum(1 for m in mixed if m[j]) for j in range(len(weights))]
    j = max(range(len(weights)), key=lambda k: (counts[k], -k))
    pivot = tuple(1 if k == j else 0 for k in range(len(weights)))
    left = [m for m in gens if not m[j]] + [pivot]
    right = [tuple(max(e - 1, 0) if k == j else e for k, e in enumerate(m)) for m in gens]
    return laurent_add(hilbert_numerator(left, weights), hilbert_numerator(right, weights), weights[j])


def _root_one_multiplicity(num: dict[int, int]) -> int:
    if not num:
        return 0
    lo = min(num)
    coeffs = [num.get(k, 0) for k in range(lo, max(num) + 1)]
    mult = 0
    while coeffs and sum(coeffs) == 0:
        # synthetic division by (t - 1), highest degree first
        high = list(reversed(coeffs))
        quotient = [high[0]]
        for c in high[1:-1]:
            quotient.append(c + quotient[-1])
        coeffs = list(reversed(quotient))
        mult += 1
    return mult


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series data of F/LT(U): numerator over prod (1 - t^w_j)."""

    nvars: int
    weights: tuple[int, ...]
    numerator: tuple[tuple[int, int], ...]
    dimension: Union[int, float]
    values: tuple[tuple[int, int], ...]
    polynomial_tail: Optional[tuple[Fraction, ...]] = None
    tail_from: Optional[int] = None

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    def value(self, d: int) -> int:
        return hilbert_value(dict(self.numerator), self.weights, d)

    def length(self) -> Optional[int]:
        """Sum of all values when finite (dimension ≤ 0), else None."""
        if self.dimension == NEG_INF:
            return 0
        if self.dimension > 0:
            return None
        num = dict(self.numerator)
        lo, hi = min(num), max(num)
        return sum(hilbert_value(num, self.weights, d) for d in range(lo, hi + 1))


def hilbert_value(num: dict[int, int], weights: Sequence[int], d: int) -> int:
    """Coefficient of t^d in num(t) / prod_j (1 - t^{w_j})."""
    if not num:
        return 0
    lo = min(num)
    if d < lo:
        return 0
    span = d - lo
    series = [0] * (span + 1)
    series[0] = 1
    for w in weights:
        for k in range(w, span + 1):
            series[k] += series[k - w]
    return sum(c * series[d - e] for e, c in num.items() if 0 <= d - e <= span)


def hilbert_data(
    module: FreeModule, leads: Sequence[Term], window: Optional[tuple[int, int]] = None
) -> HilbertData:
    ring = module.ring
    per_pos: dict[int, list[Monomial]] = {i: [] for i in range(module.rank)}
    for pos, m in leads:
        per_pos[pos].append(m)
    num: dict[int, int] = {}
    for pos, ideal in per_pos.items():
        num = laurent_add(num, hilbert_numerator(ideal, ring.weights), module.twists[pos])
    n = ring.nvars
    dim: Union[int, float] = NEG_INF if not num else n - _root_one_multiplicity(num)
    if window is None:
        lo = min(module.twists) if module.twists else 0
        hi = (max(num) if num else lo) + 2
        window = (lo, hi)
    values = tuple((d, hilbert_value(num, ring.weights, d)) for d in range(window[0], window[1] + 1))
    tail, tail_from = None, None
    if num and ring.standard_grading:
        tail_from = max(num) - n + 1
        if dim <= 0:
            tail = ()
        else:
            t = Symbol("t")
            points = [(d, hilbert_value(num, ring.weights, d)) for d in range(tail_from, tail_from + int(dim))]
            poly = interpolate(points, t).as_poly(t) if len(points) > 1 else None
            if poly is None:
                tail = (Fraction(points[0][1]),)
            else:
                coeffs = list(reversed(poly.all_coeffs()))
                tail = tuple(Fraction(int(Rational(c).p), int(Rational(c).q)) for c in coeffs)
    return HilbertData(
        nvars=n,
        weights=ring.weights,
        numerator=tuple(sorted(num.items())),
        dimension=dim,
        values=values,
        polynomial_tail=tail,
        tail_from=tail_from,
    )


def lt_dimension_hilbert(G: GroebnerBasis, window: Optional[tuple[int, int]] = None) -> HilbertData:
    """Dimension and Hilbert function of F / LT(G), equal to those of F / span(G)."""
    return hilbert_data(G.module, G.leads, window)


# ---------------------------------------------------------------------------
# ideal conveniences
# ---------------------------------------------------------------------------

def ideal_basis(polys: Sequence[Polynomial], ring: PolyRing, homogeneous: bool = True) -> GroebnerBasis:
    return groebner_basis([(f,) for f in polys], FreeModule(ring, (0,)), homogeneous=homogeneous)


def ideal_dimension(polys: Sequence[Polynomial], ring: PolyRing) -> Union[int, float]:
    """Krull dimension of Q/(polys); -inf for the unit ideal."""
    return lt_dimension_hilbert(ideal_basis(polys, ring)).dimension


def ideal_contains(polys: Sequence[Polynomial], f: Polynomial) -> bool:
    return ideal_basis(polys, f.ring).contains((f,))


def _embed(f: Polynomial, target: PolyRing) -> Polynomial:
    return Polynomial(target, {m + (0,) * (target.nvars - len(m)): c for m, c in f.term_dict().items()})


def radical_contains(polys: Sequence[Polynomial], g: Polynomial) -> bool:
    """g ∈ √(polys), via 1 ∈ (polys) + (1 - t g) in Q[t]."""
    ring = g.ring
    name = "t_"
    while name in ring.names:
        name += "_"
    big = ring.extend(name)
    t = big.var(name)
    gens = [_embed(f, big) for f in polys] + [big.one() - t * _embed(g, big)]
    G = ideal_basis(gens, big, homogeneous=False)
    return G.is_unit()
