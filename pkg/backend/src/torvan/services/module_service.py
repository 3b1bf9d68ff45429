"""Finitely presented graded modules over a CIRing and the exact-sequence toolbox.

A module M is stored as a presentation over the ambient ring Q: generator twists ``gens``
and a relation matrix ``relations`` whose columns live in F = ⊕ Q(-gens[i]). As a Q-module
M = F / (relations + I·F). Every computation over R = Q/I lifts to Q by adjoining I·F.
"""
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

from torvan.algebra.groebner import (
    NEG_INF,
    FreeModule,
    GroebnerBasis,
    HilbertData,
    ideal_basis,
    lt_dimension_hilbert,
    matrix_basis,
    normal_form,
    radical_contains,
    syzygies,
)
from torvan.algebra.matrix import (
    Matrix,
    block_diagonal,
    hstack,
    ideal_times_free,
    kronecker,
    minors,
)
from torvan.algebra.polyalg import Polynomial
from torvan.core.errors import CompositionNotZero, InvalidInput, RingMismatch
from torvan.core.logging import logger
from torvan.services.ring_service import CIRing

Length = Union[int, float]


# ---------------------------------------------------------------------------
# helpers over R
# ---------------------------------------------------------------------------

def reduce_poly(R: CIRing, f: Polynomial) -> Polynomial:
    if not R.relations or f.is_zero():
        return f
    return normal_form((f,), R.ideal)[0]


def reduce_matrix(R: CIRing, mat: Matrix) -> Matrix:
    cols = tuple(tuple(reduce_poly(R, f) for f in c) for c in mat.columns)
    return Matrix(mat.ring, mat.target, mat.source, cols).drop_zero_columns()


def with_ideal(R: CIRing, mat: Matrix) -> Matrix:
    """mat | I·F over the target of mat."""
    extra = ideal_times_free(R.ambient, R.relations, mat.target)
    return hstack([mat, extra]) if extra.ncols else mat


def span_basis(R: CIRing, mat: Matrix) -> GroebnerBasis:
    """Gröbner basis over Q of span(mat) + I·F."""
    return matrix_basis(with_ideal(R, mat))


def r_kernel(R: CIRing, mat: Matrix) -> Matrix:
    """Generators of {v : mat·v ∈ I·F_target}, columns in F_source, reduced mod I."""
    if mat.ncols == 0:
        return Matrix(R.ambient, mat.source, (), ())
    full = with_ideal(R, mat)
    syz = syzygies(full)
    keep = list(range(mat.ncols))
    cols = [tuple(c[k] for k in keep) for c in syz.columns]
    kernel = Matrix(R.ambient, mat.source, syz.source, tuple(cols))
    return reduce_matrix(R, kernel)


def minimal_columns(R: CIRing, mat: Matrix, base: Optional[Matrix] = None) -> list[int]:
    """Indices of a minimal subset of columns generating span(mat) + span(base) + I·F modulo base + I·F.

    Graded greedy: columns are visited by degree, a column is kept iff it is not in the span of
    what was kept so far.
    """
    order = sorted(range(mat.ncols), key=lambda j: (mat.source[j], j))
    kept: list[int] = []
    base_cols = base if base is not None else Matrix(R.ambient, mat.target, (), ())
    for j in order:
        if all(f.is_zero() for f in mat.columns[j]):
            continue
        current = hstack([base_cols, mat.select_columns(kept)])
        G = span_basis(R, current)
        if not G.contains(mat.columns[j]):
            kept.append(j)
    return sorted(kept, key=lambda j: (mat.source[j], j))


# ---------------------------------------------------------------------------
# modules and maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FPModule:
    ring: CIRing
    gens: tuple[int, ...]
    relations: Matrix
    name: Optional[str] = field(default=None, compare=False)

    @property
    def ngens(self) -> int:
        return len(self.gens)

    @cached_property
    def free(self) -> FreeModule:
        return FreeModule(self.ring.ambient, self.gens)

    @cached_property
    def basis(self) -> GroebnerBasis:
        """Gröbner basis over Q of relations + I·F."""
        return span_basis(self.ring, self.relations)

    @cached_property
    def hilbert(self) -> HilbertData:
        return lt_dimension_hilbert(self.basis)

    @property
    def is_zero(self) -> bool:
        return self.ngens == 0 or self.basis.is_unit()

    @property
    def is_free_presentation(self) -> bool:
        return self.relations.ncols == 0

    def contains_relation(self, col: Sequence[Polynomial]) -> bool:
        """col == 0 in M."""
        return self.basis.contains(col)

    def describe(self) -> str:
        label = self.name or "M"
        return f"{label}: {self.ngens} gens {list(self.gens)}, {self.relations.ncols} relations"


@dataclass(frozen=True)
class ModuleMap:
    """Degree-0 map source -> target given on generators by ``matrix``."""

    source: FPModule
    target: FPModule
    matrix: Matrix
    well_defined: bool = True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other."""
        return ModuleMap(other.source, self.target, self.matrix.compose(other.matrix))

    def is_zero(self) -> bool:
        return all(self.target.contains_relation(c) for c in self.matrix.columns)


def make_module(
    R: CIRing,
    gens: Sequence[int],
    relations: Union[Matrix, Sequence[Sequence[Polynomial]]] = (),
    name: Optional[str] = None,
) -> FPModule:
    """Build a presentation; columns are reduced mod I and zero columns dropped."""
    gens = tuple(int(g) for g in gens)
    if isinstance(relations, Matrix):
        mat = relations
        if mat.target != gens:
            raise InvalidInput("relation matrix rows do not match generator twists", field="relations")
    else:
        cols = [tuple(c) for c in relations]
        for c in cols:
            if len(c) != len(gens):
                raise InvalidInput("relation column length differs from generator count", field="relations")
        cols = [c for c in cols if any(f for f in c)]
        mat = Matrix.from_columns(R.ambient, gens, cols)
    return FPModule(R, gens, reduce_matrix(R, mat), name)


def make_map(source: FPModule, target: FPModule, matrix: Matrix) -> ModuleMap:
    """Validate that the matrix sends relations of the source into the relations of the target."""
    if source.ring != target.ring:
        raise RingMismatch("maps must stay inside one ring", field="ring")
    if matrix.source != source.gens or matrix.target != target.gens:
        raise InvalidInput("map matrix twists do not match the modules", field="matrix")
    for col in matrix.compose(source.relations).columns:
        if not target.contains_relation(col):
            raise InvalidInput("map does not respect the source relations", field="matrix")
    return ModuleMap(source, target, reduce_matrix_keep(source.ring, matrix))


def reduce_matrix_keep(R: CIRing, mat: Matrix) -> Matrix:
    cols = tuple(tuple(reduce_poly(R, f) for f in c) for c in mat.columns)
    return Matrix(mat.ring, mat.target, mat.source, cols)


def zero_map(source: FPModule, target: FPModule) -> ModuleMap:
    return ModuleMap(source, target, Matrix.zero(source.ring.ambient, target.gens, source.gens))


def free_module(R: CIRing, twists: Sequence[int] = (0,), name: Optional[str] = None) -> FPModule:
    return make_module(R, twists, (), name=name)


def zero_module(R: CIRing) -> FPModule:
    return make_module(R, (), (), name="0")


def cyclic_module(R: CIRing, ideal: Sequence[Polynomial], twist: int = 0, name: Optional[str] = None) -> FPModule:
    """R/(ideal) with its generator in degree ``twist``."""
    return make_module(R, (twist,), [(f,) for f in ideal if f], name=name)


def residue_field(R: CIRing) -> FPModule:
    return cyclic_module(R, R.variables(), name="k")


def direct_sum(M: FPModule, N: FPModule) -> FPModule:
    _check_same_ring(M, N)
    rel = block_diagonal(M.relations, N.relations)
    return make_module(M.ring, M.gens + N.gens, rel, name=f"({M.name or 'M'}+{N.name or 'N'})")


def shift(M: FPModule, k: int) -> FPModule:
    """M(-k): generators move up by k."""
    return FPModule(M.ring, tuple(g + k for g in M.gens), M.relations.shift(k), M.name)


def _check_same_ring(M: FPModule, N: FPModule) -> None:
    if M.ring != N.ring:
        raise RingMismatch(f"{M.name or 'M'} and {N.name or 'N'} live over different rings", field="ring")


# ---------------------------------------------------------------------------
# minimal presentations
# ---------------------------------------------------------------------------

def _eliminate_units(R: CIRing, A: Matrix, P: Matrix) -> tuple[Matrix, Matrix, list[int]]:
    """Row-reduce unit entries of A, carrying the generator change P along.

    Returns the reduced relations, the projection from old to surviving generators and the
    surviving generator indices.
    """
    ring = R.ambient
    rows = list(range(A.nrows))
    cols_a = [list(c) for c in A.columns]
    cols_p = [list(c) for c in P.columns]
    src = list(A.source)
    while True:
        pivot = None
        for j, col in enumerate(cols_a):
            for i, f in enumerate(col):
                if f and f.is_constant():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        a = cols_a[j][i]
        inv = pow(a.lead()[1], -1, ring.p)
        pivot_col = cols_a[j]
        for group in (cols_a, cols_p):
            for l, col in enumerate(group):
                if group is cols_a and l == j:
                    continue
                c = col[i]
                if c.is_zero():
                    continue
                factor = c.scale(inv)
                for k in range(len(col)):
                    if pivot_col[k]:
                        col[k] = col[k] - factor * pivot_col[k]
        del cols_a[j]
        del src[j]
        for group in (cols_a, cols_p):
            for col in group:
                del col[i]
        del rows[i]
    target = tuple(A.target[r] for r in rows)
    A2 = Matrix(ring, target, tuple(src), tuple(tuple(c) for c in cols_a))
    P2 = Matrix(ring, target, P.source, tuple(tuple(c) for c in cols_p))
    return reduce_matrix(R, A2), reduce_matrix_keep(R, P2), rows


def prune_relations(M: FPModule) -> FPModule:
    """Keep a minimal generating subset of the relation columns."""
    if M.relations.ncols == 0:
        return M
    keep = minimal_columns(M.ring, M.relations)
    return FPModule(M.ring, M.gens, M.relations.select_columns(keep), M.name)


def minimalize_with_map(M: FPModule) -> tuple[FPModule, ModuleMap]:
    """Minimal presentation together with the isomorphism M -> minimal(M)."""
    R = M.ring
    P0 = Matrix.identity(R.ambient, M.gens)
    A, P, rows = _eliminate_units(R, M.relations, P0)
    Mmin = prune_relations(FPModule(R, A.target, A, M.name))
    logger.debug(f"[modules] minimalize {M.ngens} -> {Mmin.ngens} generators")
    return Mmin, ModuleMap(M, Mmin, P)


def minimalize(M: FPModule) -> FPModule:
    return minimalize_with_map(M)[0]


# ---------------------------------------------------------------------------
# kernels, images, subquotients
# ---------------------------------------------------------------------------

def quotient_presentation(R: CIRing, K: Matrix, W: Optional[Matrix] = None, name: Optional[str] = None) -> FPModule:
    """Presentation of (span K + W + I·F) / (W + I·F) on the columns of K."""
    if K.ncols == 0:
        return zero_module(R)
    W = W if W is not None else Matrix(R.ambient, K.target, (), ())
    full = with_ideal(R, hstack([K, W]))
    syz = syzygies(full)
    s = K.ncols
    cols = [tuple(c[:s]) for c in syz.columns]
    rel = Matrix(R.ambient, K.source, syz.source, tuple(cols))
    return FPModule(R, K.source, reduce_matrix(R, rel), name)


def submodule_presentation(M: FPModule, K: Matrix, name: Optional[str] = None) -> FPModule:
    """The submodule of M generated by the columns of K (vectors on the generators of M)."""
    return quotient_presentation(M.ring, K, M.relations, name)


def preimage(g: ModuleMap) -> Matrix:
    """Columns in F_source generating the preimage of 0 under g (i.e. ker g plus relations)."""
    R = g.source.ring
    stacked = hstack([g.matrix, g.target.relations]) if g.target.relations.ncols else g.matrix
    if stacked.ncols == 0 or g.matrix.ncols == 0:
        return Matrix.identity(R.ambient, g.source.gens)
    kernel = r_kernel(R, stacked)
    m = g.matrix.ncols
    cols = [tuple(c[:m]) for c in kernel.columns]
    return reduce_matrix(R, Matrix(R.ambient, g.source.gens, kernel.source, tuple(cols)))


def subquotient(g: ModuleMap, f: ModuleMap, minimal: bool = True) -> FPModule:
    """ker(g) / im(f) for composable maps with g ∘ f = 0."""
    M = g.source
    if f.target.gens != M.gens or f.target.ring != M.ring:
        raise InvalidInput("maps are not composable", field="f")
    if not g.compose(f).is_zero():
        raise CompositionNotZero("g ∘ f is not zero", field="f")
    K = preimage(g)
    W = hstack([f.matrix, M.relations]) if f.matrix.ncols else M.relations
    H = quotient_presentation(M.ring, K, W)
    return minimalize(H) if minimal else H


def cokernel(g: ModuleMap) -> FPModule:
    N = g.target
    rel = hstack([N.relations, g.matrix]) if g.matrix.ncols else N.relations
    return minimalize(make_module(N.ring, N.gens, rel))


# ---------------------------------------------------------------------------
# tensor and duals
# ---------------------------------------------------------------------------

def tensor(M: FPModule, N: FPModule, minimal: bool = True) -> FPModule:
    """M ⊗_R N presented on generators e_i ⊗ f_j (index i * ngens(N) + j)."""
    _check_same_ring(M, N)
    ring = M.ring.ambient
    gens = tuple(a + b for a in M.gens for b in N.gens)
    parts = []
    if M.relations.ncols:
        parts.append(kronecker(M.relations, Matrix.identity(ring, N.gens)))
    if N.relations.ncols:
        parts.append(kronecker(Matrix.identity(ring, M.gens), N.relations))
    rel = hstack(parts) if parts else Matrix(ring, gens, (), ())
    T = make_module(M.ring, gens, rel, name=f"{M.name or 'M'}⊗{N.name or 'N'}")
    return minimalize(T) if minimal else T


def tensor_power(M: FPModule, n: int) -> FPModule:
    if n < 1:
        raise InvalidInput("tensor power needs n >= 1", field="n")
    out = M
    for _ in range(n - 1):
        out = tensor(out, M)
    return out


def dual_generators(M: FPModule) -> Matrix:
    """Minimal generators of M* = ker(A^T) inside ⊕ R(gens[i]), as columns."""
    R = M.ring
    ring = R.ambient
    dual_twists = tuple(-a for a in M.gens)
    if M.ngens == 0:
        return Matrix(ring, (), (), ())
    if M.relations.ncols == 0:
        K = Matrix.identity(ring, dual_twists)
    else:
        K = r_kernel(R, M.relations.transpose())
    keep = minimal_columns(R, K)
    return K.select_columns(keep)


@dataclass(frozen=True)
class DualData:
    """M*, M** and the canonical map κ: M -> M** ⊆ R^ν.

    ``kappa`` is recorded as the composite M -> M** -> R^ν with matrix K^T where K holds the
    chosen generators of M*; ``double_dual_embedding`` holds generators of M** in R^ν.
    """

    M: FPModule
    dual_gens: Matrix
    Mstar: FPModule
    Mstarstar: FPModule
    double_dual_embedding: Matrix
    kappa: ModuleMap

    @property
    def nu(self) -> int:
        return self.dual_gens.ncols


def dual_and_kappa(M: FPModule) -> DualData:
    R = M.ring
    ring = R.ambient
    K = dual_generators(M)
    free_dual = free_module(R, tuple(-a for a in M.gens))
    Mstar = prune_relations(submodule_presentation(free_dual, K, name=f"{M.name or 'M'}*"))
    nu = K.ncols
    # generators of M* sit in degrees s_j; M** lives in ⊕ R(s_j) with twists -s_j
    dd_twists = tuple(-s for s in K.source)
    if nu == 0:
        K2 = Matrix(ring, (), (), ())
    elif Mstar.relations.ncols == 0:
        K2 = Matrix.identity(ring, dd_twists)
    else:
        K2full = r_kernel(R, Mstar.relations.transpose())
        K2 = K2full.select_columns(minimal_columns(R, K2full))
    ambient_free = free_module(R, dd_twists)
    Mss = prune_relations(submodule_presentation(ambient_free, K2, name=f"{M.name or 'M'}**"))
    kappa_matrix = reduce_matrix_keep(R, K.transpose())
    kappa_matrix = Matrix(ring, dd_twists, M.gens, kappa_matrix.columns)
    kappa = ModuleMap(M, ambient_free, kappa_matrix)
    return DualData(M, K, Mstar, Mss, K2, kappa)


def kappa_kernel(d: DualData) -> Matrix:
    """Columns in F_M whose image under κ vanishes: the torsion submodule plus relations."""
    R = d.M.ring
    if d.nu == 0:
        return Matrix.identity(R.ambient, d.M.gens)
    return r_kernel(R, d.kappa.matrix)


def kappa_cokernel(d: DualData) -> FPModule:
    """M** / κ(M)."""
    R = d.M.ring
    if d.double_dual_embedding.ncols == 0:
        return zero_module(R)
    return minimalize(quotient_presentation(R, d.double_dual_embedding, d.kappa.matrix))


# ---------------------------------------------------------------------------
# ideals, Fitting ideals, dimension
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RIdeal:
    """An ideal of R given by generators of its lift to Q (the relations of R included)."""

    ring: CIRing
    gens: tuple[Polynomial, ...]

    @cached_property
    def basis(self) -> GroebnerBasis:
        return ideal_basis(self.gens, self.ring.ambient)

    def contains(self, f: Polynomial) -> bool:
        return self.basis.contains((f,))

    def is_unit(self) -> bool:
        return self.basis.is_unit()

    def is_zero(self) -> bool:
        return all(self.ring.contains(f) for f in self.gens)

    @property
    def dimension(self) -> Length:
        """dim R/J."""
        return lt_dimension_hilbert(self.basis).dimension

    @property
    def height(self) -> Length:
        """dim R - dim R/J (R is Cohen-Macaulay); inf for the unit ideal."""
        d = self.dimension
        return float("inf") if d == NEG_INF else self.ring.dim - d

    def in_radical_of(self, other: "RIdeal") -> bool:
        """self ⊆ √other."""
        return all(radical_contains(other.gens, f) for f in self.gens)

    def text(self) -> list[str]:
        return [f.to_text() for f in self.gens if not self.ring.contains(f)]


def make_ideal(R: CIRing, gens: Sequence[Polynomial]) -> RIdeal:
    gens = [reduce_poly(R, f) for f in gens]
    return RIdeal(R, tuple(f for f in gens if f) + R.relations)


def fitting_ideal(M: FPModule, r: int) -> RIdeal:
    """Ideal of (g - r)-minors of a minimal presentation; Fitt_{-1} = 0, Fitt_g = R."""
    if r < -1:
        raise InvalidInput("Fitting index must be >= -1", field="r")
    R = M.ring
    Mm = minimalize(M)
    g = Mm.ngens
    if r < 0:
        return make_ideal(R, ())
    if r >= g:
        return make_ideal(R, (R.ambient.one(),))
    return make_ideal(R, minors(Mm.relations, g - r))


def annihilator_of_ideal(J: RIdeal) -> RIdeal:
    """0 :_R J, the kernel of R -> ⊕ R, 1 -> (g_1, ..., g_t)."""
    R = J.ring
    gens = [f for f in J.gens if not R.contains(f)]
    if not gens:
        return make_ideal(R, (R.ambient.one(),))
    col = tuple(gens)
    mat = Matrix(R.ambient, tuple(-f.degree() for f in gens), (0,), (col,))
    kernel = r_kernel(R, mat)
    return make_ideal(R, [c[0] for c in kernel.columns])


@dataclass(frozen=True)
class DimLength:
    dim: Length
    length: Length
    hilbert: HilbertData


def dim_length(M: FPModule) -> DimLength:
    """Krull dimension and length from the lead-term module of relations + I·F."""
    H = M.hilbert
    if H.dimension == NEG_INF:
        return DimLength(NEG_INF, 0, H)
    length = H.length()
    return DimLength(H.dimension, float("inf") if length is None else length, H)


def support_contained(M: FPModule, N: FPModule) -> bool:
    """Supp(M) ⊆ Supp(N) via √Fitt_0(M) ⊇ Fitt_0(N)."""
    return fitting_ideal(N, 0).in_radical_of(fitting_ideal(M, 0))


def hilbert_equal(M: FPModule, N: FPModule) -> bool:
    return M.hilbert.numerator == N.hilbert.numerator


def iso_evidence(M: FPModule, N: FPModule) -> dict:
    """Evidence for M ≅ N: equal Hilbert series and equal minimal generator degrees."""
    Mm, Nm = minimalize(M), minimalize(N)
    return {
        "hilbert_equal": hilbert_equal(Mm, Nm),
        "generator_degrees_equal": sorted(Mm.gens) == sorted(Nm.gens),
        "method": "hilbert-series",
    }


# ---------------------------------------------------------------------------
# random modules
# ---------------------------------------------------------------------------

def random_module(R: CIRing, rng: random.Random, max_gens: int = 3, max_degree: int = 3) -> FPModule:
    """Small module with random homogeneous relations (generators in degree 0)."""
    ring = R.ambient
    g = rng.randint(1, max_gens)
    gens = tuple(0 for _ in range(g))
    cols = []
    for _ in range(rng.randint(0, max_gens)):
        d = rng.randint(1, max_degree)
        col = tuple(ring.random_homogeneous(d, rng) for _ in range(g))
        if any(col):
            cols.append(col)
    return minimalize(make_module(R, gens, cols, name="random"))
