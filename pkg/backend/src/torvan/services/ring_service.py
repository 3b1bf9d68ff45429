"""Complete-intersection rings R = Q/(f_1..f_c) and their hypersurface towers.

All rings are graded: the irrelevant ideal m = (x_1..x_n) plays the maximal ideal, and
every invariant computed downstream is the graded counterpart of the local one.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from torvan.algebra.groebner import (
    GroebnerBasis,
    NEG_INF,
    ideal_basis,
    ideal_dimension,
)
from torvan.algebra.linalg import rank_modp
from torvan.algebra.polyalg import PolyRing, Polynomial
from torvan.core.errors import InhomogeneousRelation, InvalidInput, NotRegularSequence
from torvan.core.logging import logger


@dataclass(frozen=True)
class CIRing:
    ambient: PolyRing
    relations: tuple[Polynomial, ...]
    dim: int
    codim: int
    prefix_dims: tuple[int, ...]
    min_primes: Optional[tuple[tuple[Polynomial, ...], ...]] = None
    name: Optional[str] = field(default=None, compare=False)

    @property
    def p(self) -> int:
        return self.ambient.p

    @property
    def c(self) -> int:
        """Length of the regular sequence (relative codimension)."""
        return len(self.relations)

    @property
    def is_hypersurface(self) -> bool:
        return self.codim <= 1

    @property
    def is_regular(self) -> bool:
        return self.codim == 0

    @cached_property
    def ideal(self) -> GroebnerBasis:
        return ideal_basis(self.relations, self.ambient)

    def contains(self, f: Polynomial) -> bool:
        """f == 0 in R."""
        return self.ideal.contains((f,))

    def parse(self, text) -> Polynomial:
        return self.ambient.parse(text)

    def variables(self) -> list[Polynomial]:
        return self.ambient.gens()

    def describe(self) -> str:
        rels = ", ".join(f.to_text() for f in self.relations) or "0"
        return f"F_{self.p}[{', '.join(self.ambient.names)}]/({rels})"


@dataclass(frozen=True)
class HypersurfaceTower:
    stages: tuple[CIRing, ...]

    @property
    def top(self) -> CIRing:
        return self.stages[-1]

    def __len__(self):
        return len(self.stages)

    def certificates(self) -> list[dict]:
        """Per-stage dimension drops (each exactly 1)."""
        return [
            {"stage": j, "dim": s.dim, "drop": self.stages[j - 1].dim - s.dim}
            for j, s in enumerate(self.stages)
            if j > 0
        ]


def _embedding_codim(ambient: PolyRing, relations: Sequence[Polynomial], dim: int) -> int:
    """nu(m) - dim R, with nu(m) = n - rank of the linear parts of the relations."""
    linear = []
    for f in relations:
        row = [0] * ambient.nvars
        for m, c in f.term_dict().items():
            if sum(m) == 1:
                row[m.index(1)] = c
        if any(row):
            linear.append(row)
    independent = rank_modp(linear, ambient.p) if linear else 0
    return ambient.nvars - independent - dim


def make_ci_ring(
    ambient: PolyRing,
    relations: Sequence[Polynomial],
    min_primes: Optional[Sequence[Sequence[Polynomial]]] = None,
    name: Optional[str] = None,
) -> CIRing:
    """Validate f_1..f_c as a homogeneous regular sequence and build R = Q/(f)."""
    relations = tuple(relations)
    for j, f in enumerate(relations):
        if f.ring != ambient:
            raise InvalidInput(f"relation {j} lives in another ring", field="relations")
        if f.is_zero() or f.is_constant():
            raise InvalidInput(f"relation {j} must have positive degree", field="relations")
        if not f.is_homogeneous():
            raise InhomogeneousRelation(f"relation {j} is not homogeneous: {f}", field="relations")

    n = ambient.nvars
    prefix_dims = [n]
    for j in range(1, len(relations) + 1):
        d = ideal_dimension(relations[:j], ambient)
        if d != n - j:
            raise NotRegularSequence(
                f"dimension does not drop at relation {j}: dim Q/(f_1..f_{j}) = {d}, expected {n - j}",
                field="relations",
                prefix=j,
                dim=d,
            )
        prefix_dims.append(int(d))
    dim = n - len(relations)
    codim = _embedding_codim(ambient, relations, dim)

    primes = None
    if min_primes is not None:
        primes = tuple(tuple(P) for P in min_primes)
        _validate_min_primes(ambient, relations, primes, dim)

    ring = CIRing(ambient, relations, dim, codim, tuple(prefix_dims), primes, name)
    logger.info(f"[rings] built {ring.describe()}: dim {dim}, codim {codim}")
    return ring


def _validate_min_primes(ambient: PolyRing, relations, primes, dim: int) -> None:
    if not primes:
        raise InvalidInput("min_primes must list at least one prime", field="min_primes")
    top = False
    for k, P in enumerate(primes):
        G = ideal_basis(P, ambient)
        for f in relations:
            if not G.contains((f,)):
                raise InvalidInput(f"declared prime {k} does not contain {f}", field="min_primes")
        d = ideal_dimension(P, ambient)
        if d == NEG_INF or d > dim:
            raise InvalidInput(f"declared prime {k} has dimension {d}", field="min_primes")
        top = top or d == dim
    if not top:
        raise InvalidInput("no declared prime has the dimension of the ring", field="min_primes")


def polynomial_ring(ambient: PolyRing, name: Optional[str] = None) -> CIRing:
    """Q itself as the c = 0 complete intersection; its only minimal prime is (0)."""
    return make_ci_ring(ambient, (), min_primes=[()], name=name)


def hypersurface_tower(R: CIRing) -> HypersurfaceTower:
    """S_0 = Q, S_j = S_{j-1}/(f_j), in the configured relation order."""
    stages = []
    for j in range(len(R.relations) + 1):
        if j == len(R.relations):
            stages.append(R)
        else:
            stages.append(make_ci_ring(R.ambient, R.relations[:j], name=f"{R.name or 'R'}[{j}]"))
    return HypersurfaceTower(tuple(stages))
