"""Minimal graded free resolutions and the invariants derived from them.

Over the CIRings handled here torsion-free and torsionless coincide (the rings are
Gorenstein), so the torsion submodule is computed as the kernel of M -> M**.
"""
import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass
from typing import Optional, Union

from torvan.algebra.groebner import NEG_INF
from torvan.algebra.matrix import Matrix, hstack, kronecker
from torvan.core.config import resolution_bound, settings
from torvan.core.errors import InvalidInput, MissingMinPrimes, RingMismatch
from torvan.core.logging import logger
from torvan.services.module_service import (
    FPModule,
    ModuleMap,
    RIdeal,
    annihilator_of_ideal,
    dim_length,
    dual_and_kappa,
    fitting_ideal,
    free_module,
    kappa_cokernel,
    kappa_kernel,
    make_ideal,
    make_module,
    minimal_columns,
    minimalize,
    quotient_presentation,
    r_kernel,
    residue_field,
    subquotient,
    zero_module,
)
from torvan.services.ring_service import CIRing

INF = float("inf")
Number = Union[int, float]


# ---------------------------------------------------------------------------
# resolutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Resolution:
    """F_B -> ... -> F_1 -> F_0 -> M with d_i: F_i -> F_{i-1} (``steps[i-1]``)."""

    module: FPModule
    bound: int
    steps: tuple[Matrix, ...]

    def twists(self, i: int) -> tuple[int, ...]:
        if i == 0:
            return self.module.gens
        if i > len(self.steps):
            return ()
        return self.steps[i - 1].source

    def rank(self, i: int) -> int:
        return len(self.twists(i))

    def d(self, i: int) -> Matrix:
        """d_i; the zero map when i exceeds the computed range."""
        ring = self.module.ring.ambient
        if i <= 0:
            return Matrix(ring, (), self.module.gens, tuple(() for _ in self.module.gens))
        if i <= len(self.steps):
            return self.steps[i - 1]
        return Matrix.zero(ring, self.twists(i - 1), ())

    def betti(self) -> "BettiTable":
        entries: Counter = Counter()
        for i in range(self.bound + 1):
            for t in self.twists(i):
                entries[(i, t)] += 1
        return BettiTable(self.bound, tuple(sorted(entries.items())))


@dataclass(frozen=True)
class BettiTable:
    bound: int
    entries: tuple[tuple[tuple[int, int], int], ...]

    def totals(self) -> list[int]:
        out = [0] * (self.bound + 1)
        for (i, _), n in self.entries:
            out[i] += n
        return out

    def as_rows(self) -> dict[int, dict[int, int]]:
        rows: dict[int, dict[int, int]] = {}
        for (i, t), n in self.entries:
            rows.setdefault(i, {})[t] = n
        return rows


_resolution_cache: "OrderedDict[FPModule, list[Matrix]]" = OrderedDict()
_resolution_lock = threading.Lock()


def _cached_steps(M: FPModule) -> list[Matrix]:
    with _resolution_lock:
        steps = _resolution_cache.get(M)
        if steps is None:
            return []
        _resolution_cache.move_to_end(M)
        return list(steps)


def _store_steps(M: FPModule, steps: list[Matrix]) -> None:
    """Keep the longer resolution; evict least recently used entries past RESOLUTION_CACHE_SIZE."""
    with _resolution_lock:
        if len(_resolution_cache.get(M, ())) < len(steps):
            _resolution_cache[M] = steps
        if M in _resolution_cache:
            _resolution_cache.move_to_end(M)
        while len(_resolution_cache) > max(settings.RESOLUTION_CACHE_SIZE, 0):
            _resolution_cache.popitem(last=False)


def _next_step(M: FPModule, prev: Matrix) -> Matrix:
    """Minimal generators of ker(prev) over R."""
    R = M.ring
    if prev.ncols == 0:
        return Matrix(R.ambient, (), (), ())
    K = r_kernel(R, prev)
    keep = minimal_columns(R, K)
    return K.select_columns(keep)


def resolve(M: FPModule, bound: Optional[int] = None) -> Resolution:
    """Minimal graded free resolution of M up to homological degree ``bound``."""
    B = resolution_bound(M.ring.dim, bound)
    if B < 0:
        raise InvalidInput("bound must be >= 0", field="bound")
    Mm = minimalize(M)
    steps = _cached_steps(Mm)
    if len(steps) < B:
        if not steps:
            steps.append(Mm.relations)
        while len(steps) < B:
            steps.append(_next_step(Mm, steps[-1]))
        logger.debug(f"[resolve] {Mm.describe()}: betti {[len(s.source) for s in steps]}")
        _store_steps(Mm, steps)
    return Resolution(Mm, B, tuple(steps[:B]))


def betti(M: FPModule, bound: Optional[int] = None) -> BettiTable:
    return resolve(M, bound).betti()


def syzygy_module(M: FPModule, i: int) -> FPModule:
    """The i-th syzygy module image(d_i) ⊆ F_{i-1}, presented as coker(d_{i+1})."""
    if i < 0:
        raise InvalidInput("syzygy index must be >= 0", field="i")
    if i == 0:
        return minimalize(M)
    res = resolve(M, i + 1)
    return minimalize(make_module(M.ring, res.twists(i), res.d(i + 1), name=f"Syz{i}({M.name or 'M'})"))


# ---------------------------------------------------------------------------
# Tor and Ext
# ---------------------------------------------------------------------------

def _tensor_complex_term(res: Resolution, N: FPModule, i: int) -> FPModule:
    ring = N.ring.ambient
    twists = res.twists(i)
    gens = tuple(a + b for a in twists for b in N.gens)
    rel = kronecker(Matrix.identity(ring, twists), N.relations)
    return FPModule(N.ring, gens, rel)


def tor_module(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> FPModule:
    """Tor_i(M, N) = H_i(F ⊗ N)."""
    if M.ring != N.ring:
        raise RingMismatch("Tor needs modules over one ring", field="N")
    res = res if res is not None and res.bound >= i + 1 else resolve(M, i + 1)
    ring = N.ring.ambient
    Ci = _tensor_complex_term(res, N, i)
    Cnext = _tensor_complex_term(res, N, i + 1)
    f = ModuleMap(Cnext, Ci, kronecker(res.d(i + 1), Matrix.identity(ring, N.gens)))
    if i == 0:
        g = ModuleMap(Ci, zero_module(N.ring), Matrix(ring, (), Ci.gens, tuple(() for _ in Ci.gens)))
    else:
        Cprev = _tensor_complex_term(res, N, i - 1)
        g = ModuleMap(Ci, Cprev, kronecker(res.d(i), Matrix.identity(ring, N.gens)))
    return subquotient(g, f)


def _hom_complex_term(res: Resolution, N: FPModule, i: int) -> FPModule:
    ring = N.ring.ambient
    twists = tuple(-t for t in res.twists(i))
    gens = tuple(a + b for a in twists for b in N.gens)
    rel = kronecker(Matrix.identity(ring, twists), N.relations)
    return FPModule(N.ring, gens, rel)


def ext_module(M: FPModule, N: FPModule, i: int, res: Optional[Resolution] = None) -> FPModule:
    """Ext^i(M, N) = H^i(Hom(F, N))."""
    if M.ring != N.ring:
        raise RingMismatch("Ext needs modules over one ring", field="N")
    if i < 0:
        raise InvalidInput("Ext index must be >= 0", field="i")
    res = res if res is not None and res.bound >= i + 1 else resolve(M, i + 1)
    ring = N.ring.ambient
    Hi = _hom_complex_term(res, N, i)
    Hnext = _hom_complex_term(res, N, i + 1)
    g = ModuleMap(Hi, Hnext, kronecker(res.d(i + 1).transpose(), Matrix.identity(ring, N.gens)))
    if i == 0:
        f = ModuleMap(zero_module(N.ring), Hi, Matrix(ring, Hi.gens, (), ()))
    else:
        Hprev = _hom_complex_term(res, N, i - 1)
        f = ModuleMap(Hprev, Hi, kronecker(res.d(i).transpose(), Matrix.identity(ring, N.gens)))
    return subquotient(g, f)


@dataclass(frozen=True)
class TorEntry:
    index: int
    dim: Number
    length: Number
    numerator: tuple[tuple[int, int], ...]

    @property
    def vanishes(self) -> bool:
        return self.dim == NEG_INF


@dataclass(frozen=True)
class TorProfile:
    M: FPModule
    N: FPModule
    bound: int
    entries: tuple[TorEntry, ...]
    finite_length_from: Optional[int]
    periodic: Optional[dict] = None
    kind: str = "tor"

    def entry(self, i: int) -> TorEntry:
        return self.entries[i]

    def lengths(self, start: int = 1) -> list[Number]:
        return [e.length for e in self.entries[start:]]

    def dims(self, start: int = 1) -> list[Number]:
        return [e.dim for e in self.entries[start:]]

    def zero_indices(self) -> list[int]:
        return [e.index for e in self.entries if e.vanishes]

    def vanishes_on(self, lo: int, hi: int) -> bool:
        return all(self.entries[i].vanishes for i in range(lo, hi + 1))


def _entry(i: int, T: FPModule) -> TorEntry:
    dl = dim_length(T)
    return TorEntry(i, dl.dim, dl.length, dl.hilbert.numerator)


def _finite_length_from(entries: list[TorEntry], bound: int) -> Optional[int]:
    f = None
    for i in range(bound, 0, -1):
        if entries[i].dim <= 0:
            f = i
        else:
            break
    return f


def _periodicity(R: CIRing, entries: list[TorEntry], bound: int) -> Optional[dict]:
    """Two-period window certificate over a hypersurface, starting at dim R + 1."""
    if not R.is_hypersurface:
        return None
    start = R.dim + 1
    if bound < start + 3:
        return None
    tail = entries[start:bound + 1]
    if any(e.dim > 0 for e in tail):
        return None
    for e in tail[2:]:
        if e.length != entries[e.index - 2].length:
            return None
    return {
        "from": start,
        "even": entries[start if start % 2 == 0 else start + 1].length,
        "odd": entries[start if start % 2 == 1 else start + 1].length,
        "window": [start, bound],
    }


def tor_profile(M: FPModule, N: FPModule, bound: Optional[int] = None) -> TorProfile:
    if M.ring != N.ring:
        raise RingMismatch("Tor needs modules over one ring", field="N")
    B = resolution_bound(M.ring.dim, bound)
    if B < 1:
        raise InvalidInput("Tor profile needs bound >= 1", field="bound")
    res = resolve(M, B + 1)
    entries = [_entry(i, tor_module(M, N, i, res)) for i in range(B + 1)]
    f = _finite_length_from(entries, B)
    logger.info(f"[tor] {M.name or 'M'} x {N.name or 'N'}: lengths {[e.length for e in entries[1:]]}")
    return TorProfile(M, N, B, tuple(entries), f, _periodicity(M.ring, entries, B))


def ext_profile(M: FPModule, N: FPModule, bound: Optional[int] = None) -> TorProfile:
    B = resolution_bound(M.ring.dim, bound)
    res = resolve(M, B + 1)
    entries = [_entry(i, ext_module(M, N, i, res)) for i in range(B + 1)]
    return TorProfile(M, N, B, tuple(entries), _finite_length_from(entries, B), None, kind="ext")


# ---------------------------------------------------------------------------
# depth, pd, torsion, Serre
# ---------------------------------------------------------------------------

def depth(M: FPModule) -> Number:
    """Least i with Ext^i(k, M) != 0; inf for the zero module."""
    if minimalize(M).is_zero:
        return INF
    R = M.ring
    k = residue_field(R)
    res = resolve(k, R.dim + 1)
    for i in range(R.dim + 1):
        if not ext_module(k, M, i, res).is_zero:
            return i
    raise InvalidInput("depth exceeds dim R; module data is inconsistent", field="M")


def ring_depth(R: CIRing) -> int:
    """CIRings are Cohen-Macaulay."""
    return R.dim


def pd(M: FPModule) -> Number:
    """Projective dimension, or inf when certified infinite (β_i != 0 up to dim R + 1)."""
    R = M.ring
    if minimalize(M).is_zero:
        return NEG_INF
    res = resolve(M, R.dim + 1)
    for i in range(R.dim + 2):
        if res.rank(i) == 0:
            return i - 1
    return INF


@dataclass(frozen=True)
class TorsionParts:
    torsion: FPModule
    torsion_free: FPModule


def torsion_parts(M: FPModule) -> TorsionParts:
    """t(M) = ker(M -> M**), tf(M) = M / t(M)."""
    d = dual_and_kappa(M)
    W = kappa_kernel(d)
    R = M.ring
    t = minimalize(quotient_presentation(R, W, M.relations, name=f"t({M.name or 'M'})"))
    rel = M.relations
    stacked = hstack([rel, W]) if W.ncols else rel
    tf = minimalize(make_module(R, M.gens, stacked, name=f"tf({M.name or 'M'})"))
    return TorsionParts(t, tf)


@dataclass(frozen=True)
class SerreReport:
    n: int
    holds: bool
    ext_dims: tuple[tuple[int, Number], ...]

    def evidence(self) -> dict:
        return {"n": self.n, "ext_dims": [[i, d] for i, d in self.ext_dims]}


def serre_check(M: FPModule, n: int) -> SerreReport:
    """(S_n) over a Gorenstein ring: dim Ext^i(M, R) <= dim R - i - n for 1 <= i <= dim R."""
    if n < 0:
        raise InvalidInput("n must be >= 0", field="n")
    R = M.ring
    Rfree = free_module(R, (0,), name="R")
    if minimalize(M).is_zero:
        return SerreReport(n, True, ())
    res = resolve(M, R.dim + 1)
    dims = []
    holds = True
    for i in range(1, R.dim + 1):
        d = dim_length(ext_module(M, Rfree, i, res)).dim
        dims.append((i, d))
        if d > R.dim - i - n:
            holds = False
    return SerreReport(n, holds, tuple(dims))


@dataclass(frozen=True)
class StatusFlags:
    is_torsionfree: bool
    is_reflexive: bool
    is_mcm: bool


def status_flags(M: FPModule) -> StatusFlags:
    d = dual_and_kappa(M)
    R = M.ring
    W = kappa_kernel(d)
    tf = all(M.contains_relation(c) for c in W.columns)
    reflexive = tf and kappa_cokernel(d).is_zero
    dp = depth(M)
    return StatusFlags(tf, reflexive, dp != INF and dp == R.dim)


def free_locus_height(M: FPModule) -> Number:
    """ht ann Ext^1(M, K) for the first syzygy K of M; dim R + 1 when M is free."""
    R = M.ring
    Mm = minimalize(M)
    if Mm.relations.ncols == 0:
        return R.dim + 1
    K = syzygy_module(Mm, 1)
    E = ext_module(Mm, K, 1)
    d = dim_length(E).dim
    if d == NEG_INF:
        return R.dim + 1
    return R.dim - d


def _declared_primes(R: CIRing) -> list[RIdeal]:
    if R.min_primes is not None:
        return [make_ideal(R, P) for P in R.min_primes]
    if not R.relations:
        return [make_ideal(R, ())]
    raise MissingMinPrimes(f"{R.describe()} has no declared minimal primes", field="min_primes")


def local_rank(M: FPModule, P: RIdeal) -> Optional[int]:
    """Rank of M_P if it is free there: Fitt_r ⊄ P and ann(Fitt_{r-1}) ⊄ P."""
    Mm = minimalize(M)
    for r in range(Mm.ngens + 1):
        fr = fitting_ideal(Mm, r)
        if all(P.contains(f) for f in fr.gens):
            continue
        ann = annihilator_of_ideal(fitting_ideal(Mm, r - 1))
        if all(P.contains(f) for f in ann.gens):
            return None
        return r
    return None


def rank_of(M: FPModule) -> Optional[int]:
    Mm = minimalize(M)
    if Mm.relations.ncols == 0:
        return Mm.ngens
    ranks = {local_rank(Mm, P) for P in _declared_primes(M.ring)}
    if len(ranks) != 1 or None in ranks:
        return None
    return ranks.pop()


def gorenstein_probe(R: CIRing) -> list[Number]:
    """Lengths of Ext^i(k, R) for 0 <= i <= dim R: zero below dim R, one at dim R."""
    k = residue_field(R)
    Rfree = free_module(R, (0,), name="R")
    res = resolve(k, R.dim + 1)
    return [dim_length(ext_module(k, Rfree, i, res)).length for i in range(R.dim + 1)]
