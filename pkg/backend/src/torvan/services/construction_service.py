"""Pushforwards, quasi-liftings and iterated pushforward chains."""
from dataclasses import dataclass, field
from typing import Optional

from torvan.algebra.groebner import laurent_add
from torvan.algebra.matrix import Matrix, hstack
from torvan.core.errors import ChainBlocked, InvalidInput, NotTorsionFree, RingMismatch, TorvanError
from torvan.core.logging import logger
from torvan.services.module_service import (
    FPModule,
    ModuleMap,
    dual_and_kappa,
    free_module,
    hilbert_equal,
    kappa_kernel,
    make_module,
    minimalize,
    submodule_presentation,
    zero_module,
)
from torvan.services.pairing_service import eta
from torvan.services.resolution_service import tor_module
from torvan.services.ring_service import CIRing, HypersurfaceTower, hypersurface_tower


def _hilbert_balance(middle: FPModule, ends: list[FPModule]) -> bool:
    """HS(middle) = sum of HS(ends): the numeric shadow of exactness."""
    total: dict[int, int] = {}
    for X in ends:
        total = laurent_add(total, dict(X.hilbert.numerator))
    return total == {k: v for k, v in middle.hilbert.numerator}


@dataclass(frozen=True)
class Pushforward:
    M: FPModule
    nu: int
    embedding: ModuleMap
    M1: FPModule
    certificate: dict = field(default_factory=dict)


def pushforward(M: FPModule) -> Pushforward:
    """0 -> M -> R^ν -> M1 -> 0 through M -> M** ⊆ R^ν, ν = ν(M*)."""
    R = M.ring
    Mm = minimalize(M)
    d = dual_and_kappa(Mm)
    W = kappa_kernel(d)
    if not all(Mm.contains_relation(c) for c in W.columns):
        raise NotTorsionFree(f"{M.name or 'M'} has torsion; pushforward needs a torsion-free module", field="M")
    ambient = d.kappa.target
    if d.nu == 0:
        M1 = zero_module(R)
    else:
        M1 = minimalize(make_module(R, ambient.gens, d.kappa.matrix.drop_zero_columns(), name=f"{M.name or 'M'}_1"))
    cert = {
        "injective": True,
        "nu": d.nu,
        "exact_hilbert": _hilbert_balance(ambient, [Mm, M1]),
        "embedding_rows": d.kappa.matrix.to_rows_text(),
    }
    logger.info(f"[pushforward] {M.name or 'M'}: nu={d.nu}, M1 has {M1.ngens} generators")
    return Pushforward(Mm, d.nu, d.kappa, M1, cert)


@dataclass(frozen=True)
class QuasiLifting:
    R: CIRing
    S: CIRing
    M1: FPModule
    E: FPModule
    nu: int
    certificate: dict = field(default_factory=dict)


def quasi_lifting(M: FPModule, tower: Optional[HypersurfaceTower] = None) -> QuasiLifting:
    """E = ker(S^ν -> R^ν -> M1) where R = S/(f) is the top step of the tower."""
    R = M.ring
    tower = tower or hypersurface_tower(R)
    if tower.top != R:
        raise InvalidInput("tower does not end at the ring of M", field="tower")
    if len(tower) < 2:
        raise InvalidInput("quasi-lifting needs a tower with at least one hypersurface step", field="tower")
    S = tower.stages[-2]
    f = R.relations[-1]
    pf = pushforward(M)
    twists = pf.embedding.target.gens
    ring = R.ambient
    if pf.nu == 0:
        E = zero_module(S)
    else:
        fcols = Matrix(
            ring,
            twists,
            tuple(t + f.degree() for t in twists),
            tuple(tuple(f if k == j else ring.zero() for k in range(len(twists))) for j in range(len(twists))),
        )
        K = hstack([pf.embedding.matrix.drop_zero_columns(), fcols])
        E = minimalize(submodule_presentation(free_module(S, twists), K, name=f"E({M.name or 'M'})"))
    M1_over_S = make_module(S, pf.M1.gens, _with_f(pf.M1, f))
    cert = {
        "nu": pf.nu,
        "stage": len(tower) - 2,
        "relation": f.to_text(),
        "exact_hilbert": _hilbert_balance(free_module(S, twists), [E, M1_over_S]),
    }
    logger.info(f"[quasilift] {M.name or 'M'} over stage {cert['stage']}: E has {E.ngens} generators")
    return QuasiLifting(R, S, pf.M1, E, pf.nu, cert)


def _with_f(M: FPModule, f) -> Matrix:
    """Relations of M as an R-module viewed over S = R-lift: the columns f·e_i added."""
    ring = M.ring.ambient
    n = M.ngens
    fcols = Matrix(
        ring,
        M.gens,
        tuple(t + f.degree() for t in M.gens),
        tuple(tuple(f if k == j else ring.zero() for k in range(n)) for j in range(n)),
    )
    return hstack([M.relations, fcols]) if n else M.relations


def over_stage(M: FPModule, q: QuasiLifting) -> FPModule:
    """M as a module over the stage S of q, where R = S/(f)."""
    return make_module(q.S, M.gens, _with_f(M, q.R.relations[-1]), name=f"{M.name or 'M'}/S")


@dataclass(frozen=True)
class LiftComparison:
    S: CIRing
    e: int
    tor: dict
    eta_check: dict

    @property
    def tor_equal(self) -> bool:
        return all(v["EF_EN"] and v["EN_MN"] for v in self.tor.values())

    @property
    def eta_identity(self) -> Optional[bool]:
        return self.eta_check.get("holds")

    def to_dict(self) -> dict:
        return {
            "stage_codim": self.S.codim,
            "e": self.e,
            "indices": list(self.tor),
            "tor": {str(i): v for i, v in self.tor.items()},
            "tor_equal": self.tor_equal,
            "eta": self.eta_check,
        }


def compare_quasi_liftings(
    M: FPModule,
    N: FPModule,
    e: Optional[int] = None,
    bound: Optional[int] = None,
    top: int = 6,
) -> LiftComparison:
    """
    Change of rings through the quasi-liftings E of M and F of N over S, with R = S/(f):
    Tor^S_i(E, F) ≅ Tor^S_i(E, N) ≅ Tor^S_i(M, N) for 2 <= i <= top, M and N taken as S-modules,
    and eta^S_{e-1}(E, F) = 2e * eta^R_e(M, N) for e >= max(2, codim S + 1).
    """
    if M.ring != N.ring:
        raise RingMismatch("M and N live over different rings", field="N")
    qM, qN = quasi_lifting(M), quasi_lifting(N)
    S = qM.S
    least = max(2, S.codim + 1)
    e = least if e is None else e
    if e < least:
        raise InvalidInput(f"the eta identity needs e >= {least}", field="e")
    MS, NS = over_stage(M, qM), over_stage(N, qN)
    E, F = qM.E, qN.E

    tor = {}
    for i in range(2, top + 1):
        EF, EN, MN = tor_module(E, F, i), tor_module(E, NS, i), tor_module(MS, NS, i)
        tor[i] = {"EF_EN": hilbert_equal(EF, EN), "EN_MN": hilbert_equal(EN, MN), "length": EF.hilbert.length()}

    try:
        lhs = eta(E, F, e - 1, bound)
        rhs = eta(M, N, e, bound)
    except TorvanError as exc:
        eta_report = {"skipped": exc.code, "field": exc.field}
    else:
        eta_report = {
            "lhs": str(lhs.value),
            "rhs": str(rhs.value),
            "factor": 2 * e,
            "holds": lhs.value == 2 * e * rhs.value,
        }
    result = LiftComparison(S, e, tor, eta_report)
    logger.info(f"[quasilift] {M.name or 'M'}, {N.name or 'N'}: tor_equal={result.tor_equal}, eta={eta_report}")
    return result


@dataclass(frozen=True)
class PushforwardChain:
    modules: tuple[FPModule, ...]
    steps: tuple[Pushforward, ...]


def pushforward_chain(M: FPModule, n: int) -> PushforwardChain:
    """M_0 = M, M_{j+1} = (M_j)_1 for j < n."""
    if n < 0:
        raise InvalidInput("chain length must be >= 0", field="n")
    modules = [minimalize(M)]
    steps = []
    for stage in range(n):
        current = modules[-1]
        try:
            pf = pushforward(current)
        except NotTorsionFree as exc:
            raise ChainBlocked(f"stage {stage} is not torsion-free", stage=stage) from exc
        steps.append(pf)
        modules.append(pf.M1)
    return PushforwardChain(tuple(modules), tuple(steps))
