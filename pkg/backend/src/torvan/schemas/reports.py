"""Machine reports emitted by the CLI, the HTTP layer and the corpus runner."""
from typing import Any, Optional, Union

from pydantic import BaseModel, Field

from torvan.schemas.wire import jsonable, rational
from torvan.services.construction_service import Pushforward, PushforwardChain, QuasiLifting
from torvan.services.module_service import FPModule
from torvan.services.pairing_service import PairingResult
from torvan.services.resolution_service import BettiTable, SerreReport, TorProfile, depth, pd, ring_depth, status_flags
from torvan.services.theorem_service import SPReport, Verdict

Extended = Union[int, str]


def extended(x) -> Extended:
    return jsonable(x)


class ModuleSummary(BaseModel):
    name: Optional[str] = None
    gens: list[int]
    relations: list[list[str]]

    @classmethod
    def of(cls, M: FPModule) -> "ModuleSummary":
        return cls(name=M.name, gens=list(M.gens), relations=M.relations.to_columns_text())


class BettiReport(BaseModel):
    module: ModuleSummary
    bound: int
    totals: list[int]
    table: dict[str, dict[str, int]]

    @classmethod
    def of(cls, M: FPModule, table: BettiTable) -> "BettiReport":
        rows = {str(i): {str(d): b for d, b in row.items()} for i, row in table.as_rows().items()}
        return cls(module=ModuleSummary.of(M), bound=table.bound, totals=table.totals(), table=rows)


class TorEntryReport(BaseModel):
    index: int
    dim: Extended
    length: Extended


class TorReport(BaseModel):
    kind: str
    M: ModuleSummary
    N: ModuleSummary
    bound: int
    lengths: list[Extended]
    entries: list[TorEntryReport]
    finite_length_from: Optional[int] = None
    periodic: Optional[dict[str, Any]] = None

    @classmethod
    def of(cls, profile: TorProfile) -> "TorReport":
        entries = [
            TorEntryReport(index=e.index, dim=extended(e.dim), length=extended(e.length))
            for e in profile.entries[1:]
        ]
        return cls(
            kind=profile.kind,
            M=ModuleSummary.of(profile.M),
            N=ModuleSummary.of(profile.N),
            bound=profile.bound,
            lengths=[extended(x) for x in profile.lengths()],
            entries=entries,
            finite_length_from=profile.finite_length_from,
            periodic=jsonable(profile.periodic),
        )


class DepthReport(BaseModel):
    module: ModuleSummary
    depth: Extended
    pd: Extended
    ring_depth: int
    torsion_free: bool
    reflexive: bool
    mcm: bool

    @classmethod
    def of(cls, M: FPModule) -> "DepthReport":
        flags = status_flags(M)
        return cls(
            module=ModuleSummary.of(M),
            depth=extended(depth(M)),
            pd=extended(pd(M)),
            ring_depth=ring_depth(M.ring),
            torsion_free=flags.is_torsionfree,
            reflexive=flags.is_reflexive,
            mcm=flags.is_mcm,
        )


class OracleReport(BaseModel):
    """Dense linear algebra Tor against the resolution path."""

    degree_bound: int
    graded: dict[str, dict[str, int]]
    lengths: list[int]
    resolution_lengths: list[Extended]
    agrees: bool


class SerreCheckReport(BaseModel):
    module: ModuleSummary
    n: int
    holds: bool
    ext_dims: list[list[Extended]]

    @classmethod
    def of(cls, M: FPModule, report: SerreReport) -> "SerreCheckReport":
        dims = [[i, extended(d)] for i, d in report.ext_dims]
        return cls(module=ModuleSummary.of(M), n=report.n, holds=report.holds, ext_dims=dims)


class PairingReport(BaseModel):
    kind: str
    e: Optional[int] = None
    value: Optional[dict[str, str]] = None
    divergent: bool = False
    certificate: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def of(cls, result: PairingResult) -> "PairingReport":
        return cls(
            kind=result.kind,
            e=result.e,
            value=rational(result.value) if result.value is not None else None,
            divergent=result.divergent,
            certificate=jsonable(result.certificate),
        )


class PushforwardReport(BaseModel):
    module: ModuleSummary
    nu: int
    M1: ModuleSummary
    certificate: dict[str, Any]

    @classmethod
    def of(cls, pf: Pushforward) -> "PushforwardReport":
        return cls(module=ModuleSummary.of(pf.M), nu=pf.nu, M1=ModuleSummary.of(pf.M1), certificate=jsonable(pf.certificate))


class ChainReport(BaseModel):
    modules: list[ModuleSummary]
    ngens: list[int]

    @classmethod
    def of(cls, chain: PushforwardChain) -> "ChainReport":
        return cls(modules=[ModuleSummary.of(X) for X in chain.modules], ngens=[X.ngens for X in chain.modules])


class QuasiLiftReport(BaseModel):
    module: ModuleSummary
    lifted_to: str
    nu: int
    E: ModuleSummary
    M1: ModuleSummary
    certificate: dict[str, Any]

    @classmethod
    def of(cls, M: FPModule, q: QuasiLifting) -> "QuasiLiftReport":
        return cls(
            module=ModuleSummary.of(M),
            lifted_to=q.S.describe(),
            nu=q.nu,
            E=ModuleSummary.of(q.E),
            M1=ModuleSummary.of(q.M1),
            certificate=jsonable(q.certificate),
        )


class HypothesisReport(BaseModel):
    name: str
    status: str
    bound: Optional[int] = None
    evidence: dict[str, Any] = Field(default_factory=dict)


class ConclusionReport(BaseModel):
    outcome: str
    bound: Optional[int] = None
    evidence: dict[str, Any] = Field(default_factory=dict)


class VerdictReport(BaseModel):
    theorem: str
    hypotheses: list[HypothesisReport]
    conclusion: ConclusionReport
    sub_verdicts: list["VerdictReport"] = Field(default_factory=list)
    probes: dict[str, Any] = Field(default_factory=dict)
    red_alarm: bool
    consistent: bool

    @classmethod
    def of(cls, v: Verdict) -> "VerdictReport":
        return cls(
            theorem=v.theorem,
            hypotheses=[
                HypothesisReport(name=h.name, status=h.status.value, bound=h.bound, evidence=jsonable(h.evidence))
                for h in v.hypotheses
            ],
            conclusion=ConclusionReport(
                outcome=v.conclusion.outcome.value,
                bound=v.conclusion.bound,
                evidence=jsonable(v.conclusion.evidence),
            ),
            sub_verdicts=[cls.of(s) for s in v.sub_verdicts],
            probes=jsonable(v.probes),
            red_alarm=v.red_alarm,
            consistent=v.consistent,
        )


class SPItemsReport(BaseModel):
    c: int
    holds: bool
    items: list[HypothesisReport]

    @classmethod
    def of(cls, sp: SPReport) -> "SPItemsReport":
        items = [
            HypothesisReport(name=h.name, status=h.status.value, bound=h.bound, evidence=jsonable(h.evidence))
            for h in sp.items
        ]
        return cls(c=sp.c, holds=sp.holds, items=items)


VerdictReport.model_rebuild()
