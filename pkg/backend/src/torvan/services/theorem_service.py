"""Hypothesis/conclusion verdicts for the Tor-vanishing theorems.

A checker evaluates each hypothesis on concrete modules as Holds, Fails or VerifiedUpTo(B),
then evaluates the conclusion as Certified, VerifiedUpTo(B), Refuted or NotApplicable.
Bounded observations are upgraded to statements about every index only through
``rigidity_infer``. Holds everywhere together with a Refuted conclusion is a red alarm.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional

from torvan.algebra.groebner import NEG_INF
from torvan.core.config import pairing_bound
from torvan.core.errors import InvalidInput, RingMismatch, TorvanError
from torvan.core.logging import logger
from torvan.services.construction_service import compare_quasi_liftings, pushforward_chain
from torvan.services.module_service import (
    FPModule,
    minimalize,
    support_contained,
    tensor,
)
from torvan.services.pairing_service import PairingResult, eta_from_profile, theta_from_profile
from torvan.services.resolution_service import (
    INF,
    TorProfile,
    depth,
    free_locus_height,
    pd,
    rank_of,
    ring_depth,
    serre_check,
    status_flags,
    tor_profile,
    torsion_parts,
)


class Status(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    VERIFIED_UP_TO = "verified_up_to"


class Outcome(str, Enum):
    CERTIFIED = "certified"
    VERIFIED_UP_TO = "verified_up_to"
    REFUTED = "refuted"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class HypothesisStatus:
    name: str
    status: Status
    evidence: dict = field(default_factory=dict)
    bound: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.status == Status.HOLDS

    @property
    def fails(self) -> bool:
        return self.status == Status.FAILS


def holds(name: str, **evidence) -> HypothesisStatus:
    return HypothesisStatus(name, Status.HOLDS, evidence)


def fails(name: str, **evidence) -> HypothesisStatus:
    return HypothesisStatus(name, Status.FAILS, evidence)


def verified_up_to(name: str, bound: int, **evidence) -> HypothesisStatus:
    return HypothesisStatus(name, Status.VERIFIED_UP_TO, evidence, bound)


def judged(name: str, ok: bool, **evidence) -> HypothesisStatus:
    return holds(name, **evidence) if ok else fails(name, **evidence)


def guarded(name: str, fn: Callable[[], HypothesisStatus]) -> HypothesisStatus:
    """Run a hypothesis test; a computation error counts as an undetermined failure."""
    try:
        return fn()
    except TorvanError as exc:
        return fails(name, undetermined=True, error=exc.code, message=exc.message)


@dataclass(frozen=True)
class Conclusion:
    outcome: Outcome
    evidence: dict = field(default_factory=dict)
    bound: Optional[int] = None


def not_applicable(**evidence) -> Conclusion:
    return Conclusion(Outcome.NOT_APPLICABLE, evidence)


@dataclass(frozen=True)
class Verdict:
    theorem: str
    hypotheses: tuple[HypothesisStatus, ...]
    conclusion: Conclusion
    sub_verdicts: tuple["Verdict", ...] = ()
    probes: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(h.holds for h in self.hypotheses)

    @property
    def red_alarm(self) -> bool:
        own = self.hypotheses_hold and self.conclusion.outcome == Outcome.REFUTED
        return own or any(v.red_alarm for v in self.sub_verdicts)

    @property
    def consistent(self) -> bool:
        return not self.red_alarm

    def hypothesis(self, name: str) -> HypothesisStatus:
        for h in self.hypotheses:
            if h.name == name:
                return h
        raise KeyError(name)

    def sub(self, theorem: str) -> "Verdict":
        for v in self.sub_verdicts:
            if v.theorem == theorem:
                return v
        raise KeyError(theorem)


# ---------------------------------------------------------------------------
# SP_c
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SPReport:
    c: int
    items: tuple[HypothesisStatus, ...]

    @property
    def holds(self) -> bool:
        return all(not h.fails for h in self.items)

    def item(self, name: str) -> HypothesisStatus:
        for h in self.items:
            if h.name == name:
                return h
        raise KeyError(name)


def finite_tail_status(M: FPModule, N: FPModule, profile: TorProfile) -> HypothesisStatus:
    """Tor_i(M, N) of finite length for i >> 0."""
    name = "finite-length-tail"
    B = profile.bound
    f = profile.finite_length_from
    if f is None:
        return fails(name, bound=B, last_dim=profile.entries[B].dim)
    if profile.periodic is not None:
        return holds(name, finite_length_from=f, certificate="periodic", window=profile.periodic["window"])
    finite_pd = [label for label, X in (("M", M), ("N", N)) if pd(X) != INF]
    if finite_pd:
        return holds(name, finite_length_from=f, certificate="finite-pd", modules=finite_pd)
    return verified_up_to(name, B, finite_length_from=f)


def check_sp(
    M: FPModule,
    N: FPModule,
    c: int,
    bound: Optional[int] = None,
    profile: Optional[TorProfile] = None,
) -> SPReport:
    """(S_{c-1}) for M and N, (S_c) for M ⊗ N, and a finite-length Tor tail."""
    if c < 1:
        raise InvalidInput("SP needs c >= 1", field="c")
    if profile is None:
        profile = tor_profile(M, N, pairing_bound(M.ring.dim, M.ring.codim, bound))
    sM = serre_check(M, c - 1)
    sN = serre_check(N, c - 1)
    sT = serre_check(tensor(M, N), c)
    items = (
        judged("serre-M", sM.holds, **sM.evidence()),
        judged("serre-N", sN.holds, **sN.evidence()),
        judged("serre-tensor", sT.holds, **sT.evidence()),
        finite_tail_status(M, N, profile),
    )
    return SPReport(c, items)


# ---------------------------------------------------------------------------
# rigidity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RigidityCertificate:
    certified: bool
    rule: Optional[str]
    from_index: Optional[int]
    evidence: dict = field(default_factory=dict)

    @property
    def covers_all(self) -> bool:
        """Tor_i = 0 for every i >= 1."""
        return self.certified and self.from_index == 1


def trailing_zero_run(profile: TorProfile) -> Optional[int]:
    """Least s >= 1 with Tor_i = 0 for s <= i <= B; None if Tor_B != 0."""
    s = None
    for i in range(profile.bound, 0, -1):
        if not profile.entries[i].vanishes:
            break
        s = i
    return s


def rigidity_infer(
    M: FPModule,
    N: FPModule,
    profile: TorProfile,
    eta_result: Optional[PairingResult] = None,
) -> RigidityCertificate:
    """Upgrade observed Tor vanishing on [s, B] to vanishing for every i >= s.

    Rules, tried in order:

    - finite-pd: pd M or pd N is below B, so Tor_i = 0 past it.
    - periodic-tail: a hypersurface 2-periodic tail of zeros.
    - mcm-tail: M or N is MCM and Tor_1..Tor_{c+1} vanish.
    - consecutive-zeros: c+1 consecutive zeros from s >= 1. Over a complete intersection of
      codimension c this alone forces Tor_i = 0 for all i >= s (Murthy), so no separate
      finite-length tail certificate is required.
    - eta-rigid: c consecutive zeros, a finite-length tail and eta_c = 0.
    """
    R = M.ring
    c = R.codim
    B = profile.bound
    s = trailing_zero_run(profile)
    nonzero = [i for i in range(1, B + 1) if not profile.entries[i].vanishes]
    if s is None:
        return RigidityCertificate(False, None, None, {"nonzero_indices": nonzero})
    run = B - s + 1
    base = {"run_start": s, "run_length": run}

    pds = {"M": pd(M), "N": pd(N)}
    finite = [p for p in pds.values() if p != INF]
    if finite and min(finite) < B:
        return RigidityCertificate(True, "finite-pd", s, {**base, "pd": pds})

    periodic = profile.periodic
    if periodic is not None and periodic["even"] == 0 and periodic["odd"] == 0 and s <= periodic["from"]:
        return RigidityCertificate(True, "periodic-tail", s, {**base, "window": periodic["window"]})

    if s == 1 and run >= c + 1:
        mcm = [label for label, X in (("M", M), ("N", N)) if status_flags(X).is_mcm]
        if mcm:
            return RigidityCertificate(True, "mcm-tail", 1, {**base, "mcm": mcm})

    if run >= c + 1:
        return RigidityCertificate(True, "consecutive-zeros", s, {**base, "needed": c + 1})

    if (
        eta_result is not None
        and eta_result.value == 0
        and eta_result.e == c
        and c >= 1
        and run >= c
        and profile.finite_length_from is not None
    ):
        return RigidityCertificate(True, "eta-rigid", s, {**base, "eta": str(eta_result.value)})

    return RigidityCertificate(False, None, s, {**base, "nonzero_indices": nonzero})


def tor_vanishing(profile: TorProfile, rigidity: RigidityCertificate) -> Conclusion:
    """Tor_i(M, N) = 0 for every i >= 1."""
    B = profile.bound
    nonzero = [i for i in range(1, B + 1) if not profile.entries[i].vanishes]
    if nonzero:
        return Conclusion(
            Outcome.REFUTED,
            {"nonzero_indices": nonzero, "lengths": profile.lengths()},
        )
    if rigidity.covers_all:
        return Conclusion(Outcome.CERTIFIED, {"rule": rigidity.rule, "checked_to": B})
    return Conclusion(Outcome.VERIFIED_UP_TO, {"checked_to": B}, B)


def combine(*conclusions: Conclusion) -> Conclusion:
    """Weakest outcome wins; evidence is merged."""
    order = [Outcome.REFUTED, Outcome.NOT_APPLICABLE, Outcome.VERIFIED_UP_TO, Outcome.CERTIFIED]
    worst = min(conclusions, key=lambda x: order.index(x.outcome))
    evidence = {}
    for x in conclusions:
        evidence.update(x.evidence)
    bounds = [x.bound for x in conclusions if x.bound is not None]
    return Conclusion(worst.outcome, evidence, min(bounds) if bounds else None)


# ---------------------------------------------------------------------------
# probes
# ---------------------------------------------------------------------------

def torsion_tail_consistency(profile: TorProfile) -> dict:
    """A finite-length tail forces every Tor_i, i >= 1, to be torsion (dim < dim R)."""
    R = profile.M.ring
    tail = profile.finite_length_from is not None
    torsion = [e.index for e in profile.entries[1:] if e.dim < R.dim]
    applies = tail and R.dim >= 1
    return {
        "finite_length_from": profile.finite_length_from,
        "torsion_indices": torsion,
        "applies": applies,
        "holds": (not applies) or len(torsion) == profile.bound,
    }


def localized_vanishing_probe(profile: TorProfile, w: int) -> dict:
    """height ann Tor_i > w for 1 <= i <= B, read as dim R - dim Tor_i."""
    R = profile.M.ring
    heights = [INF if e.dim == NEG_INF else R.dim - e.dim for e in profile.entries[1:]]
    return {"w": w, "heights": heights, "holds": all(h > w for h in heights)}


def depth_formula_probe(M: FPModule, N: FPModule) -> dict:
    dM, dN = depth(M), depth(N)
    dR = ring_depth(M.ring)
    dT = depth(tensor(M, N))
    return {
        "depth_M": dM,
        "depth_N": dN,
        "depth_R": dR,
        "depth_tensor": dT,
        "holds": dM + dN == dR + dT,
    }


# ---------------------------------------------------------------------------
# checkers
# ---------------------------------------------------------------------------

class CheckContext:
    """Modules, bound and parameters for one check, with shared computations cached."""

    def __init__(
        self,
        M: FPModule,
        N: Optional[FPModule] = None,
        bound: Optional[int] = None,
        c: Optional[int] = None,
        e: Optional[int] = None,
        n: Optional[int] = None,
    ):
        if N is not None and N.ring != M.ring:
            raise RingMismatch("M and N live over different rings", field="N")
        self.M = minimalize(M)
        self.N = minimalize(N) if N is not None else None
        self.bound = bound
        self.c = c
        self.e = e
        self.n = n
        self._eta: dict[int, PairingResult] = {}
        self._sp: dict[int, SPReport] = {}

    @property
    def R(self):
        return self.M.ring

    def need_n(self) -> FPModule:
        if self.N is None:
            raise InvalidInput("this check needs a second module", field="N")
        return self.N

    @cached_property
    def B(self) -> int:
        return pairing_bound(self.R.dim, self.R.codim, self.bound)

    @cached_property
    def profile(self) -> TorProfile:
        return tor_profile(self.M, self.need_n(), self.B)

    @cached_property
    def tensor(self) -> FPModule:
        return tensor(self.M, self.need_n())

    @cached_property
    def rigidity(self) -> RigidityCertificate:
        eta_result = None
        c = self.R.codim
        if c >= 1:
            try:
                eta_result = self.eta(c)
            except TorvanError:
                eta_result = None
        return rigidity_infer(self.M, self.need_n(), self.profile, eta_result)

    def eta(self, e: int) -> PairingResult:
        if e not in self._eta:
            self._eta[e] = eta_from_profile(self.profile, e)
        return self._eta[e]

    def sp(self, c: int) -> SPReport:
        if c not in self._sp:
            self._sp[c] = check_sp(self.M, self.need_n(), c, profile=self.profile)
        return self._sp[c]


def eta_zero_status(ctx: CheckContext, e: int) -> HypothesisStatus:
    name = f"eta-{e}-zero"

    def test():
        r = ctx.eta(e)
        return judged(name, r.value == 0, value=str(r.value), fit_window=r.certificate["fit_window"])

    return guarded(name, test)


def theta_zero_status(profile: Callable[[], TorProfile], name: str = "theta-zero") -> HypothesisStatus:
    def test():
        r = theta_from_profile(profile())
        return judged(name, r.value == 0, value=str(r.value))

    return guarded(name, test)


def support_status(ctx: CheckContext) -> HypothesisStatus:
    """Supp t(N) ⊆ Supp M."""
    name = "torsion-support"

    def test():
        tN = torsion_parts(ctx.need_n()).torsion
        if tN.is_zero:
            return holds(name, torsion_zero=True)
        return judged(name, support_contained(tN, ctx.M), torsion_zero=False)

    return guarded(name, test)


def sp_statuses(ctx: CheckContext, c: int) -> list[HypothesisStatus]:
    report = ctx.sp(c)
    return [
        HypothesisStatus(f"sp{c}-{h.name}", h.status, h.evidence, h.bound)
        for h in report.items
    ]


def is_free(M: FPModule) -> bool:
    return minimalize(M).is_free_presentation


def rank_status(name: str, X: FPModule) -> HypothesisStatus:
    def test():
        r = rank_of(X)
        return judged(name, r is not None, rank=r)

    return guarded(name, test)


def gated_verdict(
    theorem_id: str,
    hypotheses: list[HypothesisStatus],
    conclude: Callable[[], Conclusion],
    **probes,
) -> Verdict:
    """Evaluate the conclusion unless some hypothesis fails."""
    if any(h.fails for h in hypotheses):
        conclusion = not_applicable(failed=[h.name for h in hypotheses if h.fails])
    else:
        conclusion = conclude()
    return Verdict(theorem_id, tuple(hypotheses), conclusion, probes=probes)


class TheoremChecker(ABC):
    """
    Base class for theorem checkers.
    Subclasses implement evaluate().
    """

    theorem_id: str = ""
    needs_n: bool = True

    @abstractmethod
    def evaluate(self, ctx: CheckContext) -> Verdict:
        """Build the verdict for one context."""
        pass

    def verdict(self, hypotheses: list[HypothesisStatus], conclude: Callable[[], Conclusion], **probes) -> Verdict:
        return gated_verdict(self.theorem_id, hypotheses, conclude, **probes)

    def run(self, ctx: CheckContext) -> Verdict:
        if self.needs_n:
            ctx.need_n()
        logger.info(f"[check] {self.theorem_id}: {ctx.M.name or 'M'}, {ctx.N.name if ctx.N else '-'}")
        verdict = self.evaluate(ctx)
        if verdict.red_alarm:
            logger.error(f"[check] RED ALARM in {self.theorem_id}: {verdict}")
        else:
            logger.info(f"[check] {self.theorem_id}: {verdict.conclusion.outcome.value}")
        return verdict


class DepthFormulaChecker(TheoremChecker):
    """Tor-independent modules satisfy depth M + depth N = depth R + depth(M ⊗ N)."""

    theorem_id = "depth-formula"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        rig = ctx.rigidity
        concl = tor_vanishing(ctx.profile, rig)
        name = "tor-independent"
        if concl.outcome == Outcome.REFUTED:
            hyp = fails(name, **concl.evidence)
        elif concl.outcome == Outcome.CERTIFIED:
            hyp = holds(name, rule=rig.rule)
        else:
            hyp = verified_up_to(name, ctx.B)

        def conclude():
            probe = depth_formula_probe(ctx.M, ctx.N)
            if not probe["holds"]:
                return Conclusion(Outcome.REFUTED, probe)
            if hyp.holds:
                return Conclusion(Outcome.CERTIFIED, probe)
            return Conclusion(Outcome.VERIFIED_UP_TO, probe, ctx.B)

        return self.verdict([hyp], conclude)


class LemmaHypersurfaceChecker(TheoremChecker):
    """Over a hypersurface of dim >= 1: SP_1, Supp t(N) ⊆ Supp M and θ = 0 give Tor_{>=1} = 0 and t(N) = 0.

    A failed hypothesis makes the conclusion NotApplicable. The conclusion is still evaluated and
    kept in the `ungated` probe, where counterexamples to a dropped hypothesis show up as refuted.
    """

    theorem_id = "lemma-hypersurface"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        hyps = [judged("hypersurface", R.is_hypersurface, codim=R.codim)]
        if not R.is_hypersurface:
            return Verdict(self.theorem_id, tuple(hyps), not_applicable(failed=["hypersurface"]))
        hyps.append(judged("dim-positive", R.dim >= 1, dim=R.dim))
        hyps.extend(sp_statuses(ctx, 1))
        hyps.append(support_status(ctx))
        hyps.append(theta_zero_status(lambda: ctx.profile))

        vanishing = tor_vanishing(ctx.profile, ctx.rigidity)
        tN = torsion_parts(ctx.N).torsion
        if tN.is_zero:
            torsion_free = Conclusion(Outcome.CERTIFIED, {"torsion_N_zero": True})
        else:
            torsion_free = Conclusion(Outcome.REFUTED, {"torsion_N_zero": False, "torsion_N_gens": list(tN.gens)})
        conclusion = combine(vanishing, torsion_free)
        ungated = {"outcome": conclusion.outcome.value, "evidence": conclusion.evidence}
        return self.verdict(
            hyps,
            lambda: conclusion,
            torsion_tail=torsion_tail_consistency(ctx.profile),
            ungated=ungated,
        )


class MainChecker(TheoremChecker):
    """Over a complete intersection of codimension c >= 1: dim R >= c, SP_c, support and η_c = 0 force Tor_{>=1} = 0."""

    theorem_id = "main"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        c = R.codim
        hyps = [judged("codim-positive", c >= 1, codim=c)]
        if c < 1:
            return Verdict(self.theorem_id, tuple(hyps), not_applicable(failed=["codim-positive"]))
        hyps.append(judged("dim-at-least-codim", R.dim >= c, dim=R.dim, codim=c))
        hyps.extend(sp_statuses(ctx, c))
        if c == 1:
            hyps.append(support_status(ctx))
        else:
            hyps.append(holds("torsion-support", implied_by="sp"))
        hyps.append(eta_zero_status(ctx, c))

        def conclude():
            return tor_vanishing(ctx.profile, ctx.rigidity)

        probes = {}
        if not any(h.fails for h in hyps):
            if c >= 2:
                probes["quasi_lifting"] = self.quasi_lifting_probe(ctx)
            if ctx.profile.finite_length_from is not None:
                w = max(n for n in range(R.dim + 1) if n == 0 or serre_check(ctx.M, n).holds)
                probes["localized_vanishing"] = localized_vanishing_probe(ctx.profile, w)
        return self.verdict(hyps, conclude, **probes)

    @staticmethod
    def quasi_lifting_probe(ctx: CheckContext) -> dict:
        """Tor^S of the quasi-liftings against Tor^S of M and N, and eta^S_{c-1}(E, F) = 2c eta_c(M, N)."""
        try:
            comparison = compare_quasi_liftings(ctx.M, ctx.N, e=ctx.R.codim, bound=ctx.bound, top=min(6, ctx.B))
        except TorvanError as exc:
            return {"skipped": exc.code}
        report = comparison.to_dict()
        report["equal"] = comparison.tor_equal
        return report


class CorMCMChecker(TheoremChecker):
    """For MCM modules with η_c = 0 and dim >= c: (S_c) of M ⊗ N, MCM of M ⊗ N and Tor vanishing agree."""

    theorem_id = "cor-mcm"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        c = R.codim
        hyps = [
            judged("M-mcm", status_flags(ctx.M).is_mcm),
            judged("N-mcm", status_flags(ctx.N).is_mcm),
            judged("codim-positive", c >= 1, codim=c),
            judged("dim-at-least-codim", R.dim >= c, dim=R.dim, codim=c),
        ]
        if c >= 1:
            hyps.append(eta_zero_status(ctx, c))
        # isolated-singularity probe: both modules free on the punctured spectrum
        hM, hN = free_locus_height(ctx.M), free_locus_height(ctx.N)
        hyps.append(judged("free-off-maximal-probe", min(hM, hN) >= R.dim, height_M=hM, height_N=hN))
        serre_T = serre_check(ctx.tensor, max(c, 0)).holds
        mcm_T = status_flags(ctx.tensor).is_mcm
        vanishing = tor_vanishing(ctx.profile, ctx.rigidity)
        tor_zero = vanishing.outcome != Outcome.REFUTED
        statuses = {"serre_tensor": serre_T, "mcm_tensor": mcm_T, "tor_vanishing": tor_zero}
        probes = {"statuses": statuses}

        def conclude():
            if len(set(statuses.values())) > 1:
                if vanishing.outcome == Outcome.VERIFIED_UP_TO and not serre_T and not mcm_T:
                    return Conclusion(Outcome.VERIFIED_UP_TO, {**statuses, "unresolved": True}, vanishing.bound)
                return Conclusion(Outcome.REFUTED, statuses)
            if tor_zero:
                return Conclusion(vanishing.outcome, statuses, vanishing.bound)
            return Conclusion(Outcome.CERTIFIED, statuses)

        return self.verdict(hyps, conclude, **probes)


class CorDaoChecker(TheoremChecker):
    """For e >= codim R: (S_e) of M and N, (S_{e+1}) of M ⊗ N and free locus height > e give Tor_{>=1} = 0."""

    theorem_id = "cor-dao"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        e = ctx.e if ctx.e is not None else max(R.codim, 1)
        if e < R.codim:
            raise InvalidInput(f"e = {e} is below codim R = {R.codim}", field="e")
        sM = serre_check(ctx.M, e)
        sN = serre_check(ctx.N, e)
        sT = serre_check(ctx.tensor, e + 1)
        h = free_locus_height(ctx.M)
        hyps = [
            judged(f"serre-{e}-M", sM.holds, **sM.evidence()),
            judged(f"serre-{e}-N", sN.holds, **sN.evidence()),
            judged(f"serre-{e + 1}-tensor", sT.holds, **sT.evidence()),
            judged("free-locus-height", h > e, height=h, e=e),
        ]
        return self.verdict(hyps, lambda: tor_vanishing(ctx.profile, ctx.rigidity))


class Tor1Checker(TheoremChecker):
    """SP_c (with M or N torsion-free when c = 1) and Tor_1 = 0 force Tor_{>=1} = 0."""

    theorem_id = "tor1"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        c = ctx.c if ctx.c is not None else max(R.codim, 1)
        if c < R.codim or c < 1:
            raise InvalidInput(f"c = {c} must be >= max(1, codim R = {R.codim})", field="c")
        hyps = [judged("dim-at-least-codim", R.dim >= R.codim, dim=R.dim, codim=R.codim)]
        hyps.extend(sp_statuses(ctx, c))
        if c == 1:
            tf = [label for label, X in (("M", ctx.M), ("N", ctx.N)) if status_flags(X).is_torsionfree]
            hyps.append(judged("torsion-free-factor", bool(tf), modules=tf))
        tor1 = ctx.profile.entries[1]
        hyps.append(judged("tor1-zero", tor1.vanishes, length=tor1.length, dim=tor1.dim))

        probes = {}
        if not any(hh.fails for hh in hyps):
            probes["pushforward_chain"] = self.chain_probe(ctx.M, c)
        return self.verdict(hyps, lambda: tor_vanishing(ctx.profile, ctx.rigidity), **probes)

    @staticmethod
    def chain_probe(M: FPModule, c: int) -> dict:
        """M_n satisfies (S_{c-n-1}) along the pushforward chain, n < c."""
        steps = max(c - 1, 0)
        try:
            chain = pushforward_chain(M, steps)
        except TorvanError as exc:
            return {"blocked": exc.to_dict()}
        serre = [serre_check(Mn, c - n - 1).holds for n, Mn in enumerate(chain.modules)]
        return {"stages": len(chain.modules), "serre": serre, "holds": all(serre)}


class HypersurfaceRigidityChecker(TheoremChecker):
    """Three rigidity statements over hypersurfaces, one sub-verdict each."""

    theorem_id = "hypersurface-rigidity"

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        hyp = judged("hypersurface", R.is_hypersurface, codim=R.codim)
        if not R.is_hypersurface:
            return Verdict(self.theorem_id, (hyp,), not_applicable(failed=["hypersurface"]))
        subs = (self.tensor_mcm(ctx), self.second_rigidity(ctx), self.finite_pd(ctx))
        applicable = [v.conclusion for v in subs if v.conclusion.outcome != Outcome.NOT_APPLICABLE]
        conclusion = combine(*applicable) if applicable else not_applicable()
        return Verdict(self.theorem_id, (hyp,), conclusion, subs)

    def tensor_mcm(self, ctx: CheckContext) -> Verdict:
        """One module has rank and M ⊗ N is MCM: both are MCM and one is free."""
        rM = rank_status("rank-M", ctx.M)
        rN = rank_status("rank-N", ctx.N)
        has_rank = judged("rank-M-or-N", rM.holds or rN.holds, M=rM.evidence, N=rN.evidence)
        mcm_T = judged("tensor-mcm", status_flags(ctx.tensor).is_mcm)

        def conclude():
            mcm = status_flags(ctx.M).is_mcm and status_flags(ctx.N).is_mcm
            free = is_free(ctx.M) or is_free(ctx.N)
            ev = {"both_mcm": mcm, "one_free": free}
            return Conclusion(Outcome.CERTIFIED if mcm and free else Outcome.REFUTED, ev)

        return gated_verdict("tensor-mcm", [has_rank, mcm_T], conclude)

    def second_rigidity(self, ctx: CheckContext) -> Verdict:
        """M ⊗ N reflexive and N has rank: Tor_{>=1} = 0, M reflexive, N torsion-free."""
        nonzero = judged("nonzero", not ctx.M.is_zero and not ctx.N.is_zero)
        refl = judged("tensor-reflexive", status_flags(ctx.tensor).is_reflexive)
        rN = rank_status("rank-N", ctx.N)

        def conclude():
            vanishing = tor_vanishing(ctx.profile, ctx.rigidity)
            fM = status_flags(ctx.M)
            fN = status_flags(ctx.N)
            ok = fM.is_reflexive and fN.is_torsionfree
            modules = Conclusion(
                Outcome.CERTIFIED if ok else Outcome.REFUTED,
                {"M_reflexive": fM.is_reflexive, "N_torsionfree": fN.is_torsionfree},
            )
            return combine(vanishing, modules)

        return gated_verdict("second-rigidity", [nonzero, refl, rN], conclude)

    def finite_pd(self, ctx: CheckContext) -> Verdict:
        """Tor_i = 0 for i >> 0: M or N has finite projective dimension."""
        rig = ctx.rigidity
        tail = judged("tor-tail-zero", rig.certified, rule=rig.rule, from_index=rig.from_index)

        def conclude():
            pds = {"pd_M": pd(ctx.M), "pd_N": pd(ctx.N)}
            ok = any(v != INF for v in pds.values())
            return Conclusion(Outcome.CERTIFIED if ok else Outcome.REFUTED, pds)

        return gated_verdict("finite-pd", [tail], conclude)


class PowersChecker(TheoremChecker):
    """Tensor powers over a hypersurface: a projective dimension bound and freeness from reflexive powers."""

    theorem_id = "powers"
    needs_n = False

    def evaluate(self, ctx: CheckContext) -> Verdict:
        R = ctx.R
        n = ctx.n if ctx.n is not None else 2
        if n < 2:
            raise InvalidInput("powers needs n >= 2", field="n")
        hyp = judged("hypersurface", R.is_hypersurface, codim=R.codim)
        if not R.is_hypersurface:
            return Verdict(self.theorem_id, (hyp,), not_applicable(failed=["hypersurface"]))
        powers = [ctx.M]
        for _ in range(n - 1):
            powers.append(tensor(powers[-1], ctx.M))
        flags = [status_flags(P) for P in powers]
        probes = {
            "torsion_free": [f.is_torsionfree for f in flags],
            "reflexive": [f.is_reflexive for f in flags],
        }
        subs = (self.pd_bound(ctx, n, powers, flags), self.rank_freeness(ctx, n, flags[-1]))
        applicable = [v.conclusion for v in subs if v.conclusion.outcome != Outcome.NOT_APPLICABLE]
        conclusion = combine(*applicable) if applicable else not_applicable()
        return Verdict(self.theorem_id, (hyp,), conclusion, subs, probes)

    def pd_bound(self, ctx: CheckContext, n: int, powers: list[FPModule], flags) -> Verdict:
        """pd M <= (d - 1)/n from θ(M, ⊗^j M) = 0, freeness off m and ⊗^n M torsion-free."""
        R = ctx.R
        d = R.dim
        h = free_locus_height(ctx.M)
        hyps = [
            judged("dim-positive", d >= 1, dim=d),
            judged("free-off-maximal", h >= d, height=h),
        ]
        B = pairing_bound(R.dim, R.codim, ctx.bound)
        for j in range(1, n):
            hyps.append(theta_zero_status(lambda P=powers[j - 1]: tor_profile(ctx.M, P, B), name=f"theta-zero-{j}"))
        hyps.append(judged("power-torsion-free", flags[-1].is_torsionfree, n=n))

        def conclude():
            p = pd(ctx.M)
            ok = p != INF and p * n <= d - 1
            ev = {"pd": p, "limit": str(Fraction(d - 1, n))}
            return Conclusion(Outcome.CERTIFIED if ok else Outcome.REFUTED, ev)

        return gated_verdict("pd-bound", hyps, conclude)

    def rank_freeness(self, ctx: CheckContext, n: int, top_flags) -> Verdict:
        """M with rank and ⊗^n M reflexive for n >= max(2, d - 1) is free."""
        d = ctx.R.dim
        hyps = [
            rank_status("rank-M", ctx.M),
            judged("power-reflexive", top_flags.is_reflexive, n=n),
            judged("n-large", n >= max(2, d - 1), n=n, dim=d),
        ]

        def conclude():
            free = is_free(ctx.M)
            return Conclusion(Outcome.CERTIFIED if free else Outcome.REFUTED, {"free": free})

        return gated_verdict("rank-freeness", hyps, conclude)


CHECKERS: dict[str, type[TheoremChecker]] = {
    "depth-formula": DepthFormulaChecker,
    "lemma-hypersurface": LemmaHypersurfaceChecker,
    "main": MainChecker,
    "cor-mcm": CorMCMChecker,
    "cor-dao": CorDaoChecker,
    "tor1": Tor1Checker,
    "hypersurface-rigidity": HypersurfaceRigidityChecker,
    "powers": PowersChecker,
}


def get_checker(theorem_id: str) -> TheoremChecker:
    try:
        return CHECKERS[theorem_id]()
    except KeyError:
        raise InvalidInput(
            f"unknown theorem id {theorem_id!r}; choose from {sorted(CHECKERS)}",
            field="theorem",
        ) from None


def run_check(
    theorem_id: str,
    M: FPModule,
    N: Optional[FPModule] = None,
    bound: Optional[int] = None,
    c: Optional[int] = None,
    e: Optional[int] = None,
    n: Optional[int] = None,
) -> Verdict:
    checker = get_checker(theorem_id)
    return checker.run(CheckContext(M, N, bound, c, e, n))


def check_all(M: FPModule, N: FPModule, bound: Optional[int] = None) -> list[Verdict]:
    """Every checker on one pair (powers on M alone); used by the randomized red-alarm suite."""
    ctx = CheckContext(M, N, bound)
    return [cls().run(ctx) for cls in CHECKERS.values()]


# convenience wrappers named after the checks

def check_depth_formula(M, N, bound=None) -> Verdict:
    return run_check("depth-formula", M, N, bound)


def check_lemma_hypersurface(M, N, bound=None) -> Verdict:
    return run_check("lemma-hypersurface", M, N, bound)


def check_main(M, N, bound=None) -> Verdict:
    return run_check("main", M, N, bound)


def check_cor_mcm(M, N, bound=None) -> Verdict:
    return run_check("cor-mcm", M, N, bound)


def check_cor_dao(M, N, e, bound=None) -> Verdict:
    return run_check("cor-dao", M, N, bound, e=e)


def check_tor1(M, N, c, bound=None) -> Verdict:
    return run_check("tor1", M, N, bound, c=c)


def check_hw(M, N, bound=None) -> Verdict:
    return run_check("hypersurface-rigidity", M, N, bound)


def check_powers(M, n, bound=None) -> Verdict:
    return run_check("powers", M, None, bound, n=n)
