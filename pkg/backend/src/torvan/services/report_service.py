"""Named operations on loaded modules, each producing its machine report."""
from typing import Any, Callable, Optional

from pydantic import BaseModel

from torvan.core.config import settings
from torvan.core.errors import InvalidInput
from torvan.core.logging import logger
from torvan.schemas.reports import (
    BettiReport,
    ChainReport,
    DepthReport,
    OracleReport,
    PairingReport,
    PushforwardReport,
    QuasiLiftReport,
    SerreCheckReport,
    SPItemsReport,
    TorReport,
    VerdictReport,
    extended,
)
from torvan.services import construction_service, pairing_service, resolution_service
from torvan.services.module_service import FPModule
from torvan.services.oracle_service import oracle_tor
from torvan.services.theorem_service import check_sp, run_check

Modules = dict[str, FPModule]


def _module(modules: Modules, args: dict, key: str, required: bool = True) -> Optional[FPModule]:
    label = args.get(key, key)
    if label not in modules:
        if required:
            raise InvalidInput(f"no module labelled {label!r}", field=key)
        return None
    return modules[label]


def _int(args: dict, key: str, default: Optional[int] = None) -> Optional[int]:
    value = args.get(key, default)
    if value is not None and not isinstance(value, int):
        raise InvalidInput(f"{key} must be an integer", field=key)
    return value


def _required(args: dict, key: str) -> int:
    value = _int(args, key)
    if value is None:
        raise InvalidInput(f"{key} is required", field=key)
    return value


def op_betti(modules: Modules, args: dict) -> BettiReport:
    M = _module(modules, args, "M")
    return BettiReport.of(M, resolution_service.betti(M, _int(args, "bound")))


def op_tor(modules: Modules, args: dict) -> TorReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    return TorReport.of(resolution_service.tor_profile(M, N, _int(args, "bound")))


def op_ext(modules: Modules, args: dict) -> TorReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    return TorReport.of(resolution_service.ext_profile(M, N, _int(args, "bound")))


def op_depth(modules: Modules, args: dict) -> DepthReport:
    return DepthReport.of(_module(modules, args, "M"))


def op_serre(modules: Modules, args: dict) -> SerreCheckReport:
    M = _module(modules, args, "M")
    return SerreCheckReport.of(M, resolution_service.serre_check(M, _required(args, "n")))


def op_sp(modules: Modules, args: dict) -> SPItemsReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    return SPItemsReport.of(check_sp(M, N, _required(args, "c"), _int(args, "bound")))


def op_theta(modules: Modules, args: dict) -> PairingReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    return PairingReport.of(pairing_service.theta(M, N, _int(args, "bound")))


def op_eta(modules: Modules, args: dict) -> PairingReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    result = pairing_service.eta(
        M,
        N,
        _required(args, "e"),
        _int(args, "bound"),
        allow_divergent=bool(args.get("allow_divergent", False)),
    )
    return PairingReport.of(result)


def op_pushforward(modules: Modules, args: dict) -> PushforwardReport:
    return PushforwardReport.of(construction_service.pushforward(_module(modules, args, "M")))


def op_chain(modules: Modules, args: dict) -> ChainReport:
    M = _module(modules, args, "M")
    return ChainReport.of(construction_service.pushforward_chain(M, _required(args, "n")))


def op_quasilift(modules: Modules, args: dict) -> QuasiLiftReport:
    M = _module(modules, args, "M")
    return QuasiLiftReport.of(M, construction_service.quasi_lifting(M))


def op_check(modules: Modules, args: dict) -> VerdictReport:
    theorem = args.get("theorem")
    if not theorem:
        raise InvalidInput("check needs a theorem id", field="theorem")
    M = _module(modules, args, "M")
    N = _module(modules, args, "N", required=False)
    verdict = run_check(
        theorem,
        M,
        N,
        _int(args, "bound"),
        c=_int(args, "c"),
        e=_int(args, "e"),
        n=_int(args, "n"),
    )
    return VerdictReport.of(verdict)


def op_oracle(modules: Modules, args: dict) -> OracleReport:
    M, N = _module(modules, args, "M"), _module(modules, args, "N")
    top = _int(args, "max_index", 6)
    D = _int(args, "degree_bound", settings.ORACLE_DEGREE_BOUND)
    graded = oracle_tor(M, N, top, D)
    lengths = [sum(graded[i].values()) for i in range(1, top + 1)]
    profile = resolution_service.tor_profile(M, N, max(top, 1))
    ours = profile.lengths()[:top]
    # only finite lengths are comparable against a degree-truncated count
    agrees = all(a == b for a, b in zip(lengths, ours) if b != float("inf"))
    return OracleReport(
        degree_bound=D,
        graded={str(i): {str(d): v for d, v in sorted(dims.items())} for i, dims in sorted(graded.items())},
        lengths=lengths,
        resolution_lengths=[extended(x) for x in ours],
        agrees=agrees,
    )


OPERATIONS: dict[str, Callable[[Modules, dict], BaseModel]] = {
    "betti": op_betti,
    "tor": op_tor,
    "ext": op_ext,
    "depth": op_depth,
    "serre": op_serre,
    "sp": op_sp,
    "theta": op_theta,
    "eta": op_eta,
    "pushforward": op_pushforward,
    "chain": op_chain,
    "quasilift": op_quasilift,
    "check": op_check,
    "oracle": op_oracle,
}


def run_operation(op: str, modules: Modules, args: Optional[dict[str, Any]] = None) -> BaseModel:
    if op not in OPERATIONS:
        raise InvalidInput(f"unknown operation {op!r}", field="op")
    args = dict(args or {})
    logger.debug(f"[report] {op} {sorted(args.items())}")
    return OPERATIONS[op](modules, args)
