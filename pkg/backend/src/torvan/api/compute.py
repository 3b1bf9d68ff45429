from fastapi import APIRouter

from torvan.schemas.reports import DepthReport, PairingReport, PushforwardReport, TorReport
from torvan.schemas.requests import EtaRequest, ModuleRequest, PairRequest
from torvan.services import pairing_service, resolution_service
from torvan.services.construction_service import pushforward
from torvan.services.storage_service import build_module, build_ring

router = APIRouter(tags=["compute"])


# --- Helper Functions ---

def module_of(req: ModuleRequest):
    R = build_ring(req.ring)
    return build_module(R, req.M)


def pair_of(req: PairRequest):
    R = build_ring(req.ring)
    return build_module(R, req.M), build_module(R, req.N)


# --- Endpoints ---

@router.post("/tor", response_model=TorReport)
def tor(req: PairRequest):
    M, N = pair_of(req)
    return TorReport.of(resolution_service.tor_profile(M, N, req.bound))


@router.post("/ext", response_model=TorReport)
def ext(req: PairRequest):
    M, N = pair_of(req)
    return TorReport.of(resolution_service.ext_profile(M, N, req.bound))


@router.post("/depth", response_model=DepthReport)
def depth(req: ModuleRequest):
    return DepthReport.of(module_of(req))


@router.post("/theta", response_model=PairingReport)
def theta(req: PairRequest):
    M, N = pair_of(req)
    return PairingReport.of(pairing_service.theta(M, N, req.bound))


@router.post("/eta", response_model=PairingReport)
def eta(req: EtaRequest):
    M, N = pair_of(req)
    return PairingReport.of(pairing_service.eta(M, N, req.e, req.bound, allow_divergent=req.allow_divergent))


@router.post("/pushforward", response_model=PushforwardReport)
def push(req: ModuleRequest):
    return PushforwardReport.of(pushforward(module_of(req)))
