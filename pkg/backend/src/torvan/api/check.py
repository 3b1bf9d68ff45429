from fastapi import APIRouter

from torvan.schemas.reports import VerdictReport
from torvan.schemas.requests import CheckRequest
from torvan.services.storage_service import build_module, build_ring
from torvan.services.theorem_service import run_check

router = APIRouter(prefix="/check", tags=["check"])


@router.post("/{theorem_id}", response_model=VerdictReport)
def check(theorem_id: str, req: CheckRequest):
    R = build_ring(req.ring)
    M = build_module(R, req.M)
    N = build_module(R, req.N) if req.N is not None else None
    verdict = run_check(theorem_id, M, N, req.bound, c=req.c, e=req.e, n=req.n)
    return VerdictReport.of(verdict)
