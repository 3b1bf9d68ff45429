from fastapi import APIRouter

from torvan.api import check, compute

api_router = APIRouter()

api_router.include_router(compute.router)
api_router.include_router(check.router)
