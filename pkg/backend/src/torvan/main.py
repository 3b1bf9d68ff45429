from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from torvan.api import api_router
from torvan.core.config import settings
from torvan.core.errors import TorvanError
from torvan.core.logging import logger

app = FastAPI(title=settings.PROJECT_NAME)


@app.exception_handler(TorvanError)
async def torvan_error_handler(request: Request, exc: TorvanError):
    logger.warning(f"[api] {request.url.path}: {exc.code} ({exc.field}): {exc.message}")
    return JSONResponse(status_code=422, content=exc.to_dict())


@app.get("/health")
def health():
    return {"status": "ok"}


# Routers
app.include_router(api_router)
