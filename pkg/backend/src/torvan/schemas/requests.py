"""Request bodies of the HTTP layer; ring and modules travel inline."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from torvan.schemas.files import ModuleFile, RingFile


class ModuleRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ring: RingFile
    M: ModuleFile
    bound: Optional[int] = Field(default=None, ge=1)


class PairRequest(ModuleRequest):
    N: ModuleFile


class EtaRequest(PairRequest):
    e: int = Field(ge=1)
    allow_divergent: bool = False


class CheckRequest(ModuleRequest):
    N: Optional[ModuleFile] = None
    c: Optional[int] = Field(default=None, ge=1)
    e: Optional[int] = Field(default=None, ge=1)
    n: Optional[int] = Field(default=None, ge=2)
