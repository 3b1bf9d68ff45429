"""Ring and module input files."""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class RingFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    prime: int = Field(gt=1)
    vars: list[str] = Field(min_length=1)
    weights: Optional[list[int]] = None
    relations: list[str] = Field(default_factory=list)
    min_primes: Optional[list[list[str]]] = None

    @field_validator("weights")
    @classmethod
    def weights_positive(cls, v):
        if v is not None and any(w <= 0 for w in v):
            raise ValueError("weights must be positive")
        return v


class SyzygySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    index: int = Field(ge=0)
    of: "ModuleFile"


class ModuleFile(BaseModel):
    """Generator twists and relation columns (one list of entries per relation).

    ``syzygy`` builds the module as the index-th syzygy of another module instead.
    """

    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    gens: list[int] = Field(default_factory=lambda: [0])
    relations: list[list[str]] = Field(default_factory=list)
    syzygy: Optional[SyzygySpec] = None

    @model_validator(mode="after")
    def check_shape(self):
        if self.syzygy is not None:
            if self.relations or self.gens != [0]:
                raise ValueError("a syzygy module takes no gens or relations of its own")
            return self
        for col in self.relations:
            if len(col) != len(self.gens):
                raise ValueError("each relation column needs one entry per generator")
        return self


SyzygySpec.model_rebuild()
