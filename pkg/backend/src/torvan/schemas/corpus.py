from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

Provenance = Literal["PUBLISHED", "DERIVED", "TRIVIAL"]
Operation = Literal[
    "betti", "tor", "ext", "depth", "serre", "sp", "theta", "eta",
    "pushforward", "chain", "quasilift", "check", "oracle",
]


class CorpusStep(BaseModel):
    """One operation of a case and the JSON fragment its report must contain."""

    model_config = ConfigDict(extra="forbid")

    op: Operation
    args: dict[str, Any] = Field(default_factory=dict)
    expect: dict[str, Any] = Field(default_factory=dict)
    provenance: Provenance
    note: Optional[str] = None


class CorpusCase(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    ring: str
    modules: dict[str, str]
    steps: list[CorpusStep] = Field(min_length=1)
    tags: list[Literal["fast", "slow"]] = Field(default_factory=lambda: ["fast"])
