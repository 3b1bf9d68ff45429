from torvan.schemas.corpus import CorpusCase, CorpusStep
from torvan.schemas.files import ModuleFile, RingFile, SyzygySpec
from torvan.schemas.wire import canonical_json, jsonable, rational

__all__ = [
    "CorpusCase",
    "CorpusStep",
    "ModuleFile",
    "RingFile",
    "SyzygySpec",
    "canonical_json",
    "jsonable",
    "rational",
]
