"""Reading and writing ring, module and corpus files."""
import json
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from torvan.algebra.polyalg import PolyRing
from torvan.core.config import settings
from torvan.core.errors import InvalidInput
from torvan.core.logging import logger
from torvan.schemas.corpus import CorpusCase
from torvan.schemas.files import ModuleFile, RingFile, SyzygySpec
from torvan.schemas.wire import canonical_json
from torvan.services.module_service import FPModule, make_module
from torvan.services.resolution_service import syzygy_module
from torvan.services.ring_service import CIRing, make_ci_ring

PathLike = Union[str, Path]


def load_json(path: PathLike) -> dict:
    path = Path(path)
    if not path.is_file():
        raise InvalidInput(f"no such file: {path}", field=str(path))
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})", field=str(path)) from exc


def _validated(model, data: dict, source: str):
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = ".".join(str(x) for x in err["loc"]) or source
        raise InvalidInput(f"{source}: {err['msg']}", field=loc) from exc


def read_ring_file(path: PathLike) -> RingFile:
    return _validated(RingFile, load_json(path), str(path))


def read_module_file(path: PathLike) -> ModuleFile:
    return _validated(ModuleFile, load_json(path), str(path))


def build_ring(rf: RingFile) -> CIRing:
    ambient = PolyRing(rf.prime, tuple(rf.vars), tuple(rf.weights or ()))
    relations = [_parse(ambient, text, "relations") for text in rf.relations]
    primes = None
    if rf.min_primes is not None:
        primes = [[_parse(ambient, text, "min_primes") for text in P] for P in rf.min_primes]
    return make_ci_ring(ambient, relations, min_primes=primes, name=rf.name)


def _parse(ambient: PolyRing, text: str, field: str):
    try:
        return ambient.parse(text)
    except InvalidInput as exc:
        raise InvalidInput(exc.message, field=field) from exc


def build_module(R: CIRing, mf: ModuleFile) -> FPModule:
    if mf.syzygy is not None:
        base = build_module(R, mf.syzygy.of)
        S = syzygy_module(base, mf.syzygy.index)
        return FPModule(S.ring, S.gens, S.relations, mf.name or S.name)
    cols = [[_parse(R.ambient, text, "relations") for text in col] for col in mf.relations]
    return make_module(R, mf.gens, cols, name=mf.name)


def load_ring(path: PathLike) -> CIRing:
    return build_ring(read_ring_file(path))


def load_module(R: CIRing, path: PathLike) -> FPModule:
    return build_module(R, read_module_file(path))


def ring_to_file(R: CIRing) -> RingFile:
    weights = list(R.ambient.weights) if not R.ambient.standard_grading else None
    primes = None
    if R.min_primes is not None:
        primes = [[f.to_text() for f in P] for P in R.min_primes]
    return RingFile(
        name=R.name,
        prime=R.p,
        vars=list(R.ambient.names),
        weights=weights,
        relations=[f.to_text() for f in R.relations],
        min_primes=primes,
    )


def module_to_file(M: FPModule) -> ModuleFile:
    return ModuleFile(
        name=M.name,
        gens=list(M.gens),
        relations=[[f.to_text() for f in col] for col in M.relations.columns],
    )


def canonical_file_text(model: Union[RingFile, ModuleFile, SyzygySpec, CorpusCase]) -> str:
    return canonical_json(model.model_dump(mode="json", exclude_none=True))


def write_canonical(model, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_file_text(model), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

def corpus_dir() -> Path:
    return Path(settings.CORPUS_DIR)


def load_cases(root: Optional[PathLike] = None) -> list[CorpusCase]:
    """All cases under <root>/cases, sorted by id."""
    root = Path(root) if root is not None else corpus_dir()
    case_dir = root / "cases"
    if not case_dir.is_dir():
        raise InvalidInput(f"corpus has no cases directory: {case_dir}", field="corpus")
    cases = [_validated(CorpusCase, load_json(p), str(p)) for p in sorted(case_dir.glob("*.json"))]
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise InvalidInput("duplicate corpus case ids", field="id")
    logger.info(f"[corpus] loaded {len(cases)} cases from {case_dir}")
    return sorted(cases, key=lambda c: c.id)


def case_ring(case: CorpusCase, root: Optional[PathLike] = None) -> CIRing:
    root = Path(root) if root is not None else corpus_dir()
    return load_ring(root / "rings" / case.ring)


def case_modules(case: CorpusCase, R: CIRing, root: Optional[PathLike] = None) -> dict[str, FPModule]:
    root = Path(root) if root is not None else corpus_dir()
    return {label: load_module(R, root / "modules" / fname) for label, fname in sorted(case.modules.items())}


def corpus_input_files(root: Optional[PathLike] = None) -> list[Path]:
    root = Path(root) if root is not None else corpus_dir()
    return sorted((root / "rings").glob("*.json")) + sorted((root / "modules").glob("*.json"))
