"""Batch runner for the bundled corpus: every case, every step, against its expected fragments."""
import difflib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

from torvan.core.config import settings
from torvan.core.errors import TorvanError
from torvan.core.logging import logger
from torvan.schemas.corpus import CorpusCase, CorpusStep
from torvan.schemas.wire import canonical_json
from torvan.services.report_service import run_operation
from torvan.services.storage_service import case_modules, case_ring, corpus_dir, load_cases


@dataclass
class StepResult:
    index: int
    op: str
    passed: bool
    red_alarm: bool = False
    diff: Optional[str] = None


@dataclass
class CaseResult:
    id: str
    steps: list[StepResult] = field(default_factory=list)
    error: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(s.passed for s in self.steps)

    @property
    def red_alarm(self) -> bool:
        return any(s.red_alarm for s in self.steps)

    @classmethod
    def from_dict(cls, data: dict) -> "CaseResult":
        return cls(data["id"], [StepResult(**s) for s in data["steps"]], data["error"])


@dataclass
class CorpusSummary:
    results: list[CaseResult]

    @property
    def exit_code(self) -> int:
        if any(r.red_alarm for r in self.results):
            return 2
        return 0 if all(r.passed for r in self.results) else 1

    def to_dict(self) -> dict:
        return {
            "cases": [
                {
                    "id": r.id,
                    "passed": r.passed,
                    "red_alarm": r.red_alarm,
                    "error": r.error,
                    "failures": [
                        {"step": s.index, "op": s.op, "diff": s.diff} for s in r.steps if not s.passed
                    ],
                }
                for r in self.results
            ],
            "passed": sum(r.passed for r in self.results),
            "failed": sum(not r.passed for r in self.results),
            "red_alarms": sum(r.red_alarm for r in self.results),
            "exit_code": self.exit_code,
        }


# --- fragment matching ---

def fragment_matches(expected: Any, actual: Any) -> bool:
    """Dicts match on the expected keys, lists element by element, scalars by equality."""
    if isinstance(expected, dict):
        return isinstance(actual, dict) and all(
            k in actual and fragment_matches(v, actual[k]) for k, v in expected.items()
        )
    if isinstance(expected, list):
        return (
            isinstance(actual, list)
            and len(expected) == len(actual)
            and all(fragment_matches(e, a) for e, a in zip(expected, actual))
        )
    return expected == actual


def project(expected: Any, actual: Any) -> Any:
    """The part of `actual` that `expected` talks about, for diffs."""
    if isinstance(expected, dict) and isinstance(actual, dict):
        return {k: project(v, actual[k]) if k in actual else "<missing>" for k, v in expected.items()}
    if isinstance(expected, list) and isinstance(actual, list) and len(expected) == len(actual):
        return [project(e, a) for e, a in zip(expected, actual)]
    return actual


def fragment_diff(expected: Any, actual: Any, label: str) -> str:
    lines = difflib.unified_diff(
        canonical_json(expected).splitlines(),
        canonical_json(project(expected, actual)).splitlines(),
        fromfile=f"{label} (expected)",
        tofile=f"{label} (actual)",
        lineterm="",
    )
    return "\n".join(lines)


# --- execution ---

def run_step(case: CorpusCase, index: int, step: CorpusStep, modules: dict) -> StepResult:
    label = f"{case.id}#{index}:{step.op}"
    try:
        actual = run_operation(step.op, modules, step.args).model_dump(mode="json")
    except TorvanError as exc:
        # a step may expect an error; anything else is a failure
        actual = exc.to_dict()
    red = bool(actual.get("red_alarm", False))
    if fragment_matches(step.expect, actual):
        return StepResult(index, step.op, True, red)
    return StepResult(index, step.op, False, red, fragment_diff(step.expect, actual, label))


def run_case(case: CorpusCase, root: Optional[Path] = None) -> CaseResult:
    result = CaseResult(case.id)
    try:
        R = case_ring(case, root)
        modules = case_modules(case, R, root)
    except TorvanError as exc:
        result.error = exc.to_dict()
        logger.error(f"[corpus] {case.id}: cannot load inputs: {exc.message}")
        return result
    for index, step in enumerate(case.steps):
        outcome = run_step(case, index, step, modules)
        result.steps.append(outcome)
        if outcome.red_alarm:
            logger.error(f"[corpus] RED ALARM in {case.id} step {index} ({step.op})")
        elif not outcome.passed:
            logger.warning(f"[corpus] {case.id} step {index} ({step.op}) failed\n{outcome.diff}")
    logger.info(f"[corpus] {case.id}: {'pass' if result.passed else 'FAIL'}")
    return result


def run_case_task(case_json: str, root: str) -> dict:
    """
    Worker task: run one serialized case against the corpus at `root` and return a plain record.
    """
    case = CorpusCase.model_validate_json(case_json)
    logger.info(f"[corpus] {case.id}: started in worker")
    try:
        result = run_case(case, Path(root))
    except Exception as e:
        logger.error(f"[corpus] {case.id}: worker failed: {e}")
        raise
    status = "red_alarm" if result.red_alarm else "ok" if result.passed else "failed"
    return {"case_id": case.id, "status": status, "result": asdict(result)}


def select_cases(
    cases: Iterable[CorpusCase],
    tags: Optional[Iterable[str]] = None,
    ids: Optional[Iterable[str]] = None,
) -> list[CorpusCase]:
    """Cases carrying one of `tags`; explicit ids select regardless of tags."""
    if ids:
        ids = set(ids)
        return [c for c in cases if c.id in ids]
    wanted = set(tags or ["fast"])
    return [c for c in cases if wanted & set(c.tags)]


def run_corpus(
    tags: Optional[Iterable[str]] = None,
    root: Optional[Path] = None,
    workers: Optional[int] = None,
    ids: Optional[Iterable[str]] = None,
) -> CorpusSummary:
    root = Path(root) if root is not None else corpus_dir()
    workers = workers or settings.CORPUS_WORKERS
    cases = select_cases(load_cases(root), tags, ids)
    logger.info(f"[corpus] running {len(cases)} cases with {workers} worker(s)")
    if workers <= 1 or len(cases) <= 1:
        results = [run_case(c, root) for c in cases]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_case_task, c.model_dump_json(), str(root)) for c in cases]
            results = [CaseResult.from_dict(f.result()["result"]) for f in futures]
    summary = CorpusSummary(sorted(results, key=lambda r: r.id))
    logger.info(f"[corpus] {summary.to_dict()['passed']}/{len(results)} cases passed")
    return summary
