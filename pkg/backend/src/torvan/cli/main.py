"""Command-line front end: `python -m torvan <subcommand> ...`."""
import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import BaseModel, ValidationError

from torvan.core.config import settings
from torvan.core.errors import InvalidInput, TorvanError
from torvan.core.logging import logger
from torvan.schemas.reports import VerdictReport
from torvan.schemas.wire import canonical_json
from torvan.services.module_service import random_module
from torvan.services.report_service import run_operation
from torvan.services.storage_service import load_module, load_ring
from torvan.services.theorem_service import CHECKERS, run_check
from torvan.tasks.corpus import run_corpus

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_RED_ALARM = 2


# --- parser ---

def _inputs(p: argparse.ArgumentParser, n: bool = False, n_required: bool = True) -> None:
    p.add_argument("--ring", type=Path, required=True, help="ring file (JSON)")
    p.add_argument("--M", type=Path, required=True, help="module file for M")
    if n:
        p.add_argument("--N", type=Path, required=n_required, help="module file for N")
    p.add_argument("--bound", type=int, default=None, help="homological bound B")
    p.add_argument("--json", action="store_true", help="emit the machine report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torvan", description="Tor vanishing workbench over graded complete intersections.")
    sub = parser.add_subparsers(dest="command", required=True)

    _inputs(sub.add_parser("betti", help="graded Betti table of M"))
    _inputs(sub.add_parser("tor", help="Tor_i(M, N) lengths for 1 <= i <= B"), n=True)
    _inputs(sub.add_parser("ext", help="Ext^i(M, N) lengths for 1 <= i <= B"), n=True)
    _inputs(sub.add_parser("depth", help="depth, pd and status flags of M"))

    p = sub.add_parser("serre", help="Serre condition (S_n) for M")
    _inputs(p)
    p.add_argument("--n", type=int, required=True)

    _inputs(sub.add_parser("theta", help="theta pairing over a hypersurface"), n=True)

    p = sub.add_parser("eta", help="eta_e pairing")
    _inputs(p, n=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--allow-divergent", action="store_true")

    p = sub.add_parser("pushforward", help="0 -> M -> R^nu -> M1 -> 0")
    _inputs(p)
    p.add_argument("--chain", type=int, default=None, metavar="n", help="iterate n times instead")

    _inputs(sub.add_parser("quasilift", help="quasi-lifting of M along the hypersurface tower"))

    p = sub.add_parser("check", help="run one theorem checker")
    p.add_argument("theorem", choices=sorted(CHECKERS))
    p.add_argument("--ring", type=Path, required=True)
    p.add_argument("--M", type=Path, default=None)
    p.add_argument("--N", type=Path, default=None)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--c", type=int, default=None)
    p.add_argument("--e", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument(
        "--random",
        type=int,
        nargs="?",
        const=settings.RANDOM_MODULES_PER_RING,
        default=None,
        metavar="COUNT",
        help="check COUNT seeded random pairs instead",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json", action="store_true")

    corpus = sub.add_parser("corpus", help="bundled corpus")
    corpus_sub = corpus.add_subparsers(dest="corpus_command", required=True)
    p = corpus_sub.add_parser("run", help="run corpus cases against their expected fragments")
    p.add_argument("--tags", nargs="+", default=["fast"], choices=["fast", "slow"])
    p.add_argument("--case", action="append", default=None, help="case id; repeatable")
    p.add_argument("--dir", type=Path, default=None, help="corpus root (default: bundled corpus)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--json", action="store_true")
    return parser


# --- output ---

def render_text(report: dict) -> str:
    lines = []
    for key, value in sorted(report.items()):
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True, separators=(",", ":"))
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def emit(report, as_json: bool) -> None:
    data = report.model_dump(mode="json") if isinstance(report, BaseModel) else report
    if as_json:
        sys.stdout.write(canonical_json(data))
    else:
        print(render_text(data))


def _diagnostic(exc: Exception) -> str:
    if isinstance(exc, TorvanError):
        where = f" [{exc.field}]" if exc.field else ""
        return f"[error] {exc.code}{where}: {exc.message}"
    err = exc.errors()[0]
    loc = ".".join(str(x) for x in err["loc"])
    return f"[error] invalid_input [{loc}]: {err['msg']}"


# --- commands ---

def _modules(args: argparse.Namespace, R) -> dict:
    modules = {}
    for label in ("M", "N"):
        path = getattr(args, label, None)
        if path is not None:
            modules[label] = load_module(R, path)
    return modules


def _op_args(args: argparse.Namespace, *keys: str) -> dict:
    out = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if args.bound is not None:
        out["bound"] = args.bound
    return out


def cmd_compute(args: argparse.Namespace) -> int:
    R = load_ring(args.ring)
    modules = _modules(args, R)
    op, extra = args.command, ()
    if op == "serre":
        extra = ("n",)
    elif op == "eta":
        extra = ("e", "allow_divergent")
    elif op == "pushforward" and args.chain is not None:
        op = "chain"
        args.n = args.chain
        extra = ("n",)
    emit(run_operation(op, modules, _op_args(args, *extra)), args.json)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    R = load_ring(args.ring)
    if args.random is not None:
        return _check_random(args, R)
    if args.M is None:
        raise InvalidInput("check needs --M (or --random)", field="M")
    report = run_operation("check", _modules(args, R), {"theorem": args.theorem, **_op_args(args, "c", "e", "n")})
    emit(report, args.json)
    return EXIT_RED_ALARM if report.red_alarm else EXIT_OK


def _check_random(args: argparse.Namespace, R) -> int:
    seed = settings.RANDOM_SEED if args.seed is None else args.seed
    rng = random.Random(seed)
    alarms, failures = [], 0
    for k in range(args.random):
        M, N = random_module(R, rng), random_module(R, rng)
        try:
            v = run_check(args.theorem, M, N, args.bound, c=args.c, e=args.e, n=args.n)
        except TorvanError as exc:
            failures += 1
            logger.debug(f"[check] random pair {k}: {exc.code}")
            continue
        if v.red_alarm:
            alarms.append({"index": k, "verdict": VerdictReport.of(v).model_dump(mode="json")})
    summary = {
        "theorem": args.theorem,
        "seed": seed,
        "runs": args.random,
        "not_computed": failures,
        "red_alarms": alarms,
    }
    emit(summary, args.json)
    return EXIT_RED_ALARM if alarms else EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    summary = run_corpus(tags=args.tags, root=args.dir, workers=args.workers, ids=args.case)
    data = summary.to_dict()
    if args.json:
        sys.stdout.write(canonical_json(data))
    else:
        for case in data["cases"]:
            mark = "RED ALARM" if case["red_alarm"] else ("ok" if case["passed"] else "FAIL")
            print(f"{case['id']}: {mark}")
            if case["error"]:
                print(f"  {case['error']['code']}: {case['error']['error']}")
            for f in case["failures"]:
                print(f"  step {f['step']} ({f['op']}):")
                print("\n".join(f"    {line}" for line in (f["diff"] or "").splitlines()))
        print(f"[corpus] {data['passed']} passed, {data['failed']} failed, {data['red_alarms']} red alarms")
    return summary.exit_code


COMMANDS = {
    "betti": cmd_compute,
    "tor": cmd_compute,
    "ext": cmd_compute,
    "depth": cmd_compute,
    "serre": cmd_compute,
    "theta": cmd_compute,
    "eta": cmd_compute,
    "pushforward": cmd_compute,
    "quasilift": cmd_compute,
    "check": cmd_check,
    "corpus": cmd_corpus,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # exit 2 is reserved for red alarms
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (TorvanError, ValidationError) as exc:
        print(_diagnostic(exc), file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command())
