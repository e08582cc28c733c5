"""Command-line front end.

Exit codes: 0 success, 1 usage or parse problem, 2 axiom/validation
failure under --strict-exit, 3 infeasible search budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .config import parse_config
from .errors import BudgetError, MsslabError, ParseError
from .oracles import StructureDescription
from .pipeline import run_pipeline
from .report import (
    build_check_axioms,
    build_validate,
    has_failures,
    provenance,
    render_text,
    to_json,
)
from .search import SearchSpec, enumerate_structures
from .structure import verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_STRICT = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(p, strict=True):
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="worker cap for axiom checks")
    p.add_argument("--seed", type=int, default=None, help="seed for sampled checks")
    p.add_argument("--output", type=Path, default=None, help="write report here instead of stdout")
    if strict:
        p.add_argument(
            "--strict-exit",
            action="store_true",
            help="exit 2 when any check fails",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="msslab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-axioms", help="verify the axiom battery of a configured structure")
    p.add_argument("config", type=Path)
    _common_flags(p)

    p = sub.add_parser("validate", help="deficits, validity grades, and compatibility of a clustering")
    p.add_argument("config", type=Path)
    _common_flags(p)

    p = sub.add_parser("pipeline", help="run the five-step investigation end to end")
    p.add_argument("config", type=Path)
    _common_flags(p)

    p = sub.add_parser("search", help="hunt for structures meeting/breaking named axioms")
    p.add_argument("spec", type=Path)
    _common_flags(p, strict=False)
    return parser


def _load_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ParseError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: line {exc.lineno}: {exc.msg}")


def _pick_seed(cli_seed, config_seed):
    if cli_seed is not None:
        return cli_seed
    if config_seed is not None:
        return config_seed
    env = os.environ.get("MSSLAB_SEED")
    return int(env) if env else None


def _emit(report: dict, args) -> None:
    text = to_json(report) if args.format == "json" else render_text(report)
    if args.output is None:
        sys.stdout.write(text)
        return
    # write once, atomically
    directory = args.output.parent if str(args.output.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".msslab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, args.output)
    except BaseException:
        os.unlink(tmp)
        raise


def _search_report(spec_data: dict, cli_seed) -> dict:
    known = {
        "n",
        "family",
        "delta",
        "required",
        "forbidden",
        "budget",
        "seed",
        "density",
        "exhaustive",
    }
    unknown = set(spec_data) - known
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    if "n" not in spec_data:
        raise ParseError("missing required field", "n")
    seed = _pick_seed(cli_seed, spec_data.get("seed"))
    try:
        spec = SearchSpec(
            n=spec_data["n"],
            family=spec_data.get("family", "relations"),
            delta=spec_data.get("delta", "E0"),
            required=tuple(spec_data.get("required", ())),
            forbidden=tuple(spec_data.get("forbidden", ())),
            budget=spec_data.get("budget", 10_000),
            seed=seed if seed is not None else 0,
            density=spec_data.get("density", 0.5),
            exhaustive=spec_data.get("exhaustive", True),
        )
    except MsslabError as exc:
        raise ParseError(str(exc))

    examined = 0
    found = None
    axioms = list(spec.required) + list(spec.forbidden)
    for s in enumerate_structures(spec):
        examined += 1
        verdicts = {v.axiom: v for v in verify(s, axioms)}
        if all(verdicts[a].passed for a in spec.required) and all(
            verdicts[a].failed for a in spec.forbidden
        ):
            found = s
            break

    structure = None
    if found is not None:
        desc = StructureDescription.from_structure(found)
        structure = {
            "universe": list(desc.elements),
            "granules": [sorted(g) for g in desc.granules],
            "delta_kind": desc.delta_kind,
            "delta_table": (
                sorted([sorted(a), sorted(b), sorted(c)] for a, b, c in desc.delta_table)
                if desc.delta_table is not None
                else None
            ),
        }
    return {
        "command": "search",
        "provenance": provenance(seed),
        "spec": {
            "n": spec.n,
            "family": spec.family,
            "delta": spec.delta,
            "required": list(spec.required),
            "forbidden": list(spec.forbidden),
            "budget": spec.budget,
            "density": spec.density,
            "exhaustive": spec.exhaustive,
        },
        "search": {
            "found": found is not None,
            "examined": examined,
            "structure": structure,
            "note": None if found is not None else "none within budget",
        },
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "search":
            report = _search_report(_load_json(args.spec), args.seed)
            _emit(report, args)
            return EXIT_OK

        data = _load_json(args.config)
        cfg = parse_config(data)
        seed = _pick_seed(args.seed, cfg.seed)
        if args.command == "check-axioms":
            report = build_check_axioms(cfg, seed=seed, jobs=args.jobs)
        elif args.command == "validate":
            report = build_validate(cfg, seed=seed, jobs=args.jobs)
        else:
            report = run_pipeline(cfg, seed=seed, jobs=args.jobs)
        _emit(report, args)
        if getattr(args, "strict_exit", False) and has_failures(report):
            return EXIT_STRICT
        return EXIT_OK
    except BudgetError as exc:
        print(f"msslab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as exc:
        print(f"msslab: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MsslabError as exc:
        print(f"msslab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
