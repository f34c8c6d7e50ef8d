"""Command-line interface of the trace agent.

    oracle trace <snippet_dir> --out <file>        trace, write entries to a file
    oracle trace <snippet_dir> --verify            diff against main_gt.json
    oracle trace <snippet_dir> --write             rewrite main_gt.json
    oracle generate <corpus_root> --verify|--write whole corpus, one process each
    oracle mock --mode <mode> <snippet_dir> --out <file>

Exit codes: 0 clean, 1 disagreement (or trace failure), 2 bad usage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .groundtruth import (
    generate_ground_truth,
    serialize_entries,
    trace_snippet_dir,
    verify_snippet,
    write_snippet,
)
from .mock import MOCK_MODES, mock_tool_predict
from .tracer import OracleError, load_alias_table


def _cmd_trace(args: argparse.Namespace) -> int:
    aliases = load_alias_table(args.aliases) if args.aliases else None
    snippet_dir = Path(args.snippet_dir)
    if args.verify:
        problems, error = verify_snippet(
            snippet_dir, aliases=aliases, budget_s=args.budget
        )
        if error:
            print(f"warning: snippet raised: {error}", file=sys.stderr)
        for problem in problems:
            print(problem)
        if problems:
            print(f"{len(problems)} disagreement(s)")
            return 1
        return 0
    if args.write:
        target = write_snippet(snippet_dir, aliases=aliases, budget_s=args.budget)
        print(f"wrote {target}")
        return 0
    if not args.out:
        print("trace: --out is required unless --verify/--write is given",
              file=sys.stderr)
        return 2
    entries, error = trace_snippet_dir(
        snippet_dir, aliases=aliases, budget_s=args.budget
    )
    if error:
        print(f"warning: snippet raised: {error}", file=sys.stderr)
    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(serialize_entries(entries), encoding="utf-8")
    print(f"wrote {out_path} ({len(entries)} entries)")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    failures = generate_ground_truth(
        args.corpus_root,
        write=args.write,
        jobs=args.jobs,
        aliases_path=args.aliases,
        budget_s=args.budget,
    )
    mode = "write" if args.write else "verify"
    if failures:
        print(f"generate ({mode}): {failures} snippet(s) with disagreements")
        return 1
    print(f"generate ({mode}): all snippets clean")
    return 0


def _cmd_mock(args: argparse.Namespace) -> int:
    mock_tool_predict(
        args.mode, args.snippet_dir, args.out, seed=args.seed, rank=args.rank
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oracle", description="Runtime trace agent for benchmark snippets"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", help="trace one snippet")
    trace.add_argument("snippet_dir")
    trace.add_argument("--out", help="write traced entries to this file")
    mode = trace.add_mutually_exclusive_group()
    mode.add_argument("--verify", action="store_true",
                      help="compare against the existing main_gt.json")
    mode.add_argument("--write", action="store_true",
                      help="rewrite main_gt.json from the trace")
    trace.add_argument("--aliases", help="alias table JSON (default: harness table)")
    trace.add_argument("--budget", type=float, default=20.0,
                       help="wall-clock budget in seconds")

    generate = sub.add_parser("generate", help="verify or rewrite a whole corpus")
    generate.add_argument("corpus_root")
    mode = generate.add_mutually_exclusive_group(required=True)
    mode.add_argument("--verify", action="store_true")
    mode.add_argument("--write", action="store_true")
    generate.add_argument("--jobs", type=int, default=1)
    generate.add_argument("--aliases")
    generate.add_argument("--budget", type=float, default=20.0)

    mock = sub.add_parser("mock", help="emit a mock tool prediction file")
    mock.add_argument("snippet_dir")
    mock.add_argument("--mode", choices=MOCK_MODES, required=True)
    mock.add_argument("--out", required=True)
    mock.add_argument("--seed", type=int, default=7)
    mock.add_argument("--rank", type=int, default=2)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "trace":
            return _cmd_trace(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_mock(args)
    except OracleError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
