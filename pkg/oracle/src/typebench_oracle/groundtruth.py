"""Ground-truth emission and verification against existing side-car files.

``entries_from_trace`` turns a trace into the corpus JSON schema: one
entry per observed site, types unioned over every execution, sorted by
site. ``verify_snippet`` diffs that against the checked-in
``main_gt.json`` and reports every disagreement (missing site, extra
site, differing type set); ``write_snippet`` replaces the file.

Corpus-wide runs spawn one fresh interpreter per snippet: snippets
redefine module names (every ``external`` snippet bundles a package
called ``helperlib``) and may poison global state, so process isolation
is the only safe default.
"""

from __future__ import annotations

import json
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .sites import Site
from .tracer import OracleError, TraceResult, trace_snippet

CODE_FILENAME = "main.py"
GROUND_TRUTH_FILENAME = "main_gt.json"


def entries_from_trace(result: TraceResult) -> list[dict]:
    """Side-car schema entries: per-site type unions, sorted by site."""
    merged = result.type_sets()
    entries = []
    for site in sorted(merged, key=lambda s: s.key()):
        entry = site.to_dict()
        entry["type"] = sorted(merged[site])
        entries.append(entry)
    return entries


def serialize_entries(entries: list[dict]) -> str:
    return json.dumps(entries, indent=4) + "\n"


def load_entries(path: Path) -> list[dict]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OracleError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise OracleError(f"{path}: malformed JSON: {exc}") from exc
    if not isinstance(data, list):
        raise OracleError(f"{path}: expected a JSON array")
    return data


def _site_key(entry: dict) -> tuple:
    return (
        entry.get("file", ""),
        entry.get("line_number", 0),
        entry.get("col_offset", 0),
        entry.get("function") or "",
        entry.get("variable") or "",
        entry.get("parameter") or "",
    )


def _describe_key(key: tuple) -> str:
    file, line, col, function, variable, parameter = key
    tag = parameter or variable or function or "?"
    return f"{file}:{line}:{col} ({tag})"


def diff_entries(expected: list[dict], traced: list[dict]) -> list[str]:
    """Human-readable disagreements between two entry lists."""
    expected_map = {_site_key(e): sorted(set(e.get("type", []))) for e in expected}
    traced_map = {_site_key(e): sorted(set(e.get("type", []))) for e in traced}
    problems = []
    for key in sorted(set(expected_map) | set(traced_map)):
        want = expected_map.get(key)
        got = traced_map.get(key)
        if want is None:
            problems.append(f"{_describe_key(key)}: traced site missing from ground truth "
                            f"(observed {got})")
        elif got is None:
            problems.append(f"{_describe_key(key)}: annotated site never observed "
                            f"(expected {want})")
        elif want != got:
            problems.append(f"{_describe_key(key)}: ground truth {want} != traced {got}")
    return problems


def _snippet_source(snippet_dir: Path) -> Path:
    source = snippet_dir / CODE_FILENAME
    if not source.is_file():
        raise OracleError(f"{snippet_dir}: missing {CODE_FILENAME}")
    return source


def trace_snippet_dir(
    snippet_dir: str | Path,
    *,
    aliases: dict[str, str] | None = None,
    budget_s: float = 20.0,
) -> tuple[list[dict], str | None]:
    """Trace ``<snippet_dir>/main.py``; returns (entries, runtime error or None)."""
    source = _snippet_source(Path(snippet_dir))
    result = trace_snippet(source, aliases=aliases, budget_s=budget_s)
    return entries_from_trace(result), result.error


def verify_snippet(
    snippet_dir: str | Path,
    *,
    aliases: dict[str, str] | None = None,
    budget_s: float = 20.0,
) -> tuple[list[str], str | None]:
    """Diff the traced entries against the existing side-car file."""
    snippet_dir = Path(snippet_dir)
    entries, error = trace_snippet_dir(
        snippet_dir, aliases=aliases, budget_s=budget_s
    )
    expected = load_entries(snippet_dir / GROUND_TRUTH_FILENAME)
    return diff_entries(expected, entries), error


def write_snippet(
    snippet_dir: str | Path,
    *,
    aliases: dict[str, str] | None = None,
    budget_s: float = 20.0,
) -> Path:
    """Trace and (re)write the side-car ground-truth file."""
    snippet_dir = Path(snippet_dir)
    entries, _ = trace_snippet_dir(snippet_dir, aliases=aliases, budget_s=budget_s)
    target = snippet_dir / GROUND_TRUTH_FILENAME
    target.write_text(serialize_entries(entries), encoding="utf-8")
    return target


def iter_snippet_dirs(corpus_root: str | Path) -> list[Path]:
    root = Path(corpus_root)
    if not root.is_dir():
        raise OracleError(f"corpus root {root} is not a directory")
    dirs = [
        snippet_dir
        for snippet_dir in sorted(root.glob("*/*"))
        if snippet_dir.is_dir() and (snippet_dir / CODE_FILENAME).is_file()
    ]
    if not dirs:
        raise OracleError(f"no snippets found under {root}")
    return dirs


def generate_ground_truth(
    corpus_root: str | Path,
    *,
    write: bool = False,
    jobs: int = 1,
    aliases_path: str | None = None,
    budget_s: float = 20.0,
) -> int:
    """Verify (or rewrite) every snippet, one fresh process per snippet.

    Returns the number of snippets with disagreements (0 = clean).
    """
    dirs = iter_snippet_dirs(corpus_root)

    def run_one(snippet_dir: Path) -> tuple[Path, int, str]:
        argv = [
            sys.executable,
            "-m",
            "typebench_oracle",
            "trace",
            str(snippet_dir),
            "--write" if write else "--verify",
            "--budget",
            str(budget_s),
        ]
        if aliases_path:
            argv += ["--aliases", aliases_path]
        proc = subprocess.run(argv, capture_output=True, text=True)
        return snippet_dir, proc.returncode, proc.stdout + proc.stderr

    if jobs <= 1:
        outcomes = [run_one(d) for d in dirs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run_one, dirs))

    failures = 0
    for snippet_dir, returncode, output in outcomes:
        if returncode != 0:
            failures += 1
            for line in output.strip().splitlines():
                print(f"{snippet_dir.parent.name}/{snippet_dir.name}: {line}")
    return failures
