"""Execution of tools-under-test over the corpus.

Each snippet is copied into a fresh temporary work directory (copied
files are made read-only, so a misbehaving tool can never corrupt the
corpus) and the adapter is invoked once per snippet with the
placeholders ``{snippet_dir}`` and ``{output_file}`` substituted.
Adapters that must see the whole corpus at once can declare
``invocation_scope: "corpus"``; they are invoked once, with
``{output_file}`` naming a directory to fill with
``<category>/<snippet>.json`` files.

Outcomes are first-class data, not errors: nonzero exit is ``crash``,
exceeding ``timeout_s`` is ``timeout`` (the process is terminated), a
zero exit without a nonempty output file is ``no-output``. Only setup
problems (unwritable output directory, unresolvable adapter binary)
raise, and they do so before any snippet runs.

Container adapters delegate to an external runtime binary (``docker``
unless the ``TYPEBENCH_CONTAINER_RUNTIME`` environment variable or the
``container_runtime`` argument says otherwise); the harness itself
embeds no container logic.
"""

from __future__ import annotations

import json
import os
import shlex
import shutil
import signal
import stat
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus, Snippet
from .errors import ConfigError, RunnerError

STATUS_OK = "ok"
STATUS_TIMEOUT = "timeout"
STATUS_CRASH = "crash"
STATUS_NO_OUTPUT = "no-output"
STATUSES = (STATUS_OK, STATUS_TIMEOUT, STATUS_CRASH, STATUS_NO_OUTPUT)

RAW_OUTPUT_FILENAME = "output.json"
CONTAINER_WORKSPACE = "/workspace"
CONTAINER_RUNTIME_ENV = "TYPEBENCH_CONTAINER_RUNTIME"

_MODES = ("command", "container-image")
_SCOPES = ("snippet", "corpus")
_ADAPTER_KEYS = frozenset(
    {
        "name",
        "mode",
        "invocation",
        "timeout_s",
        "ranked",
        "translator_id",
        "invocation_scope",
        "image",
    }
)


@dataclass(frozen=True)
class ToolAdapterSpec:
    """Configuration for invoking one tool-under-test."""

    name: str
    mode: str
    invocation: str
    timeout_s: float = 60.0
    ranked: bool = False
    translator_id: str = "standard-json"
    invocation_scope: str = "snippet"
    image: str | None = None

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigError("adapter name must be nonempty")
        if self.mode not in _MODES:
            raise ConfigError(
                f"adapter {self.name}: mode must be one of {', '.join(_MODES)}"
            )
        if self.invocation_scope not in _SCOPES:
            raise ConfigError(
                f"adapter {self.name}: invocation_scope must be one of "
                f"{', '.join(_SCOPES)}"
            )
        if self.timeout_s <= 0:
            raise ConfigError(f"adapter {self.name}: timeout_s must be positive")
        for placeholder in ("{snippet_dir}", "{output_file}"):
            if placeholder not in self.invocation:
                raise ConfigError(
                    f"adapter {self.name}: invocation must reference {placeholder}"
                )
        if self.mode == "container-image" and not self.image:
            raise ConfigError(f"adapter {self.name}: container-image mode needs 'image'")


def load_adapter_specs(path: str | Path) -> list[ToolAdapterSpec]:
    """Load a JSON array of adapter specs; unknown keys are rejected."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read adapters file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, list):
        raise ConfigError(f"{path}: expected a JSON array of adapter specs")
    specs: list[ToolAdapterSpec] = []
    names: set[str] = set()
    for index, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise ConfigError(f"{path}: adapter {index}: expected an object")
        unknown = sorted(set(obj) - _ADAPTER_KEYS)
        if unknown:
            raise ConfigError(
                f"{path}: adapter {index}: unknown key(s) {', '.join(unknown)}"
            )
        try:
            spec = ToolAdapterSpec(**obj)
        except TypeError as exc:
            raise ConfigError(f"{path}: adapter {index}: {exc}") from exc
        if spec.name in names:
            raise ConfigError(f"{path}: duplicate adapter name {spec.name!r}")
        names.add(spec.name)
        specs.append(spec)
    return specs


@dataclass
class RunRecord:
    """Outcome of invoking one tool on one snippet."""

    tool: str
    snippet: str
    status: str
    duration_s: float
    raw_output: Path | None = None

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "snippet": self.snippet,
            "status": self.status,
            "duration_s": round(self.duration_s, 3),
            "raw_output": str(self.raw_output) if self.raw_output else None,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "RunRecord":
        raw = data.get("raw_output")
        return cls(
            tool=data["tool"],
            snippet=data["snippet"],
            status=data["status"],
            duration_s=data["duration_s"],
            raw_output=Path(raw) if raw else None,
        )


def resolve_container_runtime(override: str | None = None) -> str:
    """Container runtime binary; the environment variable wins."""
    return os.environ.get(CONTAINER_RUNTIME_ENV) or override or "docker"


def _substitute(tokens: Sequence[str], snippet_dir: str, output_file: str) -> list[str]:
    return [
        tok.replace("{snippet_dir}", snippet_dir).replace("{output_file}", output_file)
        for tok in tokens
    ]


def _copy_read_only(src: Path, dst: Path) -> None:
    shutil.copytree(src, dst)
    for path in dst.rglob("*"):
        if path.is_file():
            path.chmod(stat.S_IRUSR | stat.S_IRGRP | stat.S_IROTH)


def _check_resolvable(adapter: ToolAdapterSpec, runtime: str) -> None:
    """Fail before any snippet runs when the binary cannot be found."""
    if adapter.mode == "container-image":
        if shutil.which(runtime) is None:
            raise ConfigError(
                f"adapter {adapter.name}: container runtime {runtime!r} not found"
            )
        return
    tokens = shlex.split(adapter.invocation)
    if not tokens:
        raise ConfigError(f"adapter {adapter.name}: empty invocation")
    argv0 = tokens[0]
    if "{" in argv0:
        return  # placeholder in argv[0]; resolvability depends on the snippet
    if shutil.which(argv0) is None and not Path(argv0).exists():
        raise ConfigError(f"adapter {adapter.name}: command {argv0!r} not found")


def _execute(
    argv: list[str], cwd: Path, timeout_s: float, log_path: Path
) -> tuple[str, float]:
    """Run one adapter process; returns (provisional status, duration).

    The adapter gets its own session so a timeout kills its whole
    process group, not just the direct child.
    """
    start = time.monotonic()
    with open(log_path, "wb") as log:
        try:
            proc = subprocess.Popen(
                argv,
                cwd=cwd,
                stdout=log,
                stderr=subprocess.STDOUT,
                start_new_session=True,
            )
        except FileNotFoundError:
            return STATUS_CRASH, time.monotonic() - start
        try:
            proc.wait(timeout=timeout_s)
        except subprocess.TimeoutExpired:
            try:
                os.killpg(os.getpgid(proc.pid), signal.SIGKILL)
            except (ProcessLookupError, PermissionError):
                proc.kill()
            proc.wait()
            return STATUS_TIMEOUT, time.monotonic() - start
    duration = time.monotonic() - start
    return (STATUS_OK if proc.returncode == 0 else STATUS_CRASH), duration


def _finalize(status: str, out_file: Path) -> tuple[str, Path | None]:
    """ok only when the output file exists and is nonempty."""
    if status == STATUS_OK:
        if out_file.is_file() and out_file.stat().st_size > 0:
            return STATUS_OK, out_file
        return STATUS_NO_OUTPUT, None
    return status, None


def run_tool_on_corpus(
    adapter: ToolAdapterSpec,
    corpus: Corpus,
    out_dir: str | Path,
    *,
    jobs: int = 1,
    container_runtime: str | None = None,
) -> list[RunRecord]:
    """Run one adapter over every snippet; exactly one record per snippet.

    Raw output lands under ``out_dir/<tool>/<category>/<snippet>/``.
    Records come back ordered by (category, name) regardless of
    completion order.
    """
    out_root = Path(out_dir)
    try:
        out_root.mkdir(parents=True, exist_ok=True)
        probe = out_root / ".write-probe"
        probe.touch()
        probe.unlink()
    except OSError as exc:
        raise RunnerError(f"output directory {out_root} is not writable: {exc}") from exc

    runtime = resolve_container_runtime(container_runtime)
    _check_resolvable(adapter, runtime)
    tokens = shlex.split(adapter.invocation)

    if adapter.invocation_scope == "corpus":
        return _run_corpus_scope(adapter, corpus, out_root, tokens, runtime)

    def run_one(snippet: Snippet) -> RunRecord:
        dest = out_root / adapter.name / snippet.category / snippet.name
        dest.mkdir(parents=True, exist_ok=True)
        out_file = dest / RAW_OUTPUT_FILENAME
        out_file.unlink(missing_ok=True)
        work_root = Path(tempfile.mkdtemp(prefix="typebench-run-"))
        try:
            work_snippet = work_root / "snippet"
            _copy_read_only(snippet.directory, work_snippet)
            if adapter.mode == "container-image":
                inner_out = f"{CONTAINER_WORKSPACE}/{RAW_OUTPUT_FILENAME}"
                argv = [
                    runtime,
                    "run",
                    "--rm",
                    "-v",
                    f"{work_root}:{CONTAINER_WORKSPACE}",
                    adapter.image or "",
                ] + _substitute(tokens, f"{CONTAINER_WORKSPACE}/snippet", inner_out)
                host_out = work_root / RAW_OUTPUT_FILENAME
            else:
                argv = _substitute(tokens, str(work_snippet), str(out_file))
                host_out = out_file
            status, duration = _execute(
                argv, work_root, adapter.timeout_s, dest / "log.txt"
            )
            if host_out != out_file and status == STATUS_OK and host_out.is_file():
                shutil.move(str(host_out), str(out_file))
            status, raw = _finalize(status, out_file)
            return RunRecord(
                tool=adapter.name,
                snippet=snippet.snippet_id,
                status=status,
                duration_s=duration,
                raw_output=raw,
            )
        finally:
            shutil.rmtree(work_root, ignore_errors=True)

    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1:
        records = [run_one(s) for s in corpus]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_one, corpus.snippets))
    records.sort(key=lambda r: r.snippet)
    return records


def _run_corpus_scope(
    adapter: ToolAdapterSpec,
    corpus: Corpus,
    out_root: Path,
    tokens: Sequence[str],
    runtime: str,
) -> list[RunRecord]:
    """Single whole-corpus invocation; records derived from the output tree."""
    work_root = Path(tempfile.mkdtemp(prefix="typebench-run-"))
    try:
        work_corpus = work_root / "corpus"
        _copy_read_only(corpus.root, work_corpus)
        collect = work_root / "out"
        collect.mkdir()
        if adapter.mode == "container-image":
            argv = [
                runtime,
                "run",
                "--rm",
                "-v",
                f"{work_root}:{CONTAINER_WORKSPACE}",
                adapter.image or "",
            ] + _substitute(
                tokens, f"{CONTAINER_WORKSPACE}/corpus", f"{CONTAINER_WORKSPACE}/out"
            )
        else:
            argv = _substitute(tokens, str(work_corpus), str(collect))
        log_path = out_root / adapter.name / "log.txt"
        log_path.parent.mkdir(parents=True, exist_ok=True)
        status, duration = _execute(argv, work_root, adapter.timeout_s, log_path)

        records = []
        for snippet in corpus:
            dest = out_root / adapter.name / snippet.category / snippet.name
            dest.mkdir(parents=True, exist_ok=True)
            out_file = dest / RAW_OUTPUT_FILENAME
            out_file.unlink(missing_ok=True)
            if status == STATUS_OK:
                produced = collect / snippet.category / f"{snippet.name}.json"
                if produced.is_file():
                    shutil.move(str(produced), str(out_file))
            final, raw = _finalize(status, out_file)
            records.append(
                RunRecord(
                    tool=adapter.name,
                    snippet=snippet.snippet_id,
                    status=final,
                    duration_s=duration,
                    raw_output=raw,
                )
            )
        return records
    finally:
        shutil.rmtree(work_root, ignore_errors=True)


def summarize_runs(records: Sequence[RunRecord]) -> dict[str, dict[str, int]]:
    """Status histogram per tool; counts sum to the number of records."""
    summary: dict[str, dict[str, int]] = {}
    for record in records:
        bucket = summary.setdefault(record.tool, {})
        bucket[record.status] = bucket.get(record.status, 0) + 1
    return summary
