"""Command-line entry point wiring the pipeline stages.

Subcommands: ``validate``, ``run``, ``translate``, ``analyze``,
``report``, ``bench`` (all stages in order), and ``trace`` (delegates to
the runtime trace agent when installed). Stage artifacts persist under
``<out>/<stage>/`` so any stage can be re-run without repeating the
previous ones; in particular ``analyze`` over unchanged raw outputs
reproduces byte-identical reports.

Exit codes: 0 success, 1 validation failure, 2 tool-execution failure,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import shutil
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import analyzer, corpus as corpus_mod, report as report_mod, runner, translator, typeexpr
from .errors import ConfigError, CorpusError, RunnerError, TranslationError, TypeBenchError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_TOOL = 2
EXIT_INTERNAL = 3

_CONFIG_KEYS = frozenset(
    {"corpus", "adapters", "out", "jobs", "top_n", "formats", "profile",
     "container_runtime", "aliases"}
)


@dataclass(frozen=True)
class HarnessConfig:
    """Resolved configuration for one pipeline invocation."""

    corpus_root: Path
    out_dir: Path
    adapters_path: Path | None = None
    jobs: int = 1
    top_n: tuple[int, ...] = (1, 3, 5)
    formats: tuple[str, ...] = ("md", "csv", "json")
    profile: str | None = None
    container_runtime: str | None = None
    aliases_path: Path | None = None

    def __post_init__(self) -> None:
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if not self.top_n or any(n < 1 for n in self.top_n):
            raise ConfigError("top-n ranks must be integers >= 1")
        unknown = set(self.formats) - {"md", "csv", "json"}
        if unknown:
            raise ConfigError(f"unknown report format(s): {', '.join(sorted(unknown))}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of integers: {text!r}")


def build_config(args: argparse.Namespace) -> HarnessConfig:
    """Merge the optional JSON config file with command-line overrides."""
    values: dict = {}
    config_path = getattr(args, "config", None)
    if config_path:
        path = Path(config_path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}"
            ) from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        unknown = sorted(set(raw) - _CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"{path}: unknown config key(s): {', '.join(unknown)}")
        values.update(raw)
        # Relative paths in the config file resolve against its directory.
        for key in ("corpus", "adapters", "out", "aliases"):
            if values.get(key):
                values[key] = str((path.parent / values[key]).resolve())

    def pick(flag: str, key: str, default=None):
        override = getattr(args, flag, None)
        return override if override is not None else values.get(key, default)

    corpus_root = pick("corpus", "corpus")
    if not corpus_root:
        raise ConfigError("a corpus path is required (--corpus or config 'corpus')")
    top_n = pick("top_n", "top_n", (1, 3, 5))
    if isinstance(top_n, str):
        top_n = _parse_int_list(top_n)
    formats = pick("format", "formats", ("md", "csv", "json"))
    if isinstance(formats, str):
        formats = tuple(part.strip() for part in formats.split(",") if part.strip())
    adapters = pick("adapters", "adapters")
    aliases = pick("aliases", "aliases")
    return HarnessConfig(
        corpus_root=Path(corpus_root),
        out_dir=Path(pick("out", "out", "typebench-out")),
        adapters_path=Path(adapters) if adapters else None,
        jobs=int(pick("jobs", "jobs", 1)),
        top_n=tuple(top_n),
        formats=tuple(formats),
        profile=pick("profile", "profile"),
        container_runtime=pick("container_runtime", "container_runtime"),
        aliases_path=Path(aliases) if aliases else None,
    )


def _load_corpus(config: HarnessConfig, *, strict: bool) -> corpus_mod.Corpus:
    if not config.corpus_root.is_dir():
        raise CorpusError(f"corpus path {config.corpus_root} does not exist")
    return corpus_mod.load_corpus(config.corpus_root, strict=strict)


def _load_adapters(config: HarnessConfig) -> list[runner.ToolAdapterSpec]:
    if config.adapters_path is None:
        raise ConfigError("an adapters file is required (--adapters or config 'adapters')")
    return runner.load_adapter_specs(config.adapters_path)


def cmd_validate(config: HarnessConfig) -> int:
    """Load the corpus, report violations and (optionally) profile deviations."""
    bench = _load_corpus(config, strict=False)
    violations = corpus_mod.validate_ground_truth(bench)
    stats = corpus_mod.corpus_stats(bench)
    print(
        f"validate: {len(bench)} snippets, {stats.annotation_count} annotations "
        f"({stats.fr} FR, {stats.fp} FP, {stats.lv} LV)"
    )
    for violation in violations:
        print(f"validate: {violation}")
    problems = len(violations)
    if config.profile:
        profiles = corpus_mod.builtin_profiles()
        if config.profile not in profiles:
            raise ConfigError(
                f"unknown profile {config.profile!r} "
                f"(available: {', '.join(sorted(profiles))})"
            )
        for deviation in corpus_mod.check_profile(stats, profiles[config.profile]):
            print(f"validate: [profile:{config.profile}] {deviation}")
            problems += 1
    if problems:
        print(f"validate: FAILED with {problems} problem(s)")
        return EXIT_VALIDATION
    print("validate: OK")
    return EXIT_OK


def cmd_run(config: HarnessConfig) -> int:
    """Execute every configured adapter over the corpus; persist raw outputs."""
    bench = _load_corpus(config, strict=True)
    adapters = _load_adapters(config)
    run_dir = config.out_dir / "run"
    all_records: list[runner.RunRecord] = []
    for adapter in adapters:
        records = runner.run_tool_on_corpus(
            adapter,
            bench,
            run_dir,
            jobs=config.jobs,
            container_runtime=config.container_runtime,
        )
        all_records.extend(records)
        histogram = runner.summarize_runs(records).get(adapter.name, {})
        summary = ", ".join(f"{k}={v}" for k, v in sorted(histogram.items()))
        print(f"run: {adapter.name}: {len(records)} snippets ({summary})")
    records_path = run_dir / "records.json"
    records_path.parent.mkdir(parents=True, exist_ok=True)
    records_path.write_text(
        json.dumps(
            {"schema_version": 1, "records": [r.to_dict() for r in all_records]},
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    return EXIT_OK


def _read_records(config: HarnessConfig) -> list[runner.RunRecord]:
    records_path = config.out_dir / "run" / "records.json"
    if not records_path.is_file():
        raise ConfigError(f"no run records at {records_path}; run the 'run' stage first")
    data = json.loads(records_path.read_text(encoding="utf-8"))
    return [runner.RunRecord.from_dict(obj) for obj in data.get("records", [])]


def cmd_translate(config: HarnessConfig) -> int:
    """Normalize persisted raw outputs into per-tool prediction files."""
    bench = _load_corpus(config, strict=True)
    adapters = {a.name: a for a in _load_adapters(config)}
    records = _read_records(config)
    aliases = None
    if config.aliases_path is not None:
        try:
            aliases = typeexpr.load_alias_table(config.aliases_path)
        except (OSError, ValueError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load alias table: {exc}") from exc
    translate_dir = config.out_dir / "translate"
    translate_dir.mkdir(parents=True, exist_ok=True)

    by_tool: dict[str, list[runner.RunRecord]] = {}
    for record in records:
        by_tool.setdefault(record.tool, []).append(record)

    for tool, tool_records in sorted(by_tool.items()):
        adapter = adapters.get(tool)
        if adapter is None:
            raise ConfigError(f"translate: no adapter spec for tool {tool!r}")
        predictions = translator.PredictionSet(tool=tool)
        for record in tool_records:
            if record.status != runner.STATUS_OK or record.raw_output is None:
                continue
            try:
                snippet = bench.get(record.snippet)
            except KeyError:
                raise ConfigError(
                    f"translate: run records mention {record.snippet!r} which is "
                    f"not in the corpus; re-run the 'run' stage"
                ) from None
            raw = Path(record.raw_output).read_bytes()
            try:
                preds = translator.translate_raw_output(
                    adapter.translator_id,
                    raw,
                    snippet,
                    default_ranked=adapter.ranked,
                    aliases=aliases,
                )
            except TranslationError as exc:
                logger.warning("translate: %s: %s: %s", tool, record.snippet, exc)
                predictions.errors[record.snippet] = str(exc)
                continue
            predictions.predictions[record.snippet] = tuple(preds)
        out_path = translate_dir / f"{tool}.json"
        out_path.write_text(
            json.dumps(predictions.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        print(
            f"translate: {tool}: predictions for "
            f"{len(predictions.predictions)} snippets, "
            f"{len(predictions.errors)} translation error(s)"
        )
    return EXIT_OK


def cmd_analyze(config: HarnessConfig) -> int:
    """Score every translated tool and persist the results document."""
    bench = _load_corpus(config, strict=True)
    translate_dir = config.out_dir / "translate"
    prediction_files = sorted(translate_dir.glob("*.json"))
    if not prediction_files:
        raise ConfigError(
            f"no prediction files under {translate_dir}; run 'translate' first"
        )
    reports = []
    for path in prediction_files:
        data = json.loads(path.read_text(encoding="utf-8"))
        predictions = translator.PredictionSet.from_dict(data)
        reports.append(analyzer.evaluate_tool(bench, predictions, ns=config.top_n))
    doc = report_mod.emit_results_json(reports)
    analyze_dir = config.out_dir / "analyze"
    analyze_dir.mkdir(parents=True, exist_ok=True)
    (analyze_dir / "results.json").write_bytes(doc.body)
    for item in report_mod.order_reports(reports):
        print(
            f"analyze: {item.tool}: exact {item.exact_total}/{item.gt_total}, "
            f"sound {item.sound_count}/{item.snippet_count}, "
            f"complete {item.complete_count}/{item.snippet_count}"
        )
    return EXIT_OK


def cmd_report(config: HarnessConfig) -> int:
    """Render human-readable artifacts from the persisted results document."""
    results_path = config.out_dir / "analyze" / "results.json"
    if not results_path.is_file():
        raise ConfigError(f"no results at {results_path}; run 'analyze' first")
    reports = report_mod.parse_results_json(results_path.read_bytes())
    written = report_mod.write_report_files(
        reports, config.out_dir / "report", config.formats, ns=config.top_n
    )
    for fmt in config.formats:
        print(f"report: wrote {written[fmt]}")
    return EXIT_OK


def cmd_bench(config: HarnessConfig) -> int:
    """All stages in order: validate, run, translate, analyze, report."""
    for stage in (cmd_validate, cmd_run, cmd_translate, cmd_analyze, cmd_report):
        status = stage(config)
        if status != EXIT_OK:
            return status
    return EXIT_OK


def cmd_trace(args: Sequence[str]) -> int:
    """Delegate to the runtime trace agent (``oracle``), if installed."""
    binary = shutil.which("oracle")
    if binary is None:
        print(
            "trace: the 'oracle' trace agent is not installed; "
            "install the oracle package to enable tracing",
            file=sys.stderr,
        )
        return EXIT_TOOL
    proc = subprocess.run([binary, "trace", *args])
    return proc.returncode


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--corpus", help="corpus root directory")
    parser.add_argument("--adapters", help="adapters JSON file")
    parser.add_argument("--out", help="output directory (default: typebench-out)")
    parser.add_argument("--jobs", type=int, help="parallel snippet executions")
    parser.add_argument("--top-n", dest="top_n", help="comma-separated ranks, e.g. 1,3,5")
    parser.add_argument("--format", help="comma-separated report formats (md,csv,json)")
    parser.add_argument("--profile", help="corpus count profile to enforce (seed, full)")
    parser.add_argument("--aliases", help="alias table JSON overriding the bundled one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typebench",
        description="Benchmark harness for Python type inference tools",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("validate", "check corpus ground truth and counts"),
        ("run", "execute adapters over the corpus"),
        ("translate", "normalize raw tool outputs"),
        ("analyze", "score predictions against ground truth"),
        ("report", "render comparison tables"),
        ("bench", "run the whole pipeline"),
    ):
        stage = sub.add_parser(name, help=help_text)
        _add_common_flags(stage)
    trace = sub.add_parser("trace", help="delegate to the runtime trace agent")
    trace.add_argument("args", nargs=argparse.REMAINDER)
    return parser


_COMMANDS = {
    "validate": cmd_validate,
    "run": cmd_run,
    "translate": cmd_translate,
    "analyze": cmd_analyze,
    "report": cmd_report,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "trace":
        return cmd_trace(args.args)
    try:
        config = build_config(args)
        return _COMMANDS[args.command](config)
    except CorpusError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, RunnerError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_TOOL
    except TypeBenchError as exc:
        print(f"{args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # last resort: keep the exit-code contract
        print(f"{args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
