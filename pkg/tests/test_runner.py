"""Tool execution: statuses, isolation, ordering, adapter config."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from conftest import make_tiny_corpus
from typebench.corpus import Corpus, load_corpus
from typebench.errors import ConfigError, RunnerError
from typebench.runner import (
    RunRecord,
    ToolAdapterSpec,
    load_adapter_specs,
    resolve_container_runtime,
    run_tool_on_corpus,
    summarize_runs,
)

PY = sys.executable

COPY_GT = (
    f'{PY} -c "import shutil,sys; '
    f"shutil.copy(sys.argv[1] + '/main_gt.json', sys.argv[2])\" "
    "{snippet_dir} {output_file}"
)
SLEEPER = f'{PY} -c "import time; time.sleep(5)" {{snippet_dir}} {{output_file}}'
CRASHER = f'{PY} -c "import sys; sys.exit(3)" {{snippet_dir}} {{output_file}}'
SILENT = f'{PY} -c "pass" {{snippet_dir}} {{output_file}}'
EMPTY_WRITER = (
    f"{PY} -c \"import sys; open(sys.argv[2], 'w').close()\" "
    "{snippet_dir} {output_file}"
)


def _adapter(invocation: str, **kwargs) -> ToolAdapterSpec:
    defaults = dict(name="tool", mode="command", invocation=invocation, timeout_s=30.0)
    defaults.update(kwargs)
    return ToolAdapterSpec(**defaults)


@pytest.fixture()
def tiny_corpus(tmp_path) -> Corpus:
    return load_corpus(make_tiny_corpus(tmp_path / "corpus"))


@pytest.fixture()
def two_snippets(tiny_corpus) -> Corpus:
    return Corpus(root=tiny_corpus.root, snippets=tiny_corpus.snippets[:2])


def test_perfect_adapter_all_ok(two_snippets, tmp_path):
    records = run_tool_on_corpus(
        _adapter(COPY_GT, name="perfect"), two_snippets, tmp_path / "out"
    )
    assert [r.status for r in records] == ["ok", "ok"]
    for record in records:
        assert record.raw_output is not None and record.raw_output.stat().st_size > 0
        assert json.loads(Path(record.raw_output).read_text())


def test_rerun_produces_identical_raw_outputs(two_snippets, tmp_path):
    adapter = _adapter(COPY_GT, name="perfect")
    first = run_tool_on_corpus(adapter, two_snippets, tmp_path / "out")
    blobs = [Path(r.raw_output).read_bytes() for r in first]
    second = run_tool_on_corpus(adapter, two_snippets, tmp_path / "out")
    assert [Path(r.raw_output).read_bytes() for r in second] == blobs


def test_timeout_terminates_and_reports(two_snippets, tmp_path):
    one = Corpus(root=two_snippets.root, snippets=two_snippets.snippets[:1])
    records = run_tool_on_corpus(
        _adapter(SLEEPER, name="sleeper", timeout_s=0.4), one, tmp_path / "out"
    )
    (record,) = records
    assert record.status == "timeout"
    assert record.raw_output is None
    assert 0.3 <= record.duration_s < 4.0


def test_timeout_kills_the_whole_process_group(two_snippets, tmp_path):
    parent = tmp_path / "parent_tool.py"
    parent.write_text(
        "import subprocess, sys\n"
        "subprocess.run([sys.executable, '-c',\n"
        "    \"import time,sys; time.sleep(1.0); open(sys.argv[1], 'w')"
        ".write('leaked')\",\n"
        "    sys.argv[1]])\n",
        encoding="utf-8",
    )
    one = Corpus(root=two_snippets.root, snippets=two_snippets.snippets[:1])
    adapter = _adapter(
        f"{PY} {parent} {{output_file}} {{snippet_dir}}",
        name="spawner",
        timeout_s=0.3,
    )
    (record,) = run_tool_on_corpus(adapter, one, tmp_path / "out")
    assert record.status == "timeout"
    # the grandchild must not survive the kill and write output later
    import time

    time.sleep(1.2)
    out_file = tmp_path / "out" / "spawner" / one.snippets[0].category / \
        one.snippets[0].name / "output.json"
    assert not out_file.exists()


def test_crash_status(two_snippets, tmp_path):
    records = run_tool_on_corpus(
        _adapter(CRASHER, name="crasher"), two_snippets, tmp_path / "out"
    )
    assert all(r.status == "crash" and r.raw_output is None for r in records)


def test_no_output_when_silent_or_empty(two_snippets, tmp_path):
    for name, invocation in (("silent", SILENT), ("empty", EMPTY_WRITER)):
        records = run_tool_on_corpus(
            _adapter(invocation, name=name), two_snippets, tmp_path / f"out-{name}"
        )
        assert all(r.status == "no-output" and r.raw_output is None for r in records)


def test_missing_binary_fails_before_any_snippet(two_snippets, tmp_path):
    adapter = _adapter("definitely-not-a-binary {snippet_dir} {output_file}")
    with pytest.raises(ConfigError, match="not found"):
        run_tool_on_corpus(adapter, two_snippets, tmp_path / "out")
    assert not (tmp_path / "out" / "tool").exists()


def test_unwritable_out_dir_is_a_setup_error(two_snippets, tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    with pytest.raises(RunnerError, match="not writable"):
        run_tool_on_corpus(_adapter(COPY_GT), two_snippets, blocker / "out")


def test_tool_cannot_corrupt_the_corpus(two_snippets, tmp_path):
    vandal = (
        f"{PY} -c \"import sys; open(sys.argv[1] + '/main.py', 'a').write('ruined')\" "
        "{snippet_dir} {output_file}"
    )
    snippet = two_snippets.snippets[0]
    before = snippet.source_path.read_bytes()
    run_tool_on_corpus(_adapter(vandal, name="vandal"), two_snippets, tmp_path / "out")
    assert snippet.source_path.read_bytes() == before


def test_records_ordered_deterministically_with_jobs(tiny_corpus, tmp_path):
    records = run_tool_on_corpus(
        _adapter(COPY_GT, name="perfect"), tiny_corpus, tmp_path / "out", jobs=4
    )
    ids = [r.snippet for r in records]
    assert ids == sorted(ids)
    assert len(records) == len(tiny_corpus)


def test_exactly_one_record_per_snippet(tiny_corpus, tmp_path):
    records = run_tool_on_corpus(
        _adapter(COPY_GT, name="perfect"), tiny_corpus, tmp_path / "out"
    )
    assert sorted(r.snippet for r in records) == sorted(
        s.snippet_id for s in tiny_corpus
    )


def test_corpus_scope_invocation(two_snippets, tmp_path):
    script = tmp_path / "whole_corpus_tool.py"
    script.write_text(
        "import shutil, sys\n"
        "from pathlib import Path\n"
        "root, out = Path(sys.argv[1]), Path(sys.argv[2])\n"
        "for gt in root.glob('*/*/main_gt.json'):\n"
        "    dest = out / gt.parent.parent.name / (gt.parent.name + '.json')\n"
        "    dest.parent.mkdir(parents=True, exist_ok=True)\n"
        "    shutil.copy(gt, dest)\n",
        encoding="utf-8",
    )
    adapter = _adapter(
        f"{PY} {script} {{snippet_dir}} {{output_file}}",
        name="whole",
        invocation_scope="corpus",
    )
    records = run_tool_on_corpus(adapter, two_snippets, tmp_path / "out")
    assert [r.status for r in records] == ["ok", "ok"]
    for record in records:
        assert record.raw_output is not None and record.raw_output.is_file()


def test_summarize_runs_matches_independent_fold():
    records = (
        [RunRecord("t", f"a/s{i}", "ok", 0.1) for i in range(120)]
        + [RunRecord("t", f"b/s{i}", "no-output", 0.1) for i in range(34)]
    )
    summary = summarize_runs(records)
    assert summary == {"t": {"ok": 120, "no-output": 34}}

    mixed = [
        RunRecord("x", "a/1", "ok", 0.1),
        RunRecord("x", "a/2", "crash", 0.1),
        RunRecord("y", "a/1", "timeout", 0.1),
    ]
    expected: dict = {}
    for record in mixed:
        expected.setdefault(record.tool, {})
        expected[record.tool][record.status] = (
            expected[record.tool].get(record.status, 0) + 1
        )
    assert summarize_runs(mixed) == expected
    assert summarize_runs([]) == {}


def test_adapter_spec_validation():
    with pytest.raises(ConfigError, match="snippet_dir"):
        ToolAdapterSpec(name="a", mode="command", invocation="tool {output_file}")
    with pytest.raises(ConfigError, match="output_file"):
        ToolAdapterSpec(name="a", mode="command", invocation="tool {snippet_dir}")
    with pytest.raises(ConfigError, match="timeout"):
        _adapter(COPY_GT, timeout_s=0)
    with pytest.raises(ConfigError, match="mode"):
        _adapter(COPY_GT, mode="magic")
    with pytest.raises(ConfigError, match="image"):
        _adapter(COPY_GT, mode="container-image")
    with pytest.raises(ConfigError, match="invocation_scope"):
        _adapter(COPY_GT, invocation_scope="universe")


def test_load_adapter_specs(tmp_path):
    path = tmp_path / "adapters.json"
    path.write_text(
        json.dumps(
            [
                {"name": "a", "mode": "command",
                 "invocation": "t {snippet_dir} {output_file}"},
                {"name": "b", "mode": "command", "ranked": True,
                 "invocation": "t {snippet_dir} {output_file}", "timeout_s": 5},
            ]
        )
    )
    specs = load_adapter_specs(path)
    assert [s.name for s in specs] == ["a", "b"]
    assert specs[1].ranked and specs[1].timeout_s == 5

    path.write_text(json.dumps([{"name": "a", "mode": "command",
                                 "invocation": "t {snippet_dir} {output_file}",
                                 "color": "red"}]))
    with pytest.raises(ConfigError, match="color"):
        load_adapter_specs(path)

    path.write_text(json.dumps([
        {"name": "a", "mode": "command", "invocation": "t {snippet_dir} {output_file}"},
        {"name": "a", "mode": "command", "invocation": "t {snippet_dir} {output_file}"},
    ]))
    with pytest.raises(ConfigError, match="duplicate"):
        load_adapter_specs(path)


def test_container_runtime_resolution(monkeypatch):
    monkeypatch.delenv("TYPEBENCH_CONTAINER_RUNTIME", raising=False)
    assert resolve_container_runtime() == "docker"
    assert resolve_container_runtime("podman") == "podman"
    monkeypatch.setenv("TYPEBENCH_CONTAINER_RUNTIME", "/opt/bin/runtime")
    assert resolve_container_runtime("podman") == "/opt/bin/runtime"


def test_container_mode_requires_resolvable_runtime(two_snippets, tmp_path, monkeypatch):
    monkeypatch.setenv("TYPEBENCH_CONTAINER_RUNTIME", "no-such-runtime-xyz")
    adapter = ToolAdapterSpec(
        name="boxed",
        mode="container-image",
        image="example/image:1",
        invocation="infer {snippet_dir} {output_file}",
    )
    with pytest.raises(ConfigError, match="no-such-runtime-xyz"):
        run_tool_on_corpus(adapter, two_snippets, tmp_path / "out")
