"""Runtime tracing semantics: unions, generators, exceptions, isolation."""

from __future__ import annotations

import pytest

from conftest import write_snippet
from typebench_oracle.groundtruth import entries_from_trace, trace_snippet_dir
from typebench_oracle.tracer import TraceBudgetError, trace_snippet


def _trace_entries(tmp_path, source):
    snippet_dir = write_snippet(tmp_path, source)
    entries, error = trace_snippet_dir(snippet_dir)
    return entries, error


def _by_tag(entries):
    indexed = {}
    for entry in entries:
        tag = entry.get("parameter") or entry.get("variable") or entry.get("function")
        key = (tag, entry["line_number"], entry["col_offset"])
        indexed[key] = entry
    return indexed


def test_parameter_and_return_union_across_calls(tmp_path):
    entries, error = _trace_entries(
        tmp_path,
        "def f(a):\n    return a\n\n\nx = f(1)\ny = f('s')\n",
    )
    assert error is None
    indexed = _by_tag(entries)
    assert indexed[("a", 1, 6)]["type"] == ["int", "str"]
    assert indexed[("f", 1, 4)]["type"] == ["int", "str"]
    assert indexed[("x", 5, 0)]["type"] == ["int"]
    assert indexed[("y", 6, 0)]["type"] == ["str"]


def test_module_level_binding(tmp_path):
    entries, _ = _trace_entries(tmp_path, "x = 5\n")
    assert entries == [
        {"file": "main.py", "line_number": 1, "col_offset": 0,
         "variable": "x", "type": ["int"]}
    ]


def test_generator_function_records_generator(tmp_path):
    entries, _ = _trace_entries(
        tmp_path,
        "def gen(n):\n"
        "    i = 0\n"
        "    while i < n:\n"
        "        yield i\n"
        "        i = i + 1\n"
        "\n"
        "\n"
        "g = gen(2)\n"
        "values = list(g)\n",
    )
    indexed = _by_tag(entries)
    assert indexed[("gen", 1, 4)]["type"] == ["generator"]
    assert indexed[("g", 8, 0)]["type"] == ["generator"]
    assert indexed[("values", 9, 0)]["type"] == ["list"]
    assert indexed[("i", 2, 4)]["type"] == ["int"]


def test_union_over_loop_iterations(tmp_path):
    entries, _ = _trace_entries(
        tmp_path,
        "for item in [1, 'two', 3.0]:\n    current = item\n",
    )
    indexed = _by_tag(entries)
    assert indexed[("item", 1, 4)]["type"] == ["float", "int", "str"]
    assert indexed[("current", 2, 4)]["type"] == ["float", "int", "str"]


def test_rebinding_lines_are_distinct_sites(tmp_path):
    entries, _ = _trace_entries(tmp_path, "x = 1\nx = 'one'\n")
    indexed = _by_tag(entries)
    assert indexed[("x", 1, 0)]["type"] == ["int"]
    assert indexed[("x", 2, 0)]["type"] == ["str"]


def test_implicit_none_return_is_recorded(tmp_path):
    entries, _ = _trace_entries(
        tmp_path,
        "def note(msg):\n    msg.strip()\n\n\nout = note(' hi ')\n",
    )
    indexed = _by_tag(entries)
    assert indexed[("note", 1, 4)]["type"] == ["None"]
    assert indexed[("out", 5, 0)]["type"] == ["None"]


def test_dead_branch_is_not_recorded(tmp_path):
    entries, _ = _trace_entries(
        tmp_path,
        "flag = True\nif flag:\n    value = 1\nelse:\n    value = 2.5\n",
    )
    indexed = _by_tag(entries)
    assert indexed[("value", 3, 4)]["type"] == ["int"]
    assert ("value", 5, 4) not in indexed  # runtime-observed types only


def test_uncaught_exception_keeps_partial_trace(tmp_path):
    entries, error = _trace_entries(
        tmp_path,
        "a = 1\nraise RuntimeError('boom')\nb = 2\n",
    )
    assert error == "RuntimeError: boom"
    indexed = _by_tag(entries)
    assert indexed[("a", 1, 0)]["type"] == ["int"]
    assert ("b", 3, 0) not in indexed


def test_exception_recovered_inside_function_still_returns(tmp_path):
    entries, error = _trace_entries(
        tmp_path,
        "def safe(x):\n"
        "    try:\n"
        "        return 1 // x\n"
        "    except ZeroDivisionError:\n"
        "        return 0.5\n"
        "\n"
        "\n"
        "ok = safe(1)\n"
        "bad = safe(0)\n",
    )
    assert error is None
    indexed = _by_tag(entries)
    assert indexed[("safe", 1, 4)]["type"] == ["float", "int"]


def test_failed_binding_line_records_nothing(tmp_path):
    entries, error = _trace_entries(
        tmp_path,
        "def boom():\n    raise ValueError('x')\n\n\nz = boom()\n",
    )
    assert error == "ValueError: x"
    indexed = _by_tag(entries)
    assert ("z", 5, 0) not in indexed      # binding never completed
    assert ("boom", 1, 4) not in indexed   # no normal return observed


def test_methods_record_qualnames_and_self(tmp_path):
    entries, _ = _trace_entries(
        tmp_path,
        "class A:\n"
        "    def value(self):\n"
        "        return 1\n"
        "\n"
        "\n"
        "class B(A):\n"
        "    def value(self):\n"
        "        return super().value() + 1\n"
        "\n"
        "\n"
        "v = B().value()\n",
    )
    indexed = {(e.get("function"), e.get("parameter")): e for e in entries}
    assert indexed[("A.value", None)]["type"] == ["int"]
    assert indexed[("A.value", "self")]["type"] == ["B"]  # called via super()
    assert indexed[("B.value", "self")]["type"] == ["B"]


def test_lambda_tracing(tmp_path):
    entries, _ = _trace_entries(
        tmp_path, "chooser = lambda flag: 1 if flag else 'no'\na = chooser(True)\n"
    )
    indexed = _by_tag(entries)
    assert indexed[("chooser", 1, 0)]["type"] == ["callable"]
    assert indexed[("<lambda>", 1, 10)]["type"] == ["int"]
    assert indexed[("flag", 1, 17)]["type"] == ["bool"]


def test_bundled_package_types_use_dotted_path_and_stay_isolated(tmp_path):
    first = tmp_path / "one"
    second = tmp_path / "two"
    for root, body in ((first, "int_value = 1"), (second, "str_value = 's'")):
        snippet_dir = root / "external" / "sample"
        (snippet_dir / "helperlib").mkdir(parents=True)
        (snippet_dir / "helperlib" / "__init__.py").write_text(
            f"class Thing:\n    {body}\n", encoding="utf-8"
        )
        (snippet_dir / "main.py").write_text(
            "from helperlib import Thing\n\n\nt = Thing()\n", encoding="utf-8"
        )
    entries_one, _ = trace_snippet_dir(first / "external" / "sample")
    entries_two, _ = trace_snippet_dir(second / "external" / "sample")
    # both runs resolve their own helperlib (sys.modules cleaned between)
    assert _by_tag(entries_one)[("t", 4, 0)]["type"] == ["helperlib.Thing"]
    assert _by_tag(entries_two)[("t", 4, 0)]["type"] == ["helperlib.Thing"]


def test_budget_is_enforced(tmp_path):
    snippet_dir = write_snippet(
        tmp_path, "import time\nwhile True:\n    time.sleep(0.05)\n"
    )
    with pytest.raises(TraceBudgetError):
        trace_snippet(snippet_dir / "main.py", budget_s=0.3)


def test_trace_is_deterministic(tmp_path):
    source = (
        "def f(a, b=2):\n"
        "    total = a * b\n"
        "    return total\n"
        "\n"
        "\n"
        "x = f(3)\n"
        "y = f(1.5, 4)\n"
    )
    snippet_dir = write_snippet(tmp_path, source)
    first = entries_from_trace(trace_snippet(snippet_dir / "main.py"))
    second = entries_from_trace(trace_snippet(snippet_dir / "main.py"))
    assert first == second
