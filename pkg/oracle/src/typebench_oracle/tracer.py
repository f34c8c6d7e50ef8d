"""Runtime tracing of one snippet via ``sys.settrace``.

The snippet executes in this interpreter (``runpy``, module name
``__main__``, snippet directory on ``sys.path`` so bundled packages
import without network access). The trace hook records, for every site
the static :class:`~typebench_oracle.sites.SiteMap` knows about:

  - parameter types at every call (so repeated calls union),
  - return types at every normal return; generator functions record
    ``generator`` (the type of the call result), never their yields,
  - bound-value types for each binding line, read when the line has
    finished (at the next event in the frame); a line that raises
    records nothing.

Observed class names map through the shared alias table: builtins keep
their runtime name (``list``, ``NoneType`` -> ``None``), classes defined
by the snippet use their declared name, anything else the dotted
``module.Qualname`` path.

An uncaught exception ends the run but keeps the partial trace (some
benchmark categories raise on purpose). Exceeding the wall-clock budget
is an error.
"""

from __future__ import annotations

import inspect
import json
import signal
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import runpy

from .sites import Site, SiteMap


class OracleError(Exception):
    """Trace agent failure (bad input, missing files, config)."""


class TraceBudgetError(OracleError):
    """The snippet exceeded its wall-clock budget."""


def load_alias_table(path: str | Path | None = None) -> dict[str, str]:
    """The shared alias table: an explicit file, or the one the harness ships."""
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    try:
        data = resources.files("typebench").joinpath("data/aliases.json")
        return json.loads(data.read_text("utf-8"))
    except (ModuleNotFoundError, FileNotFoundError) as exc:
        raise OracleError(
            "no alias table: install the harness package or pass --aliases"
        ) from exc


def resolve_alias(name: str, table: dict[str, str]) -> str:
    seen: set[str] = set()
    while name in table and name not in seen:
        seen.add(name)
        name = table[name]
    return name


def runtime_type_name(value: object, table: dict[str, str]) -> str:
    """Canonical name for the concrete runtime type of ``value``."""
    cls = type(value)
    module = cls.__module__
    if module in ("builtins", "__main__"):
        return resolve_alias(cls.__name__, table)
    return resolve_alias(f"{module}.{cls.__qualname__}", table)


@dataclass(frozen=True)
class TraceEvent:
    """One observation: a site, the observed type, and its occurrence index."""

    site: Site
    observed_type: str
    occurrence: int


@dataclass
class TraceResult:
    """Everything one snippet run produced."""

    events: list[TraceEvent] = field(default_factory=list)
    error: str | None = None

    def type_sets(self) -> dict[Site, set[str]]:
        merged: dict[Site, set[str]] = {}
        for event in self.events:
            merged.setdefault(event.site, set()).add(event.observed_type)
        return merged


class _TraceHook:
    """The settrace callable; confined to frames of the traced file."""

    def __init__(self, site_map: SiteMap, path: str, aliases: dict[str, str]) -> None:
        self.site_map = site_map
        self.path = path
        self.aliases = aliases
        self.events: list[TraceEvent] = []
        self._counts: dict[tuple, int] = {}
        self._pending: dict[int, tuple[object, list[tuple[str, Site]]]] = {}
        self._excepted: set[int] = set()

    def _record(self, site: Site, type_name: str) -> None:
        occurrence = self._counts.get(site.key(), 0)
        self._counts[site.key()] = occurrence + 1
        self.events.append(TraceEvent(site, type_name, occurrence))

    def _record_value(self, site: Site, value: object) -> None:
        self._record(site, runtime_type_name(value, self.aliases))

    def _flush(self, frame_id: int) -> None:
        stashed = self._pending.pop(frame_id, None)
        if stashed is None:
            return
        frame, names = stashed
        for name, site in names:
            if name in frame.f_locals:
                self._record_value(site, frame.f_locals[name])

    def _scope(self, frame) -> tuple[str | None, bool]:
        """(scope qualname or None for module, known?) for binding lookup."""
        if frame.f_code.co_name == "<module>":
            return None, True
        info = self.site_map.function_for_code(
            frame.f_code.co_name, frame.f_code.co_firstlineno
        )
        if info is not None:
            return info.qualname, True
        return None, False  # class bodies, comprehension frames

    def __call__(self, frame, event: str, arg):
        if frame.f_code.co_filename != self.path:
            return None
        frame_id = id(frame)
        if event == "call":
            info = self.site_map.function_for_code(
                frame.f_code.co_name, frame.f_code.co_firstlineno
            )
            if info is not None:
                for name, site in info.params.items():
                    if name in frame.f_locals:
                        self._record_value(site, frame.f_locals[name])
                if frame.f_code.co_flags & inspect.CO_GENERATOR:
                    self._record(info.return_site, resolve_alias("generator", self.aliases))
            return self
        if event == "line":
            self._flush(frame_id)
            self._excepted.discard(frame_id)
            scope, known = self._scope(frame)
            if known:
                names = self.site_map.bindings_for(scope, frame.f_lineno)
                if names:
                    self._pending[frame_id] = (frame, names)
            return self
        if event == "exception":
            # the raising line never completed its binding
            self._pending.pop(frame_id, None)
            self._excepted.add(frame_id)
            return self
        if event == "return":
            self._flush(frame_id)
            unwinding = frame_id in self._excepted
            self._excepted.discard(frame_id)
            info = self.site_map.function_for_code(
                frame.f_code.co_name, frame.f_code.co_firstlineno
            )
            if (
                info is not None
                and not unwinding
                and not frame.f_code.co_flags & inspect.CO_GENERATOR
            ):
                self._record_value(info.return_site, arg)
            return self
        return self


def trace_snippet(
    source_path: str | Path,
    *,
    aliases: dict[str, str] | None = None,
    budget_s: float = 20.0,
) -> TraceResult:
    """Execute one snippet under trace hooks and collect observations.

    The snippet's directory is prepended to ``sys.path`` for the run;
    modules it imports are evicted from ``sys.modules`` afterwards so
    tracing several snippets in one process stays hermetic (bundled
    packages of different snippets share names).
    """
    path = Path(source_path).resolve()
    if not path.is_file():
        raise OracleError(f"snippet source {path} does not exist")
    table = load_alias_table() if aliases is None else aliases
    site_map = SiteMap(path.read_text(encoding="utf-8"), file_label=path.name)
    hook = _TraceHook(site_map, str(path), table)
    result = TraceResult()

    def on_timeout(signum, frame):
        raise TraceBudgetError(f"{path}: exceeded trace budget of {budget_s}s")

    modules_before = set(sys.modules)
    sys.path.insert(0, str(path.parent))
    previous_handler = signal.signal(signal.SIGALRM, on_timeout)
    signal.setitimer(signal.ITIMER_REAL, budget_s)
    try:
        sys.settrace(hook)
        try:
            runpy.run_path(str(path), run_name="__main__")
        except TraceBudgetError:
            raise
        except KeyboardInterrupt:
            raise
        except BaseException as exc:  # snippet bugs and intentional raises
            result.error = f"{type(exc).__name__}: {exc}"
        finally:
            sys.settrace(None)
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, previous_handler)
        sys.path.remove(str(path.parent))
        for name in set(sys.modules) - modules_before:
            del sys.modules[name]

    result.events = hook.events
    return result
