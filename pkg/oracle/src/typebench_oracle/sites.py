"""Static extraction of annotatable sites from snippet source.

The tracer needs to know, before running anything, *where* observations
may land:

  - every function/lambda: its return site (the name token after
    ``def``, or the ``lambda`` keyword) and one site per parameter;
  - every local-variable binding: assignment targets (including chained
    and unpacked ones), augmented assignments, ``for`` targets, and the
    names bound by import statements.

Deliberately excluded, so the ground truth stays unambiguous:
comprehension variables (they live in their own frame), ``with``/
``except`` binders, walrus targets, class-body assignments, and the
names bound by ``def``/``class`` statements themselves.

Functions are keyed by ``(co_name, co_firstlineno)`` so runtime frames
can be matched without relying on qualname support in code objects.
For decorated functions ``co_firstlineno`` is the first decorator line,
not the ``def`` line.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Site:
    """One annotatable location, in side-car schema terms."""

    file: str
    line_number: int
    col_offset: int
    function: str | None = None
    variable: str | None = None
    parameter: str | None = None

    def key(self) -> tuple:
        return (
            self.file,
            self.line_number,
            self.col_offset,
            self.function or "",
            self.variable or "",
            self.parameter or "",
        )

    def to_dict(self) -> dict:
        out: dict = {
            "file": self.file,
            "line_number": self.line_number,
            "col_offset": self.col_offset,
        }
        for name in ("function", "variable", "parameter"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out

    def describe(self) -> str:
        tag = self.parameter or self.variable or self.function
        return f"{self.file}:{self.line_number}:{self.col_offset} ({tag})"


@dataclass
class FunctionSites:
    """Return and parameter sites for one function or lambda."""

    qualname: str
    return_site: Site
    params: dict[str, Site] = field(default_factory=dict)


class SiteMap:
    """All annotatable sites of one source file.

    ``functions`` maps ``(co_name, co_firstlineno)`` to
    :class:`FunctionSites`; ``bindings`` maps ``(scope_qualname | None,
    lineno)`` to the name bindings executed by that line.
    """

    def __init__(self, source: str, file_label: str = "main.py") -> None:
        self.file_label = file_label
        self.functions: dict[tuple[str, int], FunctionSites] = {}
        self.bindings: dict[tuple[str | None, int], list[tuple[str, Site]]] = {}
        self._lines = source.splitlines()
        self._walk_body(ast.parse(source).body, scope=None, in_class=None)

    # -- construction ----------------------------------------------------

    def _def_name_col(self, node: ast.FunctionDef) -> int:
        line = self._lines[node.lineno - 1]
        match = re.search(rf"\bdef\s+({re.escape(node.name)})\b", line)
        return match.start(1) if match else node.col_offset + 4

    def _add_binding(self, scope: str | None, name_node: ast.Name) -> None:
        site = Site(
            file=self.file_label,
            line_number=name_node.lineno,
            col_offset=name_node.col_offset,
            function=scope,
            variable=name_node.id,
        )
        key = (scope, name_node.lineno)
        self.bindings.setdefault(key, []).append((name_node.id, site))

    def _add_target(self, scope: str | None, target: ast.expr) -> None:
        if isinstance(target, ast.Name):
            self._add_binding(scope, target)
        elif isinstance(target, (ast.Tuple, ast.List)):
            for element in target.elts:
                self._add_target(scope, element)
        elif isinstance(target, ast.Starred):
            self._add_target(scope, target.value)
        # attribute/subscript targets are not local-variable bindings

    def _add_import(self, scope: str | None, node: ast.Import | ast.ImportFrom) -> None:
        for alias in node.names:
            bound = alias.asname or alias.name.split(".")[0]
            if bound == "*":
                continue
            col = alias.col_offset
            if alias.asname:
                line = self._lines[alias.lineno - 1]
                match = re.search(
                    rf"\bas\s+({re.escape(bound)})\b", line[alias.col_offset :]
                )
                if match:
                    col = alias.col_offset + match.start(1)
            site = Site(
                file=self.file_label,
                line_number=alias.lineno,
                col_offset=col,
                function=scope,
                variable=bound,
            )
            self.bindings.setdefault((scope, alias.lineno), []).append((bound, site))

    def _add_function(
        self, node: ast.FunctionDef | ast.AsyncFunctionDef, qualname: str
    ) -> None:
        key_line = min(
            [decorator.lineno for decorator in node.decorator_list] + [node.lineno]
        )
        info = FunctionSites(
            qualname=qualname,
            return_site=Site(
                file=self.file_label,
                line_number=node.lineno,
                col_offset=self._def_name_col(node),
                function=qualname,
            ),
        )
        self._collect_params(node.args, info, qualname)
        self.functions[(node.name, key_line)] = info

    def _add_lambda(self, node: ast.Lambda, qualname: str) -> None:
        info = FunctionSites(
            qualname=qualname,
            return_site=Site(
                file=self.file_label,
                line_number=node.lineno,
                col_offset=node.col_offset,
                function=qualname,
            ),
        )
        self._collect_params(node.args, info, qualname)
        self.functions[("<lambda>", node.lineno)] = info

    def _collect_params(
        self, args: ast.arguments, info: FunctionSites, qualname: str
    ) -> None:
        every = list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs)
        if args.vararg:
            every.append(args.vararg)
        if args.kwarg:
            every.append(args.kwarg)
        for arg in every:
            info.params[arg.arg] = Site(
                file=self.file_label,
                line_number=arg.lineno,
                col_offset=arg.col_offset,
                function=qualname,
                parameter=arg.arg,
            )

    def _child_scope(self, scope: str | None, in_class: str | None, name: str) -> str:
        if in_class is not None:
            return f"{in_class}.{name}"
        if scope is not None:
            return f"{scope}.<locals>.{name}"
        return name

    def _walk_body(
        self, body: list[ast.stmt], scope: str | None, in_class: str | None
    ) -> None:
        for stmt in body:
            self._walk_stmt(stmt, scope, in_class)

    def _walk_stmt(
        self, stmt: ast.stmt, scope: str | None, in_class: str | None
    ) -> None:
        collecting = in_class is None  # class-body assignments carry no site
        if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
            qualname = self._child_scope(scope, in_class, stmt.name)
            self._add_function(stmt, qualname)
            self._walk_exprs(stmt.decorator_list, scope, in_class)
            self._walk_body(stmt.body, scope=qualname, in_class=None)
            return
        if isinstance(stmt, ast.ClassDef):
            class_qual = self._child_scope(scope, in_class, stmt.name)
            self._walk_body(stmt.body, scope=scope, in_class=class_qual)
            return
        if isinstance(stmt, ast.Assign):
            if collecting:
                for target in stmt.targets:
                    self._add_target(scope, target)
            self._walk_exprs([stmt.value], scope, in_class)
            return
        if isinstance(stmt, (ast.AugAssign, ast.AnnAssign)):
            if collecting and getattr(stmt, "value", True) is not None:
                self._add_target(scope, stmt.target)
            if stmt.value is not None:
                self._walk_exprs([stmt.value], scope, in_class)
            return
        if isinstance(stmt, ast.For):
            if collecting:
                self._add_target(scope, stmt.target)
            self._walk_exprs([stmt.iter], scope, in_class)
            self._walk_body(stmt.body, scope, in_class)
            self._walk_body(stmt.orelse, scope, in_class)
            return
        if isinstance(stmt, (ast.Import, ast.ImportFrom)):
            if collecting:
                self._add_import(scope, stmt)
            return
        # generic statements: recurse into nested blocks and expressions
        for child_block in ("body", "orelse", "finalbody"):
            self._walk_body(getattr(stmt, child_block, []) or [], scope, in_class)
        for handler in getattr(stmt, "handlers", []) or []:
            self._walk_body(handler.body, scope, in_class)
        for item in getattr(stmt, "items", []) or []:
            self._walk_exprs([item.context_expr], scope, in_class)
        for attr in ("value", "test", "exc", "iter"):
            child = getattr(stmt, attr, None)
            if isinstance(child, ast.expr):
                self._walk_exprs([child], scope, in_class)

    def _walk_exprs(
        self, exprs: list[ast.expr], scope: str | None, in_class: str | None
    ) -> None:
        for expr in exprs:
            for node in ast.walk(expr):
                if isinstance(node, ast.Lambda):
                    qualname = self._child_scope(scope, in_class, "<lambda>")
                    self._add_lambda(node, qualname)

    # -- queries ----------------------------------------------------------

    def function_for_code(self, co_name: str, co_firstlineno: int) -> FunctionSites | None:
        return self.functions.get((co_name, co_firstlineno))

    def bindings_for(self, scope: str | None, lineno: int) -> list[tuple[str, Site]]:
        return self.bindings.get((scope, lineno), [])

    def all_sites(self) -> list[Site]:
        sites: list[Site] = []
        for info in self.functions.values():
            sites.append(info.return_site)
            sites.extend(info.params.values())
        for entries in self.bindings.values():
            sites.extend(site for _, site in entries)
        return sorted(sites, key=lambda s: s.key())
