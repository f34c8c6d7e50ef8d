"""Parsing and canonicalization of type expression strings.

Tools under test emit type names in wildly different spellings:
``List[int]``, ``typing.Optional[str]``, ``builtins.dict``, ``int | str``.
Scoring compares *canonical type sets*, obtained by

  1. parsing the string into a small expression tree,
  2. erasing generic arguments (``Dict[str, int]`` -> ``Dict``),
  3. resolving spelling aliases against a data-driven table
     (``Dict`` -> ``dict``, ``NoneType`` -> ``None``),
  4. decomposing unions (``Optional[T]`` -> ``{T, None}``).

Canonical names are lowercase runtime names for builtins (``list``,
``dict``, ``callable``, ``None``), declared class names for user classes,
and dotted paths for classes from other modules. Unknown heads pass
through verbatim so that exotic predictions score as mismatches instead
of crashing the pipeline.

The alias table ships as ``data/aliases.json`` and can be replaced or
extended without touching code.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import TypeParseError

_UNION_HEADS = frozenset({"Union", "typing.Union"})
_OPTIONAL_HEADS = frozenset({"Optional", "typing.Optional"})

# Head used for anonymous bracket groups such as the argument list in
# Callable[[int], str]. Groups only occur in argument position and are
# erased during normalization.
GROUP_HEAD = "__group__"

_IDENT_START = set(string.ascii_letters + "_")
_IDENT_CONT = set(string.ascii_letters + string.digits + "_")


@dataclass(frozen=True)
class TypeExprTree:
    """Parsed type expression: a head identifier and ordered arguments.

    Union expressions (``A | B`` or ``Union[A, B]``) use the head
    ``"Union"``. Literal leaves (``Literal[0]`` arguments, ``...``) keep
    their source text as head; they never survive normalization.
    """

    head: str
    args: tuple["TypeExprTree", ...] = field(default_factory=tuple)


def load_alias_table(path: str | Path) -> dict[str, str]:
    """Load an alias table (JSON map of alias -> canonical name)."""
    with open(path, encoding="utf-8") as fh:
        table = json.load(fh)
    if not isinstance(table, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in table.items()
    ):
        raise ValueError(f"alias table {path} must be a JSON map of strings")
    return table


@lru_cache(maxsize=1)
def default_alias_table() -> dict[str, str]:
    """The alias table bundled with the package."""
    data = resources.files("typebench").joinpath("data/aliases.json").read_text("utf-8")
    return json.loads(data)


class _Tokenizer:
    """Lexer for type expressions; whitespace is insignificant."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, column: int | None = None) -> TypeParseError:
        return TypeParseError(message, self.pos if column is None else column)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_char(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def take_ident(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos >= len(self.text) or self.text[self.pos] not in _IDENT_START:
            raise self.error("expected identifier")
        while self.pos < len(self.text) and self.text[self.pos] in _IDENT_CONT:
            self.pos += 1
        return self.text[start : self.pos]

    def take_literal(self) -> str:
        """Consume a numeric, string, or ellipsis literal; return its text."""
        self.skip_ws()
        start = self.pos
        ch = self.text[self.pos]
        if self.text.startswith("...", self.pos):
            self.pos += 3
            return "..."
        if ch in "'\"":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos] != ch:
                self.pos += 2 if self.text[self.pos] == "\\" else 1
            if self.pos >= len(self.text):
                raise self.error("unterminated string literal", start)
            self.pos += 1
            return self.text[start : self.pos]
        if ch.isdigit() or ch == "-":
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos] in _IDENT_CONT or self.text[self.pos] in ".+-"
            ):
                self.pos += 1
            return self.text[start : self.pos]
        raise self.error("expected type expression")


def parse_type_expr(text: str) -> TypeExprTree:
    """Parse ``text`` into a :class:`TypeExprTree`.

    Grammar::

        expr  := term ('|' term)*
        term  := path | path '[' arg (',' arg)* ']'
        path  := ident ('.' ident)*
        arg   := expr | '[' arg (',' arg)* ']' | literal

    ``|`` parses as a union node with head ``Union``. Bracket groups and
    literals are accepted only in argument position (they cover outputs
    like ``Callable[[int], str]`` and ``Literal[0]``) and are dropped by
    generic erasure.

    Raises :class:`TypeParseError` (carrying the column) on unbalanced
    brackets, empty path segments, or trailing tokens.
    """
    if not text or not text.strip():
        raise TypeParseError("empty type expression", 0)
    tok = _Tokenizer(text)
    tree = _parse_expr(tok)
    tok.skip_ws()
    if tok.pos < len(text):
        raise tok.error("trailing tokens")
    return tree


def _parse_expr(tok: _Tokenizer) -> TypeExprTree:
    terms = [_parse_term(tok)]
    while tok.peek() == "|":
        tok.take_char()
        terms.append(_parse_term(tok))
    if len(terms) == 1:
        return terms[0]
    return TypeExprTree("Union", tuple(terms))


def _parse_term(tok: _Tokenizer) -> TypeExprTree:
    head = _parse_path(tok)
    if tok.peek() == "[":
        return TypeExprTree(head, _parse_bracketed_args(tok))
    return TypeExprTree(head)


def _parse_path(tok: _Tokenizer) -> str:
    segments = [tok.take_ident()]
    while tok.peek() == ".":
        mark = tok.pos
        tok.take_char()
        try:
            segments.append(tok.take_ident())
        except TypeParseError:
            raise TypeParseError("empty path segment", mark) from None
    return ".".join(segments)


def _parse_bracketed_args(tok: _Tokenizer) -> tuple[TypeExprTree, ...]:
    open_col = tok.pos
    tok.take_char()  # consume '['
    args = [_parse_arg(tok)]
    while True:
        ch = tok.peek()
        if ch == ",":
            tok.take_char()
            args.append(_parse_arg(tok))
        elif ch == "]":
            tok.take_char()
            return tuple(args)
        else:
            raise tok.error("unbalanced brackets", open_col)


def _parse_arg(tok: _Tokenizer) -> TypeExprTree:
    ch = tok.peek()
    if ch == "[":
        return TypeExprTree(GROUP_HEAD, _parse_bracketed_args(tok))
    if ch and ch not in _IDENT_START:
        return TypeExprTree(tok.take_literal())
    return _parse_expr(tok)


def resolve_alias(name: str, aliases: dict[str, str] | None = None) -> str:
    """Rewrite ``name`` through the alias table to a fixpoint."""
    table = default_alias_table() if aliases is None else aliases
    seen = set()
    while name in table and name not in seen:
        seen.add(name)
        name = table[name]
    return name


def normalize_type_expr(
    tree: TypeExprTree, aliases: dict[str, str] | None = None
) -> frozenset[str]:
    """Erase generics and resolve aliases; unions decompose into sets.

    Always returns a set of canonical names (a singleton for non-union
    trees). ``Optional[T]`` decomposes to ``{T, None}``. Unknown heads
    pass through verbatim after erasure.
    """
    head, args = tree.head, tree.args
    if args and head in _UNION_HEADS:
        members: frozenset[str] = frozenset()
        for arg in args:
            members |= normalize_type_expr(arg, aliases)
        return members
    if args and head in _OPTIONAL_HEADS:
        members = frozenset({"None"})
        for arg in args:
            members |= normalize_type_expr(arg, aliases)
        return members
    if head == GROUP_HEAD:
        return frozenset()
    return frozenset({resolve_alias(head, aliases)})


def decompose_to_type_set(
    text: str, aliases: dict[str, str] | None = None
) -> frozenset[str]:
    """Parse and normalize ``text`` into a flat canonical type set."""
    return normalize_type_expr(parse_type_expr(text), aliases)


def type_sets_equal(a: Iterable[str], b: Iterable[str]) -> bool:
    """Set equality, insensitive to order and duplication."""
    return frozenset(a) == frozenset(b)


def sorted_types(types: Iterable[str]) -> list[str]:
    """Canonical (lexicographic) order for serializing a type set."""
    return sorted(set(types))


def is_canonical(name: str, aliases: dict[str, str] | None = None) -> bool:
    """True when normalizing ``name`` is the identity."""
    try:
        return decompose_to_type_set(name, aliases) == frozenset({name})
    except TypeParseError:
        return False
