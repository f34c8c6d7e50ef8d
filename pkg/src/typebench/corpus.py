"""Micro-benchmark corpus: snippets, ground truth, and their validation.

Layout on disk::

    <root>/<category>/<snippet_name>/main.py       code under analysis
    <root>/<category>/<snippet_name>/main_gt.json  side-car ground truth

Ground-truth files are JSON arrays; every entry has exactly the keys
``file``, ``line_number`` (1-based), ``col_offset`` (0-based column of
the annotated identifier), ``type`` (nonempty list of strings), plus
optionally ``function``, ``variable``, ``parameter``. Unknown keys are
rejected.

Loading enforces the structural schema. Data-quality rules that a
corpus author can get wrong (banned ``Any``, duplicate sites, dangling
file references, non-canonical type names) are reported as
:class:`Violation` values by :func:`validate_ground_truth` so they can
all be listed in one pass; ``load_corpus(strict=True)`` additionally
refuses corpora with ``Any`` or duplicate sites.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

from . import typeexpr
from .errors import ClassificationError, CorpusError, TypeParseError

CATEGORIES: tuple[str, ...] = (
    "args",
    "assignments",
    "builtins",
    "classes",
    "decorators",
    "dicts",
    "direct_calls",
    "dynamic",
    "exceptions",
    "external",
    "functions",
    "generators",
    "imports",
    "kwargs",
    "lambdas",
    "lists",
    "mro",
    "returns",
)

CODE_FILENAME = "main.py"
GROUND_TRUTH_FILENAME = "main_gt.json"

_REQUIRED_KEYS = frozenset({"file", "line_number", "col_offset", "type"})
_OPTIONAL_KEYS = frozenset({"function", "variable", "parameter"})


class AnnotationKind(Enum):
    """The three kinds of annotated program element."""

    FUNCTION_RETURN = "FR"
    FUNCTION_PARAMETER = "FP"
    LOCAL_VARIABLE = "LV"


KINDS: tuple[AnnotationKind, ...] = (
    AnnotationKind.FUNCTION_RETURN,
    AnnotationKind.FUNCTION_PARAMETER,
    AnnotationKind.LOCAL_VARIABLE,
)


@dataclass(frozen=True, order=True)
class AnnotationSite:
    """A location being annotated; the join key between ground truth and predictions.

    At most one of ``variable``/``parameter`` is set, and ``parameter``
    implies ``function``. Sites with none of the discriminators set are
    rejected (they cannot be classified).
    """

    file: str
    line_number: int
    col_offset: int
    function: str | None = None
    variable: str | None = None
    parameter: str | None = None

    def key(self) -> tuple:
        """Total-order key; ``None`` fields sort before strings."""
        return (
            self.file,
            self.line_number,
            self.col_offset,
            self.function or "",
            self.variable or "",
            self.parameter or "",
        )

    def describe(self) -> str:
        parts = [f"{self.file}:{self.line_number}:{self.col_offset}"]
        if self.function:
            parts.append(f"function={self.function}")
        if self.variable:
            parts.append(f"variable={self.variable}")
        if self.parameter:
            parts.append(f"parameter={self.parameter}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        out: dict = {
            "file": self.file,
            "line_number": self.line_number,
            "col_offset": self.col_offset,
        }
        for key in ("function", "variable", "parameter"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "AnnotationSite":
        return cls(
            file=data["file"],
            line_number=data["line_number"],
            col_offset=data["col_offset"],
            function=data.get("function"),
            variable=data.get("variable"),
            parameter=data.get("parameter"),
        )


@dataclass(frozen=True)
class GroundTruthEntry:
    """One annotated site and its verified type set."""

    site: AnnotationSite
    types: frozenset[str]

    def to_dict(self) -> dict:
        out = self.site.to_dict()
        out["type"] = typeexpr.sorted_types(self.types)
        return out


@dataclass(frozen=True)
class Snippet:
    """One benchmark program with its ground-truth annotations."""

    category: str
    name: str
    source_path: Path
    ground_truth: tuple[GroundTruthEntry, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.ground_truth, key=lambda e: e.site.key()))
        object.__setattr__(self, "ground_truth", ordered)

    @property
    def snippet_id(self) -> str:
        return f"{self.category}/{self.name}"

    @property
    def directory(self) -> Path:
        return self.source_path.parent


@dataclass(frozen=True)
class Corpus:
    """All snippets, grouped by category; immutable after load."""

    root: Path
    snippets: tuple[Snippet, ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.snippets, key=lambda s: (s.category, s.name)))
        object.__setattr__(self, "snippets", ordered)

    def by_category(self) -> dict[str, list[Snippet]]:
        grouped: dict[str, list[Snippet]] = {cat: [] for cat in CATEGORIES}
        for snippet in self.snippets:
            grouped.setdefault(snippet.category, []).append(snippet)
        return grouped

    def get(self, snippet_id: str) -> Snippet:
        for snippet in self.snippets:
            if snippet.snippet_id == snippet_id:
                return snippet
        raise KeyError(snippet_id)

    def __iter__(self) -> Iterator[Snippet]:
        return iter(self.snippets)

    def __len__(self) -> int:
        return len(self.snippets)


def classify_site(entry: GroundTruthEntry) -> AnnotationKind:
    """Derive the annotation kind from an entry's discriminator fields."""
    site = entry.site
    if site.parameter is not None:
        return AnnotationKind.FUNCTION_PARAMETER
    if site.variable is not None:
        return AnnotationKind.LOCAL_VARIABLE
    if site.function is not None:
        return AnnotationKind.FUNCTION_RETURN
    raise ClassificationError(
        f"entry at {site.describe()} has no function, variable, or parameter"
    )


def parse_annotation_entry(
    obj: object, *, where: str, extra_keys: frozenset[str] = frozenset()
) -> dict:
    """Validate one annotation object against the side-car schema.

    Returns ``{"site": AnnotationSite, "types": [str, ...]}`` plus any of
    ``extra_keys`` present; ``types`` preserves file order. Raises
    :class:`CorpusError` naming ``where`` on any schema violation.
    """
    allowed = _REQUIRED_KEYS | _OPTIONAL_KEYS | extra_keys
    if not isinstance(obj, dict):
        raise CorpusError(f"{where}: expected an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise CorpusError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(_REQUIRED_KEYS - set(obj))
    if missing:
        raise CorpusError(f"{where}: missing key(s) {', '.join(missing)}")
    if not isinstance(obj["file"], str) or not obj["file"]:
        raise CorpusError(f"{where}: 'file' must be a nonempty string")
    line = obj["line_number"]
    if not isinstance(line, int) or isinstance(line, bool) or line < 1:
        raise CorpusError(f"{where}: 'line_number' must be an integer >= 1")
    col = obj["col_offset"]
    if not isinstance(col, int) or isinstance(col, bool) or col < 0:
        raise CorpusError(f"{where}: 'col_offset' must be an integer >= 0")
    types = obj["type"]
    if not isinstance(types, list) or not all(isinstance(t, str) for t in types):
        raise CorpusError(f"{where}: 'type' must be an array of strings")
    if not types:
        raise CorpusError(f"{where}: empty type list")
    for key in _OPTIONAL_KEYS:
        if key in obj and (not isinstance(obj[key], str) or not obj[key]):
            raise CorpusError(f"{where}: '{key}' must be a nonempty string")
    if obj.get("variable") is not None and obj.get("parameter") is not None:
        raise CorpusError(f"{where}: 'variable' and 'parameter' are exclusive")
    if obj.get("parameter") is not None and obj.get("function") is None:
        raise CorpusError(f"{where}: 'parameter' requires 'function'")
    if all(obj.get(key) is None for key in _OPTIONAL_KEYS):
        raise CorpusError(
            f"{where}: one of 'function', 'variable', 'parameter' is required"
        )
    entry = {"site": AnnotationSite.from_dict(obj), "types": list(types)}
    for key in extra_keys:
        if key in obj:
            entry[key] = obj[key]
    return entry


def parse_annotation_array(
    data: object, *, source: str, extra_keys: frozenset[str] = frozenset()
) -> list[dict]:
    """Validate a whole annotation array; see :func:`parse_annotation_entry`."""
    if not isinstance(data, list):
        raise CorpusError(f"{source}: expected a JSON array of annotation objects")
    return [
        parse_annotation_entry(obj, where=f"{source}: entry {i}", extra_keys=extra_keys)
        for i, obj in enumerate(data)
    ]


def load_ground_truth_file(path: Path, *, strict: bool = True) -> list[GroundTruthEntry]:
    """Parse one side-car ground-truth file.

    ``strict`` additionally rejects duplicate sites and the banned
    ``Any`` annotation; leave it off when loading a corpus in order to
    report those as :class:`Violation` values instead.
    """
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"{path}: cannot read ground truth: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorpusError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    parsed = parse_annotation_array(data, source=str(path))
    entries = [
        GroundTruthEntry(site=item["site"], types=frozenset(item["types"]))
        for item in parsed
    ]
    if strict:
        seen: set[tuple] = set()
        for entry in entries:
            key = entry.site.key()
            if key in seen:
                raise CorpusError(f"{path}: duplicate site {entry.site.describe()}")
            seen.add(key)
            if any(t.split(".")[-1].lower() == "any" for t in entry.types):
                raise CorpusError(
                    f"{path}: 'Any' is banned in ground truth "
                    f"(at {entry.site.describe()})"
                )
    return entries


def load_corpus(root_dir: str | Path, *, strict: bool = True) -> Corpus:
    """Load and validate the corpus under ``root_dir``.

    Every category directory must be one of the 18 known categories, and
    all 18 must be present. Each snippet directory must contain
    ``main.py`` and ``main_gt.json``.
    """
    root = Path(root_dir)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    found = {
        p.name
        for p in root.iterdir()
        if p.is_dir() and not p.name.startswith((".", "_"))
    }
    unknown = sorted(found - set(CATEGORIES))
    if unknown:
        raise CorpusError(f"unknown category directory(ies): {', '.join(unknown)}")
    missing = sorted(set(CATEGORIES) - found)
    if missing:
        raise CorpusError(f"missing category directory(ies): {', '.join(missing)}")

    snippets: list[Snippet] = []
    for category in CATEGORIES:
        for snippet_dir in sorted((root / category).iterdir()):
            if not snippet_dir.is_dir() or snippet_dir.name.startswith((".", "_")):
                continue
            source = snippet_dir / CODE_FILENAME
            gt_path = snippet_dir / GROUND_TRUTH_FILENAME
            if not source.is_file():
                raise CorpusError(f"{snippet_dir}: missing {CODE_FILENAME}")
            if not gt_path.is_file():
                raise CorpusError(f"{snippet_dir}: missing {GROUND_TRUTH_FILENAME}")
            entries = load_ground_truth_file(gt_path, strict=strict)
            snippets.append(
                Snippet(
                    category=category,
                    name=snippet_dir.name,
                    source_path=source,
                    ground_truth=tuple(entries),
                )
            )
    return Corpus(root=root, snippets=tuple(snippets))


def serialize_ground_truth(entries: tuple[GroundTruthEntry, ...] | list[GroundTruthEntry]) -> str:
    """Render entries as the side-car JSON format (sorted, LF, trailing newline)."""
    ordered = sorted(entries, key=lambda e: e.site.key())
    return json.dumps([e.to_dict() for e in ordered], indent=4) + "\n"


@dataclass(frozen=True)
class Violation:
    """One data-quality problem found in a loaded corpus."""

    code: str
    snippet: str
    message: str
    site: AnnotationSite | None = None

    def __str__(self) -> str:
        where = f" at {self.site.describe()}" if self.site else ""
        return f"[{self.code}] {self.snippet}{where}: {self.message}"


def validate_ground_truth(
    corpus: Corpus, aliases: dict[str, str] | None = None
) -> list[Violation]:
    """Report every data-quality violation; violations are data, not errors."""
    violations: list[Violation] = []
    for snippet in corpus:
        seen: set[tuple] = set()
        for entry in snippet.ground_truth:
            site = entry.site
            key = site.key()
            if key in seen:
                violations.append(
                    Violation(
                        code="duplicate-site",
                        snippet=snippet.snippet_id,
                        site=site,
                        message="multiple ground-truth entries share this site",
                    )
                )
            seen.add(key)
            if not (snippet.directory / site.file).is_file():
                violations.append(
                    Violation(
                        code="dangling-file",
                        snippet=snippet.snippet_id,
                        site=site,
                        message=f"referenced file {site.file!r} does not exist",
                    )
                )
            for type_name in typeexpr.sorted_types(entry.types):
                if type_name.split(".")[-1].lower() == "any":
                    violations.append(
                        Violation(
                            code="banned-any",
                            snippet=snippet.snippet_id,
                            site=site,
                            message="ground truth must name the most specific "
                            "runtime type; 'Any' is banned",
                        )
                    )
                    continue
                try:
                    canonical = typeexpr.decompose_to_type_set(type_name, aliases)
                except TypeParseError as exc:
                    violations.append(
                        Violation(
                            code="unparseable-type",
                            snippet=snippet.snippet_id,
                            site=site,
                            message=f"type {type_name!r} does not parse: {exc}",
                        )
                    )
                    continue
                if canonical != frozenset({type_name}):
                    want = ", ".join(typeexpr.sorted_types(canonical))
                    violations.append(
                        Violation(
                            code="non-canonical-type",
                            snippet=snippet.snippet_id,
                            site=site,
                            message=f"type {type_name!r} is not canonical "
                            f"(normalizes to {want})",
                        )
                    )
    return violations


@dataclass(frozen=True)
class CategoryCount:
    """Annotation counts for one category."""

    snippets: int = 0
    fr: int = 0
    fp: int = 0
    lv: int = 0

    @property
    def total(self) -> int:
        return self.fr + self.fp + self.lv


@dataclass(frozen=True)
class CorpusStats:
    """Snippet and annotation counts, per category and overall."""

    categories: dict[str, CategoryCount] = field(default_factory=dict)

    @property
    def snippet_count(self) -> int:
        return sum(c.snippets for c in self.categories.values())

    @property
    def fr(self) -> int:
        return sum(c.fr for c in self.categories.values())

    @property
    def fp(self) -> int:
        return sum(c.fp for c in self.categories.values())

    @property
    def lv(self) -> int:
        return sum(c.lv for c in self.categories.values())

    @property
    def annotation_count(self) -> int:
        return self.fr + self.fp + self.lv

    def kind_total(self, kind: AnnotationKind) -> int:
        return {
            AnnotationKind.FUNCTION_RETURN: self.fr,
            AnnotationKind.FUNCTION_PARAMETER: self.fp,
            AnnotationKind.LOCAL_VARIABLE: self.lv,
        }[kind]


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Count snippets and annotations per category and kind."""
    counts: dict[str, dict[str, int]] = {}
    for snippet in corpus:
        bucket = counts.setdefault(
            snippet.category, {"snippets": 0, "fr": 0, "fp": 0, "lv": 0}
        )
        bucket["snippets"] += 1
        for entry in snippet.ground_truth:
            kind = classify_site(entry)
            if kind is AnnotationKind.FUNCTION_RETURN:
                bucket["fr"] += 1
            elif kind is AnnotationKind.FUNCTION_PARAMETER:
                bucket["fp"] += 1
            else:
                bucket["lv"] += 1
    return CorpusStats(
        categories={cat: CategoryCount(**vals) for cat, vals in sorted(counts.items())}
    )


@dataclass(frozen=True)
class CountProfile:
    """A target shape for the corpus, checkable against :class:`CorpusStats`.

    ``category_snippets`` pins exact per-category snippet counts;
    ``min_snippets_per_category`` sets a floor instead. ``totals`` pins
    exact overall counts (keys: snippets, annotations, fr, fp, lv).
    """

    name: str
    min_snippets_per_category: int | None = None
    category_snippets: dict[str, int] | None = None
    totals: dict[str, int] | None = None


@lru_cache(maxsize=1)
def builtin_profiles() -> dict[str, CountProfile]:
    """Profiles bundled with the package (``seed`` and ``full``)."""
    data = resources.files("typebench").joinpath("data/profiles.json").read_text("utf-8")
    raw = json.loads(data)
    return {
        name: CountProfile(
            name=name,
            min_snippets_per_category=spec.get("min_snippets_per_category"),
            category_snippets=spec.get("category_snippets"),
            totals=spec.get("totals"),
        )
        for name, spec in raw.items()
    }


def check_profile(stats: CorpusStats, profile: CountProfile) -> list[str]:
    """Return every way ``stats`` deviates from ``profile`` (empty = accepted)."""
    problems: list[str] = []
    for category in CATEGORIES:
        have = stats.categories.get(category, CategoryCount()).snippets
        if profile.category_snippets is not None:
            want = profile.category_snippets.get(category, 0)
            if have != want:
                problems.append(
                    f"category {category}: expected exactly {want} snippets, found {have}"
                )
        elif profile.min_snippets_per_category is not None:
            if have < profile.min_snippets_per_category:
                problems.append(
                    f"category {category}: expected at least "
                    f"{profile.min_snippets_per_category} snippets, found {have}"
                )
    if profile.totals:
        observed = {
            "snippets": stats.snippet_count,
            "annotations": stats.annotation_count,
            "fr": stats.fr,
            "fp": stats.fp,
            "lv": stats.lv,
        }
        for key, want in profile.totals.items():
            have = observed.get(key)
            if have != want:
                problems.append(f"total {key}: expected exactly {want}, found {have}")
    return problems
