"""Conversion of raw tool output into standardized predictions.

Translators are registered by id; an adapter's ``translator_id`` picks
one. Two ship built in:

  standard-json   the side-car ground-truth schema, with ``type``
                  interpreted as a (possibly ranked) candidate list and
                  an optional per-entry boolean ``ranked``
  mock            alias of standard-json (the bundled mock tools emit
                  that format)

File-level malformation (not JSON, not an array) raises
:class:`TranslationError`; the snippet then scores as if the tool had
produced no output. Entry-level problems (bad site fields, unparseable
type strings) drop just that entry with a logged warning, so one bad
entry does not void a tool's whole snippet.

Predictions sharing a site are merged: ranked candidate lists are
concatenated keeping first-occurrence order, unranked sets are unioned.
This is also how context-sensitive tool output is flattened onto the
context-insensitive ground truth.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import corpus as corpus_mod
from . import typeexpr
from .corpus import AnnotationSite, Snippet
from .errors import ConfigError, CorpusError, TranslationError, TypeParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Prediction:
    """One tool prediction: a site and its candidate types.

    ``candidates`` is nonempty and duplicate-free after normalization.
    When ``ranked`` is false the candidate order carries no meaning and
    the list is treated as a set.
    """

    site: AnnotationSite
    candidates: tuple[str, ...]
    ranked: bool = False

    def candidate_set(self) -> frozenset[str]:
        return frozenset(self.candidates)

    def to_dict(self) -> dict:
        out = self.site.to_dict()
        out["type"] = list(self.candidates)
        out["ranked"] = self.ranked
        return out


@dataclass
class PredictionSet:
    """All predictions of one tool, keyed by snippet id (``category/name``).

    ``errors`` records snippets whose raw output failed translation;
    those snippets count as no-output for metrics.
    """

    tool: str
    predictions: dict[str, tuple[Prediction, ...]] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def for_snippet(self, snippet_id: str) -> tuple[Prediction, ...]:
        return self.predictions.get(snippet_id, ())

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "tool": self.tool,
            "snippets": {
                snippet_id: [p.to_dict() for p in preds]
                for snippet_id, preds in sorted(self.predictions.items())
            },
            "errors": dict(sorted(self.errors.items())),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PredictionSet":
        predictions: dict[str, tuple[Prediction, ...]] = {}
        for snippet_id, entries in data.get("snippets", {}).items():
            preds = [
                Prediction(
                    site=AnnotationSite.from_dict(obj),
                    candidates=tuple(obj["type"]),
                    ranked=bool(obj.get("ranked", False)),
                )
                for obj in entries
            ]
            predictions[snippet_id] = tuple(preds)
        return cls(
            tool=data["tool"],
            predictions=predictions,
            errors=dict(data.get("errors", {})),
        )


Translator = Callable[[bytes, Snippet, bool, "dict[str, str] | None"], "list[Prediction]"]

_TRANSLATORS: dict[str, Translator] = {}


def register_translator(translator_id: str, fn: Translator) -> None:
    """Register a raw-output parser under ``translator_id``."""
    _TRANSLATORS[translator_id] = fn


def registered_translators() -> tuple[str, ...]:
    return tuple(sorted(_TRANSLATORS))


def translate_raw_output(
    translator_id: str,
    raw: bytes,
    snippet: Snippet,
    *,
    default_ranked: bool = False,
    aliases: dict[str, str] | None = None,
) -> list[Prediction]:
    """Parse raw tool output for one snippet into merged predictions.

    Every emitted type string passes through
    :func:`typeexpr.decompose_to_type_set`; predictions are merged per
    site and returned sorted by site.
    """
    try:
        translator = _TRANSLATORS[translator_id]
    except KeyError:
        known = ", ".join(registered_translators())
        raise ConfigError(
            f"unknown translator {translator_id!r} (registered: {known})"
        ) from None
    return translator(raw, snippet, default_ranked, aliases)


def _translate_standard_json(
    raw: bytes,
    snippet: Snippet,
    default_ranked: bool,
    aliases: dict[str, str] | None,
) -> list[Prediction]:
    source = snippet.snippet_id
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise TranslationError(f"{source}: output is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise TranslationError(f"{source}: expected a JSON array of annotation objects")

    predictions: list[Prediction] = []
    for index, obj in enumerate(data):
        where = f"{source}: entry {index}"
        try:
            item = corpus_mod.parse_annotation_entry(
                obj, where=where, extra_keys=frozenset({"ranked"})
            )
        except CorpusError as exc:
            logger.warning("dropping prediction: %s", exc)
            continue
        ranked = item.get("ranked", default_ranked)
        if not isinstance(ranked, bool):
            logger.warning("dropping prediction: %s: 'ranked' must be a boolean", where)
            continue
        candidates: list[str] = []
        try:
            for text in item["types"]:
                for name in typeexpr.sorted_types(
                    typeexpr.decompose_to_type_set(text, aliases)
                ):
                    if name not in candidates:
                        candidates.append(name)
        except TypeParseError as exc:
            logger.warning("dropping prediction: %s: %s", where, exc)
            continue
        predictions.append(
            Prediction(site=item["site"], candidates=tuple(candidates), ranked=ranked)
        )
    return merge_predictions(predictions)


def merge_predictions(preds: list[Prediction]) -> list[Prediction]:
    """Merge predictions sharing a site; output is sorted by site.

    Ranked lists concatenate preserving first-occurrence order; unranked
    sets union. Mixing a ranked with an unranked prediction at one site
    is a consistency error.
    """
    grouped: dict[tuple, list[Prediction]] = {}
    for pred in preds:
        grouped.setdefault(pred.site.key(), []).append(pred)

    merged: list[Prediction] = []
    for key in sorted(grouped):
        group = grouped[key]
        flags = {p.ranked for p in group}
        if len(flags) > 1:
            raise TranslationError(
                f"conflicting ranked/unranked predictions at {group[0].site.describe()}"
            )
        ranked = flags.pop()
        candidates: list[str] = []
        for pred in group:
            for name in pred.candidates:
                if name not in candidates:
                    candidates.append(name)
        if not ranked:
            candidates = typeexpr.sorted_types(candidates)
        merged.append(
            Prediction(site=group[0].site, candidates=tuple(candidates), ranked=ranked)
        )
    return merged


register_translator("standard-json", _translate_standard_json)
register_translator("mock", _translate_standard_json)
