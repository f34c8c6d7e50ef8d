"""Scoring of predictions against ground truth.

Metrics, all computed per tool:

  exact matches        predicted type set equals the ground-truth set,
                       bucketed by category and by kind (FR/FP/LV)
  precision / recall   micro-averaged over type instances
  soundness            per snippet: no ground-truth type omitted
  completeness         per snippet: no type beyond the ground truth
                       (vacuously true when nothing was predicted)
  top-n matches        for ranked candidate lists
  missing report       ground-truth types with no covering prediction
  mismatch report      predicted types absent from the ground truth

Alignment joins on the full site key. Predictions at sites that do not
appear in the ground truth are ignored by every metric (the ground truth
is exhaustive per snippet); they are listed in the report for
transparency. A snippet with no predictions at all scores zero exact,
sound=false, complete=true.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .corpus import (
    AnnotationKind,
    AnnotationSite,
    Corpus,
    GroundTruthEntry,
    KINDS,
    classify_site,
)
from .translator import Prediction, PredictionSet

_KIND_CODES = tuple(kind.value for kind in KINDS)


@dataclass(frozen=True)
class AnnotationVerdict:
    """Comparison outcome for one ground-truth site."""

    site: AnnotationSite
    kind: AnnotationKind
    gt_types: frozenset[str]
    pred_types: frozenset[str] | None
    exact: bool


@dataclass(frozen=True)
class SnippetVerdict:
    """Per-snippet soundness/completeness booleans."""

    snippet: str
    sound: bool
    complete: bool

    def to_dict(self) -> dict:
        return {"snippet": self.snippet, "sound": self.sound, "complete": self.complete}

    @classmethod
    def from_dict(cls, data: Mapping) -> "SnippetVerdict":
        return cls(snippet=data["snippet"], sound=data["sound"], complete=data["complete"])


@dataclass(frozen=True)
class DiffEntry:
    """A site plus the types missing from (or mismatching) a prediction."""

    snippet: str
    site: AnnotationSite
    types: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"snippet": self.snippet, "site": self.site.to_dict(), "types": list(self.types)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "DiffEntry":
        return cls(
            snippet=data["snippet"],
            site=AnnotationSite.from_dict(data["site"]),
            types=tuple(data["types"]),
        )


def align(
    gt: Sequence[GroundTruthEntry], preds: Sequence[Prediction]
) -> list[AnnotationVerdict]:
    """Join ground truth with predictions on the full site key.

    Ground-truth entries with no prediction get ``pred_types=None``;
    predictions at unknown sites produce no verdict.
    """
    by_site = {p.site.key(): p for p in preds}
    verdicts: list[AnnotationVerdict] = []
    for entry in gt:
        pred = by_site.get(entry.site.key())
        pred_types = pred.candidate_set() if pred is not None else None
        verdicts.append(
            AnnotationVerdict(
                site=entry.site,
                kind=classify_site(entry),
                gt_types=entry.types,
                pred_types=pred_types,
                exact=pred_types is not None and pred_types == entry.types,
            )
        )
    return verdicts


def unmatched_predictions(
    gt: Sequence[GroundTruthEntry], preds: Sequence[Prediction]
) -> list[Prediction]:
    """Predictions at sites absent from the ground truth (ignored by metrics)."""
    known = {entry.site.key() for entry in gt}
    return [p for p in preds if p.site.key() not in known]


def score_exact(verdicts: Iterable[AnnotationVerdict]) -> dict[str, int]:
    """Exact-match counts per kind code (FR/FP/LV)."""
    counts = {code: 0 for code in _KIND_CODES}
    for verdict in verdicts:
        if verdict.exact:
            counts[verdict.kind.value] += 1
    return counts


def score_top_n(
    gt: Sequence[GroundTruthEntry], preds: Sequence[Prediction], n: int
) -> dict[str, int]:
    """Top-n match counts per kind code.

    A ranked prediction matches at ``n`` iff the ground-truth set is
    contained in the first ``min(n, len)`` candidates and, when ``n``
    reaches the candidate count, the whole candidate set equals the
    ground truth. Unranked candidate lists cannot be truncated, so they
    match iff the full set equals the ground truth, independent of ``n``.
    """
    if n < 1:
        raise ValueError(f"top-n rank must be >= 1, got {n}")
    by_site = {p.site.key(): p for p in preds}
    counts = {code: 0 for code in _KIND_CODES}
    for entry in gt:
        pred = by_site.get(entry.site.key())
        if pred is None:
            continue
        if pred.ranked:
            window = frozenset(pred.candidates[: min(n, len(pred.candidates))])
            matched = entry.types <= window and (
                n < len(pred.candidates) or pred.candidate_set() == entry.types
            )
        else:
            matched = pred.candidate_set() == entry.types
        if matched:
            counts[classify_site(entry).value] += 1
    return counts


def precision_recall(
    verdicts: Iterable[AnnotationVerdict],
) -> tuple[float | None, float | None]:
    """Micro-averaged precision and recall over type instances.

    TP sums ``|gt & pred|`` per site; precision divides by the number of
    predicted types (None when nothing was predicted), recall by the
    number of ground-truth types.
    """
    tp = 0
    predicted = 0
    actual = 0
    for verdict in verdicts:
        actual += len(verdict.gt_types)
        if verdict.pred_types is not None:
            predicted += len(verdict.pred_types)
            tp += len(verdict.gt_types & verdict.pred_types)
    precision = tp / predicted if predicted else None
    recall = tp / actual if actual else None
    return precision, recall


def snippet_soundness(verdicts: Iterable[AnnotationVerdict]) -> bool:
    """True iff every ground-truth type at every site is covered."""
    return all(
        v.pred_types is not None and v.gt_types <= v.pred_types for v in verdicts
    )


def snippet_completeness(verdicts: Iterable[AnnotationVerdict]) -> bool:
    """True iff no prediction adds types beyond the ground truth.

    Zero predictions are vacuously complete: a tool that stays silent
    never reports an incorrect type.
    """
    return all(v.pred_types is None or v.pred_types <= v.gt_types for v in verdicts)


def diff_reports(
    snippet_id: str, verdicts: Iterable[AnnotationVerdict]
) -> tuple[list[DiffEntry], list[DiffEntry]]:
    """Missing (unreported ground truth) and mismatched (extraneous) types."""
    missing: list[DiffEntry] = []
    mismatched: list[DiffEntry] = []
    for verdict in verdicts:
        covered = verdict.pred_types or frozenset()
        lost = verdict.gt_types - covered
        if lost:
            missing.append(DiffEntry(snippet_id, verdict.site, tuple(sorted(lost))))
        extra = covered - verdict.gt_types
        if extra:
            mismatched.append(DiffEntry(snippet_id, verdict.site, tuple(sorted(extra))))
    return missing, mismatched


def format_percentage(numer: int, denom: int) -> int:
    """Floor percentage as displayed in the comparison tables."""
    if denom <= 0:
        raise ValueError(f"percentage denominator must be positive, got {denom}")
    return 100 * numer // denom


@dataclass
class MetricsReport:
    """Complete scoring of one tool over the corpus; JSON round-trippable."""

    tool: str
    ranked: bool
    snippet_count: int
    gt_total: int
    gt_by_kind: dict[str, int]
    exact_by_category: dict[str, dict[str, int]]
    exact_by_kind: dict[str, int]
    exact_total: int
    precision: float | None
    recall: float | None
    sound_count: int
    complete_count: int
    snippet_verdicts: list[SnippetVerdict] = field(default_factory=list)
    top_n: dict[int, dict[str, int]] = field(default_factory=dict)
    missing: list[DiffEntry] = field(default_factory=list)
    mismatched: list[DiffEntry] = field(default_factory=list)
    ignored_sites: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tool": self.tool,
            "ranked": self.ranked,
            "snippet_count": self.snippet_count,
            "gt_total": self.gt_total,
            "gt_by_kind": dict(self.gt_by_kind),
            "exact_by_category": {
                cat: dict(kinds) for cat, kinds in self.exact_by_category.items()
            },
            "exact_by_kind": dict(self.exact_by_kind),
            "exact_total": self.exact_total,
            "precision": self.precision,
            "recall": self.recall,
            "sound_count": self.sound_count,
            "complete_count": self.complete_count,
            "snippet_verdicts": [v.to_dict() for v in self.snippet_verdicts],
            "top_n": {str(n): dict(counts) for n, counts in sorted(self.top_n.items())},
            "missing": [d.to_dict() for d in self.missing],
            "mismatched": [d.to_dict() for d in self.mismatched],
            "ignored_sites": list(self.ignored_sites),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MetricsReport":
        return cls(
            tool=data["tool"],
            ranked=data["ranked"],
            snippet_count=data["snippet_count"],
            gt_total=data["gt_total"],
            gt_by_kind=dict(data["gt_by_kind"]),
            exact_by_category={
                cat: dict(kinds) for cat, kinds in data["exact_by_category"].items()
            },
            exact_by_kind=dict(data["exact_by_kind"]),
            exact_total=data["exact_total"],
            precision=data["precision"],
            recall=data["recall"],
            sound_count=data["sound_count"],
            complete_count=data["complete_count"],
            snippet_verdicts=[
                SnippetVerdict.from_dict(v) for v in data["snippet_verdicts"]
            ],
            top_n={
                int(n): dict(counts) for n, counts in data["top_n"].items()
            },
            missing=[DiffEntry.from_dict(d) for d in data["missing"]],
            mismatched=[DiffEntry.from_dict(d) for d in data["mismatched"]],
            ignored_sites=[dict(s) for s in data["ignored_sites"]],
        )


def evaluate_tool(
    corpus: Corpus, predictions: PredictionSet, ns: Sequence[int] = (1, 3, 5)
) -> MetricsReport:
    """Score one tool's predictions over the whole corpus.

    Snippets absent from ``predictions`` (tool crashed, timed out, or
    stayed silent) are not excluded from anything: they contribute zero
    exact matches, sound=false, and a vacuous complete=true.
    """
    ns = sorted(set(ns))
    if not ns:
        raise ValueError("at least one top-n rank is required")

    any_ranked = any(
        p.ranked for preds in predictions.predictions.values() for p in preds
    )
    exact_by_category: dict[str, dict[str, int]] = {}
    exact_by_kind = {code: 0 for code in _KIND_CODES}
    gt_by_kind = {code: 0 for code in _KIND_CODES}
    top_counts = {n: {code: 0 for code in _KIND_CODES} for n in ns}
    snippet_verdicts: list[SnippetVerdict] = []
    missing: list[DiffEntry] = []
    mismatched: list[DiffEntry] = []
    ignored: list[dict] = []
    tp = 0
    predicted_types = 0
    actual_types = 0

    for snippet in corpus:
        preds = predictions.for_snippet(snippet.snippet_id)
        verdicts = align(snippet.ground_truth, preds)

        bucket = exact_by_category.setdefault(
            snippet.category, {code: 0 for code in _KIND_CODES}
        )
        for code, count in score_exact(verdicts).items():
            bucket[code] += count
            exact_by_kind[code] += count
        for verdict in verdicts:
            gt_by_kind[verdict.kind.value] += 1
            actual_types += len(verdict.gt_types)
            if verdict.pred_types is not None:
                predicted_types += len(verdict.pred_types)
                tp += len(verdict.gt_types & verdict.pred_types)

        for n in ns:
            for code, count in score_top_n(snippet.ground_truth, preds, n).items():
                top_counts[n][code] += count

        snippet_verdicts.append(
            SnippetVerdict(
                snippet=snippet.snippet_id,
                sound=snippet_soundness(verdicts),
                complete=snippet_completeness(verdicts),
            )
        )
        snippet_missing, snippet_mismatched = diff_reports(snippet.snippet_id, verdicts)
        missing.extend(snippet_missing)
        mismatched.extend(snippet_mismatched)
        for pred in unmatched_predictions(snippet.ground_truth, preds):
            ignored.append({"snippet": snippet.snippet_id, "site": pred.site.to_dict()})

    top_n = {
        n: {**counts, "total": sum(counts.values())} for n, counts in top_counts.items()
    }
    return MetricsReport(
        tool=predictions.tool,
        ranked=any_ranked,
        snippet_count=len(corpus),
        gt_total=sum(gt_by_kind.values()),
        gt_by_kind=gt_by_kind,
        exact_by_category=exact_by_category,
        exact_by_kind=exact_by_kind,
        exact_total=sum(exact_by_kind.values()),
        precision=tp / predicted_types if predicted_types else None,
        recall=tp / actual_types if actual_types else None,
        sound_count=sum(1 for v in snippet_verdicts if v.sound),
        complete_count=sum(1 for v in snippet_verdicts if v.complete),
        snippet_verdicts=snippet_verdicts,
        top_n=top_n,
        missing=missing,
        mismatched=mismatched,
        ignored_sites=ignored,
    )
