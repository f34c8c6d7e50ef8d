"""Acceptance gate: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
These use only checked-in standard-format fixture files (and the corpus
ground truth itself); no live tools are required.
"""

from __future__ import annotations

import json
import time

import pytest

from conftest import CORPUS_DIR, load_mock_predictions, load_perfect_predictions
from test_analyzer import naive_snippet_metrics
from typebench.analyzer import evaluate_tool, format_percentage
from typebench.corpus import (
    CATEGORIES,
    Corpus,
    builtin_profiles,
    check_profile,
    corpus_stats,
    load_corpus,
)
from typebench.translator import PredictionSet


def _walk_gt_files():
    """Independent recount straight off the corpus JSON files."""
    for gt_path in sorted(CORPUS_DIR.glob("*/*/main_gt.json")):
        snippet_id = f"{gt_path.parent.parent.name}/{gt_path.parent.name}"
        yield snippet_id, json.loads(gt_path.read_text(encoding="utf-8"))


def test_perfect_tool_fixpoint(seed_corpus):
    start = time.perf_counter()
    predictions = load_perfect_predictions(seed_corpus)
    report = evaluate_tool(seed_corpus, predictions)
    elapsed = time.perf_counter() - start

    total = sum(len(entries) for _, entries in _walk_gt_files())
    assert report.exact_total == total
    assert report.precision == 1.0
    assert report.recall == 1.0
    assert report.sound_count == len(seed_corpus)
    assert report.complete_count == len(seed_corpus)
    assert report.missing == [] and report.mismatched == []
    assert elapsed < 10.0
    print(f"\nPASS perfect-tool fixpoint: {report.exact_total}/{total} exact, "
          f"precision=recall=1.0, {elapsed:.2f}s")


def test_degraded_tool_arithmetic(seed_corpus):
    # independent recount of FP annotations from the raw JSON files
    total = fp_count = 0
    for _, entries in _walk_gt_files():
        total += len(entries)
        fp_count += sum(1 for entry in entries if "parameter" in entry)

    drop_fp = evaluate_tool(seed_corpus, load_mock_predictions(seed_corpus, "drop_fp"))
    assert drop_fp.exact_total == total - fp_count

    widen = evaluate_tool(seed_corpus, load_mock_predictions(seed_corpus, "widen_any"))
    assert widen.exact_total == 0
    annotated = {
        snippet.snippet_id for snippet in seed_corpus if snippet.ground_truth
    }
    for verdict in widen.snippet_verdicts:
        if verdict.snippet in annotated:
            assert not verdict.sound
            assert not verdict.complete  # predictions exist and add "Any"
        else:
            assert verdict.sound and verdict.complete
    print(f"\nPASS degraded-tool arithmetic: drop-FP exact "
          f"{drop_fp.exact_total} == {total}-{fp_count}, widen-Any exact 0")


def test_top_n_laws_on_shuffle_ranked(seed_corpus):
    predictions = load_mock_predictions(seed_corpus, "shuffle_ranked")
    report = evaluate_tool(seed_corpus, predictions, ns=(1, 3, 5))
    matches = {n: report.top_n[n]["total"] for n in (1, 3, 5)}
    assert matches[1] <= matches[3] <= matches[5]
    assert matches[1] == 0  # correct type is seeded at rank 2

    singleton_sites = sum(
        1
        for _, entries in _walk_gt_files()
        for entry in entries
        if len(entry["type"]) == 1
    )
    assert matches[3] == singleton_sites
    assert matches[5] == singleton_sites
    print(f"\nPASS top-n laws: matches(1)=0 <= matches(3)={matches[3]} "
          f"= matches(5)={matches[5]} = singleton sites")


def test_percentage_display_matches_published_bars():
    expected = {564: 66, 405: 47, 369: 43, 250: 29, 193: 22, 157: 18}
    for numer, want in expected.items():
        assert format_percentage(numer, 845) == want
    print("\nPASS percentage display: 564->66 405->47 369->43 250->29 193->22 157->18")


def test_corpus_structure_and_profiles(seed_corpus):
    assert sorted(seed_corpus.by_category()) == sorted(CATEGORIES)
    stats = corpus_stats(seed_corpus)
    assert stats.fr + stats.fp + stats.lv == stats.annotation_count
    assert sum(c.total for c in stats.categories.values()) == stats.annotation_count

    # the full-scale profile accepts exactly 154/845/239/88/518 ...
    from test_corpus import _full_scale_stats

    full = builtin_profiles()["full"]
    exact = _full_scale_stats()
    assert (exact.snippet_count, exact.annotation_count, exact.fr, exact.fp, exact.lv) \
        == (154, 845, 239, 88, 518)
    assert check_profile(exact, full) == []

    # ... and rejects every single-count deviation
    for key in ("snippets", "annotations", "fr", "fp", "lv"):
        tweaked_totals = dict(full.totals)
        tweaked_totals[key] += 1
        tweaked = type(full)(
            name="full+1",
            category_snippets=full.category_snippets,
            totals=tweaked_totals,
        )
        assert check_profile(exact, tweaked)
    print(f"\nPASS corpus structure: 18 categories, "
          f"{stats.annotation_count} annotations partitioned "
          f"{stats.fr}/{stats.fp}/{stats.lv}, full profile pins 154/845/239/88/518")


def test_brute_force_oracle_equivalence(seed_corpus):
    checked = 0
    for mode in ("perfect", "drop_fp", "widen_any", "shuffle_ranked"):
        if mode == "perfect":
            predictions = load_perfect_predictions(seed_corpus)
        else:
            predictions = load_mock_predictions(seed_corpus, mode)
        for snippet in seed_corpus:
            if len(snippet.ground_truth) > 5:
                continue
            preds = predictions.for_snippet(snippet.snippet_id)
            naive = naive_snippet_metrics(snippet, preds)
            single = Corpus(root=seed_corpus.root, snippets=(snippet,))
            subset = PredictionSet(
                tool=mode, predictions={snippet.snippet_id: tuple(preds)}
            )
            report = evaluate_tool(single, subset)
            assert report.exact_by_kind == naive["exact"]
            assert report.precision == naive["precision"]
            assert report.recall == naive["recall"]
            assert report.sound_count == int(naive["sound"])
            assert report.complete_count == int(naive["complete"])
            assert [(d.site, d.types) for d in report.missing] == naive["missing"]
            assert [(d.site, d.types) for d in report.mismatched] == naive["mismatched"]
            for n in (1, 3, 5):
                assert report.top_n[n]["total"] == sum(naive["top"][n].values())
            checked += 1
    assert checked >= 40
    print(f"\nPASS brute-force oracle equivalence: {checked} "
          f"snippet x mode combinations matched exactly")


def test_no_output_semantics(seed_corpus):
    # a tool that produced output for k of N snippets
    k = 10
    perfect = load_perfect_predictions(seed_corpus)
    produced = sorted(perfect.predictions)[:k]
    partial = PredictionSet(
        tool="partial",
        predictions={sid: perfect.predictions[sid] for sid in produced},
    )
    report = evaluate_tool(seed_corpus, partial)
    n = len(seed_corpus)

    silent = [v for v in report.snippet_verdicts if v.snippet not in produced]
    assert len(silent) == n - k
    assert all(not v.sound for v in silent)
    assert all(v.complete for v in silent)  # vacuously true
    assert report.complete_count >= n - k
    assert report.sound_count == k
    print(f"\nPASS no-output semantics: {n - k} silent snippets all "
          f"unsound + vacuously complete, {k} produced snippets sound")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-s"]))
