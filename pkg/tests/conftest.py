"""Shared fixtures and helpers for the harness test suite."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from typebench.corpus import CATEGORIES, Corpus, load_corpus
from typebench.translator import PredictionSet, translate_raw_output

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS_DIR = REPO_ROOT / "corpus"
FIXTURES_DIR = Path(__file__).resolve().parent / "fixtures"
MOCK_OUTPUTS_DIR = FIXTURES_DIR / "mock_outputs"
GOLDEN_DIR = FIXTURES_DIR / "golden"


@pytest.fixture(scope="session")
def seed_corpus() -> Corpus:
    return load_corpus(CORPUS_DIR)


def write_snippet(root: Path, category: str, name: str, source: str, gt: list) -> Path:
    """Create one snippet directory with code and ground truth."""
    snippet_dir = root / category / name
    snippet_dir.mkdir(parents=True, exist_ok=True)
    (snippet_dir / "main.py").write_text(source, encoding="utf-8")
    (snippet_dir / "main_gt.json").write_text(
        json.dumps(gt, indent=4) + "\n", encoding="utf-8"
    )
    return snippet_dir


TINY_SOURCE = "def f(a):\n    return a\n\n\nx = f(1)\n"
TINY_GT = [
    {"file": "main.py", "line_number": 1, "col_offset": 4, "type": ["int"],
     "function": "f"},
    {"file": "main.py", "line_number": 1, "col_offset": 6, "type": ["int"],
     "function": "f", "parameter": "a"},
    {"file": "main.py", "line_number": 5, "col_offset": 0, "type": ["int"],
     "variable": "x"},
]


def make_tiny_corpus(root: Path, skip_category: str | None = None) -> Path:
    """A minimal corpus: every category present with one trivial snippet."""
    for category in CATEGORIES:
        if category == skip_category:
            continue
        write_snippet(root, category, "tiny", TINY_SOURCE, TINY_GT)
    return root


def load_perfect_predictions(corpus: Corpus) -> PredictionSet:
    """Ground truth fed straight back through the standard-json translator."""
    predictions = PredictionSet(tool="perfect")
    for snippet in corpus:
        raw = (snippet.directory / "main_gt.json").read_bytes()
        preds = translate_raw_output("standard-json", raw, snippet)
        predictions.predictions[snippet.snippet_id] = tuple(preds)
    return predictions


def load_mock_predictions(corpus: Corpus, mode: str) -> PredictionSet:
    """One of the checked-in degraded mock outputs, translated."""
    predictions = PredictionSet(tool=mode)
    for snippet in corpus:
        path = MOCK_OUTPUTS_DIR / mode / snippet.category / f"{snippet.name}.json"
        preds = translate_raw_output("standard-json", path.read_bytes(), snippet)
        predictions.predictions[snippet.snippet_id] = tuple(preds)
    return predictions
