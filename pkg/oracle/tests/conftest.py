"""Shared paths and helpers for the trace-agent tests."""

from __future__ import annotations

import json
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]
CORPUS_DIR = REPO_ROOT / "corpus"


def write_snippet(root: Path, source: str, gt: list | None = None) -> Path:
    """Create a snippet directory (category/name layout) under ``root``."""
    snippet_dir = root / "functions" / "sample"
    snippet_dir.mkdir(parents=True, exist_ok=True)
    (snippet_dir / "main.py").write_text(source, encoding="utf-8")
    if gt is not None:
        (snippet_dir / "main_gt.json").write_text(
            json.dumps(gt, indent=4) + "\n", encoding="utf-8"
        )
    return snippet_dir
