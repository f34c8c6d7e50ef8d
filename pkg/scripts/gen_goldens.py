#!/usr/bin/env python3
"""Regenerate the golden report files under tests/fixtures/golden/.

Only run after an intentional rendering change; review the diff by hand.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))
sys.path.insert(0, str(REPO / "tests"))

from golden_data import build_synthetic_reports  # noqa: E402
from typebench.report import (  # noqa: E402
    render_category_table,
    render_csv,
    render_top_n_table,
)

GOLDEN_DIR = REPO / "tests" / "fixtures" / "golden"


def main() -> int:
    reports = build_synthetic_reports()
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    (GOLDEN_DIR / "category_table.md").write_bytes(render_category_table(reports).body)
    (GOLDEN_DIR / "top_n_table.md").write_bytes(render_top_n_table(reports).body)
    (GOLDEN_DIR / "report.csv").write_bytes(render_csv(reports).body)
    print(f"wrote golden files under {GOLDEN_DIR}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
