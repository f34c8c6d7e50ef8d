"""Fixed synthetic metric reports backing the golden-file tests.

Regenerate the golden files after an intentional rendering change:

    python scripts/gen_goldens.py

then review the diff by hand before committing.
"""

from __future__ import annotations

from typebench.analyzer import DiffEntry, MetricsReport, SnippetVerdict
from typebench.corpus import CATEGORIES, AnnotationSite


def _report(tool: str, seed: int, ranked: bool) -> MetricsReport:
    exact_by_category = {}
    for index, category in enumerate(CATEGORIES):
        exact_by_category[category] = {
            "FR": (index * seed) % 5,
            "FP": (index + seed) % 3,
            "LV": (index * 2 + seed) % 7,
        }
    exact_by_kind = {
        code: sum(kinds[code] for kinds in exact_by_category.values())
        for code in ("FR", "FP", "LV")
    }
    exact_total = sum(exact_by_kind.values())
    top_n = {
        1: {**exact_by_kind, "total": exact_total},
    }
    if ranked:
        for n, bump in ((3, 10), (5, 13)):
            counts = {code: exact_by_kind[code] + bump for code in ("FR", "FP", "LV")}
            top_n[n] = {**counts, "total": sum(counts.values())}
    site = AnnotationSite(file="main.py", line_number=3, col_offset=0, variable="x")
    return MetricsReport(
        tool=tool,
        ranked=ranked,
        snippet_count=54,
        gt_total=300,
        gt_by_kind={"FR": 100, "FP": 50, "LV": 150},
        exact_by_category=exact_by_category,
        exact_by_kind=exact_by_kind,
        exact_total=exact_total,
        precision=0.75 + seed / 100,
        recall=0.5 + seed / 100,
        sound_count=20 + seed,
        complete_count=30 + seed,
        snippet_verdicts=[
            SnippetVerdict("args/one", sound=True, complete=bool(seed % 2)),
            SnippetVerdict("dicts/two", sound=False, complete=True),
        ],
        top_n=top_n,
        missing=[DiffEntry("args/one", site, ("callable",))],
        mismatched=[DiffEntry("args/one", site, ("str",))],
        ignored_sites=[{"snippet": "args/one", "site": site.to_dict()}],
    )


def build_synthetic_reports() -> list[MetricsReport]:
    return [_report("alpha", 3, ranked=False), _report("beta", 1, ranked=True)]
