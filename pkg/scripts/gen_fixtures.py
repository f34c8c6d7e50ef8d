#!/usr/bin/env python3
"""Regenerate the checked-in mock tool outputs under tests/fixtures/.

The primary test suite runs without any live tools; it feeds these
standard-format files through the translator instead. Three degraded
variants are derived from the corpus ground truth:

  drop_fp         ground truth minus every function-parameter entry
  widen_any       every type set replaced by ["Any"]
  shuffle_ranked  ranked candidate lists with the correct type at
                  rank 2 (seeded decoys), for top-n testing

Run after any corpus change:  python scripts/gen_fixtures.py
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from typebench.corpus import classify_site, load_corpus, AnnotationKind  # noqa: E402
from typebench.typeexpr import sorted_types  # noqa: E402

DECOY_POOL = (
    "bytearray",
    "bytes",
    "complex",
    "frozenset",
    "memoryview",
    "range",
    "slice",
    "set",
)
SHUFFLE_SEED = 7
CORRECT_RANK = 2  # 1-based rank of the first correct type
MIN_CANDIDATES = 6  # keeps every tested n below the candidate count


def shuffle_ranked_candidates(types: frozenset[str], rng: random.Random) -> list[str]:
    """Decoys first, the correct types starting at CORRECT_RANK.

    For multi-type ground truth the remaining correct types land beyond
    rank 5, so only singleton sites can match within the tested window.
    """
    ordered = sorted_types(types)
    pool = [d for d in DECOY_POOL if d not in types]
    decoys = rng.sample(pool, 5)
    candidates = decoys[: CORRECT_RANK - 1] + [ordered[0]] + decoys[CORRECT_RANK - 1 : 4]
    candidates += ordered[1:] + decoys[4:]
    while len(candidates) < MIN_CANDIDATES:
        candidates.append(pool[len(candidates) % len(pool)])
    return candidates


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", default=str(REPO / "corpus"))
    parser.add_argument("--out", default=str(REPO / "tests" / "fixtures" / "mock_outputs"))
    args = parser.parse_args()

    bench = load_corpus(args.corpus)
    out_root = Path(args.out)
    written = 0
    for snippet in bench:
        drop_fp = []
        widen_any = []
        shuffle = []
        rng = random.Random(f"{SHUFFLE_SEED}:{snippet.snippet_id}")
        for entry in snippet.ground_truth:
            base = entry.site.to_dict()
            if classify_site(entry) is not AnnotationKind.FUNCTION_PARAMETER:
                drop_fp.append({**base, "type": sorted_types(entry.types)})
            widen_any.append({**base, "type": ["Any"]})
            shuffle.append(
                {
                    **base,
                    "type": shuffle_ranked_candidates(entry.types, rng),
                    "ranked": True,
                }
            )
        for mode, entries in (
            ("drop_fp", drop_fp),
            ("widen_any", widen_any),
            ("shuffle_ranked", shuffle),
        ):
            path = out_root / mode / snippet.category / f"{snippet.name}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(entries, indent=4) + "\n", encoding="utf-8")
            written += 1
    print(f"wrote {written} fixture files under {out_root}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
