"""Deterministic mock tools-under-test, derived from ground truth.

Four modes, each a pure transformation of the snippet's side-car file:

  perfect         emit the ground truth verbatim
  drop-fp         omit every function-parameter entry
  widen-any       replace every type set with ["Any"]
  shuffle-ranked  ranked candidate lists seeding the first correct type
                  at a fixed rank among decoys; extra correct types land
                  beyond rank 5 so only singleton sites match early

The harness invokes these through its normal adapter contract (write
the annotations to the given output file), which makes full-pipeline
testing possible without any real tool.
"""

from __future__ import annotations

import random
from pathlib import Path

from .groundtruth import (
    GROUND_TRUTH_FILENAME,
    load_entries,
    serialize_entries,
)
from .tracer import OracleError

MOCK_MODES = ("perfect", "drop-fp", "widen-any", "shuffle-ranked")

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
MIN_CANDIDATES = 6


def _is_parameter(entry: dict) -> bool:
    return entry.get("parameter") is not None


def shuffle_ranked_candidates(
    types: list[str], rng: random.Random, rank: int
) -> list[str]:
    ordered = sorted(set(types))
    pool = [d for d in DECOY_POOL if d not in ordered]
    decoys = rng.sample(pool, 5)
    candidates = decoys[: rank - 1] + [ordered[0]] + decoys[rank - 1 : 4]
    candidates += ordered[1:] + decoys[4:]
    while len(candidates) < MIN_CANDIDATES:
        candidates.append(pool[len(candidates) % len(pool)])
    return candidates


def mock_entries(
    mode: str, entries: list[dict], *, snippet_id: str, seed: int = 7, rank: int = 2
) -> list[dict]:
    """Transform ground-truth entries according to ``mode``."""
    if mode == "perfect":
        return [dict(entry) for entry in entries]
    if mode == "drop-fp":
        return [dict(entry) for entry in entries if not _is_parameter(entry)]
    if mode == "widen-any":
        return [{**entry, "type": ["Any"]} for entry in entries]
    if mode == "shuffle-ranked":
        if rank < 1 or rank > 4:
            raise OracleError(f"shuffle rank must be between 1 and 4, got {rank}")
        rng = random.Random(f"{seed}:{snippet_id}")
        return [
            {
                **entry,
                "type": shuffle_ranked_candidates(entry["type"], rng, rank),
                "ranked": True,
            }
            for entry in entries
        ]
    raise OracleError(f"unknown mock mode {mode!r} (known: {', '.join(MOCK_MODES)})")


def mock_tool_predict(
    mode: str,
    snippet_dir: str | Path,
    out_file: str | Path,
    *,
    seed: int = 7,
    rank: int = 2,
) -> Path:
    """Read the snippet's ground truth, transform it, write the output file."""
    snippet_dir = Path(snippet_dir)
    gt_path = snippet_dir / GROUND_TRUTH_FILENAME
    if not gt_path.is_file():
        raise OracleError(f"{snippet_dir}: no ground truth to mock from")
    snippet_id = f"{snippet_dir.parent.name}/{snippet_dir.name}"
    entries = mock_entries(
        mode, load_entries(gt_path), snippet_id=snippet_id, seed=seed, rank=rank
    )
    out_path = Path(out_file)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(serialize_entries(entries), encoding="utf-8")
    return out_path
