"""Benchmark harness for comparing Python type inference tools.

The pipeline has five stages, each usable on its own:

  corpus      load and validate the micro-benchmark (snippets + ground truth)
  runner      execute tools-under-test over the corpus, collect raw output
  translator  normalize raw tool output into standard predictions
  analyzer    score predictions against ground truth
  report      render comparison tables (markdown / CSV / JSON)

``typebench.cli`` wires the stages into a single command-line entry point.
"""

__version__ = "0.1.0"
