"""Exception taxonomy shared across the harness.

The CLI maps these onto exit codes: corpus problems are validation
failures (exit 1), adapter/runner problems are tool-execution failures
(exit 2), anything else is an internal error (exit 3).
"""

from __future__ import annotations


class TypeBenchError(Exception):
    """Base class for all harness errors."""


class CorpusError(TypeBenchError):
    """Corpus cannot be loaded: bad layout, bad JSON, or schema violation."""


class TypeParseError(TypeBenchError):
    """A type expression string could not be parsed.

    ``column`` is the 0-based offset of the offending token in the input.
    """

    def __init__(self, message: str, column: int) -> None:
        super().__init__(f"{message} (column {column})")
        self.column = column


class ClassificationError(TypeBenchError):
    """A ground-truth entry carries no discriminator field."""


class ConfigError(TypeBenchError):
    """Adapter or harness configuration is invalid or unresolvable."""


class RunnerError(TypeBenchError):
    """Tool execution could not be set up (distinct from per-snippet failures)."""


class TranslationError(TypeBenchError):
    """Raw tool output does not conform to the declared translator format."""


class ReportError(TypeBenchError):
    """Metric reports are mutually inconsistent and cannot be rendered together."""
