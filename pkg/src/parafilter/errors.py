"""Exception types shared across the package.

The CLI maps these to exit codes: DataError (and subclasses) exit 1,
configuration/contract errors (ValueError) exit 2.
"""


class ParafilterError(Exception):
    """Base class for package errors."""


class DataError(ParafilterError):
    """Invalid input data (files, records, stores)."""


class CorpusFormatError(DataError):
    """A corpus file could not be parsed.

    Carries the path and 1-based line number of the offending record.
    """

    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class EmbeddingFormatError(DataError):
    """An embedding store file is malformed (bad magic, truncation, ...)."""


class MissingEmbeddingError(DataError):
    """Scoring required embeddings that are absent from the store."""

    def __init__(self, keys):
        self.keys = list(keys)
        shown = ", ".join(self.keys[:5])
        more = "" if len(self.keys) <= 5 else f" (+{len(self.keys) - 5} more)"
        super().__init__(f"embedding store is missing ids: {shown}{more}")
