"""Exception hierarchy shared by all pipeline modules."""


class GhalibError(Exception):
    """Base class for all pipeline errors."""


class DataError(GhalibError):
    """Invalid input data: bad corpus rows, mismatched artifacts, bad files.

    CLI maps this family to exit status 2.
    """


class CorpusError(DataError):
    pass


class DuplicateIdError(CorpusError):
    def __init__(self, record_id: str, line: int | None = None):
        self.record_id = record_id
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate record id {record_id!r}{where}")


class UnknownLabelError(CorpusError):
    def __init__(self, label: str, line: int):
        self.label = label
        self.line = line
        super().__init__(f"unknown label name {label!r} at line {line}")


class GhemFormatError(DataError):
    """Embedding file rejected; ``reason`` is one of the fixed codes:

    bad_magic, bad_version, row_mismatch, digest_mismatch, truncated,
    nonfinite.
    """

    def __init__(self, reason: str, detail: str):
        self.reason = reason
        super().__init__(f"{reason}: {detail}")


class TrainingError(GhalibError):
    """Training aborted (e.g. non-finite loss); carries the step index."""

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message)
