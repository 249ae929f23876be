"""Exception hierarchy for the dddm package.

Exit-code mapping used by the CLI: validation problems (parameters or
input data) are distinct from I/O failures and internal errors.
"""


class DddmError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(DddmError):
    """A detection or split parameter violates its invariants."""


class DatasetFormatError(DddmError):
    """An input file does not conform to the dataset schema.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SpanExceedsLimitError(DddmError):
    """Input data covers more days than the concurrent-status span allows.

    Raised by single-span detection; the windowed variant handles such
    inputs, so the message points callers there.
    """

    def __init__(self, span_days: int, t_mhsu: int):
        self.span_days = span_days
        self.t_mhsu = t_mhsu
        super().__init__(
            f"data spans {span_days} days which exceeds t_mhsu={t_mhsu}; "
            "use the windowed variant (detect-broad / mhsu_status_broad), "
            "or pass force=True to compute anyway"
        )
