"""Exception types shared across the pipeline."""


class DocrecError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DocrecError, ValueError):
    """A line of an input file could not be parsed."""

    def __init__(self, reason, line_no=None):
        self.reason = reason
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}{reason}")


class ContractError(DocrecError, ValueError):
    """An operation was called with input violating its preconditions."""


class FormatError(DocrecError, ValueError):
    """A persisted index file is corrupt or was not produced by the writer."""


class MissingMetadataError(DocrecError, KeyError):
    """A document referenced by the data has no metadata entry."""

    def __init__(self, doc_id):
        self.doc_id = doc_id
        super().__init__(doc_id)

    def __str__(self):
        return f"no metadata for document {self.doc_id!r}"
