"""Exception types shared across the scholarlens modules."""


class ScholarlensError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ScholarlensError):
    """A document could not be parsed; carries line/position when known."""

    def __init__(self, message, line=None, pos=None):
        self.line = line
        self.pos = pos
        if line is not None:
            message = f"{message} (line {line}" + (f", pos {pos})" if pos is not None else ")")
        super().__init__(message)


class CycleError(ScholarlensError):
    """The subclass graph contains a cycle; names one node on it."""

    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"cycle detected through class {node_id!r}")


class DanglingParentError(ScholarlensError):
    """A node references a parent id that is not declared."""

    def __init__(self, missing_id, child_id=None):
        self.missing_id = missing_id
        detail = f"unknown parent class {missing_id!r}"
        if child_id:
            detail += f" referenced by {child_id!r}"
        super().__init__(detail)


class DuplicateIdError(ScholarlensError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"duplicate class id {node_id!r}")


class UnknownClassError(ScholarlensError):
    def __init__(self, node_id):
        self.node_id = node_id
        super().__init__(f"unknown class {node_id!r}")


class EmptyQueryError(ScholarlensError):
    def __init__(self, detail="query is empty after normalization"):
        super().__init__(detail)


class RuleCompileError(ScholarlensError):
    """An extraction rule failed to compile."""


class UnsupportedMediaError(ScholarlensError):
    """The ruleset does not handle the document's media kind."""


class ConfigError(ScholarlensError):
    """A configuration file is missing, malformed, or inconsistent."""


class UnknownSourceError(ScholarlensError):
    def __init__(self, source_id):
        self.source_id = source_id
        super().__init__(f"unknown source {source_id!r}")


class UnknownColumnError(ScholarlensError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"unknown column {column!r}")


class CacheError(ScholarlensError):
    """Reading or writing the on-disk cache failed."""


class RequestTimeoutError(ScholarlensError):
    """An HTTP fetch exceeded its configured timeout."""


class HttpStatusError(ScholarlensError):
    def __init__(self, status, url=None):
        self.status = status
        self.url = url
        detail = f"HTTP status {status}"
        if url:
            detail += f" for {url}"
        super().__init__(detail)
