class LexisError(RuntimeError):
    """Raised for library errors. ``code`` is the error name, e.g. "IoError"."""

    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class QueryError(LexisError):
    """A query answered with a non-200 status."""

    def __init__(self, status, code, message):
        super().__init__(code, message)
        self.status = status
