class StructRankError(Exception):
    """Base class for all errors raised by structrank."""


class ParseError(StructRankError, ValueError):
    """Malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ConvergenceError(StructRankError, RuntimeError):
    def __init__(self, message, n_iter):
        self.n_iter = n_iter
        super().__init__(f"{message} (after {n_iter} iterations)")


class GenerationError(StructRankError, ValueError):
    pass
