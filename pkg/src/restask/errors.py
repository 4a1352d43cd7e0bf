"""Exception types shared across the package."""


class RestaskError(Exception):
    pass


class DimensionMismatch(RestaskError, ValueError):
    """A structure references resources, tasks or positions the model does not have."""


class LengthMismatch(RestaskError, ValueError):
    pass


class NoFeasibleResource(RestaskError):
    """Raised by a construction step when no resource can take another task."""


class WrongArity(RestaskError, ValueError):
    pass


class InvalidConfig(RestaskError, ValueError):
    pass


class InvalidInstance(RestaskError, ValueError):
    pass


class NotRepresentable(RestaskError, ValueError):
    """The model uses code-only parts that the description file cannot carry."""


class UnsupportedFormat(RestaskError, ValueError):
    pass


class TooLarge(RestaskError):
    def __init__(self, count, limit):
        super().__init__(f"enumeration needs {count} structures, limit is {limit}")
        self.count = count
        self.limit = limit


class ParseError(RestaskError, ValueError):
    def __init__(self, line, reason, path=None):
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line}: {reason}")
        self.line = line
        self.reason = reason
        self.path = path
