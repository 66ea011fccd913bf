"""Exception hierarchy shared by every module of the package."""


class PotbError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(PotbError, ValueError):
    pass


class NotPrimePower(PotbError, ValueError):
    pass


class SizeExceeded(PotbError, ValueError):
    pass


class BadIndex(PotbError, ValueError):
    pass


class DivisionByZero(PotbError, ZeroDivisionError):
    pass


class LevelOutsideGroup(PotbError, ValueError):
    pass


class LevelOutsideSet(PotbError, ValueError):
    pass


class BadParameter(PotbError, ValueError):
    pass


class ParameterRejected(PotbError, ValueError):
    """A construction produced a plan that failed its own certification.

    ``report`` carries the failing check so callers can show the witness.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class BadPartition(PotbError, ValueError):
    pass


class ShapeMismatch(PotbError, ValueError):
    pass


class PreconditionRepeatLevel(PotbError, ValueError):
    def __init__(self, message, block=None, factor=None):
        super().__init__(message)
        self.block = block
        self.factor = factor


class PlanFormatError(PotbError, ValueError):
    """Malformed plan or OA file; ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
