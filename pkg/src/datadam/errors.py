"""Exception hierarchy shared across the package."""


class DataDamError(Exception):
    """Base class for every error raised by datadam."""


class InvalidParamsError(DataDamError, ValueError):
    """A parameter set violates one of its invariants.

    ``field`` names the offending attribute so callers (and the CLI) can
    report it without parsing the message.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class InvalidRateError(DataDamError, ValueError):
    pass


class CorruptStateError(DataDamError, ValueError):
    pass


class EmptyRecordsError(DataDamError, ValueError):
    pass


class DegenerateWeightsError(DataDamError, ValueError):
    pass


class UnstableQueueError(DataDamError, ValueError):
    """Arrival rate is at or above the service rate; the queue diverges."""


class ScenarioFileError(DataDamError):
    """Base for problems with a scenario document."""


class ScenarioParseError(ScenarioFileError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownFieldError(ScenarioFileError):
    def __init__(self, section: str, names):
        self.section = section
        self.names = sorted(names)
        super().__init__(f"unknown field(s) in {section}: {', '.join(self.names)}")


class ScenarioValidationError(ScenarioFileError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
