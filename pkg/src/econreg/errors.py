"""Exception hierarchy shared by every econreg module."""


class EconRegError(Exception):
    """Base class for analysis errors; the CLI maps these to exit code 1."""


class UnreadableFile(EconRegError):
    pass


class MalformedHeader(EconRegError):
    pass


class NonNumericCell(EconRegError):
    def __init__(self, row: int, column: str, text: str):
        self.row = row
        self.column = column
        self.text = text
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r} as a number")


class EmptyAfterDeletion(EconRegError):
    pass


class InvalidSeries(EconRegError, ValueError):
    pass


class EmptyIntersection(EconRegError):
    pass


class DuplicateName(EconRegError):
    pass


class UnknownVariable(EconRegError, KeyError):
    def __init__(self, name: str, available=()):
        self.name = name
        self.available = tuple(available)
        super().__init__(name)

    def __str__(self):
        return f"unknown variable {self.name!r}; available: {', '.join(self.available) or '(none)'}"


class TooFewObservations(EconRegError):
    pass


class LengthMismatch(EconRegError, ValueError):
    pass


class ZeroVariance(EconRegError):
    def __init__(self, name: str, context: str = ""):
        self.name = name
        msg = f"variable {name!r} is constant"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class DomainError(EconRegError, ValueError):
    pass


class RankDeficient(EconRegError):
    def __init__(self, columns):
        self.columns = tuple(columns)
        super().__init__(
            "design matrix is rank deficient; linearly dependent columns: " + ", ".join(self.columns)
        )


class ConstantPredictor(EconRegError):
    pass


class MissingPredictor(EconRegError, KeyError):
    def __str__(self):
        return f"missing value for predictor {self.args[0]!r}"


class DatasetMismatch(EconRegError):
    pass


class DegenerateRange(EconRegError):
    pass


class StageError(EconRegError):
    """An error raised inside one stage of the staged analysis."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage}: {type(cause).__name__}: {cause}")
