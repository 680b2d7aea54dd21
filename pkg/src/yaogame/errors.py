"""Exception hierarchy shared by every module in the package."""


class YaoGameError(Exception):
    """Base class for all errors raised by yaogame."""


class ValidationError(YaoGameError, ValueError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ZeroOfflineCost(ValidationError):
    pass


class SubUnitRatio(ValidationError):
    pass


class NonFiniteEntry(ValidationError):
    pass


class InvalidDistribution(ValidationError):
    pass


class LabelMismatch(YaoGameError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class PivotLimitExceeded(YaoGameError, RuntimeError):
    pass


class NoFeasibleEqualizer(YaoGameError, ArithmeticError):
    pass


class SingularSystem(NoFeasibleEqualizer):
    """The equalization system is rank deficient and inconsistent."""


class NoSupportFound(YaoGameError, LookupError):
    pass


class EnumerationRefused(YaoGameError, RuntimeError):
    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"{count} candidate support pairs exceeds the limit of {limit}")
        self.count = count
        self.limit = limit


class InvalidSpec(ValidationError):
    pass


class InvalidRange(ValidationError):
    pass


class ParseError(YaoGameError, ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None) -> None:
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
