"""Exception hierarchy. Everything derives from ``ArimaError`` (a ValueError)."""


class ArimaError(ValueError):
    """Base class for all arimakit errors."""


class UnusableSeriesError(ArimaError):
    """The series has no present values."""


class OrderTooHighError(ArimaError):
    pass


class DegenerateSeriesError(ArimaError):
    """Zero-variance input where a correlation or variance is required."""


class LagRangeError(ArimaError):
    pass


class NumericalDegeneracyError(ArimaError):
    pass


class InsufficientDataError(ArimaError):
    pass


class InvalidParamsError(ArimaError):
    """Parameters violate stationarity, invertibility or positivity."""


class NonIdentifiableModelError(ArimaError):
    pass


class NonpositiveDofError(ArimaError):
    pass


class NoViableModelError(ArimaError):
    def __init__(self, failures):
        self.failures = list(failures)
        detail = "; ".join(f"{order}: {reason}" for order, reason in self.failures)
        super().__init__(f"no viable model in grid ({detail})")


class HorizonError(ArimaError):
    pass


class CSVParseError(ArimaError):
    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
