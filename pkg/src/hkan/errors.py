"""Exception types raised across the package."""


class HkanError(Exception):
    """Base class for all errors raised by hkan."""


class InvalidInput(HkanError, ValueError):
    pass


class DimensionMismatch(HkanError, ValueError):
    pass


class DataError(HkanError):
    """Raised when a dataset file cannot be turned into a usable dataset."""


class EmptyDataset(DataError):
    pass


class ParseError(DataError):
    pass
