"""Exception types shared across the package."""


class DataError(Exception):
    """Malformed or unusable input data (CLI exit code 3)."""


class TableMismatchError(Exception):
    """Quantile table metadata does not match the requested statistic (CLI exit code 4)."""
