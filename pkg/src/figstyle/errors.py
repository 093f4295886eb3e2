"""Exception types shared across the toolkit.

The CLI maps these onto distinct exit codes: ConfigError -> 2,
DataError -> 3, anything else -> 1.
"""


class FigstyleError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(FigstyleError):
    """Invalid configuration: bad flags, missing paths, unknown config keys."""


class DataError(FigstyleError):
    """Invalid data: schema violations, duplicate ids, malformed records."""
