"""Exception hierarchy shared by every module."""


class AdaptometryError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(AdaptometryError, ValueError):
    """Input file does not follow the expected layout (header, delimiters)."""


class DataError(AdaptometryError, ValueError):
    """Input is well-formed but its contents are unusable."""


class InsufficientHistory(DataError):
    """A window reaches back before the first tick of the panel."""


class ConfigError(AdaptometryError, ValueError):
    """Invalid parameters, presets or configuration files."""


class InvalidDepth(ConfigError):
    """Window depth below the minimum of 3."""
