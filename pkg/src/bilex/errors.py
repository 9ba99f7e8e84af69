"""Exception hierarchy shared by all bilex modules.

The CLI maps these onto exit codes: ConfigError (and its subclass
ParseError) mean the user gave us something unusable and exit with 2;
DataError means the inputs were well-formed but the data cannot support
the requested operation and exits with 1.
"""


class BilexError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(BilexError):
    """Invalid parameters or an inconsistent combination of options."""


class ParseError(ConfigError):
    """A malformed input file; carries the offending path and line number."""

    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


class DataError(BilexError):
    """Well-formed input that is unusable (empty corpus, no candidates, ...)."""
