"""Exception types shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
CompositionError -> 4.
"""


class BudgetDPError(Exception):
    """Base class for all package errors."""


class ConfigError(BudgetDPError):
    """Invalid parameter or option combination."""


class DataError(BudgetDPError):
    """Malformed input data (corpora, asset files, misaligned corpora)."""


class AssetParseError(DataError):
    """Asset file failed to parse; message carries the file and line number."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


class CompositionError(BudgetDPError):
    """A ledger failed the budget composition check."""


class AssetWarning(UserWarning):
    """Non-fatal oddity found while loading an asset file."""
