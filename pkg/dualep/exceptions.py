"""Exception roots shared by every dualep module.

The CLI maps :class:`ParameterError` to exit code 2 and
:class:`SelfCheckError` to exit code 3.
"""


class DualEPError(Exception):
    """Base exception for dualep errors."""


class ParameterError(DualEPError):
    """Exception raised for invalid inputs or inadmissible parameters."""


class SelfCheckError(DualEPError):
    """Exception raised when a numerical oracle disagrees with a closed form."""
