"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line can map failures to
distinct process exit statuses without inspecting messages.
"""


class CmlvError(Exception):
    exit_code = 1


class InputError(CmlvError, ValueError):
    """Invalid user input (bad D, bad prime, out-of-range arguments)."""

    exit_code = 2

    def __init__(self, message, code="invalid-input"):
        super().__init__(message)
        self.code = code


class VerificationError(CmlvError):
    """An exact or numeric consistency check failed."""

    exit_code = 3


class PrecisionError(VerificationError):
    """Numeric rounding could not be certified within the precision cap."""


class BundleError(CmlvError):
    """Malformed, mismatched or unverifiable bundle file."""

    exit_code = 4


class BundleNotFoundError(BundleError, FileNotFoundError):
    exit_code = 5
