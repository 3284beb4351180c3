"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so raising the right one
matters at every layer.
"""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad file, degree mismatch, ...)."""


class ResourceError(RuntimeError):
    """A configured budget was exceeded; the message names the budget."""


class VerificationError(AssertionError):
    """An internal consistency check failed (signals a construction bug)."""
