"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inconsistent input (bad table, carrier mismatch, ...)."""


class CapacityError(RuntimeError):
    """A closure or enumeration grew past its configured cap."""


class PremiseError(InputError):
    """A conditional check was requested but its premise does not hold."""
