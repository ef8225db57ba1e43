"""Error taxonomy shared across the package.

Everything raised on purpose derives from BoolspError so the CLI can map
domain failures to a single exit code.
"""


class BoolspError(Exception):
    """Base class for all deliberate failures."""


class InvalidArgument(BoolspError):
    """Malformed or out-of-domain argument (bad rho, bad file, bad plan...)."""


class CapacityError(BoolspError):
    """Requested n exceeds the dense-table cap."""


class TieError(BoolspError):
    """A sign form evaluated to zero where a ±1 value is required."""

    def __init__(self, message, witness_index, witness_point):
        super().__init__(message)
        self.witness_index = witness_index
        self.witness_point = witness_point


class PreconditionError(BoolspError):
    """An operation's documented precondition does not hold."""
