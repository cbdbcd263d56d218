"""Exception hierarchy shared by all engine modules.

Exit codes follow the CLI contract: 1 verification failure, 2 usage/input
error, 3 resource cap exceeded.
"""


class PencilcountError(Exception):
    exit_code = 1


class InputError(PencilcountError):
    """Invalid user-supplied parameter (bad bidegree, l out of range, ...)."""

    exit_code = 2


class ContractViolation(PencilcountError):
    """An internal precondition was violated (marking/layout mismatch, ...)."""

    exit_code = 2


class VerificationError(PencilcountError):
    """A verification suite assertion failed."""

    exit_code = 1


class FixtureIntegrityError(VerificationError):
    """Embedded oracle fixtures failed their checksum."""


class ResourceCapError(PencilcountError):
    """A configured state-space cap was exceeded."""

    exit_code = 3
