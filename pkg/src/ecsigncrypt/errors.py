"""Exception taxonomy.  Each class maps to one CLI exit status."""


class SigncryptionError(Exception):
    """Base class for errors raised by this package."""

    exit_status = 3


class UsageError(SigncryptionError, ValueError):
    exit_status = 3


class MalformedInputError(SigncryptionError, ValueError):
    """Structurally invalid input: bad encodings, off-curve points, K = O."""

    exit_status = 2


class VerificationError(SigncryptionError):
    """The signcryption equation did not hold; the message is rejected."""

    exit_status = 1


class CertificateError(SigncryptionError):
    """A certificate failed validation.  ``check`` names the failed sub-check."""

    exit_status = 4

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"certificate {check}" + (f": {detail}" if detail else ""))
