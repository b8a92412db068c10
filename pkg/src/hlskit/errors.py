"""Exception hierarchy shared by every hlskit module."""


class HLSError(Exception):
    """Base class for all hlskit errors."""


class InputError(HLSError, ValueError):
    """Malformed or inconsistent input (bad token, shape mismatch, ...)."""


class DomainError(InputError):
    """A value lies outside the domain an operation is defined on."""


class PreconditionError(HLSError, ValueError):
    """A theorem hypothesis required by the operation is violated."""
