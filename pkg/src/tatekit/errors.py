"""Exception hierarchy; the CLI maps each class to an exit code."""


class TatekitError(Exception):
    exit_code = 1


class InputError(TatekitError, ValueError):
    """Malformed or inconsistent user input (bad group table, wrong dims, ...)."""

    exit_code = 1


class VerificationError(TatekitError):
    """A checked mathematical property failed."""

    exit_code = 2


class CertificateError(TatekitError):
    """An internal self-check failed (stabilization, exactness of a construction)."""

    exit_code = 3
