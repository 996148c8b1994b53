class CaposError(ValueError):
    """Base class for errors raised by this package."""

    exit_code = 1


class InputError(CaposError):
    """Malformed input: bad rows, unknown names, invalid parameters."""

    exit_code = 1


class DegenerateDataError(CaposError):
    """Well-formed input that cannot support the requested computation."""

    exit_code = 2
