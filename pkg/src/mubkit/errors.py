"""Exception types shared across mubkit."""


class MubkitError(Exception):
    """Base class for all mubkit errors."""


class ShapeError(MubkitError, ValueError):
    """Operand dimensions are incompatible."""


class DomainError(MubkitError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoConstructionError(DomainError):
    """No complete MUB construction is available for the requested dimension."""

    def __init__(self, d):
        self.d = d
        super().__init__(f"no construction available for d={d}")


class FormatError(MubkitError, ValueError):
    """A file does not match its schema."""


class IntegrityError(MubkitError, ValueError):
    """Loaded or constructed data failed certification."""


class ConvergenceError(MubkitError, RuntimeError):
    """An iterative routine did not converge."""
