"""Exception types shared by all modules."""


class PolyFockError(Exception):
    """Base class for library errors."""


class ParameterError(PolyFockError, ValueError):
    """An argument violates a documented precondition."""


class ShapeError(PolyFockError, ValueError):
    """Grids, lengths or channel counts do not match."""


class CapabilityError(PolyFockError):
    """The requested order exceeds what the implementation supports."""


class CapacityError(PolyFockError):
    """A point set or matrix would exceed the configured size cap."""
