"""Exception hierarchy shared by all modules."""


class SymformsError(Exception):
    """Base class for every error raised by this package."""


class ArgumentError(SymformsError, ValueError):
    """Malformed arguments: wrong arity, dimension or degree."""


class FieldMismatchError(ArgumentError):
    """Real and complex objects were mixed in one operation."""


class CapacityError(SymformsError):
    """A requested degree or dimension exceeds what the routine supports."""


class PreconditionError(SymformsError):
    """Inputs are well-formed but violate a mathematical precondition."""


class NotAttainingError(PreconditionError):
    """The form does not attain its norm where the caller claims it does."""


class GridTooCoarseError(SymformsError):
    """The discretization cannot produce a certified bound."""


class UnsupportedError(SymformsError):
    """The routine does not handle this field/dimension combination."""


class InternalError(SymformsError):
    """An outcome that correct inputs cannot produce (solver bug)."""
