"""Exception hierarchy shared by all modules."""


class SteklabError(Exception):
    """Base class for all package errors."""


class InvalidDomainError(SteklabError):
    """Domain parameters violate an invariant (e.g. non-positive radius)."""


class PreconditionError(SteklabError):
    """An operation was called outside its documented precondition."""


class RangeError(SteklabError):
    """Argument outside the validated numerical range of a routine."""


class TopologyError(SteklabError):
    """Mesh is open, inconsistently oriented, or inside out."""


class DegenerateFaceError(SteklabError):
    """Mesh contains a zero-area or numerically degenerate triangle."""


class MeshSizeError(SteklabError):
    """Mesh exceeds the supported dense-solver vertex budget."""


class DegeneratePencilError(SteklabError):
    """Denominator matrix of an eigenpencil is numerically zero."""


class StarvedSpaceError(SteklabError):
    """Constraint nullspace left no usable trial functions."""
