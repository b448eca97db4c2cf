"""Exception hierarchy.

Validation problems derive from :class:`ValidationError` (CLI exit code 2),
resource limits from :class:`ResourceCapError` (exit code 3) and broken
internal identities from :class:`CrossCheckError` (exit code 4).
"""


class VicsekError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(VicsekError, ValueError):
    pass


class IdOutOfRange(ValidationError):
    pass


class SelfLoop(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class HasCycle(ValidationError):
    pass


class NotConnected(ValidationError):
    pass


class BadParameter(ValidationError):
    pass


class DegreeExceedsS(ValidationError):
    pass


class DegenerateSize(ValidationError):
    pass


class SameSourceTarget(ValidationError):
    pass


class NoThreeRealRoots(ValidationError):
    pass


class ResourceCapError(VicsekError):
    pass


class SizeCapExceeded(ResourceCapError):
    pass


class TooLargeForExactSolve(ResourceCapError):
    pass


class DenseCapExceeded(ResourceCapError):
    pass


class CrossCheckError(VicsekError):
    pass


class InternalInconsistency(CrossCheckError):
    pass


class IllConditioned(ResourceCapError):
    pass
