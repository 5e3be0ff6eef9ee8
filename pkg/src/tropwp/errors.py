"""Exception hierarchy shared by all modules."""


class TropWPError(Exception):
    """Base class for every error raised by the package."""


class GraphError(TropWPError):
    pass


class InvolutionNotIdempotent(GraphError):
    """The involution does not square to the identity."""


class RootInvolutionIncompatible(GraphError):
    """involution o root != root."""


class RootNotIdempotent(GraphError):
    """The root map does not fix its own image."""


class MarkingNotBijective(GraphError):
    pass


class SubgraphHasCycle(GraphError):
    pass


class SubgraphHasLegs(GraphError):
    pass


class GenusTooSmall(TropWPError):
    pass


class NotTrivalent(GraphError):
    pass


class NonTrivalentModel(GraphError):
    pass


class DivisorError(TropWPError):
    pass


class IrrationalSupport(DivisorError):
    pass


class SubdivisionTooLarge(DivisorError):
    pass


class NonpositiveLength(TropWPError):
    pass


class CoverError(TropWPError):
    pass


class NotAGraphMap(CoverError):
    """Flag map fails to commute with root or involution, or is not surjective."""


class NotHarmonic(CoverError):
    pass


class RHNonzero(CoverError):
    pass


class FiberDegreeMismatch(CoverError):
    pass


class MapContractsEdge(CoverError):
    pass


class LegBlockMismatch(CoverError):
    """Source leg markings or weights do not follow the ramification blocks."""


class ProfileSumMismatch(TropWPError):
    pass


class WrongProfile(TropWPError):
    pass


class NonIntegralMultiplicity(TropWPError):
    pass


class GenusCapExceeded(TropWPError):
    pass


class SingularSystem(TropWPError):
    pass


class GenericityViolation(TropWPError):
    pass


class InconsistentClassMultiplicity(TropWPError):
    pass


class UsageError(TropWPError):
    pass
