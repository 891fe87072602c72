"""Exception hierarchy for polycomplex.

Every error raised on purpose by this package derives from PolycomplexError,
so callers can catch one type.  Cap-style errors mean "instance too large for
the configured budget", never "the property is false".
"""


class PolycomplexError(Exception):
    """Base class for all polycomplex errors."""


class MalformedPoset(PolycomplexError):
    """Structurally corrupt input: bad ids, ranks or cover pairs.

    Signals corrupt input, not an axiom failure; axiom failures are reported
    in an AxiomReport instead.
    """


class NotComparable(PolycomplexError):
    """The two faces are not related in the partial order."""


class RankOutOfRange(PolycomplexError):
    """A rank argument lies outside the meaningful range."""


class NotVertexDescribable(PolycomplexError):
    """Operation requires faces to be determined by their vertex sets."""


class CapExceeded(PolycomplexError):
    """A configured size cap would be exceeded (group order, cosets, flags)."""


class SizeCapExceeded(CapExceeded):
    """A constructed object would exceed the vertex/size cap."""


class SearchBudgetExceeded(PolycomplexError):
    """Backtracking search ran past its node budget; result undecided."""


class RequiresEnumeration(PolycomplexError):
    """Operation needs the full element list of a group."""


class NotASubgroup(PolycomplexError):
    """A claimed subgroup generator lies outside the ambient group."""


class NotFlagTransitive(PolycomplexError):
    """The group does not act transitively on the flags of the complex."""


class NotTransitive(PolycomplexError):
    """The group does not act transitively on the required point set."""


class PreconditionFailed(PolycomplexError):
    """A named precondition of a group-to-complex construction is violated."""


class PropertyViolation(PolycomplexError):
    """A required group property (commutation, intersection) fails.

    Carries a witness describing the failing subset pair or elements.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InfiniteGroupSuspected(CapExceeded):
    """Coset enumeration hit its cap: group is possibly infinite."""
