"""Exception hierarchy for mipgeo."""


class MipgeoError(Exception):
    """Base class for all mipgeo errors."""


class SchemaError(MipgeoError):
    """A document does not conform to the expected JSON schema."""


class GroupAxiomError(MipgeoError):
    """A multiplication table violates the group axioms."""


class PresentationMismatch(MipgeoError):
    """A relator does not evaluate to the identity at the given generators."""


class NotPGroup(MipgeoError):
    """The group order is not a power of the requested prime."""


class MixedOrders(MipgeoError):
    """Groups of different orders where equal orders are required."""


class OrderBoundExceeded(MipgeoError):
    """Group too large for an exhaustive desk-scale computation."""


class NotNormal(MipgeoError):
    """The given subset is not a normal subgroup."""


class ReducibleModulus(MipgeoError):
    """The modulus of a field extension is not irreducible."""


class ZeroInverse(MipgeoError):
    """Inversion of zero in a field."""


class NotSubspace(MipgeoError):
    """A row space is not contained in the ambient row space."""


class DependentBasis(MipgeoError):
    """Rows expected to be linearly independent are not."""


class DimensionMismatch(MipgeoError):
    """Vector length does not match the algebra dimension."""


class BadLevel(MipgeoError):
    """Truncation level must be a positive integer."""


class CharMismatch(MipgeoError):
    """Algebras over different characteristics cannot be compared."""


class OrderMismatch(MipgeoError):
    """Polynomials live in different variable universes or term orders."""


class MissingVariable(MipgeoError):
    """Evaluation point does not cover every variable."""


class WideBlock(MipgeoError):
    """Minor block has fewer rows than columns; use the rank short-circuit."""


class NotMinimalGeneratingSet(MipgeoError):
    """Presentation generators do not form a minimal generating set."""


class RelatorIndexOutOfRange(MipgeoError):
    """A relator subset index is out of range."""


class ResourceBudgetExceeded(MipgeoError):
    """A computation exceeded its configured budget; result is inconclusive."""

    def __init__(self, message: str, *, pairs: int = 0, basis: int = 0, terms: int = 0):
        super().__init__(message)
        self.pairs = pairs
        self.basis = basis
        self.terms = terms


class BudgetExceeded(MipgeoError):
    """An exhaustive oracle refused to run outside its exhaustion budget."""
