"""Exception hierarchy shared by all biq modules."""


class BiqError(Exception):
    """Base class for every error raised by the package."""


class NotPrime(BiqError):
    pass


class DegreeTooLarge(BiqError):
    pass


class ZeroPolynomial(BiqError):
    pass


class AttributeViolation(BiqError):
    def __init__(self, generator, message=""):
        self.generator = generator
        super().__init__(f"generator {generator!r}: {message}" if message else f"generator {generator!r}")


class NotInvertible(BiqError):
    pass


class TooLarge(BiqError):
    pass


class NonComposable(BiqError):
    pass


class NonInvertible(BiqError):
    pass


class RingMismatch(BiqError):
    pass


class ShapeViolation(BiqError):
    """A substitution left the admissible shape (nilpotency of d, e or extra t-degrees)."""


class LambdaRequired(BiqError):
    pass


class LambdaForbidden(BiqError):
    pass


class NotInNormalizer(BiqError):
    pass


class SymbolicFailure(BiqError):
    pass


class EnumMismatch(BiqError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}; witness {witness}")


class NotClosed(BiqError):
    def __init__(self, pair):
        self.witness = pair
        super().__init__(f"product of elements {pair} leaves the set")


class NotAssociative(BiqError):
    def __init__(self, triple):
        self.witness = triple
        super().__init__(f"associativity fails on {triple}")


class NoIdentity(BiqError):
    pass


class NoInverse(BiqError):
    def __init__(self, index):
        self.witness = index
        super().__init__(f"element {index} has no inverse")


class NotInCatalog(BiqError):
    def __init__(self, fingerprint):
        self.fingerprint = fingerprint
        super().__init__(f"group not in catalog: {fingerprint}")


class StructureMismatch(BiqError):
    pass


class CurveMismatch(BiqError):
    pass


class BoundExceeded(BiqError):
    pass


class CountMismatch(BiqError):
    pass


class NotSubgroup(BiqError):
    pass


class LiftingAssumptionViolated(BiqError):
    pass


class SchemaError(BiqError):
    pass


class InvariantViolation(BiqError):
    def __init__(self, row, condition):
        self.row = row
        self.condition = condition
        super().__init__(f"row {row}: {condition}")


class CrosscheckFailed(BiqError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message if witness is None else f"{message}; witness {witness}")
