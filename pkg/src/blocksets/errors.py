"""Domain errors. Everything user-facing derives from BlocksetsError so the
CLI can map any domain failure to exit code 2 (bad input) in one place."""


class BlocksetsError(Exception):
    pass


class NotPrimePower(BlocksetsError):
    """q is not p^e for a prime p, or q is out of the supported range."""


class TooLarge(BlocksetsError):
    """A requested object exceeds a hard construction cap."""


class DivisionByZero(BlocksetsError):
    """Multiplicative inverse of 0 requested."""


class SpaceTooLarge(BlocksetsError):
    """Point enumeration would exceed the enumeration guard."""


class DimensionOutOfRange(BlocksetsError):
    """Flat dimension d outside 0..n."""


class DimensionMismatch(BlocksetsError):
    """Objects built over different spaces or fields were combined."""


class InvalidForm(BlocksetsError):
    """Hyperplane form with all variable coefficients zero."""


class DuplicateForm(BlocksetsError):
    """Arrangement given the same hyperplane twice (after normalization)."""


class CoefficientLoss(BlocksetsError):
    """Lowering a form to fewer variables would drop a nonzero coefficient."""


class NotInUniverse(BlocksetsError):
    """Candidate set contains a point outside the instance universe."""


class NotBlocking(BlocksetsError):
    """Operation requires a blocking set but the given set does not block."""


class UniverseTooLarge(BlocksetsError):
    """Exhaustive enumeration requested for a universe that is too big."""


class FlatDisjointFromUniverse(BlocksetsError):
    """Restriction flat misses the instance universe."""


class FlatNotContained(BlocksetsError):
    """Contained-scope restriction to a flat that leaves the complement."""


class DimensionTooSmall(BlocksetsError):
    """Restriction flat too small to induce a meaningful sub-instance."""


class PreconditionFailed(BlocksetsError):
    """A constructive operation's input fails its blocking precondition."""


class BadChooser(BlocksetsError):
    """Transversal chooser returned a point off its line or off the line list."""


class IdenticalPoints(BlocksetsError):
    """Escape parameter requested for x == y."""


class SearchTimeout(BlocksetsError):
    """Search exceeded its time budget before reaching a verdict."""

    def __init__(self, message, nodes=0, elapsed=0.0):
        super().__init__(message)
        self.nodes = nodes
        self.elapsed = elapsed
