"""Exception types shared across the library."""


class GroupInvError(Exception):
    """Base class for all library-specific failures."""


class DimensionMismatch(GroupInvError, ValueError):
    """Operands have incompatible or illegal shapes."""


class MatrixFormatError(GroupInvError, ValueError):
    """Bad matrix or instance payload: wrong keys, lengths, or non-finite entries."""


class SvdFailure(GroupInvError, RuntimeError):
    """SVD did not converge; the offending input is attached for replay."""

    def __init__(self, message: str, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class SingularMatrix(GroupInvError):
    """invert() called on a matrix that is singular to tolerance."""


class NotGroupInvertible(GroupInvError):
    """rank(a) != rank(a^2) under the active tolerance."""

    def __init__(self, message: str, rank=None, rank_sq=None):
        super().__init__(message)
        self.rank = rank
        self.rank_sq = rank_sq


class IllConditionedCore(GroupInvError):
    """The invertible core of the factorization exceeds the condition bound."""

    def __init__(self, message: str, core_condition=None):
        super().__init__(message)
        self.core_condition = core_condition


class ConditionViolated(GroupInvError):
    """Triangular block helper: x^pi @ y @ w^pi does not vanish."""


class HypothesisViolated(GroupInvError):
    """A rule's assumed identity fails beyond tolerance."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class UnsupportedLambda(GroupInvError):
    """The requested lambda lies outside the rule's supported set."""


class LambdaIsMinusOne(UnsupportedLambda):
    """lambda = -1 is excluded because (1 + lambda) must be invertible."""


class UnsupportedMode(GroupInvError):
    """Generator mode incompatible with the requested lambda."""


class NotIdempotent(GroupInvError):
    """An operand required to be idempotent is not, to tolerance."""


class RankPatternViolated(GroupInvError):
    """The four-rank equality rank(B)=rank(C)=rank(BC)=rank(CB) fails."""

    def __init__(self, message: str, ranks=None):
        super().__init__(message)
        self.ranks = dict(ranks or {})
