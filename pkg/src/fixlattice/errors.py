"""Exception hierarchy shared by all modules."""


class FixLatError(Exception):
    """Base class for every error raised by this package."""


class NotPositiveDefinite(FixLatError):
    pass


class NotIntegral(FixLatError):
    pass


class NotEven(FixLatError):
    pass


class RankZero(FixLatError):
    pass


class NotContained(FixLatError):
    pass


class RankMismatch(FixLatError):
    pass


class BudgetExceeded(FixLatError):
    """A computation would exceed an explicit size or time budget."""


class NoAntiIsometry(FixLatError):
    pass


class InvalidGlue(FixLatError):
    pass


class NotLeechLike(FixLatError):
    pass


class NotFaithfulDomain(FixLatError):
    pass


class PreconditionViolated(FixLatError):
    pass


class NotSLattice(FixLatError):
    pass


class NonNormalizingCandidate(FixLatError):
    pass


class ParseError(FixLatError):
    """Malformed input file; carries the offending line and column."""

    def __init__(self, message, line=None, column=None, path=None):
        self.line = line
        self.column = column
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:{column if column is not None else 0}: "
        super().__init__(where + message)
