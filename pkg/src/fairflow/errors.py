"""Exception hierarchy shared by every fairflow module."""


class FairflowError(Exception):
    """Base class for all errors raised by fairflow."""


class InvalidInstance(FairflowError, ValueError):
    pass


class IndexOutOfRange(FairflowError, IndexError):
    pass


class DimensionMismatch(FairflowError, ValueError):
    pass


class InvalidCommittee(FairflowError, ValueError):
    pass


class InvalidLottery(FairflowError, ValueError):
    pass


class InvalidParameters(FairflowError, ValueError):
    pass


class TooLarge(FairflowError, ValueError):
    """An exponential oracle was asked to enumerate beyond its bound."""


class InfeasibleWarmStart(FairflowError, ValueError):
    """A supplied flow violates capacity or conservation on the network."""


class MissingCosts(FairflowError, ValueError):
    pass


class UnaffordablePayments(FairflowError, ValueError):
    pass
