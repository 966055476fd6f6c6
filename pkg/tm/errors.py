class HistoryError(Exception):
    """Base class for history derivation and lookup failures."""


class MalformedHistoryError(HistoryError):
    pass


class UnknownTransactionError(HistoryError):
    pass


class TMUsageError(Exception):
    """A transaction used a TM outside its stated restrictions."""
