class BoundExceededError(Exception):
    """The input is larger than the configured exhaustive-search bound."""

    def __init__(self, size: int, bound: int, what: str = "transactions"):
        super().__init__(f"{size} {what} exceed the search bound of {bound}")
        self.size = size
        self.bound = bound
