"""Shared exception types."""


class ParseError(ValueError):
    """Raised on malformed word text. Carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndecidedError(RuntimeError):
    """A resource cap was hit before an answer could be certified.

    This is deliberately distinct from any mathematical answer: callers must
    report "undecided", never coerce it into a value.
    """

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason
