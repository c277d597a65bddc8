"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """Raised when an operation receives arguments outside its contract."""


class NumericalBlowupError(RuntimeError):
    """Raised when an evolution produces non-finite or absurdly large fields.

    Attributes:
        last_valid_time: last time at which the state was still finite.
        partial_record: trajectory collected up to the failure, if any.
    """

    def __init__(self, message, last_valid_time=None, partial_record=None):
        super().__init__(message)
        self.last_valid_time = last_valid_time
        self.partial_record = partial_record
