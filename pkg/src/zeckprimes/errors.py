class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured memory or cost budget."""


class ToleranceViolation(AssertionError):
    """A checked property or tolerance failed."""
