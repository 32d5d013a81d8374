class UsageError(ValueError):
    """Invalid arguments to an operation (CLI exit code 2)."""


class RankError(UsageError):
    """An operation would produce a chirotope of invalid rank or size."""


class DegeneracyError(ValueError):
    """Input violates uniformity (a vanishing determinant or zero sign)."""


class ResourceLimit(RuntimeError):
    """A configured time or size guard was hit (CLI exit code 3)."""
