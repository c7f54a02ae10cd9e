"""Exception types raised by qcomm."""


class DimensionError(ValueError):
    """Operands are not square or do not share a dimension."""


class DegenerateInputError(ValueError):
    """An operand is zero (or numerically negligible) where a nonzero one is required."""


class EigenSolverError(RuntimeError):
    """The dense Hermitian eigensolver failed or returned an inaccurate pair."""
