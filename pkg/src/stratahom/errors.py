"""Package-wide error types."""


class InvariantViolation(RuntimeError):
    """A mathematical invariant that the library guarantees failed to hold.

    Raised when a built object contradicts its defining property (a boundary
    that does not square to zero, a chain map identity that fails, a
    cross-check oracle mismatch).  CLI maps this to exit code 3.
    """
