"""Exception types raised by the library."""


class PatternError(ValueError):
    """Invalid sign pattern parameters."""


class NotContracting(ValueError):
    """Raised when |p(m+1)| <= 1, so the similarities do not contract."""

    def __init__(self, modulus: float):
        self.modulus = modulus
        super().__init__(
            f"hypothesis |p(m+1)| > 1 violated: |p(m+1)| = {modulus:.17g}"
        )


class VertexCapExceeded(ValueError):
    """A polyline or word would exceed the configured size cap."""
