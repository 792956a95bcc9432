class GraphError(ValueError):
    """Input violates a structural precondition (simplicity, connectivity, ...)."""


class CapExceeded(RuntimeError):
    """Exact search refused because the instance exceeds the configured cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"instance too large for {what}: size {size} > cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap
