class NetNLError(Exception):
    """Base class for errors raised by netnl."""


class DimensionError(NetNLError, ValueError):
    """Operator, state or input dimensions do not fit together."""


class GuardError(NetNLError):
    """A size guard (dense state or enumeration) would be exceeded.

    ``module`` names the component whose limit was hit.
    """

    def __init__(self, module: str, message: str):
        super().__init__(f"[{module}] {message}")
        self.module = module


class DegenerateError(NetNLError, ValueError):
    """A normalizer vanished, so no involution can be formed."""
