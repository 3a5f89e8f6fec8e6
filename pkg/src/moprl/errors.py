"""Exception types shared across the package."""


class MoprlError(Exception):
    """Base class for numerical failures raised by this package."""


class DimensionMismatchError(ValueError):
    pass


class IllConditionedError(MoprlError):
    def __init__(self, cond: float, what: str = "linear system"):
        self.cond = cond
        super().__init__(f"{what} is ill-conditioned (cond = {cond:.3e})")


class NonConvergentError(MoprlError):
    """Quadrature failed to stabilise within its node budget."""


class InsufficientMomentsError(MoprlError, ValueError):
    pass
