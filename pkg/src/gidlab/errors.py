"""Exception hierarchy shared by every gidlab module."""


class GidlabError(Exception):
    """Base class for all library errors."""


class ParameterError(GidlabError, ValueError):
    """A parameter violates an operation's precondition."""


class DomainError(GidlabError, ValueError):
    """An argument lies outside the function's domain (e.g. non-finite lambda)."""


class EvaluationError(GidlabError):
    """Evaluating a function on a grid failed at a specific point."""

    def __init__(self, message, index):
        super().__init__(f"{message} (grid index {index})")
        self.index = index


class InvalidTransformError(GidlabError):
    """A purported Laplace transform is not strictly positive on the grid."""


class InsufficientDataError(GidlabError):
    """Too few epochs or observations for the requested statistic."""


class DegenerateProcessError(GidlabError):
    """A renewal simulation made no progress towards its horizon."""


class FitError(GidlabError):
    """A numerical fit failed; carries the residual reached."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual={residual:.3g})")
        self.residual = residual
