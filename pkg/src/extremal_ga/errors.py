"""Exception hierarchy shared by every module of the package."""


class ExtremalError(Exception):
    """Base class for all errors raised by extremal_ga."""


class GraphError(ExtremalError, ValueError):
    pass


class SizeError(GraphError):
    pass


class LoopError(GraphError):
    pass


class VertexError(GraphError, IndexError):
    pass


class PermutationError(GraphError):
    pass


class SubsetError(GraphError):
    pass


class FormatError(GraphError):
    pass


class CapabilityError(ExtremalError):
    """Requested order exceeds what an exact routine supports."""


class DomainError(ExtremalError, ValueError):
    """An invariant or operator was applied to the wrong kind of graph."""


class ParameterError(ExtremalError, ValueError):
    pass


class GenerationError(ExtremalError, RuntimeError):
    pass


class SelectionError(ExtremalError, ValueError):
    pass


class ConfigError(ExtremalError, ValueError):
    pass


class ObjectiveSyntaxError(ExtremalError, ValueError):
    """Objective text could not be parsed; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
