"""Exception hierarchy.

Errors split in two families so the command line can map them onto exit
codes: :class:`SpecError` subclasses are problems with the user's input
(exit 2), everything else deriving from :class:`GraphspaceError` is a
runtime/numeric failure (exit 1).
"""


class GraphspaceError(Exception):
    """Base class for every error raised by this package."""


class SpecError(GraphspaceError, ValueError):
    """Invalid input: malformed spec, bad argument, inconsistent sizes."""


class DimensionError(SpecError):
    """Two graphs (or a graph and a model) disagree on the node count."""


class DomainError(SpecError):
    """Argument outside the mathematical domain of an operation."""


class ParseError(SpecError):
    """Malformed graph or spec file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigurationError(SpecError):
    """A model spec lacks data needed for the requested operation."""


class UnsupportedModelError(SpecError):
    """The operation is not defined for this model family."""


class NormalizationError(SpecError):
    """Observed graph total weight differs from the model's edge count."""


class DegenerateModelError(SpecError):
    """The fitted model would be empty or otherwise meaningless."""


class UndefinedError(GraphspaceError, ArithmeticError):
    """Quantity is undefined for this input (e.g. modularity of an empty graph)."""
