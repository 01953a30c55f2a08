"""Exception hierarchy shared by all graphphase modules."""

from __future__ import annotations


class GraphPhaseError(Exception):
    """Base class for every error raised by graphphase."""


class InvalidArgumentError(GraphPhaseError, ValueError):
    """A generator or operation received parameters outside its domain."""


class ParseError(GraphPhaseError, ValueError):
    """Malformed edge-list or signal file.

    ``line`` is the 1-based line number of the offending record, or ``None``
    when the problem is not tied to a single line (e.g. a missing node).
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(GraphPhaseError, ArithmeticError):
    """The eigensolver failed or produced an unusable result."""

    def __init__(self, message: str, fingerprint: str | None = None):
        self.fingerprint = fingerprint
        if fingerprint is not None:
            message = f"{message} (matrix fingerprint {fingerprint})"
        super().__init__(message)


class PreconditionError(GraphPhaseError):
    """An operation was called on an input that violates its precondition."""


class DefectiveError(PreconditionError):
    """The adjacency is not diagonalizable (or not invertible) under the tolerances."""


class PerturbationError(GraphPhaseError):
    """The edge-addition loop could not reach a diagonalizable, invertible operator.

    ``trace`` holds the per-iteration records accumulated before the failure.
    """

    def __init__(self, message: str, trace: list | None = None, cluster=None):
        self.trace = list(trace or [])
        self.cluster = cluster
        super().__init__(message)
