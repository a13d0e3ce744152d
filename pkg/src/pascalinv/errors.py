"""Exceptions shared across the operator and sequence layers."""


class PascalinvError(Exception):
    """Base class for all library errors."""


class InfiniteSumError(PascalinvError):
    """A composition or application would require summing infinitely many nonzero terms."""


class DivergentSumError(PascalinvError):
    """A classical-mode sum violates its convergence condition."""


class PoleError(PascalinvError):
    """A closed-form evaluation hits a pole of the continuation rule."""


class UnsupportedSequenceError(PascalinvError):
    """The sequence class does not support the requested operation."""


class UnsupportedPairError(PascalinvError):
    """No exact evaluation mode applies to the given pair of sequences."""
