"""Exception hierarchy.

Every error raised by the package derives from :class:`HalfPlaneError`.
Errors about malformed input also derive from :class:`ValueError` so that
callers doing generic validation can catch them without importing this
module.
"""

from __future__ import annotations


class HalfPlaneError(Exception):
    """Base class for all package errors."""

    #: Source line of the record that triggered the error, when parsed from a file.
    line: int | None = None


class SurfaceError(HalfPlaneError, ValueError):
    """Invalid half-plane surface data."""

    def __init__(self, message: str, slots: tuple = ()):
        super().__init__(message)
        self.slots = tuple(slots)


class MalformedPartition(SurfaceError):
    pass


class LengthMismatch(SurfaceError):
    pass


class KindMismatch(SurfaceError):
    pass


class SelfInfiniteGluing(SurfaceError):
    pass


class NotInvolution(SurfaceError):
    pass


class TooFewPlanes(SurfaceError):
    pass


class DegenerateVertex(SurfaceError):
    pass


class InvalidPath(SurfaceError):
    pass


class Disconnected(SurfaceError):
    pass


class NonIntegerGenus(HalfPlaneError, AssertionError):
    """Euler characteristic was odd; indicates a modelling bug."""


# builders
class InvalidOrder(SurfaceError):
    pass


class TooFewInfiniteEdges(SurfaceError):
    pass


class MalformedTree(SurfaceError):
    pass


class SubintervalOutOfRange(SurfaceError):
    pass


class InvalidRayCount(SurfaceError):
    pass


class BadPermutation(SurfaceError):
    pass


class NotGeneric(SurfaceError):
    pass


# numerics
class AnalyticError(HalfPlaneError, ValueError):
    pass


class BranchAmbiguity(AnalyticError):
    pass


class SingularContour(AnalyticError):
    pass


class TruncationInsufficient(AnalyticError):
    pass


class InvalidParams(AnalyticError):
    pass


class IntegrationFailure(AnalyticError):
    pass


# flat complexes
class ComplexError(HalfPlaneError, ValueError):
    pass


class NonAlternatingBoundary(ComplexError):
    pass


class BoundaryMismatch(ComplexError):
    pass


class NoBArcs(ComplexError):
    pass


class NotClosed(ComplexError):
    pass


# degenerations
class DegenerationError(HalfPlaneError, ValueError):
    pass


class MissingLimit(DegenerationError):
    pass


class NotForest(DegenerationError):
    pass


class DivergingEdges(DegenerationError):
    pass


class InvalidEpsilon(DegenerationError):
    pass


# io
class HpsSyntaxError(HalfPlaneError, ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnrenderableTarget(HalfPlaneError, TypeError):
    pass
