"""Typed errors shared across the geometry kernel.

The CLI maps these onto process exit codes, so keep the hierarchy flat
and the classes cheap.
"""


class GeometryError(ValueError):
    """Base class for geometric failures (degenerate input, bad invariants)."""


class DegenerateError(GeometryError):
    """A quantity is undefined because a real part / speed / norm vanishes."""


class NotALineError(GeometryError):
    """A dual vector does not satisfy the line invariants of the Study map."""


class CylindricalError(GeometryError):
    """The director is (locally) constant, so the frame/striction is undefined."""


class NotClosedError(GeometryError):
    """An operation defined only for closed surfaces/curves got an open one."""


class MoebiusClosureError(NotClosedError):
    """Director returns to minus itself after one period; rejected."""


class OrientationError(GeometryError):
    """Striction angle left (-pi/2, pi/2); the surface orientation is invalid."""


class ParseError(ValueError):
    """Config / expression parse failure, with position information."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
