"""Exception hierarchy."""


class GeometryError(Exception):
    """Base class for all geometric failures raised by this package."""


class PointOutOfDomain(GeometryError):
    def __init__(self, point, domain):
        self.point = tuple(float(x) for x in point)
        self.domain = domain
        super().__init__(f"point {self.point} outside chart domain {domain}")


class StepTooLarge(GeometryError):
    """The finite-difference stencil around a point leaves the chart domain."""

    def __init__(self, point, margin, domain):
        self.point = tuple(float(x) for x in point)
        self.margin = margin
        super().__init__(f"point {self.point} is within {margin:g} of the boundary of {domain}")


class DegenerateOperator(GeometryError):
    """The covariant derivative of the field vanishes at an isolated point."""


class BasePointMismatch(GeometryError):
    pass


class NonOrthonormalInput(GeometryError):
    pass


class BadParams(GeometryError, ValueError):
    pass


class UsageError(ValueError):
    """Command-line misuse (unknown suite, malformed flag)."""
