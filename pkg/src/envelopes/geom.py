"""Primitive plane geometry: points, circles, ellipses, circle intersection.

All values are immutable and all operations pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Tolerance for classifying tangency: applied to |d^2 - (r_M +- r_N)^2|
# relative to max(1, d^2).
CLASSIFY_TOL = 1e-12


class GeomError(Exception):
    pass


class DegenerateEllipseError(GeomError):
    pass


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeomError(f"non-finite point ({self.x}, {self.y})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.radius) or self.radius < 0:
            raise GeomError(f"invalid radius {self.radius}")

    def value(self, p: Point2) -> float:
        """Signed circle equation residual (x-cx)^2 + (y-cy)^2 - r^2."""
        return (p.x - self.center.x) ** 2 + (p.y - self.center.y) ** 2 - self.radius**2

    def boundary_distance(self, p: Point2) -> float:
        """Distance from *p* to the circle (the curve, not the disk)."""
        return abs(p.distance_to(self.center) - self.radius)


@dataclass(frozen=True)
class EllipseSpec:
    """Axis-aligned ellipse: semi_major along x, semi_minor along y."""

    center: Point2
    semi_major: float
    semi_minor: float

    def __post_init__(self):
        if not (self.semi_major >= self.semi_minor >= 0):
            raise GeomError(
                f"semi-axes must satisfy a >= b >= 0, got ({self.semi_major}, {self.semi_minor})"
            )


@dataclass(frozen=True)
class IntersectionResult:
    """Tagged classification of a circle pair.

    kind is one of ``disjoint``, ``coincident``, ``tangent``, ``two_points``.
    For tangent results, ``tangency`` is ``"internal"`` or ``"external"``.
    """

    kind: str
    points: tuple[Point2, ...] = ()
    tangency: str | None = None


def intersect_circles(c_m: Circle, c_n: Circle, tol: float = CLASSIFY_TOL) -> IntersectionResult:
    """Classify and compute the intersection of two circles.

    Two-point coordinates follow the half-chord construction; every input
    configuration is classified (no errors).  Point circles (radius 0)
    intersect nothing unless they lie on the other circle, which counts
    as tangency.
    """
    xm, ym, rm = c_m.center.x, c_m.center.y, c_m.radius
    xn, yn, rn = c_n.center.x, c_n.center.y, c_n.radius
    d2 = (xm - xn) ** 2 + (ym - yn) ** 2
    scale = max(1.0, d2)
    sum2 = (rm + rn) ** 2
    diff2 = (rm - rn) ** 2

    if d2 <= tol * scale and abs(rm - rn) <= tol * max(1.0, rm, rn):
        return IntersectionResult("coincident")

    ext_tangent = abs(d2 - sum2) <= tol * max(scale, sum2)
    int_tangent = abs(d2 - diff2) <= tol * max(scale, diff2)
    if ext_tangent or int_tangent:
        d = math.sqrt(d2)
        if d == 0.0:
            # concentric with equal radii was handled above
            return IntersectionResult("disjoint")
        if int_tangent and not ext_tangent:
            flag = "internal"
            s = 1.0 if rm >= rn else -1.0
        elif ext_tangent and not int_tangent:
            flag = "external"
            s = 1.0
        else:
            # a point circle sitting on the other circle: both tests agree
            flag = "internal"
            s = 1.0
        p = Point2(xm + s * rm * (xn - xm) / d, ym + s * rm * (yn - ym) / d)
        return IntersectionResult("tangent", (p,), flag)

    if diff2 < d2 < sum2:
        d = math.sqrt(d2)
        k = 0.25 * math.sqrt((sum2 - d2) * (d2 - diff2))
        bx = 0.5 * (xm + xn) + 0.5 * (xn - xm) * (rm**2 - rn**2) / d2
        by = 0.5 * (ym + yn) + 0.5 * (yn - ym) * (rm**2 - rn**2) / d2
        ox = 2.0 * (yn - ym) * k / d2
        oy = 2.0 * (xn - xm) * k / d2
        p1 = Point2(bx + ox, by - oy)
        p2 = Point2(bx - ox, by + oy)
        return IntersectionResult("two_points", (p1, p2))

    return IntersectionResult("disjoint")


def ellipse_value(e: EllipseSpec, p: Point2) -> float:
    """Signed ellipse residual: negative inside, zero on the boundary."""
    if e.semi_major <= 0 or e.semi_minor <= 0:
        raise DegenerateEllipseError("ellipse has a zero semi-axis")
    return ((p.x - e.center.x) / e.semi_major) ** 2 + (
        (p.y - e.center.y) / e.semi_minor
    ) ** 2 - 1.0


def point_in_disk(p: Point2, c: Circle, closed: bool = False) -> bool:
    d2 = (p.x - c.center.x) ** 2 + (p.y - c.center.y) ** 2
    r2 = c.radius**2
    return d2 <= r2 if closed else d2 < r2
