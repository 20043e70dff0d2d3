"""One-parameter circle families and their envelopes.

A family is the set of circles ``(x - x_c(t))^2 + (y - y_c(t))^2 = r(t)^2``
for ``t`` in ``[s1, s2]``.  This module computes the limiting-position
envelope from the closed-form branch parameterization, the discriminant
envelope by intersecting each circle with the line obtained from the
t-derivative of the defining equation, and supporting checks: hypothesis
verification, support intervals of the envelope, numeric limit checks and
boundary filtering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import expr as ex
from .geom import Circle, Point2, intersect_circles

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class FamilyError(Exception):
    pass


class NoEnvelopeError(FamilyError):
    """No real envelope point: derivative gap negative (nested regime)."""


class DegenerateEnvelopeError(FamilyError):
    """F_t vanishes identically in (x, y): stationary circle."""


def golden_minimize(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section minimization of *f* on [a, b]; returns (t, f(t))."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


@dataclass(frozen=True)
class EnvelopePair:
    """The two envelope branch points at parameter t."""

    t: float
    p1: Point2
    p2: Point2


@dataclass(frozen=True)
class EnvelopeSolution:
    """Discriminant-envelope solution at one t.

    kind: ``two`` (both branches), ``point`` (single point, e.g. a point
    circle with stationary center), ``empty`` (no real solution), or
    ``circle`` (degenerate: the whole circle satisfies F_t = 0).
    """

    kind: str
    points: tuple[Point2, ...] = ()


@dataclass(frozen=True)
class HypothesisReport:
    """Sampled check of the boundary theorem hypotheses."""

    radius_positive_interior: bool
    min_gap: float
    argmin_t: float
    samples: int
    smoothness_assumed: bool = True

    @property
    def gap_positive(self) -> bool:
        return self.min_gap > 0


@dataclass(frozen=True)
class LimitCheckRecord:
    """Intersections of C_t with C_{t+h} compared to the closed-form limit."""

    t: float
    h_values: tuple[float, ...]
    deviations: tuple[float, ...]
    dropped: tuple[tuple[float, str], ...]
    targets: tuple[Point2, Point2] | None

    @property
    def max_deviation(self) -> float:
        return max(self.deviations) if self.deviations else math.nan


class CircleFamily:
    """Immutable circle family with symbolic and compiled curve data.

    Construct through :func:`make_family`, which validates the expressions
    and their symbolic derivatives.
    """

    def __init__(
        self,
        x_c: ex.Expr,
        y_c: ex.Expr,
        r: ex.Expr,
        s1: float,
        s2: float,
        constants: Mapping[str, float],
    ):
        self.x_c, self.y_c, self.r = x_c, y_c, r
        self.dx_c = ex.differentiate(x_c)
        self.dy_c = ex.differentiate(y_c)
        self.dr = ex.differentiate(r)
        self.s1, self.s2 = float(s1), float(s2)
        self.constants = dict(constants)
        self._fx = ex.compile_expr(x_c, self.constants)
        self._fy = ex.compile_expr(y_c, self.constants)
        self._fr = ex.compile_expr(r, self.constants)
        self._fdx = ex.compile_expr(self.dx_c, self.constants)
        self._fdy = ex.compile_expr(self.dy_c, self.constants)
        self._fdr = ex.compile_expr(self.dr, self.constants)

    # -- curve evaluation ---------------------------------------------------

    def center(self, t: float) -> tuple[float, float]:
        return self._fx(t), self._fy(t)

    def radius(self, t: float) -> float:
        return self._fr(t)

    def d_center(self, t: float) -> tuple[float, float]:
        return self._fdx(t), self._fdy(t)

    def d_radius(self, t: float) -> float:
        return self._fdr(t)

    def gap(self, t: float) -> float:
        """x_c'^2 + y_c'^2 - r'^2, the quantity whose positivity makes
        nearby circles intersect."""
        dx, dy = self.d_center(t)
        dr = self.d_radius(t)
        return dx * dx + dy * dy - dr * dr

    def circle(self, t: float) -> Circle:
        x, y = self.center(t)
        return Circle(Point2(x, y), max(self.radius(t), 0.0))

    def value(self, x: float, y: float, t: float) -> float:
        """The defining function F(x, y, t)."""
        cx, cy = self.center(t)
        return (x - cx) ** 2 + (y - cy) ** 2 - self.radius(t) ** 2

    def signed_distance(self, x: float, y: float, t: float) -> float:
        """dist((x, y), center(t)) - r(t); negative strictly inside D_t."""
        cx, cy = self.center(t)
        return math.hypot(x - cx, y - cy) - self.radius(t)

    def interior_grid(self, n: int) -> list[float]:
        """n cell-centered interior samples, avoiding both endpoints."""
        w = (self.s2 - self.s1) / n
        return [self.s1 + (i + 0.5) * w for i in range(n)]


def make_family(
    x_c: ex.Expr | str,
    y_c: ex.Expr | str,
    r: ex.Expr | str,
    s1: float,
    s2: float,
    constants: Mapping[str, float] | None = None,
) -> CircleFamily:
    """Build and validate a circle family.

    Validation: the three curves must evaluate on a 200-point sample of
    [s1, s2] without domain errors, the radius must be >= -1e-12 at every
    sample, and the symbolic derivatives must agree with central finite
    differences at 20 interior samples (relative error <= 1e-5).
    """
    if not s1 < s2:
        raise FamilyError(f"degenerate interval [{s1}, {s2}]")
    consts = dict(constants or {})

    def as_expr(e: ex.Expr | str) -> ex.Expr:
        return ex.parse(e) if isinstance(e, str) else e

    fam = CircleFamily(as_expr(x_c), as_expr(y_c), as_expr(r), s1, s2, consts)

    for i in range(200):
        t = s1 + i * (s2 - s1) / 199
        try:
            fam.center(t)
            rv = fam.radius(t)
        except ex.EvalError as err:
            raise FamilyError(f"curve evaluation failed at t={t}: {err}") from err
        if rv < -1e-12:
            raise FamilyError(f"negative radius r({t}) = {rv}")

    h = 1e-6
    for i in range(20):
        t = s1 + (i + 1) * (s2 - s1) / 21
        for name, f, df in (
            ("x_c", fam._fx, fam._fdx),
            ("y_c", fam._fy, fam._fdy),
            ("r", fam._fr, fam._fdr),
        ):
            fd = (f(t + h) - f(t - h)) / (2 * h)
            sym = df(t)
            if abs(sym - fd) > 1e-5 * max(1.0, abs(sym)):
                raise FamilyError(
                    f"symbolic derivative of {name} disagrees with finite differences "
                    f"at t={t}: {sym} vs {fd}"
                )
    return fam


# ---------------------------------------------------------------------------
# Envelopes


def limiting_envelope(f: CircleFamily, t: float) -> EnvelopePair:
    """Closed-form limiting-position envelope branches at interior t.

    Branch 1 carries the ``+`` sign of the square root in the x-component;
    for the boundary families this is the branch tracing the outer curve.
    """
    if not (f.s1 < t < f.s2):
        raise FamilyError(f"t={t} is not interior to [{f.s1}, {f.s2}]")
    dx, dy = f.d_center(t)
    dr = f.d_radius(t)
    d2 = dx * dx + dy * dy
    if d2 <= 0.0:
        raise FamilyError(f"zero center-velocity at t={t}")
    gap = d2 - dr * dr
    if gap < 0.0:
        raise NoEnvelopeError(f"negative derivative gap {gap} at t={t} (nested circles)")
    cx, cy = f.center(t)
    r = f.radius(t)
    root = math.sqrt(gap)
    scale = r / d2
    p1 = Point2(cx + scale * (-dx * dr + dy * root), cy + scale * (-dy * dr - dx * root))
    p2 = Point2(cx + scale * (-dx * dr - dy * root), cy + scale * (-dy * dr + dx * root))
    return EnvelopePair(t, p1, p2)


def discriminant_envelope(f: CircleFamily, t: float) -> EnvelopeSolution:
    """Discriminant envelope at t via the envelope algorithm.

    F_t = 0 reduces to the line x_c'(x - x_c) + y_c'(y - y_c) = -r r';
    its intersection with C_t yields 0, 1 or 2 points.  A stationary
    circle (x_c' = y_c' = 0 with r r' = 0) is degenerate: the whole
    circle satisfies both equations (a point circle collapses to its
    single point).
    """
    if not (f.s1 <= t <= f.s2):
        raise FamilyError(f"t={t} outside [{f.s1}, {f.s2}]")
    dx, dy = f.d_center(t)
    dr = f.d_radius(t)
    cx, cy = f.center(t)
    r = max(f.radius(t), 0.0)
    d2 = dx * dx + dy * dy
    tiny = 1e-24
    if d2 <= tiny:
        if abs(r * dr) <= 1e-12:
            if r <= 1e-12:
                return EnvelopeSolution("point", (Point2(cx, cy),))
            return EnvelopeSolution("circle")
        return EnvelopeSolution("empty")
    gap = d2 - dr * dr
    half2 = r * r * gap / d2  # squared half-chord of the line/circle intersection
    if half2 < 0.0:
        if half2 > -1e-15 * max(1.0, r * r):
            foot = Point2(cx - r * dr * dx / d2, cy - r * dr * dy / d2)
            return EnvelopeSolution("point", (foot,))
        return EnvelopeSolution("empty")
    root = math.sqrt(gap)
    scale = r / d2
    p1 = Point2(cx + scale * (-dx * dr + dy * root), cy + scale * (-dy * dr - dx * root))
    p2 = Point2(cx + scale * (-dx * dr - dy * root), cy + scale * (-dy * dr + dx * root))
    if p1 == p2:
        return EnvelopeSolution("point", (p1,))
    return EnvelopeSolution("two", (p1, p2))


def check_hypotheses(f: CircleFamily, samples: int = 1000) -> HypothesisReport:
    """Sample the theorem hypotheses: r > 0 and r'^2 < x_c'^2 + y_c'^2
    on the interior, with golden-section refinement around the gap argmin."""
    ts = f.interior_grid(samples)
    radius_ok = all(f.radius(t) > 0 for t in ts)
    gaps = [f.gap(t) for t in ts]
    i = min(range(len(ts)), key=gaps.__getitem__)
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, len(ts) - 1)]
    argmin_t, min_gap = golden_minimize(f.gap, lo, hi)
    if gaps[i] < min_gap:
        argmin_t, min_gap = ts[i], gaps[i]
    return HypothesisReport(radius_ok, min_gap, argmin_t, samples)


def envelope_support(f: CircleFamily, samples: int = 2000) -> list[tuple[float, float]]:
    """Maximal sub-intervals of [s1, s2] where the derivative gap is >= 0.

    Sign sampling at *samples* interior points with bisection of each
    bracketing pair to |dt| <= 1e-12.  Families whose gap changes sign at
    finer scales than the sampling grid are out of contract.
    """
    ts = f.interior_grid(samples)
    signs = [f.gap(t) >= 0.0 for t in ts]

    def crossing(a: float, b: float) -> float:
        fa = f.gap(a)
        for _ in range(200):
            if b - a <= 1e-12:
                break
            m = 0.5 * (a + b)
            fm = f.gap(m)
            if (fa >= 0.0) == (fm >= 0.0):
                a, fa = m, fm
            else:
                b = m
        return 0.5 * (a + b)

    intervals: list[tuple[float, float]] = []
    start: float | None = f.s1 if signs[0] else None
    for i in range(1, len(ts)):
        if signs[i] and not signs[i - 1]:
            start = crossing(ts[i - 1], ts[i])
        elif signs[i - 1] and not signs[i]:
            assert start is not None
            intervals.append((start, crossing(ts[i - 1], ts[i])))
            start = None
    if start is not None:
        intervals.append((start, f.s2))
    return intervals


def numeric_limit_check(
    f: CircleFamily, t: float, h_list: Sequence[float]
) -> LimitCheckRecord:
    """Check that intersections of C_t and C_{t+h} converge to the
    closed-form envelope branches as h -> 0 (first-order in h).

    Each h with non-intersecting circles is dropped with a note; in the
    nested regime (negative gap) every h is dropped and the record is empty.
    """
    if not (f.s1 < t < f.s2):
        raise FamilyError(f"t={t} is not interior")
    for h in h_list:
        if h == 0.0:
            raise FamilyError("h must be nonzero")
        if not (f.s1 <= t + h <= f.s2):
            raise FamilyError(f"t+h={t + h} outside [{f.s1}, {f.s2}]")

    if f.gap(t) <= 0.0:
        dropped = tuple((h, "nested regime: no envelope point") for h in h_list)
        return LimitCheckRecord(t, (), (), dropped, None)

    pair = limiting_envelope(f, t)
    targets = (pair.p1, pair.p2)
    base = f.circle(t)
    h_kept: list[float] = []
    deviations: list[float] = []
    dropped: list[tuple[float, str]] = []
    for h in h_list:
        res = intersect_circles(base, f.circle(t + h))
        if res.kind != "two_points":
            dropped.append((h, f"circles {res.kind}: h too large or degenerate"))
            continue
        dev = max(
            min(p.distance_to(targets[0]), p.distance_to(targets[1])) for p in res.points
        )
        h_kept.append(h)
        deviations.append(dev)
    return LimitCheckRecord(t, tuple(h_kept), tuple(deviations), tuple(dropped), targets)


def boundary_filter(
    f: CircleFamily, candidates: Sequence[Point2], tol: float, samples: int = 2000
) -> list[Point2]:
    """Keep candidates lying in no open disk D_t.

    A point is kept iff min_t [dist(p, center(t)) - r(t)] >= -tol, the
    minimum estimated by a sample scan plus golden-section refinement of
    the three smallest local minima.
    """
    ts = [f.s1 + i * (f.s2 - f.s1) / (samples - 1) for i in range(samples)]
    kept: list[Point2] = []
    for p in candidates:

        def sd(t: float, p: Point2 = p) -> float:
            return f.signed_distance(p.x, p.y, t)

        vals = [sd(t) for t in ts]
        local_min = [
            i
            for i in range(len(ts))
            if (i == 0 or vals[i] <= vals[i - 1]) and (i == len(ts) - 1 or vals[i] <= vals[i + 1])
        ]
        local_min.sort(key=vals.__getitem__)
        best = min(vals)
        for i in local_min[:3]:
            lo = ts[max(i - 1, 0)]
            hi = ts[min(i + 1, len(ts) - 1)]
            if hi > lo:
                _, v = golden_minimize(sd, lo, hi)
                best = min(best, v)
        if best >= -tol:
            kept.append(p)
    return kept
