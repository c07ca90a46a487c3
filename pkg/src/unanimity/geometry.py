"""2D geometric primitives: domains, half-planes, convex hulls, and caps.

The one-dimensional interval is embedded as the segment y = 0, x in [0, 1]
so every predicate in the package works unchanged across the three domains.
All coordinates are O(1), so tolerances are absolute: GEOM_EPS for
geometric predicates, ALG_EPS for algebraic identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import convex_hull_sorted
from .errors import DegenerateCandidates, EmptyRegion, NoChord

GEOM_EPS = 1e-9
ALG_EPS = 1e-12

_SQUARE_VERTS = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def _xy(p) -> tuple[float, float]:
    """Coerce a Point, tuple, or array to a validated coordinate pair."""
    if isinstance(p, Point):
        return p.x, p.y
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinates: ({x}, {y})")
    return x, y


@dataclass(frozen=True)
class Point:
    """A location in the plane (interval points carry y = 0)."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates: ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane {p : normal . p <= offset} with a unit normal."""

    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        nx, ny = float(self.normal[0]), float(self.normal[1])
        object.__setattr__(self, "normal", (nx, ny))
        object.__setattr__(self, "offset", float(self.offset))
        norm = math.hypot(nx, ny)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"normal must be unit length, got |n| = {norm}")

    @staticmethod
    def from_direction(nx: float, ny: float, rhs: float) -> "HalfPlane":
        """Build {p : (nx, ny) . p <= rhs} from an unnormalized normal."""
        norm = math.hypot(nx, ny)
        if norm < ALG_EPS:
            raise ValueError("zero normal vector")
        return HalfPlane((nx / norm, ny / norm), rhs / norm)

    def complement(self) -> "HalfPlane":
        """The closed complementary half-plane (shared boundary line)."""
        return HalfPlane((-self.normal[0], -self.normal[1]), -self.offset)

    def signed_distance(self, p) -> float:
        x, y = _xy(p)
        return self.normal[0] * x + self.normal[1] * y - self.offset

    def contains(self, p, tol: float = GEOM_EPS) -> bool:
        return self.signed_distance(p) <= tol


class ConvexHull:
    """Strictly convex vertex list in counter-clockwise order.

    Vertices are always a subset of the inserted points; duplicate and
    edge-interior collinear points are dropped.
    """

    __slots__ = ("_vx", "_vy")

    def __init__(self, points: Iterable):
        pts = [_xy(p) for p in points]
        if not pts:
            raise ValueError("hull needs at least one point")
        arr = np.asarray(pts, dtype=np.float64)
        self._build(arr)

    def _build(self, arr: np.ndarray) -> None:
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        arr = arr[order]
        keep = np.ones(len(arr), dtype=bool)
        keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
        arr = arr[keep]
        m = len(arr)
        hx = np.empty(2 * m + 2)
        hy = np.empty(2 * m + 2)
        h = convex_hull_sorted(
            np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]), m, hx, hy
        )
        self._vx = hx[:h].copy()
        self._vy = hy[:h].copy()

    @property
    def vertices(self) -> list[Point]:
        return [Point(x, y) for x, y in zip(self._vx, self._vy)]

    def vertex_array(self) -> np.ndarray:
        return np.column_stack([self._vx, self._vy])

    def __len__(self) -> int:
        return len(self._vx)

    def insert(self, p) -> "ConvexHull":
        """Hull of the current vertices plus p (interior points are no-ops)."""
        x, y = _xy(p)
        out = ConvexHull.__new__(ConvexHull)
        arr = np.vstack([self.vertex_array(), [[x, y]]])
        out._build(arr)
        return out

    def contains(self, p, tol: float = GEOM_EPS) -> bool:
        """Membership test (boundary counts as inside)."""
        x, y = _xy(p)
        vx, vy = self._vx, self._vy
        m = len(vx)
        if m == 1:
            return math.hypot(x - vx[0], y - vy[0]) <= tol
        if m == 2:
            ex, ey = vx[1] - vx[0], vy[1] - vy[0]
            ln2 = ex * ex + ey * ey
            t = ((x - vx[0]) * ex + (y - vy[0]) * ey) / ln2
            t = min(1.0, max(0.0, t))
            return math.hypot(x - (vx[0] + t * ex), y - (vy[0] + t * ey)) <= tol
        for i in range(m):
            j = (i + 1) % m
            cr = (vx[j] - vx[i]) * (y - vy[i]) - (vy[j] - vy[i]) * (x - vx[i])
            if cr < -tol:
                return False
        return True


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


class Domain:
    """Convex compact domain with uniform sampling and membership."""

    kind: str = ""
    measure: float = 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n points uniform on the domain, shape (n, 2)."""
        raise NotImplementedError

    def contains(self, p, tol: float = GEOM_EPS) -> bool:
        x, y = _xy(p)
        return bool(self.contains_many(np.array([[x, y]]), tol)[0])

    def contains_many(self, pts: np.ndarray, tol: float = GEOM_EPS) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self):
        return f"<Domain {self.kind}>"


class Interval(Domain):
    """The unit interval embedded as the segment y = 0, x in [0, 1]."""

    kind = "interval"
    measure = 1.0

    def sample(self, rng, n):
        x = rng.random(n)
        return np.column_stack([x, np.zeros(n)])

    def contains_many(self, pts, tol=GEOM_EPS):
        return (
            (np.abs(pts[:, 1]) <= tol)
            & (pts[:, 0] >= -tol)
            & (pts[:, 0] <= 1.0 + tol)
        )


class UnitSquare(Domain):
    kind = "square"
    measure = 1.0

    def sample(self, rng, n):
        return rng.random((n, 2))

    def contains_many(self, pts, tol=GEOM_EPS):
        return np.all((pts >= -tol) & (pts <= 1.0 + tol), axis=1)


class UnitDisk(Domain):
    """Unit-radius disk centred at the origin (measure pi)."""

    kind = "disk"
    measure = math.pi

    def sample(self, rng, n):
        # Polar method: theta uniform, radius sqrt(u) for exact uniformity.
        u = rng.random((n, 2))
        r = np.sqrt(u[:, 0])
        th = 2.0 * math.pi * u[:, 1]
        return np.column_stack([r * np.cos(th), r * np.sin(th)])

    def contains_many(self, pts, tol=GEOM_EPS):
        return pts[:, 0] ** 2 + pts[:, 1] ** 2 <= (1.0 + tol) ** 2


INTERVAL = Interval()
UNIT_SQUARE = UnitSquare()
UNIT_DISK = UnitDisk()

_DOMAINS = {d.kind: d for d in (INTERVAL, UNIT_SQUARE, UNIT_DISK)}


def domain_from_name(name: str) -> Domain:
    try:
        return _DOMAINS[name]
    except KeyError:
        raise ValueError(f"unknown domain {name!r}; expected one of {sorted(_DOMAINS)}")


def sample_uniform(domain: Domain, rng: np.random.Generator) -> Point:
    """One uniform point on the domain."""
    p = domain.sample(rng, 1)[0]
    return Point(p[0], p[1])


# ---------------------------------------------------------------------------
# Half-plane constructions
# ---------------------------------------------------------------------------


def bisector(w1, w2) -> HalfPlane:
    """The half-plane of points weakly closer to w1 than to w2.

    Its boundary is the perpendicular bisector of the two candidates; w1
    lies strictly inside, w2 strictly outside.
    """
    x1, y1 = _xy(w1)
    x2, y2 = _xy(w2)
    ux, uy = x2 - x1, y2 - y1
    norm = math.hypot(ux, uy)
    if norm < ALG_EPS:
        raise DegenerateCandidates(f"candidates coincide: ({x1}, {y1})")
    rhs = 0.5 * ((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1))
    return HalfPlane((ux / norm, uy / norm), rhs / norm)


def hull_insert(hull: ConvexHull, p) -> ConvexHull:
    return hull.insert(p)


def hull_in_halfplane(hull: ConvexHull, h: HalfPlane, tol: float = ALG_EPS) -> bool:
    """True iff every hull vertex satisfies normal . p <= offset + tol.

    Convexity makes the vertex check sufficient for the whole hull.
    """
    arr = hull.vertex_array()
    vals = arr[:, 0] * h.normal[0] + arr[:, 1] * h.normal[1]
    return bool(np.all(vals <= h.offset + tol))


# ---------------------------------------------------------------------------
# Support queries
# ---------------------------------------------------------------------------


def _clip_polygon(verts: np.ndarray, h: HalfPlane, tol: float = GEOM_EPS) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon by one half-plane."""
    nx, ny = h.normal
    c = h.offset
    m = len(verts)
    out: list[np.ndarray] = []
    s = verts[:, 0] * nx + verts[:, 1] * ny - c
    for i in range(m):
        j = (i + 1) % m
        if s[i] <= tol:
            out.append(verts[i])
        if (s[i] < -tol and s[j] > tol) or (s[i] > tol and s[j] < -tol):
            t = s[i] / (s[i] - s[j])
            out.append(verts[i] + t * (verts[j] - verts[i]))
    if not out:
        return np.empty((0, 2))
    arr = np.asarray(out)
    keep = [0]
    for i in range(1, len(arr)):
        if np.max(np.abs(arr[i] - arr[keep[-1]])) > tol:
            keep.append(i)
    if len(keep) > 1 and np.max(np.abs(arr[keep[-1]] - arr[keep[0]])) <= tol:
        keep.pop()
    return arr[keep]


def _polygon_area(verts: np.ndarray) -> float:
    if len(verts) < 3:
        return 0.0
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _circle_line_points(h: HalfPlane) -> np.ndarray:
    """Intersections of the boundary line of h with the unit circle."""
    c = h.offset
    if abs(c) >= 1.0:
        return np.empty((0, 2))
    nx, ny = h.normal
    half = math.sqrt(max(0.0, 1.0 - c * c))
    foot = np.array([c * nx, c * ny])
    perp = np.array([-ny, nx])
    return np.array([foot - half * perp, foot + half * perp])


def _line_line_point(h1: HalfPlane, h2: HalfPlane) -> np.ndarray | None:
    a1, b1 = h1.normal
    a2, b2 = h2.normal
    det = a1 * b2 - a2 * b1
    if abs(det) < ALG_EPS:
        return None
    x = (h1.offset * b2 - h2.offset * b1) / det
    y = (a1 * h2.offset - a2 * h1.offset) / det
    return np.array([x, y])


def region_support(
    domain: Domain, constraints: Sequence[HalfPlane], direction
) -> float:
    """Maximum of direction . p over domain intersected with all constraints.

    Computed analytically from candidate maximizers: the disk boundary
    support point when feasible, constraint-line intersections with the
    domain boundary, pairwise constraint intersections, and clipped polygon
    vertices for the flat domains. Raises EmptyRegion when infeasible.
    """
    dx, dy = _xy(direction)
    norm = math.hypot(dx, dy)
    if norm < ALG_EPS:
        raise ValueError("zero direction")
    dx, dy = dx / norm, dy / norm

    if domain.kind == "square":
        poly = _SQUARE_VERTS
        for h in constraints:
            poly = _clip_polygon(poly, h)
            if len(poly) == 0:
                raise EmptyRegion("square region is empty")
        return float(np.max(poly[:, 0] * dx + poly[:, 1] * dy))

    if domain.kind == "interval":
        lo, hi = 0.0, 1.0
        for h in constraints:
            nx, c = h.normal[0], h.offset
            if abs(nx) <= ALG_EPS:
                if c < -GEOM_EPS:
                    raise EmptyRegion("interval region is empty")
                continue
            x0 = c / nx
            if nx > 0:
                hi = min(hi, x0)
            else:
                lo = max(lo, x0)
        if lo > hi + GEOM_EPS:
            raise EmptyRegion("interval region is empty")
        return max(dx * lo, dx * hi)

    # Unit disk: enumerate extreme-point candidates.
    cands: list[np.ndarray] = []
    tip = np.array([dx, dy])
    if all(h.contains(tip) for h in constraints):
        cands.append(tip)
    for i, h in enumerate(constraints):
        for p in _circle_line_points(h):
            if all(g.contains(p) for j, g in enumerate(constraints) if j != i):
                cands.append(p)
        for g in constraints[i + 1 :]:
            q = _line_line_point(h, g)
            if q is None or q[0] ** 2 + q[1] ** 2 > 1.0 + GEOM_EPS:
                continue
            if all(f.contains(q) for f in constraints):
                cands.append(q)
    if not cands:
        raise EmptyRegion("disk region is empty")
    return max(dx * p[0] + dy * p[1] for p in cands)


# ---------------------------------------------------------------------------
# Caps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskSegment:
    """Circular segment of the unit disk with the given height."""

    height: float


@dataclass(frozen=True)
class SquareTriangle:
    """Right triangular cap of the unit square with legs a <= b."""

    a: float
    b: float


@dataclass(frozen=True)
class SquareTrapezoid:
    """Right trapezoidal cap; (a, b) are the legs of its largest inscribed
    triangular cap, with b along the full side of length 1."""

    a: float
    b: float = 1.0


@dataclass(frozen=True)
class IntervalSegment:
    length: float


CapShape = DiskSegment | SquareTriangle | SquareTrapezoid | IntervalSegment


@dataclass(frozen=True)
class Cap:
    """A cap: the intersection of the domain with a half-plane.

    z1 and z2 are the chord endpoints (coincident for the interval, whose
    separating set is a single point). `polygon` carries the region for the
    flat domains; `shape` is None for five-sided square caps, which have no
    named shape parameters.
    """

    domain: Domain
    half: HalfPlane
    z1: Point
    z2: Point
    area: float
    shape: CapShape | None
    polygon: tuple[tuple[float, float], ...] | None = None


def disk_segment_area(height: float) -> float:
    """Area of a circular segment of the unit disk; heights above 1 give
    the majority piece."""
    h = height
    if h <= 0.0:
        return 0.0
    if h >= 2.0:
        return math.pi
    return math.acos(1.0 - h) - (1.0 - h) * math.sqrt(max(0.0, 2.0 * h - h * h))


def make_cap(domain: Domain, h: HalfPlane) -> Cap:
    """Cut the domain with a half-plane and record chord and shape data.

    Raises NoChord when the boundary line of h misses the domain interior
    (the cut would be empty or the whole domain).
    """
    if domain.kind == "disk":
        if h.offset <= -1.0 + GEOM_EPS or h.offset >= 1.0 - GEOM_EPS:
            raise NoChord(f"line at offset {h.offset} misses the disk interior")
        z = _circle_line_points(h)
        height = 1.0 + h.offset
        return Cap(
            domain=domain,
            half=h,
            z1=Point(z[0, 0], z[0, 1]),
            z2=Point(z[1, 0], z[1, 1]),
            area=disk_segment_area(height),
            shape=DiskSegment(height=height),
        )

    if domain.kind == "interval":
        nx, c = h.normal[0], h.offset
        if abs(nx) <= ALG_EPS:
            raise NoChord("line parallel to the interval")
        x0 = c / nx
        if x0 <= GEOM_EPS or x0 >= 1.0 - GEOM_EPS:
            raise NoChord(f"crossing at x = {x0} misses the interval interior")
        lo, hi = (0.0, x0) if nx > 0 else (x0, 1.0)
        z = Point(x0, 0.0)
        return Cap(
            domain=domain,
            half=h,
            z1=z,
            z2=z,
            area=hi - lo,
            shape=IntervalSegment(length=hi - lo),
            polygon=((lo, 0.0), (hi, 0.0)),
        )

    # Unit square.
    poly = _clip_polygon(_SQUARE_VERTS, h)
    area = _polygon_area(poly)
    if area <= GEOM_EPS or area >= 1.0 - GEOM_EPS:
        raise NoChord("cut is empty or the whole square")
    nv = len(poly)
    s = poly[:, 0] * h.normal[0] + poly[:, 1] * h.normal[1] - h.offset
    chord_i = None
    for i in range(nv):
        j = (i + 1) % nv
        if abs(s[i]) <= 1e-7 and abs(s[j]) <= 1e-7:
            chord_i = i
            break
    if chord_i is None:
        raise NoChord("no chord edge found on the square boundary")
    j = (chord_i + 1) % nv
    za, zb = poly[chord_i], poly[j]
    # Edges adjacent to the chord are the cut pieces on the square boundary.
    prev_v = poly[(chord_i - 1) % nv]
    next_v = poly[(j + 1) % nv]
    l_prev = float(np.hypot(*(za - prev_v)))
    l_next = float(np.hypot(*(next_v - zb)))
    shape: CapShape | None
    if nv == 3:
        a, b = sorted((l_prev, l_next))
        shape = SquareTriangle(a=a, b=b)
    elif nv == 4:
        shape = SquareTrapezoid(a=max(l_prev, l_next), b=1.0)
    else:
        shape = None
    # Order chord endpoints along the perpendicular of the normal, matching
    # the disk convention.
    perp = np.array([-h.normal[1], h.normal[0]])
    if np.dot(za, perp) > np.dot(zb, perp):
        za, zb = zb, za
    return Cap(
        domain=domain,
        half=h,
        z1=Point(za[0], za[1]),
        z2=Point(zb[0], zb[1]),
        area=area,
        shape=shape,
        polygon=tuple((float(v[0]), float(v[1])) for v in poly),
    )


def disk_segment_height(w1, w2) -> float:
    """Height of the smaller circular segment cut by the candidates'
    perpendicular bisector: 1 - |  |w2|^2 - |w1|^2 | / (2 |w2 - w1|)."""
    x1, y1 = _xy(w1)
    x2, y2 = _xy(w2)
    dist = math.hypot(x2 - x1, y2 - y1)
    if dist < ALG_EPS:
        raise DegenerateCandidates("candidates coincide")
    num = abs((x2 * x2 + y2 * y2) - (x1 * x1 + y1 * y1))
    return 1.0 - num / (2.0 * dist)


# ---------------------------------------------------------------------------
# Square cap sides via the dihedral normal form
# ---------------------------------------------------------------------------

# The eight isometries of the unit square as matrices acting about its
# centre: rotations by 0/90/180/270 degrees and the four reflections.
_DIHEDRAL = [
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, -1.0], [1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, 1.0]]),
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, -1.0], [-1.0, 0.0]]),
]
_CENTRE = np.array([0.5, 0.5])


def _canonical_half(
    n: np.ndarray, c: float
) -> tuple[float, float, float, HalfPlane] | None:
    """Search the dihedral orbit of {n . p <= c} for the normal form.

    Normal form: the region contains the corner at the origin, its outward
    normal (nx, ny) satisfies nx >= ny >= 0, the chord crosses the bottom
    edge at a in [0, 1], and the region covers at most half the square.
    Returns (area, a, s, transformed half-plane) with s = ny / nx, or None.
    """
    best = None
    for mat in _DIHEDRAL:
        n2 = mat @ n
        c2 = c - float(n @ _CENTRE) + float(n2 @ _CENTRE)
        nx, ny = float(n2[0]), float(n2[1])
        if not (nx >= ny - GEOM_EPS and ny >= -GEOM_EPS):
            continue
        ny = max(ny, 0.0)
        if c2 < -GEOM_EPS or c2 > nx + GEOM_EPS:
            continue
        a = min(1.0, max(0.0, c2 / nx))
        s = ny / nx
        if c2 <= ny:  # chord also crosses the left edge: triangle
            area = c2 * c2 / (2.0 * nx * ny) if ny > 0 else 0.0
        else:  # crosses the top edge: right trapezoid
            area = (2.0 * c2 - ny) / (2.0 * nx)
        if area > 0.5 + GEOM_EPS:
            continue
        if best is None:
            best = (area, a, s, HalfPlane((nx, ny), c2))
    return best


def square_cap_sides(w1, w2) -> tuple[float, float]:
    """Legs (a, b), a <= b, of the largest triangular cap inside the smaller
    Voronoi region of two candidates on the unit square.

    The configuration is canonicalized by a square symmetry so the smaller
    region contains the origin corner and its chord crosses the bottom edge;
    a is then the x-intercept of the bisector and b = min(1, a / s) for
    bisector slope parameter s. For a triangular region this returns the
    region's own legs; for a trapezoid, (a, 1).
    """
    h = bisector(w1, w2)
    n = np.array(h.normal)
    found = None
    for sign in (1.0, -1.0):
        res = _canonical_half(sign * n, sign * h.offset)
        if res is not None and (found is None or res[0] < found[0]):
            found = res
    if found is None:
        raise NoChord("bisector does not cross the square interior")
    _, a, s, _ = found
    if a <= 0.0:
        return 0.0, 1.0
    b = 1.0 if s <= a else a / s
    b = min(1.0, max(b, a))
    return a, b
