"""Planar primitives for segments, capsules and the special point constructions
used by the hitting-set finders.

All containment tests are closed: a point belongs to a capsule when its
distance to the segment is at most ``r`` plus a small outward tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

EPS = 1e-9
TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        for v in (*self.a, *self.b):
            if not math.isfinite(v):
                raise ValueError(f"non-finite segment endpoint: {self}")

    def length(self) -> float:
        return math.hypot(self.b.x - self.a.x, self.b.y - self.a.y)

    def midpoint(self) -> Point:
        return Point(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))

    def frame(self) -> tuple[float, float, float, float]:
        """Unit direction ``(ux, uy)`` from a to b and its left normal.

        Zero-length segments get the x axis.
        """
        L = self.length()
        if L == 0.0:
            return 1.0, 0.0, 0.0, 1.0
        ux = (self.b.x - self.a.x) / L
        uy = (self.b.y - self.a.y) / L
        return ux, uy, -uy, ux


@dataclass(frozen=True)
class Capsule:
    """Closed Euclidean r-neighbourhood of a segment."""

    seg: Segment
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("capsule radius must be positive")

    def contains(self, p: Point, tol: float = 0.0) -> bool:
        return dist_point_segment(p, self.seg) <= self.r + tol

    def perimeter(self) -> float:
        return 2.0 * self.seg.length() + TWO_PI * self.r


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("disk radius must be positive")


@dataclass(frozen=True)
class LineInterval:
    """Sub-segment ``origin + t*direction`` for ``lo <= t <= hi``."""

    origin: Point
    direction: tuple[float, float]
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty line interval")

    def at(self, t: float) -> Point:
        return Point(self.origin.x + t * self.direction[0], self.origin.y + t * self.direction[1])

    def segment(self) -> Segment:
        return Segment(self.at(self.lo), self.at(self.hi))


# ---------------------------------------------------------------- distances


def dist_point_segment(p: Sequence[float], s: Segment) -> float:
    ax, ay = s.a
    dx, dy = s.b.x - ax, s.b.y - ay
    px, py = p[0] - ax, p[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(px, py)
    t = (px * dx + py * dy) / L2
    if t <= 0.0:
        return math.hypot(px, py)
    if t >= 1.0:
        return math.hypot(p[0] - s.b.x, p[1] - s.b.y)
    return math.hypot(px - t * dx, py - t * dy)


def dist_points_segment(P: np.ndarray, s: Segment) -> np.ndarray:
    """Vectorised :func:`dist_point_segment` over an ``(n, 2)`` array."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    a = np.array(s.a)
    d = np.array(s.b) - a
    L2 = float(d @ d)
    rel = P - a
    if L2 == 0.0:
        return np.hypot(rel[:, 0], rel[:, 1])
    t = np.clip(rel @ d / L2, 0.0, 1.0)
    diff = rel - t[:, None] * d
    return np.hypot(diff[:, 0], diff[:, 1])


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """Closed-segment intersection test (touching counts)."""
    a, b, c, d = s1.a, s1.b, s2.a, s2.b
    o1 = _orient(*a, *b, *c)
    o2 = _orient(*a, *b, *d)
    o3 = _orient(*c, *d, *a)
    o4 = _orient(*c, *d, *b)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        return True
    # touching / collinear configurations reduce to endpoint distances
    return (
        dist_point_segment(c, s1) == 0.0
        or dist_point_segment(d, s1) == 0.0
        or dist_point_segment(a, s2) == 0.0
        or dist_point_segment(b, s2) == 0.0
    )


def dist_segment_segment(s1: Segment, s2: Segment) -> float:
    if segments_intersect(s1, s2):
        return 0.0
    return min(
        dist_point_segment(s1.a, s2),
        dist_point_segment(s1.b, s2),
        dist_point_segment(s2.a, s1),
        dist_point_segment(s2.b, s1),
    )


def pairwise_segment_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All-pairs segment distances for segment arrays of shape ``(n, 2, 2)``.

    Returns an ``(n, n)`` matrix; proper crossings and touchings give 0.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = len(A)
    out = np.empty((n, len(B)))
    chunk = max(1, 2_000_000 // max(1, len(B)))
    for lo in range(0, n, chunk):
        out[lo : lo + chunk] = _segdist_block(A[lo : lo + chunk], B)
    return out


def point_segment_distances(P: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Distances from points ``(m, 2)`` to segments ``(k, 2, 2)`` as an ``(m, k)`` matrix."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    S = np.asarray(S, dtype=float)
    out = np.empty((len(P), len(S)))
    chunk = max(1, 2_000_000 // max(1, len(S)))
    for lo in range(0, len(P), chunk):
        out[lo : lo + chunk] = _pt_seg_block(P[lo : lo + chunk], S)
    return out


def _pt_seg_block(P: np.ndarray, S: np.ndarray) -> np.ndarray:
    # P: (m, 2) points broadcast against S: (k, 2, 2) segments -> (m, k)
    a = S[None, :, 0, :]
    d = S[None, :, 1, :] - a
    rel = P[:, None, :] - a
    L2 = np.einsum("ijk,ijk->ij", d, d)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.einsum("ijk,ijk->ij", rel, d) / L2
    t = np.where(L2 > 0, np.clip(t, 0.0, 1.0), 0.0)
    diff = rel - t[..., None] * d
    return np.hypot(diff[..., 0], diff[..., 1])


def _segdist_block(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d = np.minimum(
        np.minimum(_pt_seg_block(A[:, 0], B), _pt_seg_block(A[:, 1], B)),
        np.minimum(_pt_seg_block(B[:, 0], A).T, _pt_seg_block(B[:, 1], A).T),
    )

    def orient(p, q, s):
        return (q[..., 0] - p[..., 0]) * (s[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (s[..., 0] - p[..., 0])

    a0, a1 = A[:, None, 0, :], A[:, None, 1, :]
    b0, b1 = B[None, :, 0, :], B[None, :, 1, :]
    o1, o2 = orient(a0, a1, b0), orient(a0, a1, b1)
    o3, o4 = orient(b0, b1, a0), orient(b0, b1, a1)
    crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
    d[crossing] = 0.0
    return d


# ---------------------------------------------------------------- clipping


def _line_disk_interval(px, py, dx, dy, cx, cy, rho):
    # t-range of p + t*d inside the closed disk; d is a unit vector
    fx, fy = px - cx, py - cy
    b = fx * dx + fy * dy
    c = fx * fx + fy * fy - rho * rho
    disc = b * b - c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    return -b - sq, -b + sq


def capsule_clip_segment(e: Segment, e2: Segment, rho: float) -> LineInterval | None:
    """Part of ``e2`` within distance ``rho`` of ``e`` (empty -> None).

    The result is parametrised by arc length from ``e2.a`` along ``e2``.
    Computed exactly as the union of the line's intervals inside the two end
    disks and the central rectangle of the rho-capsule of ``e``.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    L2 = e2.length()
    ux2, uy2, _, _ = e2.frame()
    px, py = e2.a
    if L2 == 0.0:
        if dist_point_segment(e2.a, e) <= rho:
            return LineInterval(e2.a, (ux2, uy2), 0.0, 0.0)
        return None
    pieces = []
    for c in (e.a, e.b):
        iv = _line_disk_interval(px, py, ux2, uy2, c.x, c.y, rho)
        if iv is not None:
            pieces.append(iv)
    L = e.length()
    if L > 0.0:
        ux, uy, nx, ny = e.frame()
        lo, hi = -math.inf, math.inf
        # constraints 0 <= (x-a).u <= L and -rho <= (x-a).n <= rho, linear in t
        for (cx, cy, lo_b, hi_b) in ((ux, uy, 0.0, L), (nx, ny, -rho, rho)):
            base = (px - e.a.x) * cx + (py - e.a.y) * cy
            slope = ux2 * cx + uy2 * cy
            if slope == 0.0:
                if not (lo_b <= base <= hi_b):
                    lo, hi = 1.0, 0.0
                    break
                continue
            t1 = (lo_b - base) / slope
            t2 = (hi_b - base) / slope
            if t1 > t2:
                t1, t2 = t2, t1
            lo, hi = max(lo, t1), min(hi, t2)
        if lo <= hi:
            pieces.append((lo, hi))
    if not pieces:
        return None
    lo = max(0.0, min(p[0] for p in pieces))
    hi = min(L2, max(p[1] for p in pieces))
    if lo > hi:
        return None
    return LineInterval(e2.a, (ux2, uy2), lo, hi)


# ----------------------------------------------------- capsule boundaries


class _Seg(NamedTuple):
    p: Point
    q: Point


class _Arc(NamedTuple):
    c: Point
    start: float  # ccw start angle
    sweep: float


def boundary_pieces(c: Capsule) -> list:
    """Two straight pieces and two half-circle arcs (one full circle for points)."""
    s, r = c.seg, c.r
    if s.length() == 0.0:
        return [_Arc(s.a, 0.0, TWO_PI)]
    ux, uy, nx, ny = s.frame()
    th = math.atan2(uy, ux)
    a, b = s.a, s.b
    return [
        _Arc(b, th - 0.5 * math.pi, math.pi),
        _Seg(Point(b.x + r * nx, b.y + r * ny), Point(a.x + r * nx, a.y + r * ny)),
        _Arc(a, th + 0.5 * math.pi, math.pi),
        _Seg(Point(a.x - r * nx, a.y - r * ny), Point(b.x - r * nx, b.y - r * ny)),
    ]


def _angle_in(theta: float, start: float, sweep: float, slack: float) -> bool:
    d = (theta - start) % TWO_PI
    return d <= sweep + slack or d >= TWO_PI - slack


def _seg_param(pt, s: _Seg):
    dx, dy = s.q.x - s.p.x, s.q.y - s.p.y
    L = math.hypot(dx, dy)
    return ((pt[0] - s.p.x) * dx + (pt[1] - s.p.y) * dy) / L, L


def _on_seg(pt, s: _Seg, tol: float) -> bool:
    t, L = _seg_param(pt, s)
    return -tol <= t <= L + tol


def _on_arc(pt, a: _Arc, r: float, tol: float) -> bool:
    th = math.atan2(pt[1] - a.c.y, pt[0] - a.c.x)
    return _angle_in(th, a.start, a.sweep, tol / r)


def _seg_seg(s1: _Seg, s2: _Seg, tol: float) -> list:
    d1x, d1y = s1.q.x - s1.p.x, s1.q.y - s1.p.y
    d2x, d2y = s2.q.x - s2.p.x, s2.q.y - s2.p.y
    den = d1x * d2y - d1y * d2x
    L1 = math.hypot(d1x, d1y)
    L2 = math.hypot(d2x, d2y)
    wx, wy = s2.p.x - s1.p.x, s2.p.y - s1.p.y
    if abs(den) <= 1e-14 * L1 * L2:
        # parallel; collinear overlap reports the overlap endpoints
        if abs(wx * d1y - wy * d1x) / L1 > tol:
            return []
        out = [pt for pt in (s2.p, s2.q) if _on_seg(pt, s1, tol)]
        out += [pt for pt in (s1.p, s1.q) if _on_seg(pt, s2, tol)]
        return out
    t = (wx * d2y - wy * d2x) / den
    u = (wx * d1y - wy * d1x) / den
    if -tol / L1 <= t <= 1 + tol / L1 and -tol / L2 <= u <= 1 + tol / L2:
        return [Point(s1.p.x + t * d1x, s1.p.y + t * d1y)]
    return []


def _seg_circle(s: _Seg, c: Point, r: float, tol: float) -> list:
    dx, dy = s.q.x - s.p.x, s.q.y - s.p.y
    L = math.hypot(dx, dy)
    ux, uy = dx / L, dy / L
    fx, fy = s.p.x - c.x, s.p.y - c.y
    b = fx * ux + fy * uy
    h = fx * uy - fy * ux  # signed distance from c to the line
    if abs(h) > r + tol:
        return []
    if abs(h) >= r - tol and abs(abs(h) - r) <= tol:
        ts = [-b]
    else:
        sq = math.sqrt(max(r * r - h * h, 0.0))
        ts = [-b - sq, -b + sq]
    return [Point(s.p.x + t * ux, s.p.y + t * uy) for t in ts if -tol <= t <= L + tol]


def _circle_circle(c1: Point, c2: Point, r: float, tol: float) -> list | None:
    """Intersections of two equal-radius circles; None for coincident circles."""
    dx, dy = c2.x - c1.x, c2.y - c1.y
    d = math.hypot(dx, dy)
    if d <= tol:
        return None
    if d > 2 * r + tol:
        return []
    mx, my = c1.x + 0.5 * dx, c1.y + 0.5 * dy
    if d >= 2 * r - tol:
        return [Point(mx, my)]
    h = math.sqrt(max(r * r - 0.25 * d * d, 0.0))
    ox, oy = -dy / d * h, dx / d * h
    return [Point(mx + ox, my + oy), Point(mx - ox, my - oy)]


def _arc_overlap_endpoints(a1: _Arc, a2: _Arc, r: float, tol: float) -> list:
    out = []
    for a, other in ((a1, a2), (a2, a1)):
        for th in (a.start, a.start + a.sweep):
            if a.sweep >= TWO_PI:
                break
            if _angle_in(th, other.start, other.sweep, tol / r):
                out.append(Point(a.c.x + r * math.cos(th), a.c.y + r * math.sin(th)))
    return out


def _piece_pair(p1, p2, r: float, tol: float) -> list:
    if isinstance(p1, _Seg) and isinstance(p2, _Seg):
        return _seg_seg(p1, p2, tol)
    if isinstance(p1, _Arc) and isinstance(p2, _Arc):
        pts = _circle_circle(p1.c, p2.c, r, tol)
        if pts is None:
            return _arc_overlap_endpoints(p1, p2, r, tol)
        return [p for p in pts if _on_arc(p, p1, r, tol) and _on_arc(p, p2, r, tol)]
    s, a = (p1, p2) if isinstance(p1, _Seg) else (p2, p1)
    return [p for p in _seg_circle(s, a.c, r, tol) if _on_arc(p, a, r, tol)]


def dedupe_points(points: Sequence[Sequence[float]], tol: float) -> list[Point]:
    out: list[Point] = []
    for p in points:
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) > tol for q in out):
            out.append(Point(float(p[0]), float(p[1])))
    return out


def capsule_boundary_intersections(c1: Capsule, c2: Capsule, tol: float | None = None) -> list[Point]:
    """All points common to the boundaries of two equal-radius capsules.

    Computed piece by piece; tangencies give a single touching point and
    shared arcs (capsules of edges meeting at a vertex) contribute the
    endpoints of the shared part.
    """
    if c1.r != c2.r:
        raise ValueError("capsules must share the radius")
    if c1.seg == c2.seg or c1.seg == Segment(c2.seg.b, c2.seg.a):
        raise ValueError("identical capsules have no finite boundary intersection")
    r = c1.r
    if tol is None:
        tol = EPS * (1.0 + r)
    if dist_segment_segment(c1.seg, c2.seg) > 2 * r + tol:
        return []
    pts = []
    for p1 in boundary_pieces(c1):
        for p2 in boundary_pieces(c2):
            pts.extend(_piece_pair(p1, p2, r, tol))
    return dedupe_points(pts, tol)


def boundary_param(c: Capsule, p: Sequence[float]) -> float:
    """Counterclockwise boundary parameter of (the radial projection of) ``p``.

    The origin is the point ``b + r*u`` of the carrier line beyond ``b``;
    the parameter runs over ``[0, perimeter)``.
    """
    s, r = c.seg, c.r
    L = s.length()
    ux, uy, nx, ny = s.frame()
    rx, ry = p[0] - s.a.x, p[1] - s.a.y
    x = rx * ux + ry * uy
    y = rx * nx + ry * ny
    P = 2 * L + TWO_PI * r
    if x > L or L == 0.0:
        phi = math.atan2(y, x - L)
        return r * phi if phi >= 0 else (P + r * phi) % P
    if x < 0:
        phi = math.atan2(y, x) % TWO_PI  # in [pi/2, 3pi/2]
        return 0.5 * math.pi * r + L + r * (phi - 0.5 * math.pi)
    if y >= 0:
        return 0.5 * math.pi * r + (L - x)
    return 1.5 * math.pi * r + L + x


def boundary_point(c: Capsule, t: float) -> Point:
    s, r = c.seg, c.r
    L = s.length()
    ux, uy, nx, ny = s.frame()
    P = 2 * L + TWO_PI * r
    t %= P

    def at(x, y):
        return Point(s.a.x + x * ux + y * nx, s.a.y + x * uy + y * ny)

    q = 0.5 * math.pi * r
    if t <= q:
        phi = t / r
        return at(L + r * math.cos(phi), r * math.sin(phi))
    if t <= q + L:
        return at(L - (t - q), r)
    if t <= 3 * q + L:
        phi = 0.5 * math.pi + (t - q - L) / r
        return at(r * math.cos(phi), r * math.sin(phi))
    if t <= 3 * q + 2 * L:
        return at(t - 3 * q - L, -r)
    phi = -0.5 * math.pi + (t - 3 * q - 2 * L) / r
    return at(L + r * math.cos(phi), r * math.sin(phi))


def boundary_arcs(I: Capsule, N: Capsule, tol: float | None = None) -> list[tuple[float, float]]:
    """Parameter arcs of ``N ∩ bd I`` as ``(lo, hi)`` pairs on ``[0, perimeter]``.

    An arc wrapping through the origin is returned with ``lo > hi``.
    A full boundary returns ``[(0, perimeter)]``.
    """
    if tol is None:
        tol = EPS * (1.0 + I.r)
    P = I.perimeter()
    cuts = sorted({boundary_param(I, p) for p in capsule_boundary_intersections(I, N, tol)})

    def inside(t):
        return N.contains(boundary_point(I, t), tol)

    if not cuts:
        return [(0.0, P)] if inside(0.0) else []
    n = len(cuts)
    # gap k runs from cuts[k] to cuts[k+1] (cyclically)
    gap_in = []
    for k in range(n):
        lo, hi = cuts[k], cuts[(k + 1) % n]
        span = (hi - lo) % P if n > 1 else P
        gap_in.append(inside(lo + 0.5 * span))
    if all(gap_in):
        return [(0.0, P)]
    arcs = []
    for k in range(n):
        if gap_in[k] or gap_in[k - 1]:
            continue
        # isolated touching point
        arcs.append((cuts[k], cuts[k]))
    k0 = next(k for k in range(n) if not gap_in[k])
    k = (k0 + 1) % n
    while k != k0:
        if gap_in[k]:
            start = cuts[k]
            while gap_in[k]:
                k = (k + 1) % n
            arcs.append((start, cuts[k]))
        else:
            k = (k + 1) % n
    return arcs


# ---------------------------------------------------------------- covers


def seven_cover(center: Sequence[float], r: float, angle: float = 0.0) -> list[Point]:
    """Center plus a hexagon at distance sqrt(3)*r; radius-r disks cover N_2r(center)."""
    if not r > 0:
        raise ValueError("r must be positive")
    cx, cy = center
    R = math.sqrt(3.0) * r
    pts = [Point(cx, cy)]
    for k in range(6):
        th = angle + k * math.pi / 3
        pts.append(Point(cx + R * math.cos(th), cy + R * math.sin(th)))
    return pts


def four_cover(center: Sequence[float], r: float, axis_angle: float) -> list[Point]:
    """Four points whose radius-r disks cover N_{sqrt2 r}(center)."""
    if not r > 0:
        raise ValueError("r must be positive")
    cx, cy = center
    h = math.sqrt(0.5) * r
    c, s = math.cos(axis_angle), math.sin(axis_angle)
    out = []
    for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
        x, y = sx * h, sy * h
        out.append(Point(cx + c * x - s * y, cy + s * x + c * y))
    return out


def carrier_points(c: Capsule) -> tuple[Point, Point]:
    """The two points of the carrier line on the boundary: ``a - r*u`` and ``b + r*u``."""
    s, r = c.seg, c.r
    if s.length() == 0.0:
        raise ValueError("carrier line of a zero-length segment is undefined")
    ux, uy, _, _ = s.frame()
    return Point(s.a.x - r * ux, s.a.y - r * uy), Point(s.b.x + r * ux, s.b.y + r * uy)


def u_points(c: Capsule) -> list[Point]:
    """Four rectangle corners and the two carrier-line boundary points."""
    s, r = c.seg, c.r
    if s.length() == 0.0:
        raise ValueError("u_points needs a segment of nonzero length")
    _, _, nx, ny = s.frame()
    v1, v2 = carrier_points(c)
    return [
        Point(s.a.x + r * nx, s.a.y + r * ny),
        Point(s.b.x + r * nx, s.b.y + r * ny),
        Point(s.a.x - r * nx, s.a.y - r * ny),
        Point(s.b.x - r * nx, s.b.y - r * ny),
        v1,
        v2,
    ]


def u_points_side(c: Capsule, side: int) -> list[Point]:
    """U(I) restricted to the closed halfplane ``side`` (1 = left of a->b)."""
    u = u_points(c)
    return ([u[0], u[1]] if side == 1 else [u[2], u[3]]) + [u[4], u[5]]


def _u0_sides(c: Capsule) -> tuple[list[Point], list[Point], list[Point]]:
    s, r = c.seg, c.r
    L = s.length()
    if L == 0.0:
        raise ValueError("u0_points needs a segment of nonzero length")
    ux, uy, nx, ny = s.frame()
    th = math.atan2(uy, ux)
    D = 0.5 * L

    def glob(x, y):
        # local frame centered at the midpoint, x along u, y along n
        return Point(s.a.x + (D + x) * ux + y * nx, s.a.y + (D + x) * uy + y * ny)

    covers = [seven_cover(u, r, th + math.pi / 6) for u in (s.a, s.b)]
    # indices 1..3 sit at +30,+90,+150 degrees (left side), 4..6 on the right
    left = [covers[0][0], *covers[0][1:4], covers[1][0], *covers[1][1:4]]
    right = [covers[0][0], *covers[0][4:7], covers[1][0], *covers[1][4:7]]
    extra = []
    for sgn_s in (-1.0, 1.0):  # s = 1 at x=-D, s = 2 at x=+D
        for sgn_i in (1.0, -1.0):  # i = 1 left, i = 2 right
            xs = sgn_s * D
            if D <= math.sqrt(2.0) * r:
                zy = math.sqrt(max(4 * r * r - D * D, 0.0))
                ax, ay = 0.5 * xs, 0.5 * (2 * r + zy)
            elif D <= 2 * r:
                ax, ay = xs - sgn_s * 0.5 * D, D
            else:
                bx = sgn_s * math.sqrt(D * D - 4 * r * r)
                ax, ay = 0.5 * (bx + xs), 2 * r
            extra.append((sgn_i, glob(ax, sgn_i * ay)))
    a_left = [p for sg, p in extra if sg > 0]
    a_right = [p for sg, p in extra if sg < 0]
    return covers[0] + covers[1], a_left, a_right


def u0_points(c: Capsule) -> list[Point]:
    """The 18-point set: seven-covers of both endpoints plus four gap points.

    Order: 7 points around ``a``, 7 around ``b``, then a_11, a_21 (left side)
    and a_12, a_22 (right side).
    """
    hex_pts, a_left, a_right = _u0_sides(c)
    return hex_pts + a_left + a_right


def u0_points_side(c: Capsule, side: int) -> list[Point]:
    """The (at most 10) points of the 18-point set in a closed halfplane."""
    hex_pts, a_left, a_right = _u0_sides(c)
    a_pts = a_left if side == 1 else a_right
    idx = (1, 2, 3) if side == 1 else (4, 5, 6)
    return [hex_pts[0], *(hex_pts[i] for i in idx), hex_pts[7], *(hex_pts[7 + i] for i in idx), *a_pts]


# ---------------------------------------------------------- empty disks


class NotDelaunayEdge(ValueError):
    pass


@dataclass(frozen=True)
class EmptyDisk:
    """Largest empty disk through an edge with its center pushed to one side.

    ``offset`` is the signed position of the center along the left normal,
    measured from the edge midpoint. ``capped`` marks an unbounded side.
    """

    disk: Disk
    offset: float
    capped: bool


def empty_disks_through_edge(u1: Sequence[float], u2: Sequence[float], V: np.ndarray) -> tuple[EmptyDisk, EmptyDisk]:
    """Maximal empty disks through ``u1, u2`` for the left (1) and right (2) side."""
    u1 = Point(*map(float, u1))
    u2 = Point(*map(float, u2))
    if u1 == u2:
        raise ValueError("edge endpoints coincide")
    V = np.asarray(V, dtype=float).reshape(-1, 2)
    seg = Segment(u1, u2)
    ux, uy, nx, ny = seg.frame()
    m = np.array(seg.midpoint())
    D = 0.5 * seg.length()
    rel = V - m
    x = rel @ np.array([ux, uy])
    y = rel @ np.array([nx, ny])
    scale = max(1.0, float(np.ptp(V, axis=0).max()) if len(V) else 1.0)
    keep = np.hypot(*(V - np.array(u1)).T) > EPS * scale
    keep &= np.hypot(*(V - np.array(u2)).T) > EPS * scale
    x, y = x[keep], y[keep]
    k = x * x + y * y - D * D
    if np.any((np.abs(y) <= EPS * scale) & (k < 0)):
        raise NotDelaunayEdge("a vertex lies on the open edge")
    cap = 10.0 * max(float(np.hypot(*np.ptp(V, axis=0))), 2 * D)
    up = y > EPS * scale
    dn = y < -EPS * scale
    t_hi = float(np.min(k[up] / (2 * y[up]))) if up.any() else math.inf
    t_lo = float(np.max(k[dn] / (2 * y[dn]))) if dn.any() else -math.inf
    if t_lo > t_hi + EPS * scale:
        raise NotDelaunayEdge("no empty disk passes through the edge")

    def make(t, capped):
        c = Point(m[0] + t * nx, m[1] + t * ny)
        return EmptyDisk(Disk(c, math.hypot(D, t)), t, capped)

    left = make(min(t_hi, cap), t_hi > cap)
    right = make(max(t_lo, -cap), t_lo < -cap)
    return left, right
