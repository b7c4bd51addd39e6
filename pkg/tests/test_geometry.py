import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from segstab.geometry import (
    Capsule,
    NotDelaunayEdge,
    Point,
    Segment,
    boundary_arcs,
    boundary_param,
    boundary_point,
    capsule_boundary_intersections,
    capsule_clip_segment,
    dist_point_segment,
    dist_points_segment,
    dist_segment_segment,
    empty_disks_through_edge,
    four_cover,
    pairwise_segment_distances,
    seven_cover,
    u0_points,
    u0_points_side,
    u_points,
)

from .helpers import min_dist, random_capsule, sample_capsule, seg

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)
segment = st.builds(lambda p, q: Segment(Point(*p), Point(*q)), point, point)


def dense(s: Segment, n: int = 2001) -> np.ndarray:
    t = np.linspace(0, 1, n)[:, None]
    return np.array(s.a) + t * (np.array(s.b) - np.array(s.a))


# ------------------------------------------------------------- distances


def test_dist_point_segment_examples():
    s = seg(-1, 0, 1, 0)
    assert dist_point_segment((0, 1), s) == 1
    assert dist_point_segment((2, 0), s) == 1
    assert dist_point_segment((3, 4), seg(0, 0, 0, 0)) == 5


def test_dist_segment_segment_examples():
    assert dist_segment_segment(seg(0, 0, 1, 0), seg(0, 1, 1, 1)) == 1
    assert dist_segment_segment(seg(0, 0, 1, 1), seg(1, 1, 2, 0)) == 0
    # nearest pair is the endpoints (1,0) and (3,4): sqrt(2^2 + 4^2)
    d = dist_segment_segment(seg(0, 0, 1, 0), seg(3, 4, 3, 5))
    assert d == pytest.approx(math.sqrt(20), abs=1e-12)
    A, B = dense(seg(0, 0, 1, 0)), dense(seg(3, 4, 3, 5))
    assert min_dist(A, B).min() == pytest.approx(d, abs=1e-6)


@given(segment, segment)
def test_segment_distance_matches_sampling(s1, s2):
    d = dist_segment_segment(s1, s2)
    sampled = dist_points_segment(dense(s1, 801), s2).min()
    assert d <= sampled + 1e-9
    assert sampled - d <= (s1.length() / 800) + 1e-9
    assert d == pytest.approx(dist_segment_segment(s2, s1), abs=1e-12)


@given(point, segment)
def test_zero_distance_iff_on_segment(p, s):
    d = dist_point_segment(p, s)
    if d <= 1e-9:
        # p lies on s: it is within tolerance of a point on the segment
        assert dist_points_segment(dense(s, 20001), Segment(Point(*p), Point(*p))).min() <= s.length() / 20000 + 1e-8
    on = Point(*(np.array(s.a) + 0.37 * (np.array(s.b) - np.array(s.a))))
    assert dist_point_segment(on, s) <= 1e-9


def test_pairwise_matches_scalar(rng):
    A = rng.uniform(-5, 5, size=(20, 2, 2))
    B = rng.uniform(-5, 5, size=(15, 2, 2))
    A[3, 1] = A[3, 0]  # a zero-length segment
    D = pairwise_segment_distances(A, B)
    for i in range(len(A)):
        for j in range(len(B)):
            s1 = Segment(Point(*A[i, 0]), Point(*A[i, 1]))
            s2 = Segment(Point(*B[j, 0]), Point(*B[j, 1]))
            assert D[i, j] == pytest.approx(dist_segment_segment(s1, s2), abs=1e-12)


# -------------------------------------------------------------- clipping


def test_clip_examples():
    z = capsule_clip_segment(seg(0, 0, 10, 0), seg(5, -5, 5, 5), 2.0)
    s = z.segment()
    assert s.a == pytest.approx((5, -2)) and s.b == pytest.approx((5, 2))
    assert capsule_clip_segment(seg(0, 0, 10, 0), seg(20, 0, 21, 0), 2.0) is None


def _bisect(f, lo, hi, it=200):
    # f(lo) and f(hi) differ in sign
    flo = f(lo) <= 0
    for _ in range(it):
        mid = 0.5 * (lo + hi)
        if (f(mid) <= 0) == flo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@settings(max_examples=200)
@given(segment, segment, st.floats(0.1, 5))
def test_clip_matches_bisection(e, e2, rho):
    z = capsule_clip_segment(e, e2, rho)
    L = e2.length()
    ts = np.linspace(0, L, 1001)
    ux, uy, _, _ = e2.frame()
    P = np.array(e2.a) + ts[:, None] * np.array([ux, uy])
    inside = dist_points_segment(P, e) <= rho
    if z is None:
        assert not inside.any() or dist_segment_segment(e, e2) > rho - 1e-9
        return
    # all samples of the output are within rho
    Q = np.array([z.at(t) for t in np.linspace(z.lo, z.hi, 101)])
    assert np.all(dist_points_segment(Q, e) <= rho + 1e-9)
    if L == 0:
        return

    def f(t):
        return dist_point_segment((e2.a.x + t * ux, e2.a.y + t * uy), e) - rho

    # endpoints agree with bisection where the boundary is crossed inside e2
    if z.lo > 1e-9 and f(0.0) > 0:
        assert _bisect(f, 0.0, z.lo + 1e-12) == pytest.approx(z.lo, abs=1e-8 * (1 + L))
    if z.hi < L - 1e-9 and f(L) > 0:
        assert _bisect(f, z.hi - 1e-12, L) == pytest.approx(z.hi, abs=1e-8 * (1 + L))
    # just outside the output the distance exceeds rho
    step = 1e-6 * (1 + L)
    if z.lo - step > 0:
        assert f(z.lo - step) > -1e-9
    if z.hi + step < L:
        assert f(z.hi + step) > -1e-9


# -------------------------------------------------- boundary intersections


def test_boundary_intersection_examples():
    tangent = capsule_boundary_intersections(Capsule(seg(0, 0, 0, 0), 1), Capsule(seg(2, 0, 2, 0), 1))
    assert len(tangent) == 1 and tangent[0] == pytest.approx((1, 0), abs=1e-7)
    two = sorted(capsule_boundary_intersections(Capsule(seg(0, 0, 0, 0), 1), Capsule(seg(1, 0, 1, 0), 1)), key=lambda p: p.y)
    assert len(two) == 2
    assert two[0] == pytest.approx((0.5, -math.sqrt(3) / 2)) and two[1] == pytest.approx((0.5, math.sqrt(3) / 2))
    assert capsule_boundary_intersections(Capsule(seg(0, 0, 1, 0), 1), Capsule(seg(0, 5, 1, 5), 1)) == []


def test_identical_capsules_rejected():
    with pytest.raises(ValueError):
        capsule_boundary_intersections(Capsule(seg(0, 0, 1, 0), 1), Capsule(seg(1, 0, 0, 0), 1))


def _sign_changes(c1: Capsule, c2: Capsule, n: int = 10000) -> int:
    t = np.linspace(0, c2.perimeter(), n, endpoint=False)
    P = np.array([boundary_point(c2, x) for x in t])
    f = dist_points_segment(P, c1.seg) - c1.r
    s = np.sign(f)
    return int(np.sum(s != np.roll(s, 1)))


def test_boundary_intersections_scan(rng):
    checked = 0
    while checked < 40:
        r = rng.uniform(0.3, 1.5)
        c1 = random_capsule(rng, rng.uniform(0.2, 3), r)
        # second capsule near the first so the boundaries cross
        mid = np.array(c1.seg.midpoint()) + rng.uniform(-2, 2, 2)
        th = rng.uniform(0, 2 * math.pi)
        d = rng.uniform(0.2, 3) * np.array([math.cos(th), math.sin(th)])
        c2 = Capsule(Segment(Point(*(mid - d)), Point(*(mid + d))), r)
        pts = capsule_boundary_intersections(c1, c2)
        tol = 1e-9 * (1 + r)
        for p in pts:
            assert abs(dist_point_segment(p, c1.seg) - r) <= 10 * tol
            assert abs(dist_point_segment(p, c2.seg) - r) <= 10 * tol
        changes = _sign_changes(c1, c2)
        # tangencies produce no sign change; a clean crossing count must match
        if all(abs(dist_point_segment(boundary_point(c2, boundary_param(c2, p) + 1e-4), c1.seg) - r) > 1e-7 for p in pts):
            assert changes == len(pts)
        checked += 1


@given(st.floats(0.1, 3), st.floats(0, 2 * math.pi), st.floats(0.2, 2))
def test_boundary_param_roundtrip(L, th, r):
    c = Capsule(Segment(Point(0, 0), Point(L * math.cos(th), L * math.sin(th))), r)
    for t in np.linspace(0, c.perimeter(), 37, endpoint=False):
        p = boundary_point(c, t)
        assert dist_point_segment(p, c.seg) == pytest.approx(r, abs=1e-9)
        assert boundary_param(c, p) == pytest.approx(t, abs=1e-7)
    # the origin of the parameter is the carrier point beyond b
    assert boundary_point(c, 0.0) == pytest.approx((c.seg.b.x + r * math.cos(th), c.seg.b.y + r * math.sin(th)))


# ----------------------------------------------------------------- covers


def test_seven_cover_examples():
    pts = seven_cover((0, 0), 1)
    assert len(pts) == 7 and pts[0] == (0, 0)
    assert min_dist(np.array([[2.0, 0.0]]), pts)[0] == pytest.approx(2 - math.sqrt(3))
    assert math.dist((math.sqrt(3), 1), (math.sqrt(3), 0)) == pytest.approx(1)
    assert min_dist(np.array([[math.sqrt(3), 1.0]]), pts)[0] <= 1 + 1e-9


def test_four_cover_examples():
    pts = four_cover((0, 0), 1, 0.0)
    h = math.sqrt(2) / 2
    assert sorted(pts) == pytest.approx(sorted([(h, h), (-h, h), (-h, -h), (h, -h)]))
    assert math.dist((math.sqrt(2), 0), (h, h)) == pytest.approx(1)
    assert all(math.dist((0, 0), p) == pytest.approx(1) for p in pts)


@settings(max_examples=30)
@given(st.floats(0.1, 5), st.floats(0, 2 * math.pi), st.integers(0, 2**31))
def test_covers_by_sampling(r, angle, seed):
    rng = np.random.default_rng(seed)
    # uniform samples of a disk of radius rho
    def disk(rho, n=20000):
        u = rng.uniform(0, 1, n)
        th = rng.uniform(0, 2 * math.pi, n)
        return np.column_stack([rho * np.sqrt(u) * np.cos(th), rho * np.sqrt(u) * np.sin(th)])

    assert min_dist(disk(2 * r), seven_cover((0, 0), r, angle)).max() <= r * (1 + 1e-9)
    assert min_dist(disk(math.sqrt(2) * r), four_cover((0, 0), r, angle)).max() <= r * (1 + 1e-9)


def test_u_points_example():
    pts = u_points(Capsule(seg(0, 0, 4, 0), 1))
    assert sorted(pts) == pytest.approx(sorted([(0, 1), (4, 1), (0, -1), (4, -1), (-1, 0), (5, 0)]))
    rot = u_points(Capsule(seg(0, 0, 0, 4), 1))
    assert sorted(rot) == pytest.approx(sorted([(-y, x) for x, y in pts]))
    with pytest.raises(ValueError):
        u_points(Capsule(seg(1, 1, 1, 1), 1))


@given(segment, st.floats(0.1, 3))
def test_u_points_on_boundary(s, r):
    if s.length() < 1e-6:
        return
    c = Capsule(s, r)
    d = dist_points_segment(np.array(u_points(c)), s)
    assert np.allclose(d, r, atol=1e-9 * (1 + r + s.length()))


def test_u0_examples():
    pts = u0_points(Capsule(seg(0, 0, 2, 0), 1))
    assert len(pts) == 18
    assert pts[14] == pytest.approx((0.5, (2 + math.sqrt(3)) / 2))
    pts = u0_points(Capsule(seg(0, 0, 4, 0), 1))
    assert pts[14] == pytest.approx((1.0, 2.0))
    pts = u0_points(Capsule(seg(0, 0, 6, 0), 1))
    assert pts[14] == pytest.approx(((3 - math.sqrt(5)) / 2, 2.0))


@given(segment, st.floats(0.1, 3), st.sampled_from([1, 2]))
def test_u0_side_has_at_most_ten_points(s, r, side):
    if s.length() < 1e-6:
        return
    c = Capsule(s, r)
    pts = u0_points_side(c, side)
    assert len(pts) <= 10
    ux, uy, nx, ny = s.frame()
    h = (np.array(pts) - np.array(s.a)) @ np.array([nx, ny])
    sgn = 1 if side == 1 else -1
    assert np.all(sgn * h >= -1e-9 * (1 + r + s.length()))
    # the seven-covers put at most four points in each closed halfplane
    H = (np.array(u0_points(c)[:14]) - np.array(s.a)) @ np.array([nx, ny])
    for block in (H[:7], H[7:]):
        assert np.sum(block >= -1e-9 * (1 + r)) <= 4
        assert np.sum(block <= 1e-9 * (1 + r)) <= 4


@pytest.mark.parametrize("regime", [0, 1, 2])
def test_u0_cover_sampling(regime, rng):
    for _ in range(5):
        r = rng.uniform(0.5, 2)
        D = r * [rng.uniform(0.05, math.sqrt(2)), rng.uniform(math.sqrt(2), 2), rng.uniform(2, 6)][regime]
        c = random_capsule(rng, D, r)
        P = sample_capsule(rng, c.seg, 2 * r, 20000)
        m = np.array(c.seg.midpoint())
        P = P[np.hypot(*(P - m).T) >= D]
        assert min_dist(P, u0_points(c)).max() <= r * (1 + 1e-9)


# ------------------------------------------------------------ empty disks


def test_empty_disk_examples():
    V = np.array([[0, 0], [2, 0], [1, 2]], dtype=float)
    left, right = empty_disks_through_edge((0, 0), (2, 0), V)
    assert left.offset == pytest.approx(0.75)
    assert not left.capped and right.capped
    l2, r2 = empty_disks_through_edge((0, 0), (2, 0), V[:2])
    assert l2.capped and r2.capped


def test_not_delaunay_edge():
    V = np.array([[0, 0], [2, 0], [1, 0.1], [1, -0.1]], dtype=float)
    with pytest.raises(NotDelaunayEdge):
        empty_disks_through_edge((0, 0), (2, 0), V)


def test_empty_disks_on_generated_edges():
    from segstab.generators import GenConfig, gen_delaunay

    inst = gen_delaunay(GenConfig(seed=3, n=40))
    V = inst.vertices
    tol = inst.tol()
    for i, j in inst.edges:
        for d in empty_disks_through_edge(V[i], V[j], V):
            c = np.array(d.disk.center)
            dist = np.hypot(*(V - c).T)
            dist[[i, j]] = np.inf
            assert np.all(dist >= d.disk.radius - tol)
            assert math.dist(V[i], c) == pytest.approx(d.disk.radius)


# -------------------------------------------------------- arc overlaps


def _arc_mask(arcs, P, ts):
    m = np.zeros(len(ts), dtype=bool)
    for lo, hi in arcs:
        m |= ((lo <= ts) & (ts <= hi)) if lo <= hi else ((ts >= lo) | (ts <= hi))
    return m


def test_boundary_arcs_match_sampling(rng):
    for _ in range(30):
        r = 1.0
        I = random_capsule(rng, rng.uniform(0.2, 3), r)
        N = random_capsule(rng, rng.uniform(0.2, 3), r)
        N = Capsule(Segment(Point(*(np.array(N.seg.a) * 0.3)), Point(*(np.array(N.seg.b) * 0.3))), r)
        if N.seg == I.seg:
            continue
        P = I.perimeter()
        ts = np.linspace(0, P, 3001, endpoint=False)
        inside = np.array([N.contains(boundary_point(I, t), 1e-9) for t in ts])
        mask = _arc_mask(boundary_arcs(I, N), P, ts)
        # disagreement only right at arc endpoints
        assert np.sum(inside != mask) <= 4


def _remote_triple_member(rng, L, r):
    p = np.array([rng.uniform(-r, L + r), rng.choice([-1, 1]) * rng.uniform(r, 2 * r)])
    th = rng.uniform(0, 2 * math.pi)
    d = 0.5 * rng.uniform(0.2, 4) * np.array([math.cos(th), math.sin(th)])
    return Segment(Point(*(p - d)), Point(*(p + d)))


def test_arc_monotonicity(rng):
    """Two remote capsules missing U(I) that meet inside I overlap on bd I."""
    r = 1.0
    found = 0
    while found < 1000:
        L = rng.uniform(0.5, 6)
        I = Capsule(Segment(Point(0, 0), Point(L, 0)), r)
        U = np.array(u_points(I))
        Ns = []
        for _ in range(2):
            s = _remote_triple_member(rng, L, r)
            if not (r < dist_segment_segment(I.seg, s) <= 2 * r) or dist_points_segment(U, s).min() <= r:
                break
            Ns.append(Capsule(s, r))
        if len(Ns) < 2:
            continue
        xs, ys = np.meshgrid(np.linspace(-r, L + r, 150), np.linspace(-r, r, 60))
        G = np.column_stack([xs.ravel(), ys.ravel()])
        G = G[dist_points_segment(G, I.seg) <= r]
        if not np.any((dist_points_segment(G, Ns[0].seg) <= r) & (dist_points_segment(G, Ns[1].seg) <= r)):
            continue
        found += 1
        P = I.perimeter()
        ts = np.linspace(0, P, 20001)
        assert np.any(_arc_mask(boundary_arcs(I, Ns[0]), P, ts) & _arc_mask(boundary_arcs(I, Ns[1]), P, ts))
