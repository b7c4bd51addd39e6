"""Hitting-set finders for buckets of capsules that overlap a pivot capsule heavily.

Every finder returns a :class:`FinderResult` whose points hit every bucket
member. The constructions follow the projection, boundary-arc and 18-point
procedures; when a numerical corner case defeats a construction the finder
adds a repair point on the offending segment and records it, so the output is
always a valid hitting set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .geometry import (
    EPS,
    Capsule,
    Point,
    boundary_arcs,
    boundary_point,
    capsule_clip_segment,
    carrier_points,
    dist_points_segment,
    dist_segment_segment,
    empty_disks_through_edge,
    four_cover,
    seven_cover,
    u0_points,
    u0_points_side,
    u_points,
    u_points_side,
)
from .intervals import min_hitting_arcs, min_hitting_intervals


class FinderVariant(str, Enum):
    GENERAL = "GeneralFinder"
    STAR = "StarFinder"
    GABRIEL = "GabrielFinder"
    DELAUNAY = "DelaunayFinder"
    OUTERPLANE_DT = "OuterplaneDTFinder"


FINDER_CONSTANTS: dict[FinderVariant, tuple[float, float]] = {
    FinderVariant.GENERAL: (8.0, 2.0),
    FinderVariant.STAR: (1.0, 6.0),
    FinderVariant.GABRIEL: (0.0, 18.0),
    FinderVariant.DELAUNAY: (4.0, 10.0),
    FinderVariant.OUTERPLANE_DT: (5.0, 4.0),
}


def finder_size_bound(variant: FinderVariant, delta_I: float) -> float:
    """Size guarantee ``c1/delta_I + c2`` (the Delaunay finder also allows ``1/delta_I + 18``)."""
    c1, c2 = FINDER_CONSTANTS[variant]
    if c1 == 0:
        return c2
    if delta_I <= 0:
        return math.inf
    bound = c1 / delta_I + c2
    if variant == FinderVariant.DELAUNAY:
        bound = max(bound, 1.0 / delta_I + 18.0)
    return bound


@dataclass
class Bucket:
    pivot: int
    members: list[int]
    delta_I: float


@dataclass
class FinderResult:
    points: list[Point]
    branch: str
    fallback: bool = False  # a Delaunay-type side check failed and the general finder ran
    repairs: int = 0  # members that needed a repair point
    notes: list[str] = field(default_factory=list)


class PreconditionError(ValueError):
    """A bucket violates a finder's geometric precondition."""


# ----------------------------------------------------------------- helpers


def _hits(points: Sequence[Point], c: Capsule, tol: float) -> bool:
    if not points:
        return False
    return bool(np.min(dist_points_segment(np.asarray(points, dtype=float), c.seg)) <= c.r + tol)


def _hit_mask(points: Sequence[Point], caps: Sequence[Capsule], tol: float) -> np.ndarray:
    if not caps:
        return np.zeros(0, dtype=bool)
    if not points:
        return np.zeros(len(caps), dtype=bool)
    P = np.asarray(points, dtype=float)
    return np.array([np.min(dist_points_segment(P, c.seg)) <= c.r + tol for c in caps])


def _repair(res: FinderResult, members: Sequence[Capsule], tol: float) -> FinderResult:
    """Add the midpoint of every member segment left unhit."""
    missed = np.flatnonzero(~_hit_mask(res.points, members, tol))
    for k in missed:
        res.points.append(members[k].seg.midpoint())
        res.repairs += 1
    if len(missed):
        res.notes.append(f"repaired {len(missed)} member(s)")
    return res


def _heights(I: Capsule, pts) -> np.ndarray:
    ux, uy, nx, ny = I.seg.frame()
    P = np.asarray(pts, dtype=float).reshape(-1, 2) - np.array(I.seg.a)
    return P @ np.array([nx, ny])


def _along(I: Capsule, pts) -> np.ndarray:
    ux, uy, nx, ny = I.seg.frame()
    P = np.asarray(pts, dtype=float).reshape(-1, 2) - np.array(I.seg.a)
    return P @ np.array([ux, uy])


def _clip(I: Capsule, N: Capsule, tol: float):
    """Part of e(N) within 2r of e(I) as its two endpoints (None when empty)."""
    z = capsule_clip_segment(I.seg, N.seg, 2 * I.r + 4 * tol)
    if z is None:
        return None
    return z.at(z.lo), z.at(z.hi)


def _side_of(I: Capsule, z, tol: float) -> int:
    """1 (left of a->b), 2 (right) or 0 when z straddles the carrier line."""
    h = _heights(I, z)
    if h.min() >= -tol:
        return 1
    if h.max() <= tol:
        return 2
    return 0


def _crossing_point(I: Capsule, z) -> Point:
    h = _heights(I, z)
    p, q = np.asarray(z[0]), np.asarray(z[1])
    t = h[0] / (h[0] - h[1])
    x = p + t * (q - p)
    return Point(float(x[0]), float(x[1]))


def _project_and_stab(I: Capsule, zs: Sequence, side: int) -> list[Point]:
    """Stab the r-fattened projections of the z pieces onto the line l_side.

    Every stabber is replaced by a four-point cover of radius sqrt(2)*r.
    """
    if not zs:
        return []
    r = I.r
    ux, uy, nx, ny = I.seg.frame()
    sgn = 1.0 if side == 1 else -1.0
    ivs = []
    for z in zs:
        t = _along(I, z)
        ivs.append((float(t.min()) - r, float(t.max()) + r))
    stab = min_hitting_intervals(ivs)
    theta = math.atan2(uy, ux)
    ax, ay = I.seg.a
    out: list[Point] = []
    for t in stab.points:
        x0 = (ax + t * ux + sgn * r * nx, ay + t * uy + sgn * r * ny)
        out.extend(four_cover(x0, r, theta))
    return out


def _single_arc(I: Capsule, N: Capsule, tol: float):
    arcs = boundary_arcs(I, N, tol)
    if len(arcs) != 1:
        raise PreconditionError(f"capsule meets the pivot boundary in {len(arcs)} arcs")
    lo, hi = arcs[0]
    if lo <= hi and hi - lo >= I.perimeter():
        raise PreconditionError("capsule contains the whole pivot boundary")
    return arcs[0]


def _arcs_to_points(I: Capsule, params: Sequence[float]) -> list[Point]:
    return [boundary_point(I, t) for t in params]


def _zero_length(I: Capsule, members: Sequence[Capsule], tol: float) -> FinderResult:
    res = FinderResult(list(seven_cover(I.seg.a, I.r)), "seven_cover")
    return _repair(res, members, tol)


# ---------------------------------------------------------------- finders


def finder_general(I: Capsule, members: Sequence[Capsule], tol: float = EPS) -> FinderResult:
    """Carrier points plus four-point covers of optimal projection stabbers."""
    if I.seg.length() == 0.0:
        return _zero_length(I, members, tol)
    v = list(carrier_points(I))
    res = FinderResult(list(v), "general")
    alive = [N for N, hit in zip(members, _hit_mask(v, members, tol)) if not hit]
    zs: dict[int, list] = {1: [], 2: []}
    for N in alive:
        z = _clip(I, N, tol)
        if z is None:
            res.points.append(N.seg.midpoint())
            res.repairs += 1
            res.notes.append("member does not reach the pivot")
            continue
        side = _side_of(I, z, tol)
        if side == 0:
            # cannot happen for members missed by the carrier points; keep the output valid
            res.points.append(_crossing_point(I, z))
            res.repairs += 1
            res.notes.append("clipped piece straddles the carrier line")
            continue
        zs[side].append(z)
    for side in (1, 2):
        res.points.extend(_project_and_stab(I, zs[side], side))
    return _repair(res, members, tol)


def finder_star(I: Capsule, members: Sequence[Capsule], tol: float = EPS) -> FinderResult:
    """U(I) plus an optimal stabbing of the boundary arcs of the remaining members.

    Raises :class:`PreconditionError` when a remaining member is within
    distance r of the pivot segment or meets bd I in a disconnected set.
    """
    if I.seg.length() == 0.0:
        return _zero_length(I, members, tol)
    U = u_points(I)
    res = FinderResult(list(U), "star")
    alive = [N for N, hit in zip(members, _hit_mask(U, members, tol)) if not hit]
    arcs = []
    for N in alive:
        if dist_segment_segment(I.seg, N.seg) <= I.r + tol:
            raise PreconditionError("a member outside U(I) lies within r of the pivot segment")
        arcs.append(_single_arc(I, N, tol))
    if arcs:
        # the point v2 sits at parameter 0 and lies in U(I), so it is a valid cut
        stab = min_hitting_arcs(arcs, I.perimeter(), cut=0.0)
        res.points.extend(_arcs_to_points(I, stab.points))
    return _repair(res, members, tol)


def finder_gabriel(I: Capsule, members: Sequence[Capsule] = (), tol: float = EPS) -> FinderResult:
    """The 18-point set; for Gabriel drawings it hits every capsule meeting I."""
    if I.seg.length() == 0.0:
        return _zero_length(I, members, tol)
    res = FinderResult(list(u0_points(I)), "gabriel")
    return _repair(res, members, tol)


def _region_samples(I: Capsule, side: int, rho: float, n: int = 100) -> np.ndarray:
    """Grid samples of N_rho(e(I)) within the closed halfplane ``side``."""
    s = I.seg
    L = s.length()
    ux, uy, nx, ny = s.frame()
    sgn = 1.0 if side == 1 else -1.0
    xs = np.linspace(-rho, L + rho, n)
    ys = np.linspace(0.0, rho, n)
    X, Y = np.meshgrid(xs, ys)
    X, Y = X.ravel(), Y.ravel()
    dx = np.where(X < 0, X, np.where(X > L, X - L, 0.0))
    keep = np.hypot(dx, Y) <= rho
    X, Y = X[keep], sgn * Y[keep]
    return np.column_stack([s.a.x + X * ux + Y * nx, s.a.y + X * uy + Y * ny])


def _covered_outside_disk(samples: np.ndarray, disk, cover: Sequence[Point], r: float, tol: float) -> bool:
    c = np.array(disk.center)
    outside = np.hypot(*(samples - c).T) >= disk.radius - tol
    pts = samples[outside]
    if len(pts) == 0:
        return True
    C = np.asarray(cover, dtype=float)
    d = np.min(np.hypot(pts[:, None, 0] - C[None, :, 0], pts[:, None, 1] - C[None, :, 1]), axis=1)
    return bool(np.all(d <= r + tol))


def _pick_side(I: Capsule, V: np.ndarray):
    """Side whose maximal empty disk through e(I) is larger, with that disk."""
    left, right = empty_disks_through_edge(I.seg.a, I.seg.b, V)
    if left.disk.radius >= right.disk.radius:
        return 1, left.disk, 2, right.disk
    return 2, right.disk, 1, left.disk


def finder_delaunay(I: Capsule, members: Sequence[Capsule], V: np.ndarray, tol: float = EPS) -> FinderResult:
    """Finder for subgraphs of a Delaunay triangulation (three cases)."""
    if I.seg.length() == 0.0:
        return _zero_length(I, members, tol)
    U0 = u0_points(I)
    alive = [N for N, hit in zip(members, _hit_mask(U0, members, tol)) if not hit]
    if not alive:
        return FinderResult(list(U0), "delaunay_u0")
    if all(dist_segment_segment(I.seg, N.seg) > I.r + tol for N in alive):
        try:
            arcs = [_single_arc(I, N, tol) for N in alive]
        except PreconditionError:
            arcs = None
        if arcs is not None:
            stab = min_hitting_arcs(arcs, I.perimeter())
            res = FinderResult(list(U0) + _arcs_to_points(I, stab.points), "delaunay_arcs")
            return _repair(res, members, tol)
    # case (c): one side is handled by the empty disk and the 10 points of that side
    i0, D, _, _ = _pick_side(I, V)
    cover = u0_points_side(I, i0)
    if not _covered_outside_disk(_region_samples(I, i0, 2 * I.r), D, cover, I.r, tol):
        res = finder_general(I, members, tol)
        res.branch = "delaunay_fallback"
        res.fallback = True
        res.notes.append("side coverage check failed")
        return res
    res = FinderResult(list(cover), "delaunay_side")
    _stab_far_side(I, members, cover, i0, tol, res)
    return _repair(res, members, tol)


def _stab_far_side(I: Capsule, members, cover, i0: int, tol: float, res: FinderResult, near_side_arcs: bool = False) -> None:
    """Projection stabbing on the side opposite ``i0`` for members missed by ``cover``.

    Members whose clipped piece lies on side ``i0`` are not expected; they are
    handled by boundary arcs (when ``near_side_arcs``) or by projection onto
    the near line, and noted.
    """
    alive = [N for N, hit in zip(members, _hit_mask(cover, members, tol)) if not hit]
    zs: dict[int, list] = {1: [], 2: []}
    near: list[Capsule] = []
    for N in alive:
        z = _clip(I, N, tol)
        if z is None:
            res.points.append(N.seg.midpoint())
            res.repairs += 1
            continue
        side = _side_of(I, z, tol)
        if side == 0:
            res.points.append(_crossing_point(I, z))
            res.repairs += 1
            res.notes.append("clipped piece straddles the carrier line")
            continue
        if side == i0:
            near.append(N)
            zs[i0].append(z)
        else:
            zs[side].append(z)
    far = 3 - i0
    res.points.extend(_project_and_stab(I, zs[far], far))
    if not near:
        return
    if near_side_arcs:
        arc_members, proj = [], []
        for N, z in zip(near, zs[i0]):
            try:
                if dist_segment_segment(I.seg, N.seg) <= I.r + tol:
                    raise PreconditionError("near-side member within r")
                arc_members.append(_single_arc(I, N, tol))
            except PreconditionError:
                proj.append(z)
        if arc_members:
            stab = min_hitting_arcs(arc_members, I.perimeter(), cut=0.0)
            res.points.extend(_arcs_to_points(I, stab.points))
        if proj:
            res.notes.append(f"{len(proj)} near-side member(s) projected")
            res.points.extend(_project_and_stab(I, proj, i0))
    else:
        res.notes.append(f"{len(near)} near-side member(s) projected")
        res.points.extend(_project_and_stab(I, zs[i0], i0))


def finder_outerplane_dt(I: Capsule, members: Sequence[Capsule], V: np.ndarray, tol: float = EPS) -> FinderResult:
    """Finder for subgraphs of an outerplane Delaunay triangulation."""
    if I.seg.length() == 0.0:
        return _zero_length(I, members, tol)
    U = u_points(I)
    alive = [N for N, hit in zip(members, _hit_mask(U, members, tol)) if not hit]
    if all(dist_segment_segment(I.seg, N.seg) > I.r + tol for N in alive):
        try:
            res = finder_star(I, members, tol)
            res.branch = "outerplane_star"
            return res
        except PreconditionError:
            pass
    i0, D, j0, D2 = _pick_side(I, V)
    cover = u_points_side(I, i0)
    if not _covered_outside_disk(_region_samples(I, i0, I.r), D, cover, I.r, tol):
        # the other side may still work
        cover2 = u_points_side(I, j0)
        if _covered_outside_disk(_region_samples(I, j0, I.r), D2, cover2, I.r, tol):
            i0, cover = j0, cover2
        else:
            res = finder_general(I, members, tol)
            res.branch = "outerplane_fallback"
            res.fallback = True
            res.notes.append("side coverage check failed")
            return res
    res = FinderResult(list(cover), "outerplane_side")
    _stab_far_side(I, members, cover, i0, tol, res, near_side_arcs=True)
    return _repair(res, members, tol)


def run_finder(variant: FinderVariant, I: Capsule, members: Sequence[Capsule], V: np.ndarray | None, tol: float) -> FinderResult:
    """Dispatch on the variant; the star finder falls back to the general one."""
    if variant == FinderVariant.GENERAL:
        return finder_general(I, members, tol)
    if variant == FinderVariant.STAR:
        try:
            return finder_star(I, members, tol)
        except PreconditionError as exc:
            res = finder_general(I, members, tol)
            res.branch = "star_fallback"
            res.fallback = True
            res.notes.append(str(exc))
            return res
    if variant == FinderVariant.GABRIEL:
        return finder_gabriel(I, members, tol)
    if V is None:
        raise ValueError(f"{variant.value} needs the vertex set")
    if variant == FinderVariant.DELAUNAY:
        return finder_delaunay(I, members, V, tol)
    if variant == FinderVariant.OUTERPLANE_DT:
        return finder_outerplane_dt(I, members, V, tol)
    raise ValueError(f"unknown finder variant {variant}")
