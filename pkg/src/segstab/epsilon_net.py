"""Weighted epsilon nets from a maximal delta-independent family of capsules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .finders import Bucket, FinderResult, FinderVariant, finder_size_bound, run_finder
from .geometry import EPS, Capsule, Point, dist_segment_segment, pairwise_segment_distances
from .instance import GraphClass, IncidenceIndex, capsule_weights


@dataclass(frozen=True)
class VariantConstants:
    """Structural parameters and finder constants of one graph class."""

    name: str
    finder: FinderVariant
    c1: float
    c2: float
    beta: float
    alpha: float = 1.0
    tau: float = 1.0

    @property
    def theta0(self) -> float:
        return theta0(self)

    @property
    def bound_coeff(self) -> float:
        return net_size_bound(self)


VARIANTS: dict[GraphClass, VariantConstants] = {
    GraphClass.GENERAL: VariantConstants("General", FinderVariant.GENERAL, 8.0, 2.0, 3.0),
    GraphClass.REMOTE: VariantConstants("RemoteEdges", FinderVariant.STAR, 1.0, 6.0, 3.0),
    GraphClass.GABRIEL: VariantConstants("Gabriel", FinderVariant.GABRIEL, 0.0, 18.0, 3.0),
    GraphClass.DELAUNAY: VariantConstants("Delaunay", FinderVariant.DELAUNAY, 4.0, 10.0, 3.0),
    GraphClass.OUTERPLANE_DT: VariantConstants("OuterplaneDelaunay", FinderVariant.OUTERPLANE_DT, 5.0, 4.0, 2.0),
    GraphClass.OUTERPLANE: VariantConstants("Outerplane", FinderVariant.GENERAL, 8.0, 2.0, 2.0),
}


def variant_for(cls: GraphClass | str) -> VariantConstants:
    if isinstance(cls, str) and not isinstance(cls, GraphClass):
        cls = GraphClass.parse(cls)
    return VARIANTS[cls]


def _s(vc: VariantConstants) -> float:
    return math.sqrt(1.0 + vc.c2 * vc.alpha / (vc.c1 * vc.beta))


def theta0(vc: VariantConstants) -> float:
    """Overlap parameter minimising the net-size bound (0 when c1 = 0)."""
    if vc.c1 == 0:
        return 0.0
    return (vc.alpha / vc.beta) / (1.0 + _s(vc))


def net_size_bound(vc: VariantConstants) -> float:
    """Coefficient B with |net| <= B / eps."""
    if vc.c1 == 0:
        return vc.c2 * vc.tau / vc.alpha
    s = _s(vc)
    return (1 + 1 / s) * (2 * vc.c1 * vc.tau * vc.beta / vc.alpha**2 + vc.c2 * vc.tau / vc.alpha) + vc.c2 * vc.tau / (vc.alpha * s)


def family_size_bound(vc: VariantConstants, eps: float) -> float:
    """tau / ((alpha - theta0*beta) * eps)."""
    return vc.tau / ((vc.alpha - theta0(vc) * vc.beta) * eps)


@dataclass
class IndependentFamily:
    members: list[int]
    buckets: list[Bucket]


def build_independent(
    R_eps: Sequence[int],
    delta: float,
    w: np.ndarray,
    index: IncidenceIndex,
    capsules: Sequence[Capsule] | None = None,
    tol: float = EPS,
    prune_remark: bool = False,
) -> IndependentFamily:
    """Greedy maximal delta-independent family with bucket assignment.

    Capsules are tried in the given order. A capsule joins the family when
    its overlap weight with every current pivot is at most ``delta * w(Y)``;
    otherwise it joins the bucket of the first (earliest) violating pivot.
    With ``delta == 0`` overlap means geometric intersection of capsules.
    With ``prune_remark`` a capsule whose segment meets a pivot segment goes
    straight to that pivot's bucket.
    """
    w = np.asarray(w, dtype=float)
    W = float(w.sum())
    thresh = delta * W
    pivots: list[int] = []
    buckets: dict[int, list[int]] = {}
    # pivot positions containing each point (for the weighted test)
    point_pivots: dict[int, list[int]] = {}
    geometric = delta == 0
    if (geometric or prune_remark) and capsules is None:
        raise ValueError("capsule geometry is needed for this independence test")
    if geometric and len(R_eps):
        segs = np.array([[c.seg.a, c.seg.b] for c in (capsules[k] for k in R_eps)], dtype=float)
        r = capsules[R_eps[0]].r
        close = pairwise_segment_distances(segs, segs) <= 2 * r + 2 * tol
        pos = {k: i for i, k in enumerate(R_eps)}
    for P in R_eps:
        owner = None
        if prune_remark:
            for pi, I in enumerate(pivots):
                if dist_segment_segment(capsules[P].seg, capsules[I].seg) == 0.0:
                    owner = pi
                    break
        if owner is None:
            if geometric:
                for pi, I in enumerate(pivots):
                    if close[pos[P], pos[I]]:
                        owner = pi
                        break
            else:
                acc: dict[int, float] = {}
                for y in index.members(P):
                    for pi in point_pivots.get(int(y), ()):
                        acc[pi] = acc.get(pi, 0.0) + w[y]
                viol = [pi for pi, val in acc.items() if val > thresh]
                if viol:
                    owner = min(viol)
        if owner is None:
            pi = len(pivots)
            pivots.append(P)
            buckets[pi] = [P]
            if not geometric:
                for y in index.members(P):
                    point_pivots.setdefault(int(y), []).append(pi)
        else:
            buckets[owner].append(P)
    out = []
    for pi, I in enumerate(pivots):
        wI = float(w[index.members(I)].sum())
        dI = delta * W / wI if wI > 0 else math.inf
        out.append(Bucket(I, buckets[pi], dI))
    return IndependentFamily(pivots, out)


@dataclass
class NetResult:
    points: list[Point]
    eps: float
    delta: float
    R_eps: list[int]
    family: IndependentFamily | None
    finder_results: list[FinderResult] = field(default_factory=list)

    @property
    def fallbacks(self) -> int:
        return sum(f.fallback for f in self.finder_results)

    @property
    def repairs(self) -> int:
        return sum(f.repairs for f in self.finder_results)

    def bucket_sizes(self) -> list[int]:
        return [len(f.points) for f in self.finder_results]


def epsilon_net(
    index: IncidenceIndex,
    capsules: Sequence[Capsule],
    w: np.ndarray,
    eps: float,
    vc: VariantConstants,
    V: np.ndarray | None = None,
    tol: float = EPS,
    prune_remark: bool = False,
) -> NetResult:
    """Points hitting every capsule row ``N`` of ``index`` with ``w(N) > eps * w(Y)``.

    ``capsules`` is aligned with the rows of ``index`` and ``w`` with its
    columns. For ``eps >= 1`` the net is empty by convention.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if eps >= 1:
        return NetResult([], eps, 0.0, [], None)
    w = np.asarray(w, dtype=float)
    W = float(w.sum())
    cw = capsule_weights(index, w)
    R_eps = [int(k) for k in np.flatnonzero(cw > eps * W)]
    delta = theta0(vc) * eps
    fam = build_independent(R_eps, delta, w, index, capsules, tol, prune_remark)
    res = NetResult([], eps, delta, R_eps, fam)
    for b in fam.buckets:
        f = run_finder(vc.finder, capsules[b.pivot], [capsules[k] for k in b.members], V, tol)
        res.finder_results.append(f)
        res.points.extend(f.points)
    return res


def bucket_bound(vc: VariantConstants, b: Bucket) -> float:
    return finder_size_bound(vc.finder, b.delta_I)
