"""Iterative reweighting, the parametric Agarwal-Pan driver and end-to-end solving."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit

from .epsilon_net import NetResult, VariantConstants, epsilon_net, net_size_bound, variant_for
from .geometry import Capsule, Point, pairwise_segment_distances, seven_cover, u0_points
from .instance import (
    GraphClass,
    IncidenceIndex,
    InvalidInstance,
    PlaneGraphInstance,
    build_candidates,
    split_isolated,
    validate,
)
from .oracle import HittingReport, verify_hitting

RENORM_AT = 1e250


@dataclass(frozen=True)
class PapParams:
    """Parameters of the reweighting driver; defaults derive from nu."""

    nu: float = 6.0
    mu: float = 1.0
    eta: float | None = None
    lambda1: float | None = None
    delta: float | None = None

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        if self.eta is None:
            object.__setattr__(self, "eta", self.nu / 300.0)
        if self.lambda1 is None:
            object.__setattr__(self, "lambda1", self.nu / 600.0)
        if self.delta is None:
            object.__setattr__(self, "delta", self.nu / 600.0)
        if not (self.mu > 0 and self.eta > 0 and self.lambda1 > 0 and self.delta > 0):
            raise ValueError("all parameters must be positive")
        if not self.kappa > 0:
            raise ValueError(f"kappa = 2*eta - lambda*lambda1 = {self.kappa} must be positive")

    @property
    def lam(self) -> float:
        return 1.0 + self.eta

    @property
    def kappa(self) -> float:
        return 2.0 * self.eta - self.lam * self.lambda1

    def round_budget(self, n_points: int, k: int) -> int:
        return math.ceil(2.0 * self.lam * math.log(n_points / k) / (self.mu * self.lambda1 * self.kappa))

    def update_cap(self, k: int) -> int:
        return math.ceil(self.mu * k)

    def factor(self) -> float:
        """delta + lambda * exp(lambda1 * mu / lambda)."""
        return self.delta + self.lam * math.exp(self.lambda1 * self.mu / self.lam)


@dataclass
class ReweightOutcome:
    success: bool
    w0: np.ndarray
    eps0: float
    k: int
    s_final: int
    rounds_used: int
    total_updates: int


@njit(cache=True)
def _reweight_kernel(cap_ptr, cap_idx, pt_ptr, pt_idx, w, k, lam, lambda1, cap, budget):
    m = len(cap_ptr) - 1
    n = len(w)
    sw = np.zeros(m)
    for j in range(m):
        acc = 0.0
        for q in range(cap_ptr[j], cap_ptr[j + 1]):
            acc += w[cap_idx[q]]
        sw[j] = acc
    W = 0.0
    for i in range(n):
        W += w[i]
    factor = 1.0 + lambda1
    t = 1
    total = 0
    while True:
        s = 0
        p = 0
        capped = False
        while p < m:
            while s < cap and lam * k * sw[p] <= W:
                s += 1
                total += 1
                for q in range(cap_ptr[p], cap_ptr[p + 1]):
                    y = cap_idx[q]
                    old = w[y]
                    new = old * factor
                    w[y] = new
                    d = new - old
                    W += d
                    for z in range(pt_ptr[y], pt_ptr[y + 1]):
                        sw[pt_idx[z]] += d
                if W > RENORM_AT:
                    # exact power-of-two rescaling keeps every comparison unchanged
                    e = math.floor(math.log2(W))
                    sc = 2.0 ** (-e)
                    W = 0.0
                    for i in range(n):
                        w[i] *= sc
                        W += w[i]
                    for j in range(m):
                        acc = 0.0
                        for q in range(cap_ptr[j], cap_ptr[j + 1]):
                            acc += w[cap_idx[q]]
                        sw[j] = acc
            if s >= cap:
                capped = True
                break
            p += 1
        if not capped:
            return True, s, t, total
        if t > budget:
            return False, s, t, total
        t += 1


def merge_equal_columns(index: IncidenceIndex) -> tuple[IncidenceIndex, np.ndarray, np.ndarray]:
    """Collapse points that lie in exactly the same sets.

    Such points start with equal weight and are always scaled together, so a
    single column carrying their combined weight behaves identically. Returns
    the merged index, the merged column of every original point and the
    multiplicity of every merged column.
    """
    seen: dict[bytes, int] = {}
    cls = np.empty(index.n_points, dtype=np.int64)
    for j in range(index.n_points):
        key = index.containing(j).tobytes()
        cls[j] = seen.setdefault(key, len(seen))
    count = np.bincount(cls, minlength=len(seen)).astype(float)
    rep = np.zeros(len(seen), dtype=np.int64)
    rep[cls[::-1]] = np.arange(index.n_points)[::-1]
    return index.restrict(np.arange(index.n_capsules), rep), cls, count


def iterative_reweighting(index: IncidenceIndex, k: int, p: PapParams, initial_weight: float = 1.0) -> ReweightOutcome:
    """Multiplicative reweighting until every set is heavy, or give up.

    Sets are the rows of ``index``, processed in row order every round; the
    point set is its columns. Returns success with the final weights and
    ``eps0 = 1 / (lambda*k*exp(lambda1*s/(lambda*k)))``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if index.n_capsules == 0:
        raise ValueError("the family of sets is empty")
    budget = p.round_budget(index.n_points, k)
    merged, cls, count = merge_equal_columns(index)
    wc = count * float(initial_weight)
    ok, s, t, total = _reweight_kernel(
        merged.cap_ptr, merged.cap_idx, merged.pt_ptr, merged.pt_idx, wc, int(k), p.lam, p.lambda1, p.update_cap(k), budget
    )
    w = (wc / count)[cls]
    eps0 = 1.0 / (p.lam * k * math.exp(p.lambda1 * s / (p.lam * k))) if ok else math.nan
    return ReweightOutcome(bool(ok), w, eps0, int(k), int(s), int(t), int(total))


@dataclass
class PapResult:
    points: list[Point]
    k_final: int
    H1_size: int
    H2_size: int
    n_Y: int
    n_Ydelta: int
    n_Rdelta: int
    outcome: ReweightOutcome | None
    nets: list[NetResult] = field(default_factory=list)
    trace: list[tuple[int, bool]] = field(default_factory=list)

    @property
    def fallbacks(self) -> int:
        return sum(n.fallbacks for n in self.nets)

    @property
    def repairs(self) -> int:
        return sum(n.repairs for n in self.nets)


def _points_equal_mask(Y: np.ndarray, H: Sequence[Point], tol: float) -> np.ndarray:
    mask = np.zeros(len(Y), dtype=bool)
    if not H or not len(Y):
        return mask
    from scipy.spatial import cKDTree

    tree = cKDTree(np.asarray(H, dtype=float))
    d, _ = tree.query(Y)
    return d <= tol


def _hit_rows(capsules: Sequence[Capsule], H: Sequence[Point], tol: float) -> np.ndarray:
    if not H:
        return np.zeros(len(capsules), dtype=bool)
    segs = np.array([[c.seg.a, c.seg.b] for c in capsules], dtype=float)
    P = np.asarray(H, dtype=float)
    pts = np.stack([P, P], axis=1)
    D = pairwise_segment_distances(segs, pts)
    return np.any(D <= capsules[0].r + tol, axis=1)


def parametric_agarwal_pan(
    index: IncidenceIndex,
    Y: np.ndarray,
    capsules: Sequence[Capsule],
    p: PapParams,
    vc: VariantConstants,
    V: np.ndarray | None = None,
    tol: float = 1e-9,
    prune_remark: bool = False,
    on_accept=None,
) -> PapResult:
    """Doubling plus binary search on k, then an epsilon net of the final weights.

    ``on_accept(index_delta, outcome)`` is called after every accepting
    reweighting run (used to assert the reweighting contracts).
    """
    m = index.n_capsules
    if m == 0:
        return PapResult([], 0, 0, 0, index.n_points, 0, 0, None)
    ones = np.ones(index.n_points)
    k = 1
    trace: list[tuple[int, bool]] = []
    nets: list[NetResult] = []
    while True:
        net1 = epsilon_net(index, capsules, ones, 1.0 / (p.delta * k), vc, V, tol, prune_remark)
        H1 = net1.points
        keep_pts = np.flatnonzero(~_points_equal_mask(Y, H1, tol))
        keep_rows = np.flatnonzero(~_hit_rows(capsules, H1, tol))
        if len(keep_rows) == 0:
            nets.append(net1)
            return PapResult(list(H1), k, len(H1), 0, index.n_points, len(keep_pts), 0, None, nets, trace)
        sub = index.restrict(keep_rows, keep_pts)
        k_try = min(k, len(keep_rows))
        out = iterative_reweighting(sub, k_try, p)
        trace.append((k_try, out.success))
        if out.success:
            break
        k *= 2
    if on_accept is not None:
        on_accept(sub, out)
    # k // 2 was rejected in the previous doubling step (0 when k = 1)
    lo, hi = min(k // 2, k_try - 1), k_try
    best = out
    while hi - lo > 1:
        mid = (lo + hi) // 2
        o = iterative_reweighting(sub, mid, p)
        trace.append((mid, o.success))
        if o.success:
            hi, best = mid, o
            if on_accept is not None:
                on_accept(sub, o)
        else:
            lo = mid
    sub_caps = [capsules[i] for i in keep_rows]
    net2 = epsilon_net(sub, sub_caps, best.w0, best.eps0, vc, V, tol, prune_remark)
    nets += [net1, net2]
    H = list(H1) + list(net2.points)
    return PapResult(H, best.k, len(H1), len(net2.points), index.n_points, sub.n_points, sub.n_capsules, best, nets, trace)


# ----------------------------------------------------------- gabriel path


def gabriel_family(capsules: Sequence[Capsule], tol: float) -> list[int]:
    """Greedy maximal family of pairwise disjoint capsules in id order."""
    if not capsules:
        return []
    segs = np.array([[c.seg.a, c.seg.b] for c in capsules], dtype=float)
    r = capsules[0].r
    A = pairwise_segment_distances(segs, segs) <= 2 * r + tol
    blocked = np.zeros(len(capsules), dtype=bool)
    fam = []
    for k in range(len(capsules)):
        if not blocked[k]:
            fam.append(k)
            blocked |= A[k]
    return fam


# ---------------------------------------------------------------- solve


@dataclass
class Solution:
    points: list[Point]
    report: HittingReport
    stats: dict

    def to_json(self) -> dict:
        return {
            "points": [[float(x), float(y)] for x, y in self.points],
            "witness": [
                {"edge": int(e), "point": int(j), "dist": float(d)}
                for e, (j, d) in enumerate(zip(self.report.nearest, self.report.distances))
            ],
            "stats": self.stats,
        }


def gabriel_solve(inst: PlaneGraphInstance, check: bool = True) -> Solution:
    """18 points per member of a maximal disjoint capsule family, plus forced midpoints."""
    if inst.class_tag != GraphClass.GABRIEL:
        raise ValueError(f"gabriel_solve needs a Gabriel instance, got {inst.class_tag.value}")
    t0 = time.perf_counter()
    if check:
        rep = validate(inst, check_class=True)
        if not rep.ok:
            raise InvalidInstance(rep)
    active, forced = split_isolated(inst)
    all_caps = inst.capsules()
    caps = [all_caps[k] for k in active] if active else []
    fam = gabriel_family(caps, inst.tol())
    pts: list[Point] = []
    for k in fam:
        c = caps[k]
        pts.extend(u0_points(c) if c.seg.length() > 0 else seven_cover(c.seg.a, c.r))
    H = len(pts)
    pts.extend(forced)
    report = verify_hitting(inst, pts)
    stats = {
        "variant": "Gabriel",
        "n_edges": inst.n,
        "active": len(active),
        "forced": len(forced),
        "family": len(fam),
        "H": H,
        "points": len(pts),
        "ms": 1000 * (time.perf_counter() - t0),
        "verified": report.ok,
    }
    return Solution(pts, report, stats)


def solve(
    inst: PlaneGraphInstance,
    nu: float = 6.0,
    variant: GraphClass | str | None = None,
    prune_remark: bool = False,
    params: PapParams | None = None,
    check: bool = True,
    on_accept=None,
) -> Solution:
    """End-to-end: validate, split isolated capsules, run the class driver, verify."""
    t0 = time.perf_counter()
    cls = inst.class_tag if variant is None else (GraphClass.parse(variant) if isinstance(variant, str) else variant)
    if cls == GraphClass.GABRIEL and variant is None:
        return gabriel_solve(inst, check=check)
    if check:
        rep = validate(inst)
        if not rep.ok:
            raise InvalidInstance(rep)
    p = params or PapParams(nu)
    vc = variant_for(cls)
    active, forced = split_isolated(inst)
    tol = inst.tol()
    stats: dict = {"variant": vc.name, "n_edges": inst.n, "active": len(active), "forced": len(forced), "nu": p.nu}
    pts: list[Point] = []
    if active:
        all_caps = inst.capsules()
        caps = [all_caps[k] for k in active]
        cand = build_candidates(caps, tol)
        index = IncidenceIndex.build(caps, cand.points, tol)
        res = parametric_agarwal_pan(index, cand.points, caps, p, vc, inst.vertices, tol, prune_remark, on_accept)
        pts.extend(res.points)
        stats.update(
            {
                "Y0": len(cand),
                "k_final": res.k_final,
                "H1": res.H1_size,
                "H2": res.H2_size,
                "rounds": res.outcome.rounds_used if res.outcome else 0,
                "updates": res.outcome.total_updates if res.outcome else 0,
                "fallbacks": res.fallbacks,
                "repairs": res.repairs,
                "trace": res.trace,
            }
        )
    else:
        stats.update({"Y0": 0, "k_final": 0, "H1": 0, "H2": 0, "rounds": 0, "updates": 0, "fallbacks": 0, "repairs": 0, "trace": []})
    H = len(pts)
    pts.extend(forced)
    report = verify_hitting(inst, pts)
    stats.update({"H": H, "points": len(pts), "ms": 1000 * (time.perf_counter() - t0), "verified": report.ok})
    return Solution(pts, report, stats)
