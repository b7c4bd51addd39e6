"""Seeded instance generators for every graph class."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .geometry import pairwise_segment_distances
from .instance import (
    GraphClass,
    PlaneGraphInstance,
    delaunay_violations,
    gabriel_violations,
    validate,
)

ROUND_DECIMALS = 9  # coordinates are rounded (relative to the box side) for stable fixtures
JITTER = 1e-6


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    n: int = 20  # points for triangulation-based classes, edges for segment classes
    bbox: float = 100.0
    r: float | None = None  # absolute radius; overrides r_frac
    r_frac: float = 0.3  # radius as a fraction of the mean edge length


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based Philox generator keyed by the 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, stream]))


def _round(P: np.ndarray, bbox: float) -> np.ndarray:
    q = bbox * 10.0**-ROUND_DECIMALS
    return np.round(P / q) * q


def _radius(cfg: GenConfig, V: np.ndarray, edges) -> float:
    if cfg.r is not None:
        return float(cfg.r)
    lens = [math.dist(V[i], V[j]) for i, j in edges if i != j]
    mean = float(np.mean(lens)) if lens else cfg.bbox / 10
    return cfg.r_frac * mean


def delaunay_edges(P: np.ndarray) -> list[tuple[int, int]]:
    """Edges of the Delaunay triangulation (Qhull) in sorted order."""
    P = np.asarray(P, dtype=float)
    if len(P) < 2:
        return []
    if len(P) == 2:
        return [(0, 1)]
    tri = Delaunay(P)
    edges = set()
    for a, b, c in tri.simplices:
        for i, j in ((a, b), (b, c), (a, c)):
            edges.add((int(min(i, j)), int(max(i, j))))
    return sorted(edges)


def gabriel_edges(P: np.ndarray, tol: float = 0.0) -> list[tuple[int, int]]:
    """Delaunay edges whose closed diametral disk holds no other point."""
    P = np.asarray(P, dtype=float)
    edges = delaunay_edges(P)
    bad = set(gabriel_violations(P, edges, tol))
    return [e for k, e in enumerate(edges) if k not in bad]


def _triangulate(P_fn: Callable[[np.random.Generator], np.ndarray], cfg: GenConfig):
    """Draw points, triangulate, certify every edge; jitter and retry on failure."""
    rng = make_rng(cfg.seed)
    P = _round(P_fn(rng), cfg.bbox)
    for attempt in range(3):
        try:
            edges = delaunay_edges(P)
            if not delaunay_violations(P, edges):
                return P, edges
        except QhullError:
            pass
        P = _round(P + rng.uniform(-JITTER, JITTER, P.shape) * cfg.bbox, cfg.bbox)
    raise GenerationError("Delaunay certification failed after 3 jitter attempts")


def _uniform_points(cfg: GenConfig):
    def draw(rng):
        return rng.uniform(0.0, cfg.bbox, size=(cfg.n, 2))

    return draw


def _convex_points(cfg: GenConfig):
    """Points on an ellipse (convex position, generically no four cocircular)."""

    def draw(rng):
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, cfg.n))
        ratio = rng.uniform(0.55, 0.9)
        tilt = rng.uniform(0.0, math.pi)
        x = 0.5 * cfg.bbox * np.cos(ang)
        y = 0.5 * cfg.bbox * ratio * np.sin(ang)
        c, s = math.cos(tilt), math.sin(tilt)
        return np.column_stack([c * x - s * y, s * x + c * y]) + 0.5 * cfg.bbox

    return draw


def gen_delaunay(cfg: GenConfig) -> PlaneGraphInstance:
    if cfg.n < 3:
        raise ValueError("need at least 3 points")
    P, edges = _triangulate(_uniform_points(cfg), cfg)
    return PlaneGraphInstance(P, edges, _radius(cfg, P, edges), GraphClass.DELAUNAY)


def gen_gabriel(cfg: GenConfig) -> PlaneGraphInstance:
    if cfg.n < 3:
        raise ValueError("need at least 3 points")
    P, edges = _triangulate(_uniform_points(cfg), cfg)
    bad = set(gabriel_violations(P, edges))
    edges = [e for k, e in enumerate(edges) if k not in bad]
    return PlaneGraphInstance(P, edges, _radius(cfg, P, edges), GraphClass.GABRIEL)


def gen_outerplane_dt(cfg: GenConfig) -> PlaneGraphInstance:
    if cfg.n < 3:
        raise ValueError("need at least 3 points")
    P, edges = _triangulate(_convex_points(cfg), cfg)
    return PlaneGraphInstance(P, edges, _radius(cfg, P, edges), GraphClass.OUTERPLANE_DT)


def _diagonals_cross(a: int, b: int, c: int, d: int) -> bool:
    # chords of a convex polygon cross iff their endpoints interleave
    a, b = min(a, b), max(a, b)
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def gen_outerplane(cfg: GenConfig) -> PlaneGraphInstance:
    """Convex polygon plus a random set of non-crossing diagonals."""
    if cfg.n < 3:
        raise ValueError("need at least 3 points")
    rng = make_rng(cfg.seed)
    P = _round(_convex_points(cfg)(rng), cfg.bbox)
    n = cfg.n
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges = [(min(i, j), max(i, j)) for i, j in edges]
    diags: list[tuple[int, int]] = []
    tries = rng.integers(0, n, size=(4 * n, 2))
    for i, j in tries:
        i, j = int(min(i, j)), int(max(i, j))
        if j - i < 2 or (i == 0 and j == n - 1):
            continue
        if (i, j) in diags:
            continue
        if any(_diagonals_cross(i, j, c, d) for c, d in diags):
            continue
        if rng.uniform() < 0.5:
            diags.append((i, j))
    edges = sorted(set(edges) | set(diags))
    return PlaneGraphInstance(P, edges, _radius(cfg, P, edges), GraphClass.OUTERPLANE)


def gen_remote(cfg: GenConfig, max_tries: int = 20000) -> PlaneGraphInstance:
    """Star clusters; edges of different stars are farther apart than r."""
    rng = make_rng(cfg.seed)
    n = max(1, cfg.n)
    unit = cfg.bbox / (2.0 * math.sqrt(n))
    # spoke counts and lengths first, so the radius is known before placement
    sizes = []
    left = n
    while left > 0:
        k = int(min(left, rng.integers(1, 5)))
        sizes.append(k)
        left -= k
    spokes = [rng.uniform(0.5, 1.5, size=k) * unit for k in sizes]
    mean_len = float(np.mean(np.concatenate(spokes)))
    r = float(cfg.r) if cfg.r is not None else cfg.r_frac * mean_len
    V: list[np.ndarray] = []
    E: list[tuple[int, int]] = []
    segs = np.zeros((0, 2, 2))
    for lens in spokes:
        for _ in range(max_tries):
            c = rng.uniform(0.0, cfg.bbox, size=2)
            ang = rng.uniform(0.0, 2 * math.pi) + np.arange(len(lens)) * 2 * math.pi / len(lens)
            ends = c + np.column_stack([np.cos(ang), np.sin(ang)]) * lens[:, None]
            new = _round(np.stack([np.broadcast_to(c, ends.shape), ends], axis=1), cfg.bbox)
            if len(segs) and np.min(pairwise_segment_distances(new, segs)) <= r * (1 + 1e-6):
                continue
            break
        else:
            raise GenerationError("rejection budget exhausted while placing stars")
        base = len(V)
        V.append(new[0, 0])
        for k in range(len(lens)):
            V.append(new[k, 1])
            E.append((base, base + 1 + k))
        segs = np.concatenate([segs, new])
    return PlaneGraphInstance(np.array(V), E, r, GraphClass.REMOTE)


def gen_segments(cfg: GenConfig, max_tries: int = 20000) -> PlaneGraphInstance:
    """Random pairwise disjoint segments."""
    rng = make_rng(cfg.seed)
    n = max(1, cfg.n)
    unit = cfg.bbox / (2.0 * math.sqrt(n))
    segs = np.zeros((0, 2, 2))
    gap = 1e-6 * cfg.bbox
    for _ in range(n):
        for _ in range(max_tries):
            m = rng.uniform(0.0, cfg.bbox, size=2)
            ang = rng.uniform(0.0, math.pi)
            half = 0.5 * rng.uniform(0.3, 2.0) * unit
            d = half * np.array([math.cos(ang), math.sin(ang)])
            new = _round(np.array([[m - d, m + d]]), cfg.bbox)
            if len(segs) and np.min(pairwise_segment_distances(new, segs)) <= gap:
                continue
            break
        else:
            raise GenerationError("rejection budget exhausted while placing segments")
        segs = np.concatenate([segs, new])
    V = segs.reshape(-1, 2)
    E = [(2 * k, 2 * k + 1) for k in range(len(segs))]
    return PlaneGraphInstance(V, E, _radius(cfg, V, E), GraphClass.GENERAL)


GENERATORS: dict[GraphClass, Callable[[GenConfig], PlaneGraphInstance]] = {
    GraphClass.GENERAL: gen_segments,
    GraphClass.REMOTE: gen_remote,
    GraphClass.GABRIEL: gen_gabriel,
    GraphClass.DELAUNAY: gen_delaunay,
    GraphClass.OUTERPLANE_DT: gen_outerplane_dt,
    GraphClass.OUTERPLANE: gen_outerplane,
}


def generate(cls: GraphClass | str, cfg: GenConfig, check: bool = True) -> PlaneGraphInstance:
    if isinstance(cls, str) and not isinstance(cls, GraphClass):
        cls = GraphClass.parse(cls)
    inst = GENERATORS[cls](cfg)
    if check:
        rep = validate(inst, check_class=True)
        if not rep.ok:
            raise GenerationError(f"generated {cls.value} instance failed validation: {rep}")
    return inst
