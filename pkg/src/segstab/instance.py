"""Problem instances, preprocessing, candidate points and the weighted incidence index."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.spatial import ConvexHull, cKDTree

from .geometry import (
    EPS,
    Capsule,
    Point,
    Segment,
    capsule_boundary_intersections,
    dist_points_segment,
    pairwise_segment_distances,
)


class GraphClass(str, Enum):
    GENERAL = "General"
    REMOTE = "RemoteEdges"
    GABRIEL = "Gabriel"
    DELAUNAY = "Delaunay"
    OUTERPLANE_DT = "OuterplaneDelaunay"
    OUTERPLANE = "Outerplane"

    @classmethod
    def parse(cls, name: str) -> "GraphClass":
        key = name.replace("-", "").replace("_", "").lower()
        aliases = {
            "general": cls.GENERAL,
            "segments": cls.GENERAL,
            "remote": cls.REMOTE,
            "remoteedges": cls.REMOTE,
            "gabriel": cls.GABRIEL,
            "delaunay": cls.DELAUNAY,
            "outerplanedelaunay": cls.OUTERPLANE_DT,
            "outerplanedt": cls.OUTERPLANE_DT,
            "odt": cls.OUTERPLANE_DT,
            "outerplane": cls.OUTERPLANE,
        }
        if key not in aliases:
            raise ValueError(f"unknown graph class {name!r}")
        return aliases[key]


@dataclass
class PlaneGraphInstance:
    """A straight-line drawing plus a radius.

    Vertices not used by any edge are appended as zero-length edges ``[v, v]``.
    """

    vertices: np.ndarray
    edges: list[tuple[int, int]]
    r: float
    class_tag: GraphClass = GraphClass.GENERAL

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("vertex coordinates must be finite")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise ValueError("radius must be positive and finite")
        self.class_tag = GraphClass.parse(self.class_tag) if isinstance(self.class_tag, str) and not isinstance(self.class_tag, GraphClass) else self.class_tag
        nv = len(self.vertices)
        edges = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < nv and 0 <= j < nv):
                raise ValueError(f"edge ({i}, {j}) refers to a missing vertex")
            edges.append((i, j))
        used = {v for e in edges for v in e}
        edges += [(v, v) for v in range(nv) if v not in used]
        self.edges = edges

    @property
    def n(self) -> int:
        return len(self.edges)

    def segment(self, k: int) -> Segment:
        i, j = self.edges[k]
        return Segment(Point(*self.vertices[i]), Point(*self.vertices[j]))

    def segments(self) -> list[Segment]:
        return [self.segment(k) for k in range(self.n)]

    def capsules(self) -> list[Capsule]:
        return [Capsule(s, self.r) for s in self.segments()]

    def segment_array(self) -> np.ndarray:
        if not self.edges:
            return np.zeros((0, 2, 2))
        idx = np.array(self.edges)
        return self.vertices[idx]

    def diameter(self) -> float:
        if len(self.vertices) == 0:
            return 0.0
        return float(np.hypot(*np.ptp(self.vertices, axis=0)))

    def tol(self) -> float:
        return EPS * (1.0 + self.diameter())

    def to_json(self) -> dict:
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "edges": [[i, j] for i, j in self.edges],
            "r": float(self.r),
            "class": self.class_tag.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PlaneGraphInstance":
        return cls(
            vertices=np.array(data["vertices"], dtype=float).reshape(-1, 2),
            edges=[tuple(e) for e in data["edges"]],
            r=float(data["r"]),
            class_tag=GraphClass.parse(data.get("class", "General")),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path) -> "PlaneGraphInstance":
        return cls.from_json(json.loads(Path(path).read_text()))

    def subinstance(self, edge_ids: Iterable[int]) -> "PlaneGraphInstance":
        """Instance made of the chosen edges only (vertices renumbered)."""
        edge_ids = list(edge_ids)
        vs = sorted({v for k in edge_ids for v in self.edges[k]})
        remap = {v: i for i, v in enumerate(vs)}
        return PlaneGraphInstance(
            self.vertices[vs],
            [(remap[self.edges[k][0]], remap[self.edges[k][1]]) for k in edge_ids],
            self.r,
            self.class_tag,
        )


# ------------------------------------------------------------ validation


@dataclass
class ValidationReport:
    ok: bool
    crossing_pairs: list[tuple[int, int]] = field(default_factory=list)
    duplicate_pairs: list[tuple[int, int]] = field(default_factory=list)
    class_violations: list[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


class InvalidInstance(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        parts = []
        if report.crossing_pairs:
            parts.append(f"crossing edge pairs {report.crossing_pairs[:5]}")
        if report.duplicate_pairs:
            parts.append(f"duplicate edges {report.duplicate_pairs[:5]}")
        if report.class_violations:
            parts.append(f"class predicate fails on edges {report.class_violations[:5]}")
        super().__init__("invalid instance: " + "; ".join(parts))


def validate(inst: PlaneGraphInstance, check_class: bool = False) -> ValidationReport:
    """Edges may meet only at a shared endpoint; duplicates are reported too."""
    m = inst.n
    report = ValidationReport(ok=True)
    if m == 0:
        return report
    tol = inst.tol()
    seen: dict[frozenset, int] = {}
    for k, (i, j) in enumerate(inst.edges):
        key = frozenset((i, j))
        if key in seen:
            report.duplicate_pairs.append((seen[key], k))
        else:
            seen[key] = k
    D = pairwise_segment_distances(inst.segment_array(), inst.segment_array())
    close = np.argwhere(np.triu(D <= tol, k=1))
    segs = inst.segments()
    dup = set(report.duplicate_pairs)
    for k, l in close:
        k, l = int(k), int(l)
        if (k, l) in dup:
            continue
        shared = set(inst.edges[k]) & set(inst.edges[l])
        if not shared:
            report.crossing_pairs.append((k, l))
            continue
        v = shared.pop()
        # the far endpoints must stay off the other edge
        far_k = inst.edges[k][0] if inst.edges[k][1] == v else inst.edges[k][1]
        far_l = inst.edges[l][0] if inst.edges[l][1] == v else inst.edges[l][1]
        bad = False
        if far_k != v and dist_points_segment(inst.vertices[[far_k]], segs[l])[0] <= tol:
            bad = True
        if far_l != v and dist_points_segment(inst.vertices[[far_l]], segs[k])[0] <= tol:
            bad = True
        if bad:
            report.crossing_pairs.append((k, l))
    if check_class:
        report.class_violations = class_violations(inst)
    report.ok = not (report.crossing_pairs or report.duplicate_pairs or report.class_violations)
    return report


def gabriel_violations(vertices: np.ndarray, edges: Sequence[tuple[int, int]], tol: float = 0.0) -> list[int]:
    """Edges whose closed diametral disk holds another vertex."""
    V = np.asarray(vertices, dtype=float)
    bad = []
    for k, (i, j) in enumerate(edges):
        if i == j:
            continue
        m = 0.5 * (V[i] + V[j])
        rad = 0.5 * float(np.hypot(*(V[j] - V[i])))
        d = np.hypot(*(V - m).T)
        d[[i, j]] = np.inf
        if np.any(d <= rad + tol):
            bad.append(k)
    return bad


def delaunay_violations(vertices: np.ndarray, edges: Sequence[tuple[int, int]]) -> list[int]:
    """Edges through which no disk with empty interior passes."""
    from .geometry import NotDelaunayEdge, empty_disks_through_edge

    bad = []
    for k, (i, j) in enumerate(edges):
        if i == j:
            continue
        try:
            empty_disks_through_edge(vertices[i], vertices[j], vertices)
        except NotDelaunayEdge:
            bad.append(k)
    return bad


def outerplane_violations(vertices: np.ndarray, edges: Sequence[tuple[int, int]], tol: float) -> list[int]:
    """Edges that miss the boundary of the convex hull of the drawing."""
    used = sorted({v for e in edges for v in e})
    V = np.asarray(vertices, dtype=float)
    if len(used) < 3:
        return []
    P = V[used]
    try:
        hull = ConvexHull(P)
    except Exception:
        return []  # degenerate (collinear) drawing: every point is on the boundary
    eqs = hull.equations
    on_boundary = np.zeros(len(V), dtype=bool)
    # a point of a convex polygon is on the boundary iff some facet plane passes through it
    on_boundary[used] = np.any(np.abs(P @ eqs[:, :2].T + eqs[:, 2]) <= tol, axis=1)
    return [k for k, (i, j) in enumerate(edges) if not (on_boundary[i] or on_boundary[j])]


def remote_violations(inst: PlaneGraphInstance) -> list[int]:
    D = pairwise_segment_distances(inst.segment_array(), inst.segment_array())
    tol = inst.tol()
    np.fill_diagonal(D, np.inf)
    bad = np.any((D > tol) & (D <= inst.r), axis=1)
    return [int(k) for k in np.flatnonzero(bad)]


def class_violations(inst: PlaneGraphInstance) -> list[int]:
    c = inst.class_tag
    tol = inst.tol()
    if c == GraphClass.GABRIEL:
        return gabriel_violations(inst.vertices, inst.edges)
    if c == GraphClass.DELAUNAY:
        return delaunay_violations(inst.vertices, inst.edges)
    if c == GraphClass.OUTERPLANE_DT:
        return sorted(set(delaunay_violations(inst.vertices, inst.edges)) | set(outerplane_violations(inst.vertices, inst.edges, tol)))
    if c == GraphClass.OUTERPLANE:
        return outerplane_violations(inst.vertices, inst.edges, tol)
    if c == GraphClass.REMOTE:
        return remote_violations(inst)
    return []


# --------------------------------------------------------- preprocessing


def capsule_intersection_matrix(inst: PlaneGraphInstance) -> np.ndarray:
    D = pairwise_segment_distances(inst.segment_array(), inst.segment_array())
    A = D <= 2 * inst.r + inst.tol()
    np.fill_diagonal(A, False)
    return A


def split_isolated(inst: PlaneGraphInstance) -> tuple[list[int], list[Point]]:
    """Active edge ids and the midpoints forced by capsules meeting no other capsule."""
    if inst.n == 0:
        return [], []
    A = capsule_intersection_matrix(inst)
    isolated = ~A.any(axis=1)
    active = [k for k in range(inst.n) if not isolated[k]]
    forced = [inst.segment(k).midpoint() for k in range(inst.n) if isolated[k]]
    return active, forced


@dataclass
class CandidateSet:
    points: np.ndarray  # (n, 2)
    kinds: list[str]  # "Midpoint" or "ArrangementVertex"

    def __len__(self) -> int:
        return len(self.points)


def dedupe_array(points: np.ndarray, tol: float) -> np.ndarray:
    """Indices of representatives (lowest index) of tol-clusters."""
    if len(points) == 0:
        return np.zeros(0, dtype=int)
    tree = cKDTree(points)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    parent = np.arange(len(points))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = np.array([find(i) for i in range(len(points))])
    return np.flatnonzero(roots == np.arange(len(points)))


def build_candidates(capsules: Sequence[Capsule], tol: float) -> CandidateSet:
    """Pairwise boundary intersection points plus every segment midpoint."""
    pts = [c.seg.midpoint() for c in capsules]
    kinds = ["Midpoint"] * len(pts)
    if capsules:
        segs = np.array([[c.seg.a, c.seg.b] for c in capsules], dtype=float)
        r = capsules[0].r
        D = pairwise_segment_distances(segs, segs)
        for k, l in np.argwhere(np.triu(D <= 2 * r + tol, k=1)):
            for p in capsule_boundary_intersections(capsules[k], capsules[l], tol):
                pts.append(p)
                kinds.append("ArrangementVertex")
    arr = np.array(pts, dtype=float).reshape(-1, 2)
    keep = dedupe_array(arr, tol)
    return CandidateSet(arr[keep], [kinds[i] for i in keep])


# ------------------------------------------------------ incidence/weights


@dataclass
class IncidenceIndex:
    """Capsule/candidate membership in both directions (CSR arrays).

    ``capsule_ids`` and ``candidate_ids`` map local row/column numbers back to
    the ids of the enclosing problem.
    """

    cap_ptr: np.ndarray
    cap_idx: np.ndarray
    pt_ptr: np.ndarray
    pt_idx: np.ndarray
    capsule_ids: np.ndarray
    candidate_ids: np.ndarray

    @property
    def n_capsules(self) -> int:
        return len(self.cap_ptr) - 1

    @property
    def n_points(self) -> int:
        return len(self.pt_ptr) - 1

    def members(self, k: int) -> np.ndarray:
        if not 0 <= k < self.n_capsules:
            raise KeyError(f"unknown capsule {k}")
        return self.cap_idx[self.cap_ptr[k] : self.cap_ptr[k + 1]]

    def containing(self, j: int) -> np.ndarray:
        return self.pt_idx[self.pt_ptr[j] : self.pt_ptr[j + 1]]

    def matrix(self) -> csr_matrix:
        data = np.ones(len(self.cap_idx), dtype=bool)
        return csr_matrix((data, self.cap_idx, self.cap_ptr), shape=(self.n_capsules, self.n_points))

    @classmethod
    def from_matrix(cls, M, capsule_ids=None, candidate_ids=None) -> "IncidenceIndex":
        M = csr_matrix(M, dtype=bool)
        M.sort_indices()
        T = M.T.tocsr()
        T.sort_indices()
        nc, npt = M.shape
        return cls(
            M.indptr.astype(np.int64),
            M.indices.astype(np.int64),
            T.indptr.astype(np.int64),
            T.indices.astype(np.int64),
            np.arange(nc) if capsule_ids is None else np.asarray(capsule_ids),
            np.arange(npt) if candidate_ids is None else np.asarray(candidate_ids),
        )

    @classmethod
    def build(cls, capsules: Sequence[Capsule], points: np.ndarray, tol: float) -> "IncidenceIndex":
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        rows, cols = [], []
        for k, c in enumerate(capsules):
            inside = np.flatnonzero(dist_points_segment(points, c.seg) <= c.r + tol)
            rows.append(np.full(len(inside), k))
            cols.append(inside)
        r = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
        cc = np.concatenate(cols) if cols else np.zeros(0, dtype=int)
        M = csr_matrix((np.ones(len(r), dtype=bool), (r, cc)), shape=(len(capsules), len(points)))
        return cls.from_matrix(M)

    def restrict(self, capsules: Sequence[int], points: Sequence[int]) -> "IncidenceIndex":
        """Sub-index over the given local capsule rows and point columns."""
        capsules = np.asarray(capsules, dtype=int)
        points = np.asarray(points, dtype=int)
        M = self.matrix()[capsules][:, points]
        return IncidenceIndex.from_matrix(M, self.capsule_ids[capsules], self.candidate_ids[points])


RENORM_LIMIT = 1e250


@dataclass
class WeightMap:
    weights: np.ndarray
    total: float = 0.0

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(~(self.weights > 0)):
            raise ValueError("weights must be positive")
        self.total = float(self.weights.sum())

    @classmethod
    def uniform(cls, n: int, value: float = 1.0) -> "WeightMap":
        return cls(np.full(n, float(value)))

    def multiply(self, ids: np.ndarray, factor: float) -> None:
        self.weights[ids] *= factor
        self.total = float(self.weights.sum())
        if self.total > RENORM_LIMIT:
            self.renormalize()

    def renormalize(self) -> None:
        self.weights /= self.total
        self.total = float(self.weights.sum())


def weight_of(index: IncidenceIndex, k: int, w: WeightMap) -> float:
    return float(w.weights[index.members(k)].sum())


def weight_of_intersection(index: IncidenceIndex, k: int, l: int, w: WeightMap) -> float:
    common = np.intersect1d(index.members(k), index.members(l), assume_unique=True)
    return float(w.weights[common].sum())


def capsule_weights(index: IncidenceIndex, w: np.ndarray) -> np.ndarray:
    """``w(N)`` for every capsule row at once."""
    return np.add.reduceat(np.append(w[index.cap_idx], 0.0), index.cap_ptr[:-1]) * (np.diff(index.cap_ptr) > 0)
