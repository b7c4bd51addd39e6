"""Exact optimum by branch-and-bound set cover, and the independent hitting verifier."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Point, point_segment_distances
from .instance import IncidenceIndex, PlaneGraphInstance, build_candidates, split_isolated

DEFAULT_MAX_ACTIVE = 14


class OracleTooLarge(ValueError):
    pass


@dataclass
class HittingReport:
    ok: bool
    distances: np.ndarray  # per edge, distance to the nearest output point
    nearest: np.ndarray  # per edge, index of that point (-1 when there are none)
    failed: list[int]
    tol: float

    @property
    def max_excess(self) -> float:
        return float(np.max(self.distances, initial=0.0))


def verify_hitting(inst: PlaneGraphInstance, points: Sequence[Point]) -> HittingReport:
    """Every edge must be within ``r + tol`` of some point."""
    tol = inst.tol()
    m = inst.n
    if m == 0:
        return HittingReport(True, np.zeros(0), np.zeros(0, dtype=int), [], tol)
    if len(points) == 0:
        return HittingReport(False, np.full(m, np.inf), np.full(m, -1), list(range(m)), tol)
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    D = point_segment_distances(P, inst.segment_array()).T
    nearest = np.argmin(D, axis=1)
    dist = D[np.arange(m), nearest]
    failed = [int(k) for k in np.flatnonzero(dist > inst.r + tol)]
    return HittingReport(not failed, dist, nearest, failed, tol)


@dataclass
class CoverProblem:
    """Set cover: choose candidates whose coverage masks union to ``full``."""

    n_universe: int
    masks: list[int]  # per candidate, bitmask of covered universe elements

    @property
    def full(self) -> int:
        return (1 << self.n_universe) - 1

    @classmethod
    def from_index(cls, index: IncidenceIndex) -> "CoverProblem":
        masks = []
        for j in range(index.n_points):
            m = 0
            for c in index.containing(j):
                m |= 1 << int(c)
            masks.append(m)
        return cls(index.n_capsules, masks)


def _greedy(masks: list[int], need: int) -> list[int]:
    chosen = []
    while need:
        best = max(range(len(masks)), key=lambda j: (bin(masks[j] & need).count("1"), -j))
        if masks[best] & need == 0:
            raise ValueError("infeasible cover problem")
        chosen.append(best)
        need &= ~masks[best]
    return chosen


def _reduce(masks: list[int], ids: list[int]) -> tuple[list[int], list[int]]:
    """Drop empty and dominated candidates (coverage contained in another's)."""
    order = sorted(range(len(masks)), key=lambda j: (-bin(masks[j]).count("1"), ids[j]))
    keep_m, keep_i = [], []
    for j in order:
        mj = masks[j]
        if mj == 0:
            continue
        if any(mj | mk == mk for mk in keep_m):
            continue
        keep_m.append(mj)
        keep_i.append(ids[j])
    return keep_m, keep_i


def solve_cover(prob: CoverProblem) -> list[int]:
    """Minimum set cover by branch and bound.

    Dominance elimination and unit propagation at every node, a greedy
    incumbent, and branching on the candidates covering the element with the
    fewest options (ties broken by lowest candidate id).
    """
    full = prob.full
    if full == 0:
        return []
    masks, ids = _reduce(prob.masks, list(range(len(prob.masks))))
    best = [ids[j] for j in _greedy(masks, full)]

    def rec(need: int, masks: list[int], ids: list[int], chosen: list[int]):
        nonlocal best
        # unit propagation
        while need:
            masks = [m & need for m in masks]
            masks, ids = _reduce(masks, ids)
            forced = None
            bit = need
            while bit:
                low = bit & -bit
                opts = [j for j, m in enumerate(masks) if m & low]
                if not opts:
                    return
                if len(opts) == 1:
                    forced = opts[0]
                    break
                bit ^= low
            if forced is None:
                break
            chosen = chosen + [ids[forced]]
            need &= ~masks[forced]
            if len(chosen) >= len(best):
                return
        if not need:
            if len(chosen) < len(best):
                best = chosen
            return
        # lower bound: every extra point covers at most max_cover elements
        max_cover = max(bin(m).count("1") for m in masks)
        lb = -(-bin(need).count("1") // max_cover)
        if len(chosen) + lb >= len(best):
            return
        # branch on the element with the fewest covering candidates
        bit = need
        pick, pick_opts = None, None
        while bit:
            low = bit & -bit
            opts = [j for j, m in enumerate(masks) if m & low]
            if pick_opts is None or len(opts) < len(pick_opts):
                pick, pick_opts = low, opts
            bit ^= low
        pick_opts.sort(key=lambda j: (-bin(masks[j]).count("1"), ids[j]))
        for j in pick_opts:
            rec(need & ~masks[j], masks, ids, chosen + [ids[j]])

    rec(full, masks, ids, [])
    return sorted(best)


def exhaustive_cover(prob: CoverProblem) -> list[int]:
    """Smallest covering subset by enumeration in order of size (tiny inputs only)."""
    full = prob.full
    for size in range(0, len(prob.masks) + 1):
        for combo in itertools.combinations(range(len(prob.masks)), size):
            acc = 0
            for j in combo:
                acc |= prob.masks[j]
            if acc == full:
                return list(combo)
    raise ValueError("infeasible cover problem")


@dataclass
class OracleResult:
    value: int
    points: list[Point]
    active_opt: int
    n_forced: int
    n_candidates: int


def oracle_problem(inst: PlaneGraphInstance, max_active: int = DEFAULT_MAX_ACTIVE):
    active, forced = split_isolated(inst)
    if len(active) > max_active:
        raise OracleTooLarge(f"{len(active)} active edges exceed the oracle guard of {max_active}")
    all_caps = inst.capsules()
    caps = [all_caps[k] for k in active]
    cand = build_candidates(caps, inst.tol()) if caps else None
    if cand is None:
        return CoverProblem(0, []), None, forced
    index = IncidenceIndex.build(caps, cand.points, inst.tol())
    return CoverProblem.from_index(index), cand, forced


def exact_opt(inst: PlaneGraphInstance, max_active: int = DEFAULT_MAX_ACTIVE, exhaustive: bool = False) -> OracleResult:
    """Optimum hitting set over the candidate points of the active edges, plus forced midpoints."""
    prob, cand, forced = oracle_problem(inst, max_active)
    if cand is None:
        return OracleResult(len(forced), list(forced), 0, len(forced), 0)
    chosen = exhaustive_cover(prob) if exhaustive else solve_cover(prob)
    pts = [Point(*map(float, cand.points[j])) for j in chosen]
    return OracleResult(len(chosen) + len(forced), pts + list(forced), len(chosen), len(forced), len(cand))
