"""Minimum-cardinality stabbing of closed intervals and of boundary arcs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True)
class RealInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval with lo > hi: [{self.lo}, {self.hi}]")

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass
class StabbingResult:
    points: list[float] = field(default_factory=list)
    witness: list[int] = field(default_factory=list)


def _as_pair(iv) -> tuple[float, float]:
    if isinstance(iv, RealInterval):
        return iv.lo, iv.hi
    lo, hi = iv
    if lo > hi:
        raise ValueError(f"interval with lo > hi: [{lo}, {hi}]")
    return float(lo), float(hi)


def remove_dominated(intervals: Sequence) -> list[int]:
    """Ids of intervals that contain no other input interval.

    Sorted by lo ascending and hi descending, an interval is dominated exactly
    when some later interval in that order ends no later than it does; a
    reverse sweep with a running minimum of hi finds them. Equal duplicates
    keep the smallest id.
    """
    return _undominated([_as_pair(iv) for iv in intervals])


def _undominated(pairs: list) -> list[int]:
    # endpoints only need to be comparable, so stable sorts replace negation
    order = sorted(range(len(pairs)), key=lambda i: pairs[i][1], reverse=True)
    order.sort(key=lambda i: pairs[i][0])
    keep: list[int] = []
    best = None
    for pos in range(len(order) - 1, -1, -1):
        i = order[pos]
        hi = pairs[i][1]
        if best is None or hi < best:
            keep.append(i)
            best = hi
        elif hi == best and pairs[keep[-1]] == pairs[i] and i < keep[-1]:
            # exact duplicate of the interval kept just after it: prefer the smaller id
            keep[-1] = i
    keep.reverse()
    return keep


def _greedy(pairs: list) -> StabbingResult:
    alive = _undominated(pairs)
    res = StabbingResult()
    j = len(alive) - 1
    while j >= 0:
        k = alive[j]
        x = pairs[k][0]
        res.points.append(x)
        res.witness.append(k)
        j -= 1
        while j >= 0 and pairs[alive[j]][1] >= x:
            j -= 1
    res.points.reverse()
    res.witness.reverse()
    return res


def min_hitting_intervals(intervals: Sequence) -> StabbingResult:
    """Optimal stabbing set for closed intervals.

    After dropping dominated intervals, the remaining ones have lo and hi
    both increasing. Repeatedly taking the interval with the largest upper
    end, placing a point at its lower end and discarding everything that
    point hits yields a minimum set; the chosen intervals are pairwise
    disjoint and certify optimality.
    """
    return _greedy([_as_pair(iv) for iv in intervals])


def min_hitting_arcs(arcs: Sequence[tuple[float, float]], total_length: float, cut: float | None = None) -> StabbingResult:
    """Optimal stabbing of arcs on a closed curve of the given length.

    Arcs are ``(lo, hi)`` boundary parameters in ``[0, total_length]``; an
    arc with ``lo > hi`` wraps through the origin. When ``cut`` is given it
    must lie in no arc and the problem reduces to intervals. Without a cut,
    an uncovered gap is used if one exists; otherwise every arc's upper end is
    tried as a forced first point (some optimum uses one of them).
    """
    P = float(total_length)
    arcs = [(float(lo), float(hi)) for lo, hi in arcs]
    if not arcs:
        return StabbingResult()

    if cut is not None:
        c = cut % P

        def key(x):
            # exact cyclic position after the cut: first the part above c, then the wrap
            return (0, x) if x > c else (1, x)

        keyed = []
        for lo, hi in arcs:
            if (lo <= hi and hi - lo >= P) or _in_arc(c, lo, hi, P) or key(lo) > key(hi):
                raise ValueError(f"arc ({lo}, {hi}) contains the cut {cut}")
            keyed.append((key(lo), key(hi)))
        res = _greedy(keyed)
        res.points = [arcs[k][0] for k in res.witness]
        return res

    full = [i for i, (lo, hi) in enumerate(arcs) if lo <= hi and hi - lo >= P]
    if full:
        rest = [a for i, a in enumerate(arcs) if i not in full]
        if not rest:
            return StabbingResult([0.0], [full[0]])
        sub = min_hitting_arcs(rest, P)
        return StabbingResult(sub.points, [])
    gap = _uncovered_point(arcs, P)
    if gap is not None:
        return min_hitting_arcs(arcs, P, cut=gap)
    best: StabbingResult | None = None
    for lo, hi in arcs:
        x = hi
        rest = [a for a in arcs if not _in_arc(x, *a, P)]
        if rest:
            sub = min_hitting_arcs(rest, P, cut=x)
            pts = [x] + sub.points
        else:
            pts = [x]
        if best is None or len(pts) < len(best.points):
            best = StabbingResult(pts, [])
    return best


def _in_arc(x: float, lo: float, hi: float, P: float) -> bool:
    if lo <= hi:
        return lo <= x <= hi
    return x >= lo or x <= hi


def _uncovered_point(arcs, P: float) -> float | None:
    # unroll wrapping arcs and sweep [0, P) for a gap
    spans = []
    for lo, hi in arcs:
        if lo <= hi:
            spans.append((lo, hi))
        else:
            spans.append((lo, P))
            spans.append((0.0, hi))
    spans.sort()
    pos = 0.0
    for lo, hi in spans + [(P, P)]:
        mid = 0.5 * (pos + lo)
        if pos < mid < lo:
            return mid
        pos = max(pos, hi)
    return None
