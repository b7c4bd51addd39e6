import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from segstab.intervals import RealInterval, min_hitting_arcs, min_hitting_intervals, remove_dominated


def brute_intervals(ivs) -> int:
    """Smallest stabbing set; some optimum uses only interval endpoints."""
    if not ivs:
        return 0
    cands = sorted({x for iv in ivs for x in iv})
    for k in range(1, len(ivs) + 1):
        for combo in itertools.combinations(cands, k):
            if all(any(lo <= x <= hi for x in combo) for lo, hi in ivs):
                return k
    raise AssertionError("unreachable")


def in_arc(x, lo, hi):
    return lo <= x <= hi if lo <= hi else (x >= lo or x <= hi)


def brute_arcs(arcs) -> int:
    cands = sorted({x for a in arcs for x in a})
    for k in range(1, len(arcs) + 1):
        for combo in itertools.combinations(cands, k):
            if all(any(in_arc(x, *a) for x in combo) for a in arcs):
                return k
    raise AssertionError("unreachable")


def check_result(ivs, res):
    assert len(res.points) == len(res.witness)
    assert res.points == sorted(res.points)
    for lo, hi in ivs:
        assert any(lo <= x <= hi for x in res.points)
    W = [ivs[i] for i in res.witness]
    for (a, b), (c, d) in itertools.combinations(W, 2):
        assert b < c or d < a


interval = st.tuples(st.floats(0, 10), st.floats(0, 3)).map(lambda t: (t[0], t[0] + t[1]))


def test_examples():
    res = min_hitting_intervals([(0, 1), (0.5, 2)])
    assert res.points == [0.5] and res.witness == [1]
    assert len(min_hitting_intervals([(0, 1), (2, 3)]).points) == 2
    assert min_hitting_intervals([]).points == []
    assert min_hitting_intervals([RealInterval(0, 1)]).points == [0]


def test_bad_interval():
    with pytest.raises(ValueError):
        RealInterval(2, 1)
    with pytest.raises(ValueError):
        min_hitting_intervals([(2, 1)])


def test_dominated_removal():
    ivs = [(0, 10), (2, 3), (1, 4), (2, 3), (5, 6)]
    keep = remove_dominated(ivs)
    # (0,10) and (1,4) contain (2,3); the duplicate (2,3) keeps the smaller id
    assert keep == [1, 4]
    for i in keep:
        assert not any(j != i and ivs[i][0] <= ivs[j][0] and ivs[j][1] <= ivs[i][1] and ivs[j] != ivs[i] for j in range(len(ivs)))


@given(st.lists(interval, max_size=8))
def test_optimal_vs_brute(ivs):
    res = min_hitting_intervals(ivs)
    check_result(ivs, res)
    assert len(res.points) == brute_intervals(ivs)


@given(st.lists(interval, max_size=8))
def test_idempotent_on_residual(ivs):
    res = min_hitting_intervals(ivs)
    residual = [iv for iv in ivs if not any(iv[0] <= x <= iv[1] for x in res.points)]
    assert residual == []
    assert min_hitting_intervals(residual).points == []


def test_witness_disjoint_large(rng):
    for n in (10, 100, 1000, 10000):
        lo = rng.uniform(0, 1000, n)
        ivs = list(zip(lo, lo + rng.exponential(5, n)))
        check_result(ivs, min_hitting_intervals(ivs))


def test_arc_examples():
    res = min_hitting_arcs([(0.1, 0.3)], 1.0, cut=0.0)
    assert len(res.points) == 1 and 0.1 <= res.points[0] <= 0.3
    res = min_hitting_arcs([(0.1, 0.4), (0.3, 0.6)], 1.0, cut=0.0)
    assert len(res.points) == 1 and 0.3 <= res.points[0] <= 0.4
    with pytest.raises(ValueError):
        min_hitting_arcs([(0.9, 0.1)], 1.0, cut=0.0)


arc = st.tuples(st.floats(0, 0.999), st.floats(0.001, 0.6)).map(lambda t: (t[0], (t[0] + t[1]) % 1.0))


@given(st.lists(arc, min_size=1, max_size=8))
def test_arcs_without_cut_vs_brute(arcs):
    res = min_hitting_arcs(arcs, 1.0)
    for a in arcs:
        assert any(in_arc(x, *a) for x in res.points)
    assert len(res.points) == brute_arcs(arcs)


@given(st.lists(arc, min_size=1, max_size=8), st.floats(0, 0.999))
def test_arcs_with_cut_vs_brute(arcs, cut):
    arcs = [a for a in arcs if not in_arc(cut, *a)]
    if not arcs:
        return
    res = min_hitting_arcs(arcs, 1.0, cut=cut)
    for a in arcs:
        assert any(in_arc(x, *a) for x in res.points)
    assert len(res.points) == len(res.witness) == brute_arcs(arcs)
    W = [arcs[i] for i in res.witness]
    for a, b in itertools.combinations(W, 2):
        # disjoint witnesses: neither contains an endpoint of the other
        assert not (in_arc(a[0], *b) or in_arc(b[0], *a))
