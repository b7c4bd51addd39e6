"""Sampling and geometry helpers shared by the tests."""

import math

import numpy as np

from segstab.geometry import Capsule, Point, Segment, dist_points_segment


def seg(ax, ay, bx, by) -> Segment:
    return Segment(Point(ax, ay), Point(bx, by))


def min_dist(P: np.ndarray, C) -> np.ndarray:
    """Distance from every row of P to the nearest point of C."""
    C = np.asarray(C, dtype=float).reshape(-1, 2)
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    return np.min(np.hypot(P[:, None, 0] - C[None, :, 0], P[:, None, 1] - C[None, :, 1]), axis=1)


def sample_capsule(rng: np.random.Generator, s: Segment, rho: float, n: int) -> np.ndarray:
    """Uniform samples of N_rho(s) by rejection from its bounding box."""
    a, b = np.array(s.a), np.array(s.b)
    lo, hi = np.minimum(a, b) - rho, np.maximum(a, b) + rho
    out, have = [], 0
    while have < n:
        P = rng.uniform(lo, hi, size=(2 * n, 2))
        P = P[dist_points_segment(P, s) <= rho]
        out.append(P)
        have += len(P)
    return np.concatenate(out)[:n]


def random_capsule(rng: np.random.Generator, half_len: float, r: float) -> Capsule:
    th = rng.uniform(0, 2 * math.pi)
    a = rng.uniform(-5, 5, 2)
    b = a + 2 * half_len * np.array([math.cos(th), math.sin(th)])
    return Capsule(Segment(Point(*a), Point(*b)), r)
