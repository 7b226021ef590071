"""Degree-weighted k-means: cost, an exact brute-force oracle, and a seeded
separation-aware heuristic (pairwise-cost seeding, a ball-restricted center
refinement, then Lloyd assignment to a fixed point).

Weighted points everywhere: a point of weight w is cost-equivalent to w
duplicated unit-weight copies, which is how degree-weighted graph embeddings
enter. Ties in assignment always go to the lowest center index, and every
random draw comes from a labelled sub-stream, so all routines are
deterministic functions of (input, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DegenerateError, InputError
from .linalg import rng_stream

#: Brute-force enumeration bound.
BRUTEFORCE_MAX_POINTS = 14
#: Radius factor of the ball-restricted center refinement step.
BALL_RADIUS_FACTOR = 1.0 / 3.0
#: Restart count used by estimate routines when brute force is unavailable.
DEFAULT_RESTARTS = 20

_LLOYD_MAX_ITER = 100


@dataclass(frozen=True)
class WeightedPoints:
    """Finite coordinates with strictly positive weights."""

    coords: np.ndarray   # n x dim
    weights: np.ndarray  # n

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if coords.ndim != 2 or weights.ndim != 1 or coords.shape[0] != weights.shape[0]:
            raise InputError("coords must be n x dim and weights length n")
        if coords.shape[0] == 0:
            raise InputError("empty point set")
        if not np.isfinite(coords).all():
            raise InputError("coordinates must be finite")
        if not np.isfinite(weights).all() or np.any(weights <= 0):
            raise InputError("weights must be positive and finite")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class Clustering:
    """Assignment, centers, and the weighted cost they achieve.

    After a Lloyd step every center is the weighted mean of its cluster and
    the stored cost matches a recomputation to 1e-9.
    """

    labels: np.ndarray   # n, values in [0, k)
    centers: np.ndarray  # k x dim
    cost: float

    @property
    def k(self) -> int:
        return self.centers.shape[0]


def cost(pts: WeightedPoints, clustering: Clustering) -> float:
    """Recompute sum_i sum_{x in cluster i} w_x ||x - c_i||^2."""
    diffs = pts.coords - clustering.centers[clustering.labels]
    return float(np.sum(pts.weights * np.einsum("ij,ij->i", diffs, diffs)))


def _assign(pts: WeightedPoints, centers: np.ndarray) -> np.ndarray:
    """Nearest-center labels; exact ties go to the lowest center index."""
    d2 = np.sum((pts.coords[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    return np.argmin(d2, axis=1)


def _weighted_means(pts: WeightedPoints, labels: np.ndarray, k: int,
                    fallback: np.ndarray) -> np.ndarray:
    centers = fallback.copy()
    for i in range(k):
        mask = labels == i
        if mask.any():
            w = pts.weights[mask]
            centers[i] = (w[:, None] * pts.coords[mask]).sum(axis=0) / w.sum()
    return centers


def lloyd_step(pts: WeightedPoints, clustering: Clustering) -> Clustering:
    """One assignment + recenter pass; cost never increases.

    An emptied cluster is re-seeded at the point with the largest weighted
    distance contribution (next-largest for further empties, never draining a
    cluster to empty), keeping the step deterministic.
    """
    k = clustering.k
    labels = _assign(pts, clustering.centers)
    d2 = np.sum((pts.coords - clustering.centers[labels]) ** 2, axis=1)
    contrib = pts.weights * d2
    for i in range(k):
        if np.any(labels == i):
            continue
        counts = np.bincount(labels, minlength=k)
        candidates = np.flatnonzero((counts[labels] > 1) & (contrib > -np.inf))
        if candidates.size == 0:
            raise DegenerateError("cannot repair empty cluster %d" % i)
        j = candidates[np.argmax(contrib[candidates])]
        labels[j] = i
        contrib[j] = -np.inf
    centers = _weighted_means(pts, labels, k, clustering.centers)
    diffs = pts.coords - centers[labels]
    new_cost = float(np.sum(pts.weights * np.einsum("ij,ij->i", diffs, diffs)))
    return Clustering(labels=labels, centers=centers, cost=new_cost)


def _lloyd_to_fixpoint(pts: WeightedPoints, centers: np.ndarray, k: int) -> Clustering:
    current = lloyd_step(pts, Clustering(labels=np.zeros(pts.n, dtype=np.int64),
                                         centers=centers, cost=math.inf))
    for _ in range(_LLOYD_MAX_ITER):
        nxt = lloyd_step(pts, current)
        if nxt.cost >= current.cost - 1e-15:
            return current if current.cost <= nxt.cost else nxt
        current = nxt
    return current


def orss_kmeans(pts: WeightedPoints, k: int, seed: int) -> Clustering:
    """Seeded clustering for well-separated inputs.

    Seeding: the first center is drawn with probability proportional to
    w_x (W ||x - mean||^2 + total spread), i.e. the pairwise-cost rule that
    mixes distance-squared mass with a spread-proportional floor; each further
    center is drawn proportional to w_x times squared distance to the chosen
    set. One ball-restricted refinement then recenters each seed on the
    points within a third of the distance to its nearest other seed, and a
    full Lloyd pass runs to a fixed point. Deterministic given seed.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    if pts.n < k:
        raise InputError("need at least k points")
    if len(np.unique(pts.coords, axis=0)) < k:
        raise DegenerateError("fewer than k distinct points")
    rng = rng_stream(seed, "kmeans", "seeding")

    w = pts.weights
    total_w = w.sum()
    mean = (w[:, None] * pts.coords).sum(axis=0) / total_w
    d2_mean = np.sum((pts.coords - mean) ** 2, axis=1)
    spread = float((w * d2_mean).sum())

    probs = w * (total_w * d2_mean + spread)
    if probs.sum() <= 0:
        raise DegenerateError("all points coincide")
    centers = [pts.coords[rng.choice(pts.n, p=probs / probs.sum())]]
    d2_near = np.sum((pts.coords - centers[0]) ** 2, axis=1)
    for _ in range(1, k):
        probs = w * d2_near
        centers.append(pts.coords[rng.choice(pts.n, p=probs / probs.sum())])
        d2_near = np.minimum(d2_near, np.sum((pts.coords - centers[-1]) ** 2, axis=1))
    centers = np.array(centers)

    if k > 1:
        refined = centers.copy()
        for i in range(k):
            gaps = np.sum((np.delete(centers, i, axis=0) - centers[i]) ** 2, axis=1)
            radius2 = (BALL_RADIUS_FACTOR ** 2) * gaps.min()
            ball = np.sum((pts.coords - centers[i]) ** 2, axis=1) <= radius2
            if ball.any():
                bw = w[ball]
                refined[i] = (bw[:, None] * pts.coords[ball]).sum(axis=0) / bw.sum()
        centers = refined

    return _lloyd_to_fixpoint(pts, centers, k)


def best_of_orss(pts: WeightedPoints, k: int, seed: int,
                 restarts: int = DEFAULT_RESTARTS) -> Clustering:
    """Lowest-cost clustering over seeded restarts (earliest wins ties)."""
    if restarts < 1:
        raise InputError("restarts must be >= 1")
    sub = rng_stream(seed, "kmeans", "restarts", str(k)).integers(2 ** 62, size=restarts)
    best = None
    for s in sub:
        candidate = orss_kmeans(pts, k, int(s))
        if best is None or candidate.cost < best.cost:
            best = candidate
    return best


def optimal_cost_bruteforce(pts: WeightedPoints, k: int) -> tuple[float, Clustering]:
    """Exact optimal k-means cost by enumerating set partitions.

    Supports n <= 14 (or k = 1 / k >= n in closed form). Enumeration is over
    partitions into exactly min(k, n) nonempty blocks in canonical first-use
    order, with branch-and-bound pruning on the (monotone) partial cost.
    """
    n, dim = pts.n, pts.dim
    w = pts.weights
    x = pts.coords
    if k < 1:
        raise InputError("k must be >= 1")
    if k >= n:
        centers = x.copy()
        return 0.0, Clustering(labels=np.arange(n, dtype=np.int64),
                               centers=centers, cost=0.0)
    if k == 1:
        center = (w[:, None] * x).sum(axis=0) / w.sum()
        diffs = x - center
        c = float(np.sum(w * np.einsum("ij,ij->i", diffs, diffs)))
        return c, Clustering(labels=np.zeros(n, dtype=np.int64),
                             centers=center[None, :], cost=c)
    if n > BRUTEFORCE_MAX_POINTS:
        raise CapacityError("brute force supports n <= %d (got %d)"
                            % (BRUTEFORCE_MAX_POINTS, n))

    wx = w[:, None] * x
    wsq = w * np.einsum("ij,ij->i", x, x)

    labels = np.zeros(n, dtype=np.int64)
    blk_w = [0.0] * k
    blk_sum = [np.zeros(dim) for _ in range(k)]
    blk_sq = [0.0] * k
    blk_cost = [0.0] * k
    best = {"cost": math.inf, "labels": None}

    def block_cost(b) -> float:
        if blk_w[b] <= 0:
            return 0.0
        return blk_sq[b] - float(blk_sum[b] @ blk_sum[b]) / blk_w[b]

    def recurse(i: int, used: int, total: float):
        if total > best["cost"] + 1e-12:
            return
        if used + (n - i) < k:
            return
        if i == n:
            if total < best["cost"]:
                best["cost"] = total
                best["labels"] = labels.copy()
            return
        top = min(used + 1, k)
        for b in range(top):
            old_cost = blk_cost[b]
            old_sum = blk_sum[b].copy()
            blk_w[b] += w[i]
            blk_sum[b] += wx[i]
            blk_sq[b] += wsq[i]
            blk_cost[b] = block_cost(b)
            labels[i] = b
            recurse(i + 1, used + (1 if b == used else 0),
                    total + blk_cost[b] - old_cost)
            blk_w[b] -= w[i]
            blk_sum[b] = old_sum
            blk_sq[b] -= wsq[i]
            blk_cost[b] = old_cost

    recurse(0, 0, 0.0)
    lab = best["labels"]
    centers = _weighted_means(pts, lab, k, np.zeros((k, dim)))
    diffs = x - centers[lab]
    exact = max(0.0, float(np.sum(w * np.einsum("ij,ij->i", diffs, diffs))))
    return exact, Clustering(labels=lab, centers=centers, cost=exact)


@dataclass(frozen=True)
class SeparationEstimate:
    """Estimated optimal-cost drop from k-1 to k clusters.

    ``method`` is "bruteforce" (exact, n <= 12) or "restarts" (best-of-r
    heuristic upper bounds for both costs, so the ratio is only an estimate).
    ``degenerate`` flags a 0/0 ratio.
    """

    ratio: float
    delta_k: float
    delta_km1: float
    method: str
    degenerate: bool


def separation_ratio(pts: WeightedPoints, k: int, seed: int,
                     restarts: int = DEFAULT_RESTARTS) -> SeparationEstimate:
    """Estimate Delta_k / Delta_{k-1} with the method recorded alongside."""
    if k < 2:
        raise InputError("separation needs k >= 2")
    if pts.n <= 12:
        method = "bruteforce"
        delta_k, _ = optimal_cost_bruteforce(pts, k)
        delta_km1, _ = optimal_cost_bruteforce(pts, k - 1)
    else:
        method = "restarts"
        delta_k = best_of_orss(pts, k, seed, restarts).cost
        if k - 1 == 1:
            delta_km1, _ = optimal_cost_bruteforce(pts, 1)
        else:
            delta_km1 = best_of_orss(pts, k - 1, seed, restarts).cost
    if delta_km1 <= 0.0:
        return SeparationEstimate(ratio=0.0, delta_k=delta_k, delta_km1=delta_km1,
                                  method=method, degenerate=True)
    return SeparationEstimate(ratio=delta_k / delta_km1, delta_k=delta_k,
                              delta_km1=delta_km1, method=method, degenerate=False)
