"""Undirected simple graphs, conductance/volume arithmetic, and partitions.

Graphs are unweighted, have no self-loops or multi-edges, and reject isolated
vertices (degree 0 breaks the degree-normalized embedding downstream). Cut and
volume are exact integers; conductance is returned as an exact Fraction and
only converted to binary float at aggregate APIs (partition_phi and friends).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError, NumericError
from .linalg import rng_stream


class Graph:
    """Immutable undirected simple graph with minimum degree 1.

    Stores the canonical sorted edge array (u < v, lexicographic) plus a
    CSR-style adjacency (sorted neighbor ids per vertex) for O(d) queries.
    """

    __slots__ = ("n", "m", "edges", "degrees", "_nbr", "_off")

    def __init__(self, n: int, edges):
        if n <= 0:
            raise InputError("vertex count must be positive")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            raise InputError("graph must have at least one edge (no isolated vertices)")
        if e.ndim != 2 or e.shape[1] != 2:
            raise InputError("edges must be an iterable of (u, v) pairs")
        if e.min() < 0 or e.max() >= n:
            raise InputError("vertex id out of range [0, %d)" % n)
        lo = e.min(axis=1)
        hi = e.max(axis=1)
        if np.any(lo == hi):
            raise InputError("self-loops are not allowed")
        canon = np.stack([lo, hi], axis=1)
        canon = canon[np.lexsort((canon[:, 1], canon[:, 0]))]
        if len(canon) > 1 and np.any(np.all(canon[1:] == canon[:-1], axis=1)):
            raise InputError("duplicate edges are not allowed")
        degrees = np.bincount(canon.ravel(), minlength=n)
        if np.any(degrees == 0):
            bad = int(np.flatnonzero(degrees == 0)[0])
            raise InputError("isolated vertices are not allowed (vertex %d)" % bad)

        src = np.concatenate([canon[:, 0], canon[:, 1]])
        dst = np.concatenate([canon[:, 1], canon[:, 0]])
        order = np.lexsort((dst, src))
        nbr = dst[order]
        off = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degrees, out=off[1:])

        for arr in (canon, degrees, nbr, off):
            arr.flags.writeable = False
        self.n = int(n)
        self.m = int(len(canon))
        self.edges = canon
        self.degrees = degrees
        self._nbr = nbr
        self._off = off

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbor ids of u."""
        return self._nbr[self._off[u]: self._off[u + 1]]

    @property
    def total_volume(self) -> int:
        """Sum of all degrees (= 2m)."""
        return 2 * self.m

    def __repr__(self):
        return "Graph(n=%d, m=%d)" % (self.n, self.m)


class Partition:
    """Block labelling of the vertices 0..n-1 into blocks 0..k-1.

    In the default mode the labelling is total and every block is nonempty.
    With ``allow_uncovered=True`` ("tuple mode") a label of -1 marks vertices
    that belong to no block, which models disjoint k-tuples of subsets; blocks
    must still be nonempty.
    """

    __slots__ = ("k", "labels", "allow_uncovered")

    def __init__(self, k: int, labels, *, allow_uncovered: bool = False):
        if k < 1:
            raise InputError("block count must be at least 1")
        lab = np.asarray(labels, dtype=np.int64)
        if lab.ndim != 1 or lab.size == 0:
            raise InputError("labels must be a nonempty 1-d sequence")
        floor = -1 if allow_uncovered else 0
        if lab.min() < floor or lab.max() >= k:
            raise InputError("block index out of range")
        counts = np.bincount(lab[lab >= 0], minlength=k)
        if np.any(counts == 0):
            raise InputError("every block must be nonempty")
        lab = lab.copy()
        lab.flags.writeable = False
        self.k = int(k)
        self.labels = lab
        self.allow_uncovered = bool(allow_uncovered)

    @property
    def n(self) -> int:
        return len(self.labels)

    def block(self, i: int) -> np.ndarray:
        """Vertex ids of block i."""
        return np.flatnonzero(self.labels == i)

    def blocks(self) -> list[np.ndarray]:
        return [self.block(i) for i in range(self.k)]

    def __repr__(self):
        return "Partition(k=%d, n=%d%s)" % (
            self.k, self.n, ", tuple-mode" if self.allow_uncovered else "")


def _as_mask(g: Graph, s) -> np.ndarray:
    """Normalize a vertex set (bool mask or id iterable) to a bool mask."""
    if isinstance(s, np.ndarray) and s.dtype == bool:
        if s.shape != (g.n,):
            raise InputError("boolean mask must have length n")
        return s
    ids = np.asarray(list(s) if not isinstance(s, np.ndarray) else s, dtype=np.int64)
    mask = np.zeros(g.n, dtype=bool)
    if ids.size:
        if ids.min() < 0 or ids.max() >= g.n:
            raise InputError("vertex id out of range [0, %d)" % g.n)
        mask[ids] = True
    return mask


def volume(g: Graph, s) -> int:
    """Total degree of the vertex set s."""
    return int(g.degrees[_as_mask(g, s)].sum())


def cut(g: Graph, s) -> int:
    """Number of edges with exactly one endpoint in s."""
    mask = _as_mask(g, s)
    return int(np.count_nonzero(mask[g.edges[:, 0]] != mask[g.edges[:, 1]]))


def conductance(g: Graph, s) -> Fraction:
    """Exact cut(s) / volume(s); s must be nonempty."""
    mask = _as_mask(g, s)
    vol = int(g.degrees[mask].sum())
    if vol == 0:
        raise InputError("conductance of an empty set is undefined")
    c = int(np.count_nonzero(mask[g.edges[:, 0]] != mask[g.edges[:, 1]]))
    return Fraction(c, vol)


def _check_partition(g: Graph, p: Partition):
    if p.n != g.n:
        raise InputError("partition labels length %d != vertex count %d" % (p.n, g.n))


def block_conductances(g: Graph, p: Partition) -> list[Fraction]:
    """Exact conductance of each block of p."""
    _check_partition(g, p)
    return [conductance(g, p.labels == i) for i in range(p.k)]


def partition_phi(g: Graph, p: Partition) -> float:
    """Largest block conductance of p."""
    return float(max(block_conductances(g, p)))


def partition_avg_phi(g: Graph, p: Partition) -> float:
    """Mean block conductance of p."""
    phis = block_conductances(g, p)
    return float(sum(phis) / p.k)


def sym_diff_volume(g: Graph, a, b) -> int:
    """Volume of the symmetric difference of two vertex sets."""
    return int(g.degrees[_as_mask(g, a) ^ _as_mask(g, b)].sum())


def match_partitions(g: Graph, a: Partition, b: Partition) -> np.ndarray:
    """Permutation pi minimizing sum_i volume(A_i symdiff B_pi(i)).

    Exhaustive over permutations for k <= 8; otherwise an optimal-assignment
    solve on the k-by-k overlap-volume matrix (the two objectives agree since
    the per-block volumes are permutation invariant). Returns pi as an array
    with pi[i] = matched block of b for block i of a.
    """
    _check_partition(g, a)
    _check_partition(g, b)
    if a.k != b.k:
        raise InputError("partitions have different block counts (%d vs %d)" % (a.k, b.k))
    k = a.k
    covered = (a.labels >= 0) & (b.labels >= 0)
    overlap = np.zeros((k, k))
    np.add.at(overlap, (a.labels[covered], b.labels[covered]), g.degrees[covered])
    vol_a = np.array([volume(g, a.labels == i) for i in range(k)], dtype=float)
    vol_b = np.array([volume(g, b.labels == j) for j in range(k)], dtype=float)
    if k <= 8:
        best_pi, best_obj = None, None
        for pi in itertools.permutations(range(k)):
            obj = sum(vol_a[i] + vol_b[pi[i]] - 2.0 * overlap[i, pi[i]] for i in range(k))
            if best_obj is None or obj < best_obj:
                best_pi, best_obj = pi, obj
        return np.asarray(best_pi, dtype=np.int64)
    rows, cols = linear_sum_assignment(-overlap)
    pi = np.empty(k, dtype=np.int64)
    pi[rows] = cols
    return pi


# ---------------------------------------------------------------------------
# Synthetic generators
# ---------------------------------------------------------------------------

def gen_ring_of_cliques(k: int, clique_size: int, bridges_per_gap: int,
                        seed: int) -> tuple[Graph, Partition]:
    """k cliques in a ring, connected by seeded random bridge edges.

    Consecutive cliques share ``bridges_per_gap`` bridge edges whose endpoints
    are drawn from the seeded stream; a draw that repeats an existing bridge
    in the same gap is redrawn from the stream. For k = 2 the two gaps
    coincide, so a single gap is used. Returns the graph and the planted
    one-block-per-clique partition.
    """
    if k < 2:
        raise InputError("ring_of_cliques requires k >= 2")
    if clique_size < 3:
        raise InputError("ring_of_cliques requires clique_size >= 3")
    if bridges_per_gap < 0 or bridges_per_gap > clique_size * clique_size:
        raise InputError("bridges_per_gap must be in [0, clique_size^2]")
    rng = rng_stream(seed, "graph", "ring_of_cliques")
    s = clique_size
    edges = []
    for c in range(k):
        base = c * s
        edges.extend((base + i, base + j) for i in range(s) for j in range(i + 1, s))
    gaps = [(0, 1)] if k == 2 else [(i, (i + 1) % k) for i in range(k)]
    for ca, cb in gaps:
        chosen = set()
        while len(chosen) < bridges_per_gap:
            u = int(rng.integers(0, s))
            v = int(rng.integers(0, s))
            if (u, v) not in chosen:
                chosen.add((u, v))
        edges.extend((ca * s + u, cb * s + v) for u, v in sorted(chosen))
    labels = np.repeat(np.arange(k), s)
    return Graph(k * s, edges), Partition(k, labels)


def gen_sbm(sizes: Sequence[int], p_in: float, p_out: float,
            seed: int) -> tuple[Graph, Partition]:
    """Stochastic block model with a minimum-degree repair pass.

    Each within-block pair is an edge with probability p_in, each cross-block
    pair with probability p_out. Vertices left isolated have their block-
    internal pair row resampled (cross-block row for singleton blocks) until
    every degree is >= 1; the repair draws from the same seeded stream so the
    result is deterministic. Returns the graph and the planted partition.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 1 or any(s < 1 for s in sizes):
        raise InputError("sizes must be positive")
    if not (0.0 <= p_out <= 1.0 and 0.0 < p_in <= 1.0):
        raise InputError("require 0 <= p_out <= 1 and 0 < p_in <= 1")
    if p_out > p_in:
        raise InputError("require p_out <= p_in")
    n = sum(sizes)
    k = len(sizes)
    labels = np.repeat(np.arange(k), sizes)
    rng = rng_stream(seed, "graph", "sbm")

    prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    iu, ju = np.triu_indices(n, k=1)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu, ju] = rng.random(len(iu)) < prob[iu, ju]
    adj |= adj.T

    for _ in range(10000):
        deg = adj.sum(axis=0)
        isolated = np.flatnonzero(deg == 0)
        if isolated.size == 0:
            break
        v = int(isolated[0])
        mates = np.flatnonzero((labels == labels[v]) if (labels == labels[v]).sum() > 1
                               else (labels != labels[v]))
        mates = mates[mates != v]
        p = p_in if labels[mates[0]] == labels[v] else p_out
        if p <= 0.0:
            raise InputError("cannot repair isolated vertex %d with p_out = 0" % v)
        hit = rng.random(len(mates)) < p
        adj[v, mates[hit]] = True
        adj[mates[hit], v] = True
    else:
        raise NumericError("isolated-vertex repair did not terminate")

    eu, ev = np.nonzero(np.triu(adj, k=1))
    return Graph(n, np.stack([eu, ev], axis=1)), Partition(k, labels)


# ---------------------------------------------------------------------------
# Edge-list and partition file formats
# ---------------------------------------------------------------------------

def read_edge_list(path) -> Graph:
    """Parse the text edge-list format: one ``u v`` pair per line.

    Vertex ids are 0-based integers; ``#`` starts a comment; blank lines are
    skipped. Duplicate or reversed-duplicate pairs and self-loops are rejected
    with the offending line number. n is the largest id + 1.
    """
    edges = []
    seen: dict[tuple[int, int], int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError("%s:%d: expected 'u v'" % (path, lineno))
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise InputError("%s:%d: vertex ids must be integers" % (path, lineno))
            if u < 0 or v < 0:
                raise InputError("%s:%d: negative vertex id" % (path, lineno))
            if u == v:
                raise InputError("%s:%d: self-loop" % (path, lineno))
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InputError("%s:%d: duplicate of line %d" % (path, lineno, seen[key]))
            seen[key] = lineno
            edges.append(key)
    if not edges:
        raise InputError("%s: no edges" % path)
    n = max(max(e) for e in edges) + 1
    return Graph(n, edges)


def write_edge_list(g: Graph, path):
    """Write the canonical sorted edge list (u < v per line)."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges:
            fh.write("%d %d\n" % (u, v))


def read_partition(path, n: int) -> Partition:
    """Parse the partition format: one ``vertex block`` pair per line.

    Both ids 0-based; every vertex of the graph must appear exactly once, and
    k is the largest block id + 1. Overlapping assignments (a vertex listed
    twice) are rejected with the line number.
    """
    labels = np.full(n, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InputError("%s:%d: expected 'vertex block'" % (path, lineno))
            try:
                v, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise InputError("%s:%d: ids must be integers" % (path, lineno))
            if v < 0 or v >= n:
                raise InputError("%s:%d: vertex %d out of range" % (path, lineno, v))
            if b < 0:
                raise InputError("%s:%d: negative block id" % (path, lineno))
            if labels[v] != -1:
                raise InputError("%s:%d: vertex %d assigned twice (overlapping blocks)"
                                 % (path, lineno, v))
            labels[v] = b
    if np.any(labels < 0):
        missing = int(np.flatnonzero(labels < 0)[0])
        raise InputError("%s: vertex %d has no block" % (path, missing))
    return Partition(int(labels.max()) + 1, labels)


def write_partition(p: Partition, path):
    """Write one ``vertex block`` pair per line (uncovered vertices skipped)."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, b in enumerate(p.labels):
            if b >= 0:
                fh.write("%d %d\n" % (v, b))
