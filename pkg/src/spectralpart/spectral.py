"""Normalized-Laplacian operators and spectral embeddings.

The embedding maps vertex u to the first k eigenvector coordinates divided by
sqrt(d_u); the induced k-means instance is the set of those n points weighted
by degree (weights stand in for the usual "d_u duplicated copies" view, which
costs the same under weighted k-means and O(n) instead of O(m) memory).

Two construction routes are provided: a dense exact eigensolve, and the power
iteration on I + D^{-1/2} A D^{-1/2} followed by a thin SVD, which
approximates the leading eigenspace using only sparse matvecs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .errors import CapacityError, GapError, InputError, NumericError
from .graph import Graph
from .kmeans import WeightedPoints
from .linalg import EigenSystem, gaussian_matrix, sym_eig, thin_svd

#: Above this vertex count the dense exact path is refused.
DENSE_THRESHOLD = 4096

_RANK_COLLAPSE_TOL = 1e-300


class LaplacianOps:
    """Matvec access to I - N and I + N for N = D^{-1/2} A D^{-1/2}.

    The two operators are exchangeable through apply_laplacian(x) +
    apply_shifted(x) = 2x and are both symmetric. A dense normalized
    Laplacian is materialized on demand for n <= dense_threshold.
    """

    def __init__(self, graph: Graph, dense_threshold: int = DENSE_THRESHOLD):
        self.graph = graph
        self.dense_threshold = int(dense_threshold)
        self._inv_sqrt_d = 1.0 / np.sqrt(graph.degrees.astype(float))
        e = graph.edges
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows))
        self._adj = sparse.csr_array((data, (rows, cols)), shape=(graph.n, graph.n))
        self._dense_lap: np.ndarray | None = None

    def _norm_adj(self, x: np.ndarray) -> np.ndarray:
        scale = self._inv_sqrt_d if x.ndim == 1 else self._inv_sqrt_d[:, None]
        return scale * (self._adj @ (scale * x))

    def apply_laplacian(self, x: np.ndarray) -> np.ndarray:
        """(I - N) x; positive semidefinite with spectrum in [0, 2]."""
        x = np.asarray(x, dtype=float)
        return x - self._norm_adj(x)

    def apply_shifted(self, x: np.ndarray) -> np.ndarray:
        """(I + N) x = (2I - laplacian) x; the power-iteration operator."""
        x = np.asarray(x, dtype=float)
        return x + self._norm_adj(x)

    def dense_laplacian(self) -> np.ndarray:
        """Dense I - N; refused above dense_threshold."""
        if self.graph.n > self.dense_threshold:
            raise CapacityError(
                "dense Laplacian for n=%d exceeds threshold %d"
                % (self.graph.n, self.dense_threshold))
        if self._dense_lap is None:
            a = self._adj.toarray()
            scaled = self._inv_sqrt_d[:, None] * a * self._inv_sqrt_d[None, :]
            self._dense_lap = np.eye(self.graph.n) - scaled
        return self._dense_lap


def build_ops(g: Graph, dense_threshold: int = DENSE_THRESHOLD) -> LaplacianOps:
    return LaplacianOps(g, dense_threshold)


@dataclass(frozen=True)
class Embedding:
    """Per-vertex k-dimensional spectral coordinates with degree weights.

    ``basis`` holds the orthonormal columns (exact eigenvectors or the power
    method's left singular vectors); ``coords`` is basis with row u divided by
    sqrt(d_u). The degree-weighted Gram identity sum_u d_u F(u) F(u)^T = I_k
    holds for both kinds.
    """

    basis: np.ndarray
    coords: np.ndarray
    weights: np.ndarray
    kind: str                      # "exact" | "approximate"
    power_steps: int | None = None
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class PowerParams:
    """Power iteration configuration: step count, seed, and (eps, delta) targets."""

    steps: int
    seed: int
    eps: float = 0.01
    delta: float = 0.1

    def __post_init__(self):
        if self.steps < 1:
            raise InputError("power iteration needs at least 1 step")


def _freeze_embedding(basis: np.ndarray, g: Graph, kind: str,
                      power_steps=None, seed=None) -> Embedding:
    inv_sqrt_d = 1.0 / np.sqrt(g.degrees.astype(float))
    coords = basis * inv_sqrt_d[:, None]
    weights = g.degrees.astype(float)
    for arr in (basis, coords, weights):
        arr.flags.writeable = False
    return Embedding(basis=basis, coords=coords, weights=weights, kind=kind,
                     power_steps=power_steps, seed=seed)


def exact_embedding(g: Graph, k: int,
                    dense_threshold: int = DENSE_THRESHOLD) -> tuple[Embedding, EigenSystem]:
    """Embedding from the k lowest exact eigenvectors, plus the full spectrum.

    Dense-only: refused above dense_threshold. Within-eigenspace bases are
    fixed by sym_eig's deterministic ordering and sign rule; downstream
    consumers compare projectors or costs, which are invariant to that choice.
    """
    if k < 1 or k > g.n:
        raise InputError("k must be in [1, n]")
    if g.n > dense_threshold:
        raise CapacityError("exact embedding needs n <= %d (got n=%d); use the power route"
                            % (dense_threshold, g.n))
    ops = build_ops(g, dense_threshold)
    eig = sym_eig(ops.dense_laplacian())
    basis = eig.vectors[:, :k].copy()
    return _freeze_embedding(basis, g, "exact"), eig


def required_power_steps(n: int, k: int, eps: float, delta: float,
                         lambda_k: float, lambda_k1: float) -> int:
    """Step count guaranteeing a Frobenius projector error <= eps w.h.p.

    Evaluates ceil(ln(8nk / (eps delta)) / ln(1/gamma)) for the convergence
    ratio gamma = (2 - lambda_{k+1}) / (2 - lambda_k), clamped below at 1.
    Requires a spectral gap lambda_k < lambda_{k+1}.
    """
    if n < 1 or k < 1:
        raise InputError("n and k must be positive")
    if not (0.0 < eps < 1.0 and 0.0 < delta < 1.0):
        raise InputError("eps and delta must lie in (0, 1)")
    if lambda_k1 <= lambda_k:
        raise GapError("no spectral gap: lambda_k=%.6g >= lambda_{k+1}=%.6g"
                       % (lambda_k, lambda_k1))
    gamma = (2.0 - lambda_k1) / (2.0 - lambda_k)
    if gamma <= 0.0:
        return 1
    p = math.ceil(math.log(8.0 * n * k / (eps * delta)) / math.log(1.0 / gamma))
    return max(int(p), 1)


def power_embedding(g: Graph, k: int, params: PowerParams) -> Embedding:
    """Approximate embedding: p sparse matvecs of I + N on a Gaussian block.

    The operator power is never materialized; columns are renormalized after
    each application to avoid overflow, which rescales columns only and so
    leaves the SVD's left subspace unchanged. Runtime O(m k p + n k^2).
    Deterministic for fixed (graph, params).
    """
    if k < 1 or k > g.n:
        raise InputError("k must be in [1, n]")
    ops = build_ops(g)
    block = gaussian_matrix(g.n, k, params.seed)
    for _ in range(params.steps):
        block = ops.apply_shifted(block)
        norms = np.linalg.norm(block, axis=0)
        if np.any(norms < _RANK_COLLAPSE_TOL):
            raise NumericError("power iteration column collapsed; rerun with a new seed")
        block = block / norms
    u, s, _ = thin_svd(block)
    if s[-1] < _RANK_COLLAPSE_TOL:
        raise NumericError(
            "rank collapse in power iteration (sigma_k=%.3e); rerun with a new seed" % s[-1])
    return _freeze_embedding(u, g, "approximate", power_steps=params.steps, seed=params.seed)


def projection_distance(a, b) -> float:
    """Frobenius distance between the projectors of two orthonormal bases.

    Accepts Embeddings (their ``basis``) or plain orthonormal matrices. The
    distance equals sqrt(2k - 2 ||A^T B||_F^2); it is evaluated through the
    residual identity ||A - B B^T A||_F^2 + ||B - A A^T B||_F^2, which avoids
    both n-by-n intermediates and the catastrophic cancellation of the direct
    form when the subspaces (nearly) coincide.
    """
    mat_a = a.basis if isinstance(a, Embedding) else np.asarray(a, dtype=float)
    mat_b = b.basis if isinstance(b, Embedding) else np.asarray(b, dtype=float)
    if mat_a.shape != mat_b.shape:
        raise InputError("shape mismatch %s vs %s" % (mat_a.shape, mat_b.shape))
    resid_a = mat_a - mat_b @ (mat_b.T @ mat_a)
    resid_b = mat_b - mat_a @ (mat_a.T @ mat_b)
    return math.sqrt(float(np.sum(resid_a ** 2)) + float(np.sum(resid_b ** 2)))


def normalized_weighted_pointset(e: Embedding) -> WeightedPoints:
    """The embedding as a weighted k-means instance.

    One point F(u) per vertex with multiplicity weight d_u; total weight 2m.
    The degree-duplicated row matrix is never materialized.
    """
    return WeightedPoints(coords=e.coords, weights=e.weights)


# ---------------------------------------------------------------------------
# Text export: one line per vertex "u d_u F(u)_1 ... F(u)_k"
# ---------------------------------------------------------------------------

def write_embedding(e: Embedding, path):
    """Write the embedding in the text format with 17-significant-digit floats."""
    with open(path, "w", encoding="utf-8") as fh:
        steps = "-" if e.power_steps is None else str(e.power_steps)
        seed = "-" if e.seed is None else str(e.seed)
        fh.write("#spectral-embedding %d %d %s %s %s\n" % (e.n, e.k, e.kind, steps, seed))
        for u in range(e.n):
            row = " ".join("%.17g" % x for x in e.coords[u])
            fh.write("%d %d %s\n" % (u, int(e.weights[u]), row))


def read_embedding(path) -> Embedding:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 6 or header[0] != "#spectral-embedding":
            raise InputError("%s: bad embedding header" % path)
        n, k = int(header[1]), int(header[2])
        kind = header[3]
        steps = None if header[4] == "-" else int(header[4])
        seed = None if header[5] == "-" else int(header[5])
        coords = np.zeros((n, k))
        weights = np.zeros(n)
        for lineno, raw in enumerate(fh, start=2):
            parts = raw.split()
            if len(parts) != k + 2:
                raise InputError("%s:%d: expected %d fields" % (path, lineno, k + 2))
            u = int(parts[0])
            if u < 0 or u >= n:
                raise InputError("%s:%d: vertex out of range" % (path, lineno))
            weights[u] = float(parts[1])
            coords[u] = [float(x) for x in parts[2:]]
    if np.any(weights <= 0):
        raise InputError("%s: missing vertex rows" % path)
    basis = coords * np.sqrt(weights)[:, None]
    for arr in (basis, coords, weights):
        arr.flags.writeable = False
    return Embedding(basis=basis, coords=coords, weights=weights, kind=kind,
                     power_steps=steps, seed=seed)
