"""Seeded generators for vertex-random graphs, random annulus graphs and
geometric block models on the circle and on S^t.

Circle models use a sorted sweep: positions are sorted once and, for each
vertex, two binary searches bound the clockwise arc ``[r1, r2]``; every pair at
geodesic distance in the window is found from the endpoint whose clockwise
offset equals that distance. Sphere models hash points into cubical cells and
only compare neighboring cells. In both paths candidate pairs are collected
with a tiny slack and the final decision reuses the exact distance functions
of :mod:`geomgraph.geometry`, so the edge sets coincide with
:func:`naive_oracle` bit for bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DimensionError, DomainError
from .geometry import AnnulusSpec, Metric, chord_distance, circle_distance, sample_circle, sample_sphere
from .graph import Graph
from .rng import make_stream

MODELS = ("vrg", "rag", "gbm", "gbmt", "vrg_union")
NAIVE_SPHERE_CUTOFF = 1000
_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class GeometricInstance:
    """A generated graph together with its hidden geometry.

    ``positions`` is shape ``(n,)`` for circle models and ``(n, t+1)`` for
    sphere models. ``truth`` holds 0/1 cluster labels for block models and is
    None otherwise.
    """

    graph: Graph
    model: str
    dim_t: int
    positions: np.ndarray
    params: dict
    seed: Optional[int] = None
    truth: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def on_circle(self) -> bool:
        return self.positions.ndim == 1


# --------------------------------------------------------------------------
# membership rules


@dataclass(frozen=True)
class AnnulusRule:
    """Edge iff ``r1 <= d <= r2``."""

    r1: float
    r2: float

    @property
    def reach(self):
        return self.r1, self.r2

    def accept(self, u, v, d):
        return (d >= self.r1) & (d <= self.r2)


@dataclass(frozen=True)
class BlockRule:
    """Edge iff ``d <= rs`` within a cluster and ``d <= rd`` across clusters."""

    labels: np.ndarray = field(repr=False)
    rs: float
    rd: float

    @property
    def reach(self):
        return 0.0, max(self.rs, self.rd)

    def accept(self, u, v, d):
        same = self.labels[u] == self.labels[v]
        return np.where(same, d <= self.rs, d <= self.rd)


@dataclass(frozen=True)
class UnionRule:
    """Edge iff ``d <= r_c`` or ``r_b <= d <= r_a``."""

    r_c: float
    r_b: float
    r_a: float

    @property
    def reach(self):
        return 0.0, self.r_a

    def accept(self, u, v, d):
        return (d <= self.r_c) | ((d >= self.r_b) & (d <= self.r_a))


def _pair_distances(positions, u, v):
    if positions.ndim == 1:
        return circle_distance(positions[u], positions[v])
    return chord_distance(positions[u], positions[v])


def _apply_rule(positions, rule, u, v) -> Graph:
    d = np.atleast_1d(_pair_distances(positions, u, v))
    keep = np.asarray(rule.accept(u, v, d), dtype=bool)
    return Graph.from_edges(len(positions), u[keep], v[keep])


def naive_oracle(positions, rule) -> Graph:
    """Apply ``rule`` to every pair: O(n^2) reference construction.

    1-D positions are circle points (geodesic metric); 2-D positions are
    sphere points (chord metric).
    """
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    if n < 2:
        return Graph.empty(n)
    u, v = np.triu_indices(n, k=1)
    return _apply_rule(positions, rule, u.astype(np.int64), v.astype(np.int64))


# --------------------------------------------------------------------------
# candidate search


def circle_candidates(x: np.ndarray, lo: float, hi: float):
    """Index pairs whose clockwise offset lies in ``[lo, hi]`` up to a small slack.

    Every unordered pair at geodesic distance in ``[lo, hi]`` appears at least
    once; a few extra pairs near the window edges may appear too.
    """
    n = len(x)
    if n < 2:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    order = np.argsort(x, kind="stable")
    xs = x[order]
    xx = np.concatenate([xs, xs + 1.0])
    idx = np.arange(n)
    start = np.searchsorted(xx, xs + (lo - _SLACK), side="left")
    stop = np.searchsorted(xx, xs + (hi + _SLACK), side="right")
    start = np.maximum(start, idx + 1)
    stop = np.minimum(stop, idx + n)
    cnt = np.maximum(stop - start, 0)
    total = int(cnt.sum())
    ii = np.repeat(idx, cnt)
    base = np.repeat(start - np.concatenate([[0], np.cumsum(cnt)[:-1]]), cnt)
    jj = (np.arange(total) + base) % n
    return order[ii].astype(np.int64), order[jj].astype(np.int64)


def sphere_candidates(points: np.ndarray, radius: float):
    """Index pairs ``i < j`` with Euclidean distance at most ``radius`` (plus slack),
    found with a cubical cell grid over ``[-1, 1]^(t+1)``."""
    n, k = points.shape
    if n < 2:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    reach = radius * (1 + 1e-9) + _SLACK
    max_cells = max(4 * n, 1 << 16)
    dims = max(1, min(int(2.0 / reach) if reach > 0 else 1, int(max_cells ** (1.0 / k))))
    side = 2.0 / dims
    coords = np.minimum(((points + 1.0) / side).astype(np.int64), dims - 1)
    coords = np.maximum(coords, 0)
    cell = np.zeros(n, dtype=np.int64)
    for d in range(k):
        cell = cell * dims + coords[:, d]
    offsets = np.array(list(itertools.product((-1, 0, 1), repeat=k)), dtype=np.int64)
    return _kernels.cell_candidate_pairs(np.ascontiguousarray(points), cell, dims, offsets, reach)


def build_graph(positions: np.ndarray, rule) -> Graph:
    """Accelerated construction; same edge set as :func:`naive_oracle`."""
    positions = np.asarray(positions, dtype=float)
    lo, hi = rule.reach
    if positions.ndim == 1:
        u, v = circle_candidates(positions, lo, hi)
    elif len(positions) < NAIVE_SPHERE_CUTOFF:
        return naive_oracle(positions, rule)
    else:
        u, v = sphere_candidates(positions, hi)
    if len(u) == 0:
        return Graph.empty(len(positions))
    return _apply_rule(positions, rule, u, v)


# --------------------------------------------------------------------------
# parameter helpers


def scaled_radius(x: float, n: int, t: int = 1) -> float:
    """``x * (log n / n) ** (1/t)`` with natural log."""
    return x * (math.log(n) / n) ** (1.0 / t)


def unscaled_radius(r: float, n: int, t: int = 1) -> float:
    """Inverse of :func:`scaled_radius`."""
    return r / (math.log(n) / n) ** (1.0 / t)


def _check_n(n, even=False):
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    if even and n % 2:
        raise DomainError(f"block models need an even n, got {n}")
    return int(n)


def _circle_positions(n, seed, positions):
    if positions is not None:
        positions = np.asarray(positions, dtype=float)
        if positions.shape != (n,) or np.any((positions < 0) | (positions >= 1)):
            raise DomainError("circle positions must be n values in [0, 1)")
        return positions
    if seed is None:
        raise DomainError("either seed or positions is required")
    return sample_circle(make_stream(seed), n)


def _sphere_positions(n, t, seed, positions):
    if int(t) != t or t < 1:
        raise DimensionError(f"sphere dimension must be a positive integer, got {t}")
    if positions is not None:
        positions = np.asarray(positions, dtype=float)
        if positions.shape != (n, t + 1):
            raise DimensionError(f"expected positions of shape ({n}, {t + 1})")
        if not np.allclose(np.linalg.norm(positions, axis=1), 1.0, rtol=0, atol=1e-9):
            raise DomainError("sphere positions must be unit vectors")
        return positions
    if seed is None:
        raise DomainError("either seed or positions is required")
    return sample_sphere(t, make_stream(seed), n)


def _block_labels(n, labels):
    if labels is None:
        out = np.zeros(n, dtype=np.int8)
        out[n // 2 :] = 1
        return out
    labels = np.asarray(labels, dtype=np.int8)
    if labels.shape != (n,) or np.any((labels != 0) & (labels != 1)):
        raise DomainError("labels must be n values in {0, 1}")
    return labels


# --------------------------------------------------------------------------
# generators


def gen_vrg(n, r1, r2, seed=None, positions=None) -> GeometricInstance:
    """Vertex-random graph: circle positions, edge iff ``r1 <= d_L <= r2``."""
    n = _check_n(n)
    AnnulusSpec(r1, r2, Metric.CIRCLE_GEODESIC)
    x = _circle_positions(n, seed, positions)
    g = build_graph(x, AnnulusRule(r1, r2))
    return GeometricInstance(g, "vrg", 1, x, {"r1": float(r1), "r2": float(r2)}, seed)


def gen_rag(n, t, r1, r2, seed=None, positions=None) -> GeometricInstance:
    """Random annulus graph on S^t: edge iff ``r1 <= |X_i - X_j| <= r2``."""
    n = _check_n(n)
    AnnulusSpec(r1, r2, Metric.SPHERE_CHORD)
    x = _sphere_positions(n, t, seed, positions)
    g = build_graph(x, AnnulusRule(r1, r2))
    return GeometricInstance(g, "rag", int(t), x, {"r1": float(r1), "r2": float(r2)}, seed)


def _check_block_radii(rs, rd, limit):
    if not (0.0 <= rd < rs <= limit):
        raise DomainError(f"need 0 <= rd < rs <= {limit}, got rs={rs}, rd={rd}")


def gen_gbm(n, rs, rd, seed=None, positions=None, labels=None) -> GeometricInstance:
    """Geometric block model on the circle with two equal clusters.

    Vertices ``0 .. n/2-1`` form cluster 0 and the rest cluster 1; since
    positions are iid this ordering carries no information.
    """
    n = _check_n(n, even=labels is None)
    _check_block_radii(rs, rd, 0.5)
    x = _circle_positions(n, seed, positions)
    truth = _block_labels(n, labels)
    g = build_graph(x, BlockRule(truth, rs, rd))
    return GeometricInstance(g, "gbm", 1, x, {"rs": float(rs), "rd": float(rd)}, seed, truth)


def gen_gbm_t(n, t, rs, rd, seed=None, positions=None, labels=None) -> GeometricInstance:
    """Geometric block model on S^t with chord distances."""
    n = _check_n(n, even=labels is None)
    _check_block_radii(rs, rd, 2.0)
    x = _sphere_positions(n, t, seed, positions)
    truth = _block_labels(n, labels)
    g = build_graph(x, BlockRule(truth, rs, rd))
    return GeometricInstance(g, "gbmt", int(t), x, {"rs": float(rs), "rd": float(rd)}, seed, truth)


def gen_vrg_union(n, c, b, a, seed=None, positions=None) -> GeometricInstance:
    """Patched VRG: edge iff ``d in [0, c s] ∪ [b s, a s]`` with ``s = log n / n``."""
    n = _check_n(n)
    if n < 2:
        raise DomainError("the log n / n scale needs n >= 2")
    if not (0 < c < b < a):
        raise DomainError(f"need 0 < c < b < a, got c={c}, b={b}, a={a}")
    s = math.log(n) / n
    if a * s > 0.5:
        raise DomainError(f"a * log n / n = {a * s} exceeds 0.5")
    x = _circle_positions(n, seed, positions)
    rule = UnionRule(c * s, b * s, a * s)
    g = build_graph(x, rule)
    params = {"c": float(c), "b": float(b), "a": float(a), "r_c": rule.r_c, "r_b": rule.r_b, "r_a": rule.r_a}
    return GeometricInstance(g, "vrg_union", 1, x, params, seed)


def rule_for(inst: GeometricInstance):
    """Reconstruct the membership rule an instance was generated with."""
    p = inst.params
    if inst.model in ("vrg", "rag"):
        return AnnulusRule(p["r1"], p["r2"])
    if inst.model in ("gbm", "gbmt"):
        return BlockRule(inst.truth, p["rs"], p["rd"])
    if inst.model == "vrg_union":
        return UnionRule(p["r_c"], p["r_b"], p["r_a"])
    raise DomainError(f"unknown model {inst.model!r}")
