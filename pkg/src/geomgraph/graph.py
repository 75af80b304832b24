"""Immutable undirected graph in compressed-row layout."""

from __future__ import annotations

import numpy as np

from .errors import DomainError


class Graph:
    """Undirected simple graph with per-vertex strictly sorted neighbor lists.

    ``indptr[u]:indptr[u+1]`` slices ``indices`` to the neighbors of ``u``.
    Both arrays are read-only; build instances with :meth:`from_edges`.
    """

    __slots__ = ("n", "indptr", "indices", "edge_count")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False
        self.edge_count = len(self.indices) // 2

    @classmethod
    def from_edges(cls, n: int, u, v) -> "Graph":
        """Build from endpoint arrays. Self-loops are rejected; duplicates and
        orientation are normalized away."""
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        if u.shape != v.shape:
            raise DomainError("endpoint arrays differ in length")
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise DomainError("edge endpoint out of range")
        if np.any(u == v):
            raise DomainError("self-loops are not allowed")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        keys = np.unique(lo * n + hi) if len(lo) else np.empty(0, dtype=np.int64)
        lo, hi = keys // n, keys % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64))

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoint arrays ``(u, v)`` with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        mask = src < self.indices
        return src[mask], self.indices[mask]

    def edge_keys(self) -> np.ndarray:
        """Sorted ``u * n + v`` keys for ``u < v``; handy for membership tests."""
        u, v = self.edges()
        return u * self.n + v

    def has_edges(self, u, v) -> np.ndarray:
        """Vectorized adjacency test for pairs ``(u[i], v[i])``."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        q = np.minimum(u, v) * self.n + np.maximum(u, v)
        keys = self.edge_keys()
        if len(keys) == 0:
            return np.zeros(q.shape, dtype=bool)
        pos = np.minimum(np.searchsorted(keys, q), len(keys) - 1)
        return keys[pos] == q

    def permute(self, perm) -> "Graph":
        """Relabel vertex ``i`` as ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        u, v = self.edges()
        return Graph.from_edges(self.n, perm[u], perm[v])

    def check_invariants(self) -> None:
        """Raise AssertionError unless the graph is symmetric, loop-free and sorted."""
        assert len(self.indptr) == self.n + 1 and self.indptr[0] == 0
        assert self.indptr[-1] == len(self.indices)
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        assert not np.any(src == self.indices), "self-loop"
        for u in range(self.n):
            nb = self.neighbors(u)
            assert np.all(np.diff(nb) > 0), f"neighbors of {u} not strictly sorted"
        fwd = np.sort(src * self.n + self.indices)
        bwd = np.sort(self.indices * self.n + src)
        assert np.array_equal(fwd, bwd), "asymmetric adjacency"
        assert 2 * self.edge_count == len(self.indices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"
