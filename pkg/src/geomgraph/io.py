"""Instance JSON files and plain edge lists.

Instance file layout (one JSON object)::

    {"format": "geomgraph-instance", "version": 1,
     "model": ..., "n": ..., "t": ..., "params": {...}, "seed": ...,
     "truth": [0, 1, ...] | null,
     "positions": [...],            # floats, or lists of t+1 floats
     "edges": [[u, v], ...]}        # 0-indexed, u < v, sorted

Edge-list text: a header line ``"n m"`` then one ``"u v"`` line per edge.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DomainError
from .generators import MODELS, GeometricInstance
from .graph import Graph

FORMAT = "geomgraph-instance"
VERSION = 1


def instance_to_dict(inst: GeometricInstance) -> dict:
    u, v = inst.graph.edges()
    return {
        "format": FORMAT,
        "version": VERSION,
        "model": inst.model,
        "n": inst.n,
        "t": inst.dim_t,
        "params": dict(sorted(inst.params.items())),
        "seed": inst.seed,
        "truth": None if inst.truth is None else inst.truth.astype(int).tolist(),
        "positions": inst.positions.tolist(),
        "edges": np.column_stack([u, v]).tolist(),
    }


def instance_from_dict(data: dict) -> GeometricInstance:
    try:
        return _instance_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed instance: {exc!r}") from exc


def _instance_from_dict(data: dict) -> GeometricInstance:
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise DomainError("not a geomgraph instance file")
    if data.get("model") not in MODELS:
        raise DomainError(f"unknown model {data.get('model')!r}")
    n = int(data["n"])
    positions = np.asarray(data["positions"], dtype=float)
    if len(positions) != n:
        raise DomainError("positions length does not match n")
    edges = np.asarray(data["edges"], dtype=np.int64).reshape(-1, 2)
    graph = Graph.from_edges(n, edges[:, 0], edges[:, 1])
    truth = data.get("truth")
    truth = None if truth is None else np.asarray(truth, dtype=np.int8)
    return GeometricInstance(graph, data["model"], int(data["t"]), positions, dict(data["params"]),
                             data.get("seed"), truth)


def dump_instance(inst: GeometricInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(inst), fh, separators=(",", ":"))
        fh.write("\n")


def load_instance(path) -> GeometricInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from exc
    return instance_from_dict(data)


def write_edge_list(g: Graph, path) -> None:
    u, v = g.edges()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        fh.writelines(f"{a} {b}\n" for a, b in zip(u.tolist(), v.tolist()))


def read_edge_list(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DomainError(f"{path}: expected 'n m' header")
        n, m = int(header[0]), int(header[1])
        body = np.loadtxt(fh, dtype=np.int64, ndmin=2) if m else np.empty((0, 2), np.int64)
    if body.shape != (m, 2):
        raise DomainError(f"{path}: header announces {m} edges, found {len(body)}")
    return Graph.from_edges(n, body[:, 0], body[:, 1])
