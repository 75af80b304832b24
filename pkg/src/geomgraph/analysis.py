"""Structural queries on graphs and the connectivity/isolation regime predicates.

Predicates describe asymptotic statements (``n -> infinity`` with radii scaled
as ``x * (log n / n) ** (1/t)``), so a verdict is a *predicted* regime for the
parameters, never a guarantee about a particular instance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ModelError
from .generators import GeometricInstance
from .geometry import psi
from .graph import Graph

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class ComponentLabeling:
    labels: np.ndarray
    count: int

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.count)


def connected_components(g: Graph) -> ComponentLabeling:
    """Exact components by union-find; ids follow each component's lowest vertex."""
    u, v = g.edges()
    labels, count = _kernels.component_labels(g.n, u, v)
    return ComponentLabeling(labels, int(count))


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or connected_components(g).count == 1


def count_isolated(g: Graph) -> int:
    return int(np.count_nonzero(g.degrees() == 0))


def expected_isolated_vrg(n: int, a: float, b: float) -> float:
    """Exact finite-n mean isolated count ``n (1 - 2(a-b) log n / n)^(n-1)``."""
    if b > a:
        raise DomainError(f"need b <= a, got a={a}, b={b}")
    p = 2.0 * (a - b) * math.log(n) / n
    if p >= 1.0:
        raise DomainError(f"annulus probability {p} is not below 1")
    return n * math.exp((n - 1) * math.log1p(-p))


def expected_no_left_neighbor(n: int, a: float) -> float:
    """Mean number of vertices with an empty counterclockwise arc of length
    ``a log n / n``: ``n (1 - a log n / n)^(n-1)``."""
    p = a * math.log(n) / n
    if not 0 <= p < 1:
        raise DomainError(f"arc length {p} outside [0, 1)")
    return n * math.exp((n - 1) * math.log1p(-p))


def _outer_radius(inst: GeometricInstance) -> float:
    p = inst.params
    if inst.model == "vrg":
        return p["r2"]
    if inst.model == "gbm":
        return p["rs"]
    if inst.model == "vrg_union":
        return p["r_a"]
    raise ModelError(f"no-left-neighbor count needs circle positions, got model {inst.model!r}")


def count_no_left_neighbor(inst: GeometricInstance) -> int:
    """Vertices with no graph neighbor counterclockwise within the outer radius.

    Counterclockwise ("left") means decreasing position modulo 1: a neighbor
    ``v`` of ``u`` is on the left when ``(X_u - X_v) mod 1 <= r_outer``.
    """
    r_out = _outer_radius(inst)
    if not inst.on_circle:
        raise ModelError("no-left-neighbor count needs circle positions")
    g = inst.graph
    x = inst.positions
    src = np.repeat(np.arange(g.n), g.degrees())
    offset = np.mod(x[src] - x[g.indices], 1.0)
    has_left = np.zeros(g.n, dtype=bool)
    has_left[src[offset <= r_out]] = True
    return int(g.n - np.count_nonzero(has_left))


def common_neighbor_count(g: Graph, u: int, v: int) -> int:
    if u == v:
        raise DomainError("common neighbors need two distinct vertices")
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise DomainError("vertex out of range")
    return int(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True).size)


def edge_triangle_counts(g: Graph):
    """Per-edge triangle counts.

    Returns ``(u, v, counts)`` arrays over edges ``u < v`` in lexicographic
    order; ``counts[k]`` is the number of common neighbors of ``u[k], v[k]``.
    """
    return _kernels.edge_common_counts(g.indptr, g.indices)


# --------------------------------------------------------------------------
# regime predicates


class Verdict(str, enum.Enum):
    IN_REGIME = "InRegime"
    OUT_OF_REGIME = "OutOfRegime"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegimeVerdict:
    verdict: Verdict
    margin: float

    @classmethod
    def from_margin(cls, margin: float) -> "RegimeVerdict":
        if abs(margin) < BOUNDARY_TOL:
            return cls(Verdict.BOUNDARY, margin)
        return cls(Verdict.IN_REGIME if margin > 0 else Verdict.OUT_OF_REGIME, margin)

    def __str__(self) -> str:
        return f"{self.verdict.value} margin={self.margin:.9g}"


def _check_ab(a, b):
    if not 0 <= b <= a:
        raise DomainError(f"need 0 <= b <= a, got a={a}, b={b}")


def predicted_vrg_connectivity(a: float, b: float) -> RegimeVerdict:
    """Connected whp iff ``a > 1`` and ``a - b > 0.5``; margin ``min(a-1, a-b-0.5)``."""
    _check_ab(a, b)
    return RegimeVerdict.from_margin(min(a - 1.0, a - b - 0.5))


def predicted_isolated_rag(t: int, a: float, b: float) -> RegimeVerdict:
    """Isolated vertices exist whp iff ``a^t - b^t < psi(t)``; margin ``psi(t) - (a^t - b^t)``."""
    _check_ab(a, b)
    return RegimeVerdict.from_margin(psi(t) - (a**t - b**t))


def rag_connectivity_sufficient(t: int, a: float, b: float) -> bool:
    """Sufficient condition for RAG_t connectivity:
    ``a^t - b^t >= 8(t+1) psi(t) / (1 - 1/(2^(1+1/t) - 1))`` and ``a > 2^(1+1/t) b``."""
    _check_ab(a, b)
    ratio = 2.0 ** (1.0 + 1.0 / t)
    bound = 8.0 * (t + 1) * psi(t) / (1.0 - 1.0 / (ratio - 1.0))
    return (a**t - b**t >= bound) and (a > ratio * b)


def vrg_union_conditions(c: float, b: float, a: float) -> list[bool]:
    """The six sufficient conditions for the patched VRG ``[0,c] ∪ [b,a]``."""
    if not 0 < c < b < a:
        raise DomainError(f"need 0 < c < b < a, got c={c}, b={b}, a={a}")
    gap = a - b
    narrow = gap < c
    short = b <= 1.5 * c
    return [
        gap + c > 1,
        gap > 0.5 and a > 1,
        narrow and not short and 2 * gap + c / 2 > 1,
        narrow and short and b - c > 1,
        not narrow and short and a > 1,
        not narrow and not short and gap + 1.5 * c > 1,
    ]


def vrg_union_connectivity_sufficient(c: float, b: float, a: float) -> bool:
    return any(vrg_union_conditions(c, b, a))
