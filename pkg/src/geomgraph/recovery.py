"""Community recovery in geometric block models by triangle-count edge pruning.

Every edge's common-neighbor count is compared against two thresholds. Edges
whose count falls strictly between them are deleted, because cross-cluster
edges concentrate in that band. The connected components of what remains are
the recovered clusters.

In one dimension, with ``rs = a log n / n`` and ``rd = b log n / n``, the
thresholds are ``E_S = (2b + t1) log n`` and ``E_D = (2b - t2) log n``, where
``t1`` and ``t2`` solve the transcendental equations below.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import sparse

from . import _kernels
from .analysis import edge_triangle_counts
from .errors import DomainError, InconsistencyError
from .generators import GeometricInstance, circle_candidates
from .geometry import cap_fraction, circle_distance, lens_fraction
from .graph import Graph

MAX_BISECT_ITER = 200


def _bisect_increasing(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Root of an increasing ``f`` with ``f(lo) < 0 < f(hi)``."""
    for _ in range(MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def _xlogx_ratio(p: float, q: float) -> float:
    # p log(p/q) with the 0 log 0 = 0 convention
    return 0.0 if p <= 0.0 else p * math.log(p / q)


def t1_residual(t: float, b: float) -> float:
    return _xlogx_ratio(2 * b + t, 2 * b) - t - 1.0


def t2_residual(t: float, b: float) -> float:
    return _xlogx_ratio(2 * b - t, 2 * b) + t - 1.0


def solve_t1(b: float) -> float:
    """Root of ``(2b+t) log((2b+t)/(2b)) - t = 1`` over ``t > 0``."""
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    return _bisect_increasing(lambda t: t1_residual(t, b), 0.0, 10.0 * b + 20.0)


def solve_t2(b: float) -> Optional[float]:
    """Root of ``(2b-t) log((2b-t)/(2b)) + t = 1`` over ``0 < t < 2b``.

    The left side increases to ``2b`` as ``t -> 2b``, so there is no root when
    ``2b <= 1`` and None is returned.
    """
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    if 2 * b <= 1.0:
        return None
    return _bisect_increasing(lambda t: t2_residual(t, b), 0.0, 2.0 * b)


@dataclass(frozen=True)
class RecoveryThresholds:
    """Solved quantities for scaled radii ``(a, b)``.

    ``E_S`` and ``E_D`` are in units of ``log n / n`` (count divided by
    ``log n``). ``t2`` is None when ``2b <= 1``; then ``E_D = 0`` and
    ``theta2 = a``.
    """

    a: float
    b: float
    t1: float
    t2: Optional[float]
    theta1: float
    theta2: float
    E_S: float
    E_D: float

    @property
    def degenerate(self) -> bool:
        return self.t2 is None


def _keep_short(theta, a, k1):
    y = 2 * a - theta
    return 0.5 * (k1 * math.log(k1 / y) + y - k1)


def _solve_theta1(a, b, t1):
    k1 = 4 * b + 2 * t1
    upper = 2 * a - k1
    if upper < 0 or _keep_short(0.0, a, k1) <= 1.0:
        return 0.0
    # decreasing in theta, equals 0 at theta = upper
    return _bisect_increasing(lambda th: 1.0 - _keep_short(th, a, k1), 0.0, upper)


def _solve_theta2(a, b, t2):
    if t2 is None:
        return a
    k2 = 4 * b - 2 * t2
    lower = max(2 * b, 2 * a - k2)
    if lower > a or _keep_short(a, a, k2) <= 1.0:
        return a
    if _keep_short(lower, a, k2) > 1.0:
        return lower
    # increasing in theta on [2a - k2, a]
    return _bisect_increasing(lambda th: _keep_short(th, a, k2) - 1.0, lower, a)


def compute_thresholds(a: float, b: float) -> RecoveryThresholds:
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    if a < 2 * b:
        raise DomainError(f"need a >= 2b, got a={a}, b={b}")
    t1 = solve_t1(b)
    t2 = solve_t2(b)
    theta1 = _solve_theta1(a, b, t1)
    theta2 = _solve_theta2(a, b, t2)
    e_d = 0.0 if t2 is None else max(2 * b - t2, 0.0)
    return RecoveryThresholds(a, b, t1, t2, theta1, theta2, 2 * b + t1, e_d)


def recovery_guaranteed(a: float, b: float) -> bool:
    """``a - theta2 + theta1 > 2`` or (``a - theta2 > 1`` and ``a > 2``)."""
    th = compute_thresholds(a, b)
    return (a - th.theta2 + th.theta1 > 2) or (a - th.theta2 > 1 and a > 2)


def min_a_for_recovery(b: float, tol: float = 1e-6) -> float:
    """Smallest ``a >= 2b`` for which :func:`recovery_guaranteed` holds (bisection)."""
    lo = 2.0 * b
    if recovery_guaranteed(lo, b):
        return lo
    hi = max(2.0 * lo, 4.0)
    while not recovery_guaranteed(hi, b):
        lo, hi = hi, 2.0 * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if recovery_guaranteed(mid, b):
            hi = mid
        else:
            lo = mid
    return hi


def expected_common_neighbors(x: float, rs: float, rd: float, n: int, relation: str) -> float:
    """Mean common-neighbor count of an edge at circle distance ``x``.

    ``relation`` is ``"same"`` or ``"different"`` (cluster membership of the
    endpoints). Two equal clusters of size ``n/2`` are assumed.
    """
    if not 0 <= rd < rs:
        raise DomainError(f"need 0 <= rd < rs, got rs={rs}, rd={rd}")
    rel = relation.lower()
    if rel == "same":
        if not 0 <= x <= rs:
            raise DomainError(f"same-cluster edge needs 0 <= x <= rs, got {x}")
        mean = (n / 2 - 2) * (2 * rs - x)
        if x <= 2 * rd:
            mean += (n / 2) * (2 * rd - x)
        return mean
    if rel == "different":
        if not 0 <= x <= rd:
            raise DomainError(f"cross-cluster edge needs 0 <= x <= rd, got {x}")
        if rs > 2 * rd:
            return (n - 2) * 2 * rd
        return (n - 2) * min(rs + rd - x, 2 * rd)
    raise DomainError(f"relation must be 'same' or 'different', got {relation!r}")


# --------------------------------------------------------------------------
# outcomes


def evaluate_partition(pred, truth) -> tuple[float, bool]:
    """Agreement up to swapping the two labels."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise DomainError(f"length mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        return 1.0, True
    agree = int(np.count_nonzero(pred == truth))
    best = max(agree, pred.size - agree) / pred.size
    return best, best == 1.0


@dataclass(frozen=True, eq=False)
class RecoveryOutcome:
    """Recovered 2-partition plus diagnostics.

    ``accuracy`` and ``exact`` are None when no ground truth was supplied.
    ``ambiguous`` flags outputs where the data leave some components'
    cluster assignment undetermined.
    """

    partition: np.ndarray
    component_count: int
    removed_edges: int
    accuracy: Optional[float] = None
    exact: Optional[bool] = None
    ambiguous: bool = False


def _outcome(partition, components, removed, truth, ambiguous=False):
    acc = exact = None
    if truth is not None:
        acc, exact = evaluate_partition(partition, truth)
    return RecoveryOutcome(partition, int(components), int(removed), acc, exact, ambiguous)


def components_to_partition(labels: np.ndarray, count: int, g: Graph) -> np.ndarray:
    """Map component labels to two clusters.

    Components are ranked by size (ties by lowest vertex). The largest goes to
    cluster 0 and the runner-up to cluster 1; every further component joins the
    cluster it shares more edges of ``g`` with, ties to cluster 0.
    """
    n = len(labels)
    if count <= 1:
        return np.zeros(n, dtype=np.int8)
    sizes = np.bincount(labels, minlength=count)
    rank = np.lexsort((np.arange(count), -sizes))
    u, v = g.edges()
    cu, cv = labels[u], labels[v]
    cross = cu != cv
    w = sparse.coo_matrix(
        (np.ones(int(cross.sum()) * 2), (np.r_[cu[cross], cv[cross]], np.r_[cv[cross], cu[cross]])),
        shape=(count, count),
    ).tocsr()
    side = np.full(count, -1, dtype=np.int8)
    toward = np.zeros((2, count))
    for pos, comp in enumerate(rank):
        if pos < 2:
            k = pos
        else:
            k = 1 if toward[1, comp] > toward[0, comp] else 0
        side[comp] = k
        row = slice(w.indptr[comp], w.indptr[comp + 1])
        np.add.at(toward[k], w.indices[row], w.data[row])
    return side[labels]


def _prune_and_split(g: Graph, keep_fn, truth):
    u, v, counts = edge_triangle_counts(g)
    keep = keep_fn(counts)
    labels, count = _kernels.component_labels(g.n, u[keep], v[keep])
    part = components_to_partition(labels, int(count), g)
    return _outcome(part, count, int(len(counts) - keep.sum()), truth)


def recover_gbm_1d(g: Graph, a: float, b: float, n: Optional[int] = None, truth=None) -> RecoveryOutcome:
    """Triangle-count pruning on a 1-D block model with scaled radii ``(a, b)``.

    An edge survives when its count is at least ``ceil(E_S log n)`` or at most
    ``floor(E_D log n)``.
    """
    th = compute_thresholds(a, b)
    n = g.n if n is None else n
    log_n = math.log(n)
    hi = math.ceil(th.E_S * log_n)
    lo = math.floor(th.E_D * log_n)
    return _prune_and_split(g, lambda c: (c >= hi) | (c <= lo), truth)


def highdim_thresholds(n: int, t: int, rs: float, rd: float, c_s: float = 1.0, c_d: float = 1.0):
    """Count thresholds ``(E_S, E_D)`` for the block model on S^t.

    ``E_S = c_s (B n + sqrt(6 B n log n))`` and
    ``E_D = c_d (n V(rs, rd, rd) - sqrt(2 B n log n))`` with ``B`` the
    normalized cap of radius ``rd`` and ``V`` the normalized cap intersection.
    """
    if not 0 <= rd < rs <= 2:
        raise DomainError(f"need 0 <= rd < rs <= 2, got rs={rs}, rd={rd}")
    log_n = math.log(n)
    cap_d = cap_fraction(t, rd)
    e_s = c_s * (cap_d * n + math.sqrt(6 * cap_d * n * log_n))
    e_d = c_d * (n * lens_fraction(t, rs, rd, rd) - math.sqrt(2 * n * cap_d * log_n))
    return e_s, e_d


def recover_gbm_highdim(g: Graph, t: int, rs: float, rd: float, c_s: float = 1.0, c_d: float = 1.0,
                        n: Optional[int] = None, truth=None) -> RecoveryOutcome:
    """Triangle-count pruning on S^t with cap-volume thresholds."""
    n = g.n if n is None else n
    e_s, e_d = highdim_thresholds(n, t, rs, rd, c_s, c_d)
    hi = math.ceil(e_s)
    lo = math.floor(e_d)
    return _prune_and_split(g, lambda c: (c >= hi) | (c <= lo), truth)


def recover_with_locations(inst: GeometricInstance, rs: Optional[float] = None,
                           rd: Optional[float] = None, balanced: bool = True) -> RecoveryOutcome:
    """Exact recovery from the graph plus the known circle positions.

    Every pair at distance in ``(rd, rs]`` is informative: an edge means same
    cluster, a missing edge means different clusters. Pairs within ``rd`` are
    always adjacent and carry no information. Same-cluster pairs are merged into
    components, which are then 2-colored under the must-differ constraints.

    When the constraint graph falls into several pieces, each piece can be
    flipped independently. With ``balanced`` set (the model has two clusters of
    exactly ``n/2``), the flips are pinned by requiring equal cluster sizes
    whenever exactly one flip pattern achieves that. The outcome is
    ``ambiguous`` only when the assignment remains undetermined.

    ``removed_edges`` reports the uninformative edges (distance at most ``rd``).
    Raises InconsistencyError if the constraints cannot be satisfied.
    """
    if not inst.on_circle:
        raise DomainError("location-aware recovery needs circle positions")
    rs = inst.params["rs"] if rs is None else rs
    rd = inst.params["rd"] if rd is None else rd
    g, x = inst.graph, inst.positions
    n = g.n
    u, v = circle_candidates(x, rd, rs)
    d = circle_distance(x[u], x[v]) if len(u) else np.empty(0)
    inform = (d > rd) & (d <= rs)
    u, v = u[inform], v[inform]
    keys = np.unique(np.minimum(u, v) * n + np.maximum(u, v))
    u, v = keys // n, keys % n
    linked = g.has_edges(u, v)
    comp, ncomp = _kernels.component_labels(n, u[linked], v[linked])
    cu, cv = comp[u[~linked]], comp[v[~linked]]
    if np.any(cu == cv):
        raise InconsistencyError("a must-differ pair lies inside a same-cluster component")
    adj = [[] for _ in range(ncomp)]
    for p, q in set(zip(cu.tolist(), cv.tolist())):
        adj[p].append(q)
        adj[q].append(p)
    color = np.full(ncomp, -1, dtype=np.int8)
    piece = np.full(ncomp, -1, dtype=np.int64)
    pieces = 0
    for start in range(ncomp):
        if color[start] >= 0:
            continue
        color[start] = 0
        piece[start] = pieces
        queue = deque([start])
        while queue:
            p = queue.popleft()
            for q in adj[p]:
                if color[q] < 0:
                    color[q] = 1 - color[p]
                    piece[q] = pieces
                    queue.append(q)
                elif color[q] == color[p]:
                    raise InconsistencyError("must-differ constraints contain an odd cycle")
        pieces += 1
    labels = color[comp]
    ambiguous = pieces > 1
    if ambiguous and balanced:
        # signed size excess of label 0 per piece in its base coloring
        excess = np.bincount(piece[comp], weights=1 - 2 * labels.astype(np.int64), minlength=pieces)
        flips = _balancing_flips(excess.astype(np.int64))
        if flips is not None:
            labels = np.where(flips[piece[comp]], 1 - labels, labels).astype(np.int8)
            ambiguous = False
    eu, ev = g.edges()
    uninformative = int(np.count_nonzero(circle_distance(x[eu], x[ev]) <= rd)) if len(eu) else 0
    return _outcome(labels, pieces, uninformative, inst.truth, ambiguous=ambiguous)


MAX_BALANCE_PIECES = 64


def _balancing_flips(excess: np.ndarray) -> Optional[np.ndarray]:
    """The unique flip pattern (piece 0 fixed) whose signed excesses sum to 0.

    Returns None when no pattern or more than one pattern balances, or when
    there are too many pieces to enumerate sums exhaustively.
    """
    k = len(excess)
    if k > MAX_BALANCE_PIECES:
        return None
    # stages[j] maps a partial sum to (ways capped at 2, previous sum, flipped)
    stages = [{int(excess[0]): (1, None, False)}]
    for j in range(1, k):
        nxt: dict = {}
        for total, (ways, _, _) in stages[-1].items():
            for flip in (False, True):
                s = total - int(excess[j]) if flip else total + int(excess[j])
                if s in nxt:
                    w, prev, f = nxt[s]
                    nxt[s] = (min(2, w + ways), prev, f)
                else:
                    nxt[s] = (min(2, ways), total, flip)
        stages.append(nxt)
    hit = stages[-1].get(0)
    if hit is None or hit[0] != 1:
        return None
    flips = np.zeros(k, dtype=bool)
    total = 0
    for j in range(k - 1, 0, -1):
        _, prev, flip = stages[j][total]
        flips[j] = flip
        total = prev
    return flips
