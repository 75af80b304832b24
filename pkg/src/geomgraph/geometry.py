"""Distances, uniform sampling and normalized cap/annulus/lens volumes on S^t.

Conventions
-----------
* Circle positions live in ``[0, 1)``; the circle has unit circumference and
  distances are geodesic (``circle_distance``), so the largest distance is 0.5.
* Sphere positions are unit vectors in ``R^(t+1)``; distances are chords
  (``chord_distance``), so the largest distance is 2.
* Volumes are normalized by the total surface area ``|S^t|``.

The two circle metrics are never mixed silently: ``AnnulusSpec`` carries an
explicit metric tag, and ``geodesic_to_chord`` / ``chord_to_geodesic`` are the
only conversions between them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import DimensionError, DomainError
from .rng import RandomStream, derive_seed, make_stream

ANGLE_TOL = 1e-12
LENS_MC_SAMPLES = 10_000_000
_LENS_MC_CHUNK = 500_000


class Metric(str, enum.Enum):
    CIRCLE_GEODESIC = "CircleGeodesic"
    SPHERE_CHORD = "SphereChord"


@dataclass(frozen=True)
class AnnulusSpec:
    """A closed distance window ``[r_inner, r_outer]`` in an explicit metric."""

    r_inner: float
    r_outer: float
    metric: Metric

    def __post_init__(self):
        limit = 0.5 if self.metric == Metric.CIRCLE_GEODESIC else 2.0
        if not (0.0 <= self.r_inner <= self.r_outer <= limit):
            raise DomainError(
                f"need 0 <= r_inner <= r_outer <= {limit} for {self.metric.value}, "
                f"got [{self.r_inner}, {self.r_outer}]"
            )

    def contains(self, d):
        return (d >= self.r_inner) & (d <= self.r_outer)


# --------------------------------------------------------------------------
# distances


def circle_distance(x, y):
    """Geodesic distance on the unit-circumference circle, ``min(|x-y|, 1-|x-y|)``.

    Works elementwise on arrays.

    >>> circle_distance(0.1, 0.9)
    0.2
    """
    d = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))
    out = np.minimum(d, 1.0 - d)
    return float(out) if out.ndim == 0 else out


def chord_distance(u, v):
    """Euclidean distance between points of S^t (last axis holds coordinates)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    diff = u - v
    # explicit per-coordinate accumulation keeps results identical for any batch shape
    acc = diff[..., 0] * diff[..., 0]
    for k in range(1, diff.shape[-1]):
        acc = acc + diff[..., k] * diff[..., k]
    out = np.sqrt(acc)
    return float(out) if out.ndim == 0 else out


def geodesic_to_chord(d):
    """Chord length on the unit circle for a normalized geodesic distance ``d``."""
    return 2.0 * np.sin(np.pi * np.asarray(d, dtype=float))


def chord_to_geodesic(r):
    """Inverse of :func:`geodesic_to_chord` on ``[0, 2]``."""
    return np.arcsin(np.asarray(r, dtype=float) / 2.0) / np.pi


def geodesic_scale_to_chord_scale(x: float) -> float:
    """Translate a scaled radius ``x * log n / n`` on the unit-circumference
    circle into the scaled chord radius on the unit circle (small-radius limit)."""
    return 2.0 * math.pi * x


# --------------------------------------------------------------------------
# sampling


def _check_dim(t) -> int:
    if int(t) != t or t < 1:
        raise DimensionError(f"sphere dimension must be a positive integer, got {t}")
    return int(t)


def sample_circle(rng: RandomStream, size=None):
    """Uniform position(s) on ``[0, 1)``."""
    return rng.random(size)


def sample_sphere(t: int, rng: RandomStream, size=None):
    """Uniform point(s) on S^t via normalized standard normals.

    Returns shape ``(t+1,)`` when ``size`` is None, else ``(size, t+1)``.
    """
    t = _check_dim(t)
    shape = (t + 1,) if size is None else (size, t + 1)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


# --------------------------------------------------------------------------
# constants


def surface_area(t: int) -> float:
    """``|S^t| = (t+1) pi^((t+1)/2) / Gamma((t+3)/2)``."""
    t = _check_dim(t)
    return (t + 1) * math.pi ** ((t + 1) / 2) / math.gamma((t + 3) / 2)


def small_cap_constant(t: int) -> float:
    """Limit of ``|B_t(u, r)| / r^t`` as ``r -> 0``: the unit t-ball volume."""
    t = _check_dim(t)
    return math.pi ** (t / 2) / math.gamma(t / 2 + 1)


def psi(t: int) -> float:
    """Isolated-vertex threshold ``sqrt(pi)(t+1)Gamma((t+2)/2)/Gamma((t+3)/2)``.

    Equals ``|S^t| / small_cap_constant(t)``.
    """
    t = _check_dim(t)
    return math.sqrt(math.pi) * (t + 1) * math.gamma((t + 2) / 2) / math.gamma((t + 3) / 2)


# --------------------------------------------------------------------------
# cap / annulus / lens volumes


def _chord_to_angle(r: float) -> float:
    return 2.0 * math.asin(min(r, 2.0) / 2.0)


def _check_radius(r: float, name: str = "r"):
    if not (0.0 <= r <= 2.0) or math.isnan(r):
        raise DomainError(f"{name} must lie in [0, 2], got {r}")


def _gnomonic_density(rho: float, t: int) -> float:
    # area element of S^t in gnomonic coordinates, radial part
    return t * rho ** (t - 1) / (1.0 + rho * rho) ** ((t + 1) / 2)


def _gnomonic_tail_density(u: float, t: int) -> float:
    # _gnomonic_density after rho = 1/u, so the tail [tan theta, inf) becomes [0, cot theta]
    return t / (1.0 + u * u) ** ((t + 1) / 2)


def _cap_by_angle(t: int, theta: float) -> float:
    if theta <= 0.0:
        return 0.0
    if theta >= math.pi:
        return 1.0
    if theta > math.pi / 2:
        return 1.0 - _cap_by_angle(t, math.pi - theta)
    scale = small_cap_constant(t) / surface_area(t)
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=200)
    if theta <= math.pi / 4:
        val, _ = integrate.quad(_gnomonic_density, 0.0, math.tan(theta), args=(t,), **opts)
        return scale * val
    if theta == math.pi / 2:
        return 0.5
    tail, _ = integrate.quad(_gnomonic_tail_density, 0.0, 1.0 / math.tan(theta), args=(t,), **opts)
    return 0.5 - scale * tail


def cap_fraction(t: int, r: float) -> float:
    """Normalized area of the chord-radius-``r`` cap ``{x : |x - u| <= r}`` on S^t.

    The cap of angular radius ``theta`` (``cos theta = 1 - r^2/2``) is integrated
    in gnomonic coordinates, ``t c_t rho^(t-1) / (1 + rho^2)^((t+1)/2)`` over
    ``rho in [0, tan theta]``, and normalized by the closed-form ``|S^t|``.
    Caps wider than a hemisphere use the complement.
    """
    t = _check_dim(t)
    _check_radius(r)
    return _cap_by_angle(t, _chord_to_angle(r))


def annulus_fraction(t: int, r1: float, r2: float) -> float:
    """Normalized area of ``{x : r1 <= |x - u| <= r2}`` on S^t."""
    _check_radius(r1, "r1")
    _check_radius(r2, "r2")
    if r1 > r2:
        raise DomainError(f"need r1 <= r2, got {r1} > {r2}")
    return cap_fraction(t, r2) - cap_fraction(t, r1)


def _arc_overlap(a1: float, a2: float, gamma: float) -> float:
    """Overlap length of arcs ``[-a1, a1]`` and ``[gamma-a2, gamma+a2]`` on a
    circle of circumference 2*pi."""
    total = 0.0
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        lo = max(-a1, gamma - a2 + shift)
        hi = min(a1, gamma + a2 + shift)
        if hi > lo:
            total += hi - lo
    return min(total, 2 * math.pi)


def _slice_fraction(phi, t, alpha_b, gamma):
    # fraction of the colatitude-phi slice around O_A lying within angle alpha_b of O_B
    cos_b = math.cos(alpha_b)
    along = math.cos(phi) * math.cos(gamma)
    denom = math.sin(phi) * math.sin(gamma)
    if denom <= 0.0:
        return 1.0 if along >= cos_b else 0.0
    s = (cos_b - along) / denom
    if s <= -1.0:
        return 1.0
    if s >= 1.0:
        return 0.0
    k = (t - 1) / 2
    return float(special.betainc(k, k, (1.0 - s) / 2.0))


def _lens_quadrature(t: int, alpha_a: float, alpha_b: float, gamma: float) -> float:
    points = []
    for p in (gamma - alpha_b, gamma + alpha_b, alpha_b - gamma, 2 * math.pi - alpha_b - gamma):
        if 0.0 < p < alpha_a:
            points.append(p)

    def integrand(phi):
        return math.sin(phi) ** (t - 1) * _slice_fraction(phi, t, alpha_b, gamma)

    val, _ = integrate.quad(
        integrand, 0.0, alpha_a, points=points or None, epsabs=1e-13, epsrel=1e-11, limit=400
    )
    return surface_area(t - 1) * val / surface_area(t)


def lens_fraction_mc(t: int, r1: float, r2: float, ell: float, samples: int, rng: RandomStream) -> float:
    """Monte-Carlo estimate of :func:`lens_fraction` from ``samples`` uniform points."""
    t = _check_dim(t)
    o1 = np.zeros(t + 1)
    o1[0] = 1.0
    gamma = _chord_to_angle(ell)
    o2 = np.zeros(t + 1)
    o2[0], o2[1] = math.cos(gamma), math.sin(gamma)
    # compare squared chords: |x - o|^2 = 2 - 2<x, o>
    c1 = 1.0 - r1 * r1 / 2.0
    c2 = 1.0 - r2 * r2 / 2.0
    hits = 0
    remaining = samples
    while remaining > 0:
        m = min(remaining, _LENS_MC_CHUNK)
        x = sample_sphere(t, rng, m)
        hits += int(np.count_nonzero((x @ o1 >= c1) & (x @ o2 >= c2)))
        remaining -= m
    return hits / samples


def lens_fraction(t: int, r1: float, r2: float, ell: float) -> float:
    """Normalized area of ``B_t(O1, r1) ∩ B_t(O2, r2)`` with ``|O1 - O2| = ell``.

    For ``t <= 4`` the smaller cap is sliced by colatitude around its own center
    and the fraction of each slice inside the other cap is integrated. The
    circle (``t = 1``) is exact arc arithmetic. For ``t > 4`` a seeded
    Monte-Carlo estimate with ``LENS_MC_SAMPLES`` points is returned.
    """
    t = _check_dim(t)
    for name, val in (("r1", r1), ("r2", r2), ("ell", ell)):
        _check_radius(val, name)
    a1, a2, gamma = _chord_to_angle(r1), _chord_to_angle(r2), _chord_to_angle(ell)
    if a1 <= a2:
        r_small, alpha_a, alpha_b = r1, a1, a2
    else:
        r_small, alpha_a, alpha_b = r2, a2, a1
    if alpha_a == 0.0 or gamma - (alpha_a + alpha_b) > ANGLE_TOL:
        return 0.0
    if alpha_b - (gamma + alpha_a) > ANGLE_TOL:
        return cap_fraction(t, r_small)
    if t == 1:
        return _arc_overlap(alpha_a, alpha_b, gamma) / (2 * math.pi)
    if t > 4:
        rng = make_stream(derive_seed(0, "lens", t, r1, r2, ell))
        return lens_fraction_mc(t, r1, r2, ell, LENS_MC_SAMPLES, rng)
    return min(max(_lens_quadrature(t, alpha_a, alpha_b, gamma), 0.0), cap_fraction(t, r_small))
