"""Convex quadrangle domain types and the balanced-edge construction.

All quadrangles have perimeter 2*pi, so edge lengths and interior angles
live on the same numeric scale.  Angles are labeled (alpha, beta, gamma,
delta) at vertices A, B, C, D in counter-clockwise order; edges
(x1, x2, x3, x4) are DA, AB, BC, CD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# sum-constraint tolerance; sits well above double accumulation error
SUM_TOL = 1e-9


class QuadrangleError(ValueError):
    """Base class for domain validation failures."""


class OutOfRangeError(QuadrangleError):
    """A component lies outside its allowed interval."""


class SumMismatchError(QuadrangleError):
    """Components do not sum to 2*pi within tolerance."""


class DomainError(QuadrangleError):
    """An operation was called outside its domain of validity."""


class DegenerateFamilyError(QuadrangleError):
    """The closure system does not have a 1-dimensional solution set."""


@dataclass(frozen=True)
class AngleTuple:
    """Interior angles (radians) at vertices A, B, C, D, counter-clockwise."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name, v in zip("alpha beta gamma delta".split(), self.as_tuple()):
            if not (0.0 < v < math.pi):
                raise OutOfRangeError(
                    f"{name} = {v} must lie strictly inside (0, pi)"
                )
        s = sum(self.as_tuple())
        if abs(s - TWO_PI) > SUM_TOL:
            raise SumMismatchError(f"angle sum {s} differs from 2*pi")

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


@dataclass(frozen=True)
class EdgeTuple:
    """Edge lengths of DA, AB, BC, CD; perimeter fixed at 2*pi.

    Zero (and pi) components only occur in degenerate endpoint tuples,
    which carry the ``degenerate`` flag.
    """

    x1: float
    x2: float
    x3: float
    x4: float
    degenerate: bool = False

    def __post_init__(self):
        hi = math.pi + 1e-12 if self.degenerate else math.pi
        for i, v in enumerate(self.as_tuple(), start=1):
            lo_ok = v >= 0.0 if self.degenerate else v > 0.0
            if not (lo_ok and v < hi):
                raise OutOfRangeError(f"x{i} = {v} outside allowed edge range")
        s = sum(self.as_tuple())
        if abs(s - TWO_PI) > SUM_TOL:
            raise SumMismatchError(f"edge sum {s} differs from 2*pi")

    def as_tuple(self):
        return (self.x1, self.x2, self.x3, self.x4)


@dataclass(frozen=True)
class CanonicalLabeling:
    """Cyclic relabeling placing vertex D where both adjacent pair sums are <= pi."""

    rotation_offset: int
    rotated: AngleTuple


@dataclass(frozen=True)
class FeasibleSegment:
    """The 1-parameter affine family of edge tuples closing a quadrangle.

    ``base`` is the segment midpoint; ``base + t*direction`` stays feasible
    for t in [t_min, t_max], and exactly one component vanishes at each end.
    """

    base: EdgeTuple
    direction: tuple
    t_min: float
    t_max: float


@dataclass(frozen=True)
class PlanarPolygon:
    """Four plane vertices realizing an (angles, edges) pair, plus closure gap."""

    vertices: tuple
    closure_gap: float


def validate_angles(alpha, beta, gamma, delta) -> AngleTuple:
    """Check four raw reals as convex-quadrangle angles; never renormalizes."""
    return AngleTuple(float(alpha), float(beta), float(gamma), float(delta))


def renormalize_sum(values):
    """Rescale a 4-tuple so its components sum to exactly 2*pi (sampling aid)."""
    s = sum(values)
    if s <= 0.0:
        raise DomainError("cannot renormalize a tuple with non-positive sum")
    return tuple(v * TWO_PI / s for v in values)


def rotate_labels(t, k):
    """Cyclic shift of a 4-tuple by k positions: (t[k], t[k+1], ...)."""
    seq = t.as_tuple() if hasattr(t, "as_tuple") else tuple(t)
    k %= 4
    return seq[k:] + seq[:k]


def reflect_labels_angles(q: AngleTuple) -> AngleTuple:
    """Mirror relabeling of angles: (alpha, beta, gamma, delta) -> (alpha, delta, gamma, beta)."""
    return AngleTuple(q.alpha, q.delta, q.gamma, q.beta)


def reflect_labels_edges(e: EdgeTuple) -> EdgeTuple:
    """Edge relabeling induced by the angle mirror: (x1, x2, x3, x4) -> (x2, x1, x4, x3)."""
    return EdgeTuple(e.x2, e.x1, e.x4, e.x3, degenerate=e.degenerate)


def canonicalize(q: AngleTuple) -> CanonicalLabeling:
    """Smallest cyclic shift with delta+alpha <= pi and gamma+delta <= pi.

    Such a shift always exists: the four adjacent pair sums satisfy
    s1+s3 = s2+s4 = 2*pi, which forces a vertex whose two adjacent sums
    are both <= pi.  Boundary equalities are admitted within SUM_TOL.
    """
    for r in range(4):
        a, b, g, d = rotate_labels(q, r)
        if d + a <= math.pi + SUM_TOL and g + d <= math.pi + SUM_TOL:
            return CanonicalLabeling(r, AngleTuple(a, b, g, d))
    raise DomainError("no canonical labeling found; input angles inconsistent")


def _clip_tiny(v):
    # degenerate boundary cases make sin() of an angle sum ~pi come out
    # as a tiny negative number
    if -1e-12 < v < 0.0:
        return 0.0
    return v


def degenerate_edges_first(alpha, delta) -> EdgeTuple:
    """Edges of the degenerate (triangle) endpoint with x3 = 0.

    The triangle has angles alpha+delta, delta, pi-alpha-delta at the
    surviving vertices and perimeter 2*pi.
    """
    if not (0.0 < alpha < math.pi and 0.0 < delta < math.pi):
        raise DomainError("alpha and delta must lie in (0, pi)")
    if alpha + delta > math.pi + SUM_TOL:
        raise DomainError("alpha + delta must not exceed pi")
    den = math.sin(alpha) + math.sin(delta) + math.sin(alpha + delta)
    s = _clip_tiny(math.sin(alpha + delta))
    return EdgeTuple(
        TWO_PI * s / den,
        TWO_PI * math.sin(delta) / den,
        0.0,
        TWO_PI * math.sin(alpha) / den,
        degenerate=True,
    )


def degenerate_edges_second(gamma, delta) -> EdgeTuple:
    """Edges of the degenerate (triangle) endpoint with x2 = 0."""
    if not (0.0 < gamma < math.pi and 0.0 < delta < math.pi):
        raise DomainError("gamma and delta must lie in (0, pi)")
    if gamma + delta > math.pi + SUM_TOL:
        raise DomainError("gamma + delta must not exceed pi")
    den = math.sin(gamma) + math.sin(delta) + math.sin(gamma + delta)
    s = _clip_tiny(math.sin(gamma + delta))
    return EdgeTuple(
        TWO_PI * math.sin(gamma) / den,
        0.0,
        TWO_PI * math.sin(delta) / den,
        TWO_PI * s / den,
        degenerate=True,
    )


def prop1_fractions(phi, psi):
    """The two triangle-edge fractions sin(phi)/D and sin(phi+psi)/D, D the sine sum.

    Both are provably < 1/2 for phi, psi > 0 with phi + psi < pi; this is
    what keeps balanced edges inside (0, pi).
    """
    den = math.sin(phi) + math.sin(psi) + math.sin(phi + psi)
    return math.sin(phi) / den, math.sin(phi + psi) / den


def balanced_edges(q: AngleTuple) -> EdgeTuple:
    """Componentwise average of the two degenerate endpoint edge tuples.

    Canonicalizes internally; the result is rotated back to the input
    labeling, so the construction is rotation-equivariant.
    """
    can = canonicalize(q)
    a, _, g, d = can.rotated.as_tuple()
    first = degenerate_edges_first(a, d).as_tuple()
    second = degenerate_edges_second(g, d).as_tuple()
    mid = tuple((u + v) / 2.0 for u, v in zip(first, second))
    back = rotate_labels(mid, -can.rotation_offset)
    return EdgeTuple(*back)


def _edge_headings(q: AngleTuple):
    # counter-clockwise walk D -> A -> B -> C -> D, initial heading 0;
    # each vertex turns left by the exterior angle pi - interior
    h1 = 0.0
    h2 = h1 + math.pi - q.alpha
    h3 = h2 + math.pi - q.beta
    h4 = h3 + math.pi - q.gamma
    return (h1, h2, h3, h4)


def balanced_edges_oracle(q: AngleTuple):
    """Independent check of the balanced construction via the closure system.

    Solves sum(x_i * u_i) = 0, sum(x_i) = 2*pi for its 1-dimensional affine
    solution set, clips to x_i >= 0, and returns the segment midpoint with
    the feasible segment itself.
    """
    headings = _edge_headings(q)
    m = np.array(
        [
            [math.cos(h) for h in headings],
            [math.sin(h) for h in headings],
            [1.0, 1.0, 1.0, 1.0],
        ]
    )
    rhs = np.array([0.0, 0.0, TWO_PI])
    u, sv, vt = np.linalg.svd(m)
    if sv[2] < 1e-12 * sv[0]:
        raise DegenerateFamilyError("closure system is rank-deficient")
    particular, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    null = vt[3]

    t_lo, t_hi = -math.inf, math.inf
    for base_i, dir_i in zip(particular, null):
        if dir_i > 1e-14:
            t_lo = max(t_lo, -base_i / dir_i)
        elif dir_i < -1e-14:
            t_hi = min(t_hi, -base_i / dir_i)
    if not (math.isfinite(t_lo) and math.isfinite(t_hi) and t_lo < t_hi):
        raise DegenerateFamilyError("feasible segment is empty or unbounded")

    t_mid = (t_lo + t_hi) / 2.0
    mid = particular + t_mid * null
    segment = FeasibleSegment(
        base=EdgeTuple(*mid),
        direction=tuple(null),
        t_min=t_lo - t_mid,
        t_max=t_hi - t_mid,
    )
    return EdgeTuple(*mid), segment


def realize_polygon(q: AngleTuple, e: EdgeTuple) -> PlanarPolygon:
    """Walk the edge lengths with headings from the angles; gap is data, not an error."""
    headings = _edge_headings(q)
    x, y = 0.0, 0.0
    vertices = [(x, y)]
    for length, h in zip(e.as_tuple(), headings):
        x += length * math.cos(h)
        y += length * math.sin(h)
        vertices.append((x, y))
    end = vertices.pop()
    gap = math.hypot(end[0] - vertices[0][0], end[1] - vertices[0][1])
    return PlanarPolygon(vertices=tuple(vertices), closure_gap=gap)
