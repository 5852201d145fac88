"""The edge-to-angle map on balanced quadrangles and its iteration.

The map sends a quadrangle with angles q to the quadrangle whose angles
numerically equal the balanced edge lengths of q.  Generic orbits converge
to an attracting 2-cycle; the square is a repelling fixed point, and
isosceles-trapezoid-type quadrangles form an invariant family with its own
attracting 2-cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .core import (
    AngleTuple,
    DomainError,
    EdgeTuple,
    balanced_edges,
    reflect_labels_angles,
    rotate_labels,
)

P_MAX = 8           # longest period the detector scans for
CONFIRMATIONS = 3   # consecutive near-recurrences required to accept a cycle
MATCH_TOL = 1e-6    # classification tolerance; known limit sets are > 0.05 apart

SQUARE = AngleTuple(math.pi / 2, math.pi / 2, math.pi / 2, math.pi / 2)

# attracting fixed point of the trapezoid submap, double-precision value
A_STAR = 1.48342158769377952440379165224

# one-sided limit of the trapezoid submap at a -> 0+
C_AT_ZERO = math.pi / (math.sqrt(2.0) + 1.0)

# angles of the generic attracting 2-cycle (its mirror partner is the
# reflection (alpha, delta, gamma, beta))
GENERAL_CYCLE_ANGLES = AngleTuple(
    1.54819305248669225152933985324,
    1.82405188512759300508614890573,
    1.41515953031350909799654144250,
    1.49578083925179212231325656509,
)


@dataclass(frozen=True)
class TrapezoidParam:
    """Base angle of an isosceles trapezoid state and its double-step image."""

    a: float
    c: float

    def __post_init__(self):
        if not (0.0 < self.a <= math.pi / 2 and 0.0 < self.c <= math.pi / 2):
            raise DomainError("trapezoid parameters must lie in (0, pi/2]")


@dataclass(frozen=True)
class CycleInfo:
    period: int
    representative_states: tuple
    classification: str
    residual: float
    match_distance: float


@dataclass(frozen=True)
class Trajectory:
    states: tuple
    residuals: tuple
    cycle: Optional[CycleInfo]

    @property
    def classification(self) -> str:
        return self.cycle.classification if self.cycle else "no_convergence"


def step(q: AngleTuple) -> AngleTuple:
    """One application of the map: new angles are the balanced edge lengths of q."""
    return AngleTuple(*balanced_edges(q).as_tuple())


def c_map(a: float) -> float:
    """The trapezoid submap: base angle after a double step of the full map."""
    if not (0.0 < a <= math.pi / 2):
        raise DomainError("c_map requires a in (0, pi/2]")
    theta = math.pi / (2.0 + 2.0 * math.cos(a))
    return math.pi / (1.0 + math.sin(theta) + math.cos(theta))


def c_map_with_limit(a: float) -> float:
    """Like c_map but admits a = 0, returning the one-sided limit pi/(sqrt(2)+1)."""
    if a == 0.0:
        theta = math.pi / 4.0
        return math.pi / (1.0 + math.sin(theta) + math.cos(theta))
    return c_map(a)


def trapezoid_edges(a: float) -> EdgeTuple:
    """Balanced edges of the equal-opposite-angle state with parameter a."""
    if not (0.0 < a <= math.pi / 2):
        raise DomainError("trapezoid_edges requires a in (0, pi/2]")
    u = math.pi / (2.0 + 2.0 * math.cos(a))
    v = math.pi / 2.0 + math.pi * math.cos(a) / (1.0 + math.cos(a))
    return EdgeTuple(u, math.pi / 2.0, u, v)


def trapezoid_angles(a: float) -> AngleTuple:
    """The isosceles trapezoid state (a, pi-a, pi-a, a)."""
    if not (0.0 < a <= math.pi / 2):
        raise DomainError("trapezoid_angles requires a in (0, pi/2]")
    return AngleTuple(a, math.pi - a, math.pi - a, a)


def trapezoid_cycle_pair():
    """The two states of the attracting 2-cycle inside the trapezoid family."""
    t1 = trapezoid_angles(A_STAR)
    u, _, _, v = trapezoid_edges(A_STAR).as_tuple()
    # step(t1) in the labeling produced by the map
    t2 = AngleTuple(v, u, math.pi / 2.0, u)
    return t1, t2


def general_cycle_pair():
    """The generic attracting 2-cycle: a state and its mirror relabeling."""
    q1 = GENERAL_CYCLE_ANGLES
    return q1, reflect_labels_angles(q1)


def _sup_dist(p, q):
    return max(abs(a - b) for a, b in zip(p.as_tuple(), q.as_tuple()))


def dihedral_distance(p: AngleTuple, q: AngleTuple) -> float:
    """Minimum sup-norm distance over the 8 relabelings (rotations x reflection) of q."""
    pt = p.as_tuple()
    best = math.inf
    for base in (q, reflect_labels_angles(q)):
        for k in range(4):
            rel = rotate_labels(base, k)
            best = min(best, max(abs(a - b) for a, b in zip(pt, rel)))
    return best


def rotation_distance(p: AngleTuple, q: AngleTuple) -> float:
    """Minimum sup-norm distance over the 4 cyclic relabelings of q.

    This is the metric of the rotation-quotient space, where the map's
    2-cycles really have period 2: in labeled coordinates a double step
    lands on a cyclic relabeling of the starting state.  The full dihedral
    quotient would be too coarse here, because the two elements of the
    generic cycle are mirror images of each other and would collapse to
    one point.
    """
    pt = p.as_tuple()
    best = math.inf
    for k in range(4):
        rel = rotate_labels(q, k)
        best = min(best, max(abs(a - b) for a, b in zip(pt, rel)))
    return best


def _pair_distance(reps, pair):
    """Distance of a detected 2-cycle to a known pair, up to state order and relabeling."""
    r0, r1 = reps
    p0, p1 = pair
    direct = max(dihedral_distance(r0, p0), dihedral_distance(r1, p1))
    swapped = max(dihedral_distance(r0, p1), dihedral_distance(r1, p0))
    return min(direct, swapped)


def _classify(reps, period, match_tol):
    # square first: it is the exact fixed point and also the degenerate
    # trapezoid case, so the order matters
    if period == 1:
        d = dihedral_distance(reps[0], SQUARE)
        if d < match_tol:
            return "square_fixed", d
        return "other_cycle", math.inf
    if period == 2:
        d_trap = _pair_distance(reps, trapezoid_cycle_pair())
        if d_trap < match_tol:
            return "trapezoid_2cycle", d_trap
        d_gen = _pair_distance(reps, general_cycle_pair())
        if d_gen < match_tol:
            return "general_2cycle", d_gen
    return "other_cycle", math.inf


def iterate(q0: AngleTuple, max_iter: int = 10000, tol: float = 1e-12,
            match_tol: float = MATCH_TOL) -> Trajectory:
    """Iterate the map with cycle detection.

    A cycle of period p <= P_MAX is accepted after the rotation-quotient
    sup-norm between states n and n-p stays below tol for CONFIRMATIONS
    consecutive n.  Cycles are compared in the rotation quotient because a
    double step returns to a cyclic relabeling of the start, not to the
    same labeled tuple.  Non-convergence is reported via the
    classification, not an error.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    states = [q0]
    residuals = []
    streak = [0] * (P_MAX + 1)
    last_d = [math.inf] * (P_MAX + 1)
    for n in range(1, max_iter + 1):
        q = step(states[-1])
        states.append(q)
        residuals.append(_sup_dist(q, states[-2]))
        for p in range(1, min(P_MAX, n) + 1):
            d = rotation_distance(states[n], states[n - p])
            last_d[p] = d
            streak[p] = streak[p] + 1 if d < tol else 0
        for p in range(1, P_MAX + 1):
            if streak[p] >= CONFIRMATIONS:
                reps = tuple(states[-p:])
                classification, match = _classify(reps, p, match_tol)
                cycle = CycleInfo(
                    period=p,
                    representative_states=reps,
                    classification=classification,
                    residual=last_d[p],
                    match_distance=match,
                )
                return Trajectory(tuple(states), tuple(residuals), cycle)
    return Trajectory(tuple(states), tuple(residuals), None)
