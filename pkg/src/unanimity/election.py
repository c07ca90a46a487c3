"""Single-round winner determination under consensus voting.

Two independent characterizations are provided and cross-checked in the
test suite: hull containment in a candidate's Voronoi half-plane, and the
ball-intersection condition on hull vertices. Ties resolve toward
candidate 1 (exact ties are measure-zero events).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateCandidates
from .geometry import (
    ALG_EPS,
    GEOM_EPS,
    ConvexHull,
    Domain,
    HalfPlane,
    _xy,
    bisector,
    hull_in_halfplane,
    region_support,
)


@dataclass(frozen=True)
class ElectionOutcome:
    """Outcome of one two-candidate round: winner index 1 or 2, or None."""

    winner: int | None

    @property
    def accepted(self) -> bool:
        return self.winner is not None


NO_WINNER = ElectionOutcome(None)


def voronoi_winner(hull: ConvexHull, w1, w2) -> ElectionOutcome:
    """Winner iff the member hull lies inside one candidate's Voronoi cell."""
    h1 = bisector(w1, w2)
    if hull_in_halfplane(hull, h1):
        return ElectionOutcome(1)
    if hull_in_halfplane(hull, h1.complement()):
        return ElectionOutcome(2)
    return NO_WINNER


def ball_winner(hull: ConvexHull, w1, w2) -> ElectionOutcome:
    """Winner iff one candidate is weakly closer to every hull vertex.

    This is the two-candidate instance of the ball-intersection condition:
    the winner must lie in every ball centred at a hull vertex through the
    rival candidate.
    """
    x1, y1 = _xy(w1)
    x2, y2 = _xy(w2)
    if math.hypot(x2 - x1, y2 - y1) < ALG_EPS:
        raise DegenerateCandidates("candidates coincide")
    arr = hull.vertex_array()
    d1 = (arr[:, 0] - x1) ** 2 + (arr[:, 1] - y1) ** 2
    d2 = (arr[:, 0] - x2) ** 2 + (arr[:, 1] - y2) ** 2
    if bool((d1 <= d2).all()):
        return ElectionOutcome(1)
    if bool((d2 <= d1).all()):
        return ElectionOutcome(2)
    return NO_WINNER


def conditional_winner(domain: Domain, conditioning: HalfPlane, w1, w2) -> ElectionOutcome:
    """Winner when the member hull is the closure of the domain minus the
    cap cut by `conditioning`.

    The complement region has a curved boundary on the disk, so containment
    in a Voronoi cell is certified through the support function: the region
    lies in {n . p <= c} iff its support in direction n is at most c.
    """
    constraints = [conditioning.complement()]
    h1 = bisector(w1, w2)
    s1 = region_support(domain, constraints, h1.normal)
    if s1 <= h1.offset + GEOM_EPS:
        return ElectionOutcome(1)
    h2 = h1.complement()
    s2 = region_support(domain, constraints, h2.normal)
    if s2 <= h2.offset + GEOM_EPS:
        return ElectionOutcome(2)
    return NO_WINNER
