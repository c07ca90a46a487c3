import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from unanimity.election import ball_winner, conditional_winner, voronoi_winner
from unanimity.errors import DegenerateCandidates, EmptyRegion
from unanimity.geometry import (
    INTERVAL,
    UNIT_DISK,
    UNIT_SQUARE,
    ConvexHull,
    HalfPlane,
    bisector,
    make_cap,
)

unit_coord = st.floats(min_value=0.01, max_value=0.99, allow_nan=False)
pair = st.tuples(unit_coord, unit_coord)


def test_voronoi_winner_examples():
    hull = ConvexHull([(0.5, 0.5)])
    assert voronoi_winner(hull, (0.4, 0.5), (0.7, 0.5)).winner == 1
    # vertices strictly split between the two cells: nobody wins
    hull = ConvexHull([(0.3, 0.1), (0.1, 0.3)])
    assert voronoi_winner(hull, (0.2, 0.1), (0.1, 0.2)).winner is None
    with pytest.raises(DegenerateCandidates):
        voronoi_winner(hull, (0.2, 0.2), (0.2, 0.2))


def test_voronoi_winner_hull_on_bisector_line():
    # Both vertices exactly equidistant from the candidates: the weak
    # containment holds for both cells and the tie rule picks candidate 1.
    hull = ConvexHull([(0.1, 0.1), (0.9, 0.9)])
    assert voronoi_winner(hull, (0.2, 0.1), (0.1, 0.2)).winner == 1


def test_ball_winner_examples():
    assert ball_winner(ConvexHull([(0, 0)]), (0.3, 0), (0.6, 0)).winner == 1
    hull = ConvexHull([(0, 0), (1, 0)])
    assert ball_winner(hull, (0.5, 0.1), (0.5, 0.3)).winner == 1


def test_tie_resolves_to_candidate_one_in_both_predicates():
    # vertex exactly equidistant from both candidates
    hull = ConvexHull([(0.5, 0.5)])
    w1, w2 = (0.25, 0.5), (0.75, 0.5)
    assert voronoi_winner(hull, w1, w2).winner == 1
    assert ball_winner(hull, w1, w2).winner == 1


def test_predicate_equivalence_spot():
    rng = np.random.default_rng(12)
    for domain in (INTERVAL, UNIT_SQUARE, UNIT_DISK):
        for _ in range(3000):
            pts = domain.sample(rng, int(rng.integers(1, 7)))
            w1 = domain.sample(rng, 1)[0]
            w2 = domain.sample(rng, 1)[0]
            hull = ConvexHull(pts)
            assert (
                voronoi_winner(hull, w1, w2).winner
                == ball_winner(hull, w1, w2).winner
            )


@given(pair, pair, st.lists(pair, min_size=1, max_size=6))
def test_candidate_swap_antisymmetry(w1, w2, points):
    assume(math.dist(w1, w2) > 1e-6)
    hull = ConvexHull(points)
    a = voronoi_winner(hull, w1, w2).winner
    b = voronoi_winner(hull, w2, w1).winner
    assert {a, b} in ({1, 2}, {None})


@given(pair, pair, st.lists(pair, min_size=2, max_size=8), st.randoms())
def test_monotonicity_under_hull_shrinking(w1, w2, points, pyrand):
    assume(math.dist(w1, w2) > 1e-6)
    hull = ConvexHull(points)
    full = voronoi_winner(hull, w1, w2).winner
    assume(full is not None)
    subset = [p for p in points if pyrand.random() < 0.5] or [points[0]]
    assert voronoi_winner(ConvexHull(subset), w1, w2).winner == full


def test_winner_weakly_closer_to_every_vertex():
    rng = np.random.default_rng(99)
    for _ in range(2000):
        pts = UNIT_DISK.sample(rng, 4)
        w1 = UNIT_DISK.sample(rng, 1)[0]
        w2 = UNIT_DISK.sample(rng, 1)[0]
        hull = ConvexHull(pts)
        out = voronoi_winner(hull, w1, w2)
        if out.winner is None:
            continue
        win, lose = (w1, w2) if out.winner == 1 else (w2, w1)
        for v in hull.vertex_array():
            assert np.hypot(*(v - win)) <= np.hypot(*(v - lose)) + 1e-9


# ---------------------------------------------------------------------------
# conditional_winner
# ---------------------------------------------------------------------------


def test_conditional_winner_disk_example():
    # cap A = {x >= 1/2}; hull is the rest of the disk
    conditioning = HalfPlane((-1.0, 0.0), -0.5)
    out = conditional_winner(UNIT_DISK, conditioning, (0.8, 0.0), (0.9, 0.0))
    assert out.winner == 1


def test_conditional_winner_square_candidate_outside_cap():
    # A is the small corner triangle; a winner inside A needs both
    # candidates in A, so w1 far outside means no winner lands in A.
    conditioning = HalfPlane.from_direction(1, 1, 0.25)
    cap = make_cap(UNIT_SQUARE, conditioning)
    rng = np.random.default_rng(4)
    half = cap.half
    for _ in range(500):
        w1 = np.array([0.7, 0.7]) + 0.2 * rng.random(2)
        w2 = rng.random(2)
        out = conditional_winner(UNIT_SQUARE, conditioning, w1, w2)
        if out.winner is None:
            continue
        w = (w1, w2)[out.winner - 1]
        assert not half.contains(w, tol=-1e-9)


def test_conditional_winner_chord_rule_oracle():
    """With both candidates inside the cap, the support-function test must
    match the chord-endpoint rule from the integral identity's proof."""
    rng = np.random.default_rng(8)
    from unanimity.capprob import sample_cap

    for domain, h in [
        (UNIT_DISK, HalfPlane((1.0, 0.0), -0.4)),
        (UNIT_DISK, HalfPlane((0.6, 0.8), 0.2)),
        (UNIT_SQUARE, HalfPlane.from_direction(1, 1, 0.6)),
        (INTERVAL, HalfPlane((1.0, 0.0), 0.45)),
    ]:
        cap = make_cap(domain, h)
        z1, z2 = cap.z1.as_array(), cap.z2.as_array()
        w1s = sample_cap(cap, rng, 800)
        w2s = sample_cap(cap, rng, 800)
        for w1, w2 in zip(w1s, w2s):
            support = conditional_winner(domain, h, w1, w2).winner
            d11 = np.hypot(*(z1 - w1)) - np.hypot(*(z1 - w2))
            d21 = np.hypot(*(z2 - w1)) - np.hypot(*(z2 - w2))
            if d11 <= 1e-9 and d21 <= 1e-9:
                chord = 1
            elif d11 >= -1e-9 and d21 >= -1e-9:
                chord = 2
            else:
                chord = None
            assert support == chord


def test_conditional_winner_empty_region():
    # conditioning cap covering (numerically) the whole disk
    with pytest.raises(EmptyRegion):
        conditional_winner(
            UNIT_DISK, HalfPlane((1.0, 0.0), 2.0), (0.1, 0.0), (0.2, 0.0)
        )


def test_conditional_winner_boundary_containment_is_weak():
    # The bisector of these candidates is exactly the chord line x = 1/2,
    # so the complement region touches candidate 2's cell boundary and the
    # weak containment still elects it.
    conditioning = HalfPlane((-1.0, 0.0), -0.5)
    out = conditional_winner(UNIT_DISK, conditioning, (0.75, 0.0), (0.25, 0.0))
    assert out.winner == 2
