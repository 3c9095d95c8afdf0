# standard libraries
import math

# third party libraries
import numpy as np
import pytest

# harmonicbound libraries
from harmonicbound.geometry.distance import (
    ArcPiece,
    SegmentPiece,
    arc_distance,
    connected_piece_groups,
    distances,
    pack_pieces,
    piece_gap,
    sample_pieces,
    segment_distance,
    segments_intersect,
)


def test_segment_distance_interior_and_endpoints():
    z = np.array([0.5 + 0.5j, 2.0 + 0.0j, -1.0 + 1.0j])
    np.testing.assert_allclose(segment_distance(z, 0j, 1 + 0j), [0.5, 1.0, math.sqrt(2.0)])


def test_arc_distance_radial_and_endpoint():
    # quarter arc of radius 0.5 from angle 0 to π/2
    z = np.array([0.0 + 0.0j, 0.6 + 0.6j, -1.0 + 0.0j])
    expected = [0.5, abs(0.6 + 0.6j) - 0.5, abs(-1.0 - 0.5j)]
    np.testing.assert_allclose(arc_distance(z, 0j, 0.5, 0.0, math.pi / 2), expected)


def test_distances_takes_minimum_over_pieces():
    packed = pack_pieces([SegmentPiece(-1j, 1j)], [ArcPiece(0j, 0.5, -math.pi / 2, math.pi)])
    z = np.array([0.3 + 0.0j, -0.3 + 0.0j])
    np.testing.assert_allclose(distances(z, packed), [0.2, 0.3])


def test_segments_intersect():
    assert segments_intersect(SegmentPiece(-1 + 0j, 1 + 0j), SegmentPiece(-1j, 1j))
    assert segments_intersect(SegmentPiece(0j, 1 + 0j), SegmentPiece(0j, 1j))
    assert not segments_intersect(SegmentPiece(0.1 + 0j, 1 + 0j), SegmentPiece(0.1j, 1j))


def test_connected_piece_groups():
    pieces = [SegmentPiece(0j, 0.5 + 0j), SegmentPiece(0.5 + 0j, 0.5 + 0.5j), SegmentPiece(-0.5 + 0j, -0.9 + 0j)]
    labels = connected_piece_groups(pieces)
    assert labels[0] == labels[1]
    assert labels[2] != labels[0]

    arc_and_segment = [SegmentPiece(-1 + 0j, 1 + 0j), ArcPiece(0j, 0.5, 0.25, 1.0)]
    # the arc starts above the segment and does not reach it
    assert len(set(connected_piece_groups(arc_and_segment).tolist())) == 2


def test_piece_gap_segment_near_arc_interior():
    # the arc dips to 1e-10 above the segment at an interior point, far from both arc endpoints
    segment = SegmentPiece(-0.5 + 0j, 0.5 + 0j)
    arc = ArcPiece(0.3j, 0.3 - 1e-10, -math.pi / 2 - 0.5, 1.0)
    gap = piece_gap(segment, arc)
    assert 0.0 < gap < 1e-9
    assert gap == pytest.approx(1e-10, rel=1e-5)
    assert piece_gap(arc, segment) == pytest.approx(gap)
    assert len(set(connected_piece_groups([segment, arc]).tolist())) == 1


def test_piece_gap_facing_arcs():
    left = ArcPiece(0j, 0.5, -0.3, 0.6)
    right = ArcPiece(1 + 0j, 0.5 - 1e-10, math.pi - 0.3, 0.6)
    assert piece_gap(left, right) == pytest.approx(1e-10, rel=1e-5)


def test_piece_gap_separated_pieces():
    segment = SegmentPiece(-0.5 + 0j, 0.5 + 0j)
    arc = ArcPiece(0.5j, 0.3, -math.pi / 2 - 0.5, 1.0)
    assert piece_gap(segment, arc) == pytest.approx(0.2)
    assert len(set(connected_piece_groups([segment, arc]).tolist())) == 2


def test_distances_match_dense_sampling():
    pieces = [SegmentPiece(-0.6 + 0j, 0.2 + 0.3j), ArcPiece(0.1 - 0.2j, 0.4, 0.5, 2.5)]
    packed = pack_pieces([pieces[0]], [pieces[1]])
    dense = sample_pieces(pieces, 500_000)
    rng = np.random.default_rng(7)
    z = rng.uniform(-1.0, 1.0, 40) + 1j * rng.uniform(-1.0, 1.0, 40)
    brute = np.array([np.abs(dense - point).min() for point in z])
    exact = distances(z, packed)
    # exact distances never exceed the sampled ones, and the sampling step is below 1e-5
    assert np.all(exact <= brute + 1e-12)
    np.testing.assert_allclose(exact, brute, atol=1e-5)


def test_distances_are_one_lipschitz():
    packed = pack_pieces([SegmentPiece(-0.5 + 0j, 0.5j)], [ArcPiece(0j, 0.6, 1.0, 3.0)])
    rng = np.random.default_rng(3)
    z = rng.uniform(-0.9, 0.9, 500) + 1j * rng.uniform(-0.9, 0.9, 500)
    w = z + 0.05 * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, 500))
    assert np.all(np.abs(distances(z, packed) - distances(w, packed)) <= np.abs(z - w) + 1e-12)
