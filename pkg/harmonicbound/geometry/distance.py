# standard libraries
from itertools import combinations
from typing import List, NamedTuple, Sequence, Tuple

# third party libraries
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

# harmonicbound libraries
from harmonicbound.utils import angle_in_span

CONNECTIVITY_TOLERANCE = 1e-9


class SegmentPiece(NamedTuple):
    p0: complex
    p1: complex


class ArcPiece(NamedTuple):
    center: complex
    radius: float
    start: float
    span: float

    @property
    def endpoints(self) -> Tuple[complex, complex]:
        return (
            self.center + self.radius * np.exp(1j * self.start),
            self.center + self.radius * np.exp(1j * (self.start + self.span)),
        )


Piece = SegmentPiece | ArcPiece


class ContinuumArrays(NamedTuple):
    """Flat numpy view of a continuum, the form the walk-on-spheres hot loop consumes."""

    seg_start: np.ndarray
    seg_end: np.ndarray
    arc_center: np.ndarray
    arc_radius: np.ndarray
    arc_start: np.ndarray
    arc_span: np.ndarray


def pack_pieces(segments: Sequence[SegmentPiece], arcs: Sequence[ArcPiece]) -> ContinuumArrays:
    """Pack segment and arc pieces into contiguous arrays."""
    return ContinuumArrays(
        seg_start=np.array([s.p0 for s in segments], dtype=complex),
        seg_end=np.array([s.p1 for s in segments], dtype=complex),
        arc_center=np.array([a.center for a in arcs], dtype=complex),
        arc_radius=np.array([a.radius for a in arcs], dtype=float),
        arc_start=np.array([a.start for a in arcs], dtype=float),
        arc_span=np.array([a.span for a in arcs], dtype=float),
    )


def segment_distance(z: np.ndarray, p0: complex, p1: complex) -> np.ndarray:
    """
    Euclidean distance from each point of ``z`` to the closed segment [p0, p1].

    Args:
        z (np.ndarray): Complex query points
        p0 (complex): First endpoint
        p1 (complex): Second endpoint

    Returns:
        np.ndarray: Distances, same shape as ``z``
    """
    direction = p1 - p0
    t = np.real((z - p0) * np.conj(direction)) / (abs(direction) ** 2)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z - (p0 + t * direction))


def arc_distance(z: np.ndarray, center: complex, radius: float, start: float, span: float) -> np.ndarray:
    """
    Euclidean distance from each point of ``z`` to a circular arc.

    The arc is {center + radius·e^{it} : start <= t <= start + span}.

    Args:
        z (np.ndarray): Complex query points
        center (complex): Circle center
        radius (float): Circle radius
        start (float): Start angle in radians
        span (float): Counter-clockwise angular length in (0, 2π]

    Returns:
        np.ndarray: Distances, same shape as ``z``
    """
    offset = z - center
    radial = np.abs(np.abs(offset) - radius)
    inside = angle_in_span(np.angle(offset), start, span)
    if np.all(inside):
        return radial

    e0 = center + radius * np.exp(1j * start)
    e1 = center + radius * np.exp(1j * (start + span))
    to_ends = np.minimum(np.abs(z - e0), np.abs(z - e1))
    return np.where(inside, radial, to_ends)


def distances(z: np.ndarray, packed: ContinuumArrays) -> np.ndarray:
    """
    Distance from each point of ``z`` to the union of all pieces.

    Args:
        z (np.ndarray): Complex query points
        packed (ContinuumArrays): Packed continuum

    Returns:
        np.ndarray: Minimum distance over the pieces
    """
    z = np.asarray(z, dtype=complex)
    best = np.full(z.shape, np.inf)
    for p0, p1 in zip(packed.seg_start, packed.seg_end):
        np.minimum(best, segment_distance(z, p0, p1), out=best)
    for center, radius, start, span in zip(packed.arc_center, packed.arc_radius, packed.arc_start, packed.arc_span):
        np.minimum(best, arc_distance(z, center, radius, start, span), out=best)
    return best


def piece_distance(z: np.ndarray | complex, piece: Piece) -> np.ndarray:
    """Distance from ``z`` to a single piece."""
    z = np.asarray(z, dtype=complex)
    if isinstance(piece, SegmentPiece):
        return segment_distance(z, piece.p0, piece.p1)
    return arc_distance(z, piece.center, piece.radius, piece.start, piece.span)


def piece_endpoints(piece: Piece) -> Tuple[complex, complex]:
    if isinstance(piece, SegmentPiece):
        return piece.p0, piece.p1
    return piece.endpoints


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


def segments_intersect(a: SegmentPiece, b: SegmentPiece) -> bool:
    """Closed-segment intersection test (touching and collinear overlap count as intersecting)."""
    d1 = _cross(b.p1 - b.p0, a.p0 - b.p0)
    d2 = _cross(b.p1 - b.p0, a.p1 - b.p0)
    d3 = _cross(a.p1 - a.p0, b.p0 - a.p0)
    d4 = _cross(a.p1 - a.p0, b.p1 - a.p0)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True

    # degenerate cases: an endpoint lying on the other segment
    return bool(
        min(
            segment_distance(np.array([a.p0, a.p1]), b.p0, b.p1).min(),
            segment_distance(np.array([b.p0, b.p1]), a.p0, a.p1).min(),
        )
        == 0.0
    )


def _circle_line_points(center: complex, radius: float, p0: complex, p1: complex) -> List[complex]:
    direction = p1 - p0
    offset = p0 - center
    qa = abs(direction) ** 2
    qb = 2.0 * np.real(offset * np.conj(direction))
    qc = abs(offset) ** 2 - radius**2
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        return []
    root = np.sqrt(disc)
    ts = [(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)]
    return [p0 + t * direction for t in ts if 0.0 <= t <= 1.0]


def _circle_circle_points(c0: complex, r0: float, c1: complex, r1: float) -> List[complex]:
    gap = abs(c1 - c0)
    if gap == 0.0 or gap > r0 + r1 or gap < abs(r0 - r1):
        return []
    along = (r0**2 - r1**2 + gap**2) / (2.0 * gap)
    height = np.sqrt(max(r0**2 - along**2, 0.0))
    unit = (c1 - c0) / gap
    base = c0 + along * unit
    return [base + 1j * height * unit, base - 1j * height * unit]


def _on_arc(point: complex, arc: ArcPiece) -> bool:
    return bool(angle_in_span(np.angle(point - arc.center), arc.start, arc.span))


def pieces_cross(a: Piece, b: Piece) -> bool:
    """Whether two pieces share a point (exact intersection, up to rounding)."""
    if isinstance(a, SegmentPiece) and isinstance(b, SegmentPiece):
        return segments_intersect(a, b)
    if isinstance(a, ArcPiece) and isinstance(b, SegmentPiece):
        a, b = b, a
    if isinstance(a, SegmentPiece):
        return any(_on_arc(p, b) for p in _circle_line_points(b.center, b.radius, a.p0, a.p1))
    if a.center == b.center and a.radius == b.radius:
        ends = list(a.endpoints) + list(b.endpoints)
        return any(_on_arc(p, a) and _on_arc(p, b) for p in ends)
    return any(_on_arc(p, a) and _on_arc(p, b) for p in _circle_circle_points(a.center, a.radius, b.center, b.radius))


def _normal_points(arc: ArcPiece, other: Piece) -> List[complex]:
    """Points of ``arc`` whose normal is also normal to ``other``: interior candidates for the closest pair."""
    if isinstance(other, SegmentPiece):
        direction = other.p1 - other.p0
        normal = 1j * direction / abs(direction)
        candidates = [arc.center + arc.radius * normal, arc.center - arc.radius * normal]
    elif other.center == arc.center:
        # concentric: every common direction is normal to both
        candidates = [arc.center + arc.radius * (e - other.center) / other.radius for e in other.endpoints]
    else:
        unit = (other.center - arc.center) / abs(other.center - arc.center)
        candidates = [arc.center + arc.radius * unit, arc.center - arc.radius * unit]
    return [p for p in candidates if _on_arc(p, arc)]


def piece_gap(a: Piece, b: Piece) -> float:
    """
    Euclidean distance between two pieces, used for the adjacency graph.

    Zero when the pieces intersect. Otherwise the closest pair has an endpoint of one piece or two interior
    points on a common normal; both kinds of candidate are measured exactly against the other piece.
    """
    if pieces_cross(a, b):
        return 0.0
    gaps = [float(piece_distance(np.array(piece_endpoints(a)), b).min())]
    gaps.append(float(piece_distance(np.array(piece_endpoints(b)), a).min()))
    for arc, other in ((a, b), (b, a)):
        if isinstance(arc, ArcPiece):
            points = _normal_points(arc, other)
            if points:
                gaps.append(float(piece_distance(np.array(points), other).min()))
    return min(gaps)


def connected_piece_groups(pieces: Sequence[Piece], tolerance: float = CONNECTIVITY_TOLERANCE) -> np.ndarray:
    """
    Label pieces by connected component of the adjacency graph.

    Args:
        pieces (Sequence[Piece]): Segments and arcs
        tolerance (float, optional): Maximum gap for two pieces to be adjacent. Defaults to 1e-9.

    Returns:
        np.ndarray: Component label per piece
    """
    count = len(pieces)
    rows, cols = [], []
    for i, j in combinations(range(count), 2):
        if piece_gap(pieces[i], pieces[j]) <= tolerance:
            rows.append(i)
            cols.append(j)
    adjacency = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(count, count))
    _, labels = connected_components(adjacency, directed=False)
    return labels


def sample_pieces(pieces: Sequence[Piece], per_piece: int) -> np.ndarray:
    """Dense uniform-parameter sampling of every piece, endpoints included."""
    t = np.linspace(0.0, 1.0, per_piece)
    samples = []
    for piece in pieces:
        if isinstance(piece, SegmentPiece):
            samples.append(piece.p0 + t * (piece.p1 - piece.p0))
        else:
            samples.append(piece.center + piece.radius * np.exp(1j * (piece.start + t * piece.span)))
    return np.concatenate(samples) if samples else np.empty(0, dtype=complex)
