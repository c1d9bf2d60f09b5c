import pytest

from measure import Measure, Point, SegmentPiece, arc_length_measure
from zeros import CrossConfig


def seg(x0, y0, x1, y1, mass=None):
    """Segment with mass = exact length unless given."""
    p, q = Point.of(x0, y0), Point.of(x1, y1)
    if mass is None:
        return arc_length_measure([(p, q)]).segments[0]
    return SegmentPiece(p, q, mass)


@pytest.fixture
def unit_cross():
    return CrossConfig.of(0, 0, 1, 1)


@pytest.fixture
def unit_cross_measure(unit_cross):
    return unit_cross.measure()


@pytest.fixture
def unit_interval():
    return Measure((), (SegmentPiece(Point.of(0), Point.of(1), 1),), 1)


@pytest.fixture
def th_l_measure():
    return arc_length_measure([
        (Point.of(0, 0), Point.of(1, 0)),
        (Point.of(0, 0), Point.of(0, 1)),
        (Point.of(1, 1), Point.of(1, 2)),
        (Point.of(1, 1), Point.of(2, 1)),
    ])
