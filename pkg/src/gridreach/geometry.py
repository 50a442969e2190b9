"""Exact rational plane geometry for gadget embeddings.

Rim vertices are placed at rational points of the unit circle (via the
tangent-half-angle parameterisation), which keeps them in strictly convex
cyclic position while every coordinate stays an exact ``Fraction``.  Segment
intersections are therefore exact, and the final no-crossing check is a
decision, not an approximation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Point = tuple[Fraction, Fraction]


def circle_points(n: int) -> list[Point]:
    """``n`` distinct rational points on the unit circle in convex cyclic order."""
    pts: list[Point] = []
    for i in range(n):
        # strictly increasing rational parameters -> strictly increasing angle
        t = Fraction(2 * i - (n - 1), 2)
        den = 1 + t * t
        pts.append(((1 - t * t) / den, (2 * t) / den))
    return pts


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b - a) x (c - a)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment_closed(p: Point, a: Point, b: Point) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def on_segment_interior(p: Point, a: Point, b: Point) -> bool:
    return on_segment_closed(p, a, b) and p != a and p != b


def proper_intersection(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Interior-interior crossing point of segments ab and cd, if any.

    Shared endpoints and endpoint-interior touches do not count; collinear
    overlap is reported as an error by the caller via ``segments_overlap``.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
        return None
    if o1 != o2 and o3 != o4:
        return line_intersection(a, b, c, d)
    return None


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Whether segments ab and cd cross at interior points of both.

    Pure orientation test (no division), so it also works on integer-scaled
    coordinates.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 or o2 == 0 or o3 == 0 or o4 == 0:
        return False
    return o1 != o2 and o3 != o4


def touch_violation(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when an endpoint of one segment lies strictly inside the other."""
    return (
        on_segment_interior(c, a, b)
        or on_segment_interior(d, a, b)
        or on_segment_interior(a, c, d)
        or on_segment_interior(b, c, d)
    )


def segments_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Collinear segments sharing more than a point."""
    if orient(a, b, c) != 0 or orient(a, b, d) != 0:
        return False
    pts = sorted([a, b])
    qts = sorted([c, d])
    lo = max(pts[0], qts[0])
    hi = min(pts[1], qts[1])
    return lo < hi


def line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point:
    """Intersection point of lines ab and cd (assumed non-parallel)."""
    x1, y1 = a
    x2, y2 = b
    x3, y3 = c
    x4, y4 = d
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    if den == 0:
        raise ValueError("parallel lines have no unique intersection")
    px = ((x1 * y2 - y1 * x2) * (x3 - x4) - (x1 - x2) * (x3 * y4 - y3 * x4)) / den
    py = ((x1 * y2 - y1 * x2) * (y3 - y4) - (y1 - y2) * (x3 * y4 - y3 * x4)) / den
    return (px, py)


def point_in_triangle_closed(p: Point, a: Point, b: Point, c: Point) -> bool:
    o1 = orient(a, b, p)
    o2 = orient(b, c, p)
    o3 = orient(c, a, p)
    neg = (o1 < 0) or (o2 < 0) or (o3 < 0)
    pos = (o1 > 0) or (o2 > 0) or (o3 > 0)
    return not (neg and pos)


def snap_fraction(value: Fraction, bits: int = 64) -> Fraction:
    """Round to the nearest multiple of 2**-bits to cap denominator growth."""
    scale = 1 << bits
    return Fraction(round(value * scale), scale)


def snap_point(p: Point, bits: int = 64) -> Point:
    return (snap_fraction(p[0], bits), snap_fraction(p[1], bits))


# float prefilter margin: coordinates here are O(1) (points on / inside the
# unit circle), so any exact orientation smaller than this in float terms is
# treated as ambiguous and re-decided exactly
_EPS = 1e-9


def _forient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def drawing_violations(
    segments: Sequence[tuple[object, Point, Point]],
    points: Iterable[tuple[object, Point]] = (),
    limit: int = 10,
) -> list[str]:
    """No-crossing check for a straight-segment drawing.

    ``segments`` carry an id plus endpoints; reverse duplicates are merged.
    Reported violations: proper interior crossings, collinear overlaps,
    endpoint-in-interior touches, and labelled points interior to a segment.

    Pairs are screened with float bounding boxes and orientations first;
    exact rational predicates run only on ambiguous or interacting pairs,
    so the decision stays exact.
    """
    dedup: dict[frozenset, tuple[object, Point, Point]] = {}
    for name, a, b in segments:
        dedup.setdefault(frozenset((a, b)), (name, a, b))
    segs = list(dedup.values())
    fsegs = [
        (float(a[0]), float(a[1]), float(b[0]), float(b[1])) for _, a, b in segs
    ]
    boxes = [
        (min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2))
        for x1, y1, x2, y2 in fsegs
    ]
    issues: list[str] = []
    for i in range(len(segs)):
        ni, ai, bi = segs[i]
        x1, y1, x2, y2 = fsegs[i]
        lx, ly, hx, hy = boxes[i]
        for j in range(i + 1, len(segs)):
            blx, bly, bhx, bhy = boxes[j]
            if (
                bhx < lx - _EPS
                or blx > hx + _EPS
                or bhy < ly - _EPS
                or bly > hy + _EPS
            ):
                continue
            x3, y3, x4, y4 = fsegs[j]
            o1 = _forient(x1, y1, x2, y2, x3, y3)
            o2 = _forient(x1, y1, x2, y2, x4, y4)
            o3 = _forient(x3, y3, x4, y4, x1, y1)
            o4 = _forient(x3, y3, x4, y4, x2, y2)
            if min(abs(o1), abs(o2), abs(o3), abs(o4)) > _EPS and not (
                (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0)
            ):
                # decisively non-collinear and non-crossing: no violation
                # of any kind is possible for this pair
                continue
            nj, aj, bj = segs[j]
            if proper_intersection(ai, bi, aj, bj) is not None:
                issues.append(f"segments {ni} and {nj} cross")
            elif segments_overlap(ai, bi, aj, bj):
                issues.append(f"segments {ni} and {nj} overlap")
            elif touch_violation(ai, bi, aj, bj):
                issues.append(f"segments {ni} and {nj} touch improperly")
            if len(issues) >= limit:
                return issues
    for pname, p in points:
        px, py = float(p[0]), float(p[1])
        for (nm, a, b), (x1, y1, x2, y2), (lx, ly, hx, hy) in zip(
            segs, fsegs, boxes
        ):
            if px < lx - _EPS or px > hx + _EPS or py < ly - _EPS or py > hy + _EPS:
                continue
            if abs(_forient(x1, y1, x2, y2, px, py)) > _EPS:
                continue
            if on_segment_interior(p, a, b):
                issues.append(f"vertex {pname} lies inside segment {nm}")
                if len(issues) >= limit:
                    return issues
    return issues
