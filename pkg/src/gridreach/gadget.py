"""Transforming a circle graph into an equivalent plane gadget graph.

The circle graph of a block may have heavily crossing chords.  This module
rewrites it into a *gadget graph*: a plane directed graph of at most ``6 n``
vertices (``n`` = rim size) over the same outer vertices, equipped with

* a partial *path function* ``K`` assigning some edges a mandatory successor
  edge (tokens arriving over such an edge must leave over the successor), and
* per-edge *label sets* ``{in_level -> out_level}``: a token at level ``L``
  may use a label ``a -> b`` iff ``L >= a``, after which its level is ``b``.

Construction loop: while some chord has at least two rim vertices strictly
inside its designated (shorter) arc, pick the one minimising ``(gap, tail
position)``, route every chord crossing it through a fresh hub vertex placed
just inside the vacated arc, recompute in/out levels of the affected rim
vertices (with a monotone shift pass keeping in-levels above earlier
out-levels), seal the vacated area, and planarise the sealed edges by
subdividing geometric crossings into mandatory-successor chains.  A final
planarisation pass resolves the remaining (gap <= 1) crossings.

Levels are exact rationals ``stage + index / n``; the hub entry/exit edges of
a processed chord carry the single unusable label ``inf -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import mutations
from .circle import CircleGraph, cw_open
from .geometry import (
    Point,
    circle_points,
    drawing_violations,
    on_segment_interior,
    orient,
    point_in_triangle_closed,
    line_intersection,
    segments_cross,
    segments_overlap,
    snap_point,
)

# snapped coordinates live on this dyadic grid; validation runs on the
# integer-scaled copies, which is much faster than Fraction arithmetic
_SNAP_BITS = 64
_SCALE = 1 << _SNAP_BITS
from .levels import INF, Label, Level, ZERO

EdgeKey = tuple[int, int]

PROHIBITED_LABEL: Label = (INF, ZERO)


class GadgetInvariantError(AssertionError):
    """A structural guarantee of the transform failed."""


class LevelInvariantError(GadgetInvariantError):
    """An ordering guarantee of the level recomputation failed."""


@dataclass(frozen=True)
class GadgetEdge:
    tail: int
    head: int
    labels: frozenset[Label]
    ksucc: Optional[EdgeKey]  # mandatory successor edge, if any

    @property
    def key(self) -> EdgeKey:
        return (self.tail, self.head)


@dataclass(frozen=True)
class GadgetGraph:
    """A plane gadget graph over ``n_out`` outer (rim) vertices."""

    n_out: int
    denominator: int
    edges: dict[EdgeKey, GadgetEdge]
    coords: dict[int, Point]
    provenance: dict[int, str]

    @property
    def n_vertices(self) -> int:
        return len(self.coords)

    @property
    def n_inner(self) -> int:
        return self.n_vertices - self.n_out

    def kinv(self) -> dict[EdgeKey, EdgeKey]:
        """Inverse of the path function (which edge mandates each edge)."""
        inv: dict[EdgeKey, EdgeKey] = {}
        for key, e in self.edges.items():
            if e.ksucc is not None:
                if e.ksucc in inv:
                    raise GadgetInvariantError(
                        f"path function is not injective at {e.ksucc}"
                    )
                inv[e.ksucc] = key
        return inv

    def out_edges(self, v: int) -> list[GadgetEdge]:
        return [e for e in self.edges.values() if e.tail == v]

    def total_labels(self) -> int:
        return sum(len(e.labels) for e in self.edges.values())

    def structure_fingerprint(self) -> tuple:
        """Hashable canonical form; used to confirm recomputation stability."""
        return tuple(
            (k, tuple(sorted(e.labels)), e.ksucc)
            for k, e in sorted(self.edges.items())
        )


# -- mutable build state -------------------------------------------------------


@dataclass
class _Edge:
    labels: set[Label]
    ksucc: Optional[EdgeKey] = None


class _Builder:
    def __init__(self, circle: CircleGraph, checks: bool):
        self.n = circle.n
        self.circle = circle
        self.checks = checks
        self.coords: dict[int, Point] = {}
        self.icoords: dict[int, tuple[int, int]] = {}
        for i, p in enumerate(circle_points(circle.n)):
            self._set_snapped_coord(i, snap_point(p, _SNAP_BITS))
        self.provenance: dict[int, str] = {
            i: f"rim {i}" for i in range(circle.n)
        }
        self.next_vid = circle.n
        self.edges: dict[EdgeKey, _Edge] = {
            (u, v): _Edge({(ZERO, INF)}) for (u, v) in sorted(circle.edges)
        }
        self.cycle: list[int] = list(range(circle.n))
        self.cycle_set = set(self.cycle)
        self.parent: list[int] = list(range(circle.n))
        self.lin: list[Optional[Level]] = [ZERO] * circle.n
        self.lout: list[Optional[Level]] = [INF] * circle.n
        self.step = 0
        if circle.n >= 3:
            self.turn_sign = orient(self.icoords[0], self.icoords[1], self.icoords[2])
            for i in range(circle.n):
                t = orient(
                    self.icoords[i],
                    self.icoords[(i + 1) % circle.n],
                    self.icoords[(i + 2) % circle.n],
                )
                if t != self.turn_sign:
                    raise GadgetInvariantError(
                        "snapped rim points lost strict convexity"
                    )
        else:
            self.turn_sign = 1

    # -- helpers -----------------------------------------------------------

    def _set_snapped_coord(self, vid: int, coord: Point) -> None:
        self.coords[vid] = coord
        self.icoords[vid] = (int(coord[0] * _SCALE), int(coord[1] * _SCALE))

    def new_vertex(self, coord: Point, why: str, snapped: bool = False) -> int:
        vid = self.next_vid
        self.next_vid += 1
        if snapped:
            self._set_snapped_coord(vid, coord)
        else:
            # crossing points are exact rationals off the dyadic grid; their
            # scaled coordinates stay Fractions, keeping predicates exact
            self.coords[vid] = coord
            self.icoords[vid] = (coord[0] * _SCALE, coord[1] * _SCALE)
        self.provenance[vid] = why
        return vid

    def active_edges(self) -> list[EdgeKey]:
        cs = self.cycle_set
        return [k for k in self.edges if k[0] in cs and k[1] in cs]

    def add_edge(self, tail: int, head: int) -> _Edge:
        e = self.edges.get((tail, head))
        if e is None:
            e = _Edge(set())
            self.edges[(tail, head)] = e
        return e

    # -- chord selection -----------------------------------------------------

    def pick_chord(self) -> Optional[tuple[EdgeKey, bool]]:
        """Lowest remaining wide chord and whether its designated arc is the
        clockwise one; None once only narrow chords remain."""
        m = len(self.cycle)
        if m < 6:
            return None
        pos = {v: i for i, v in enumerate(self.cycle)}
        best = None
        for (a, b) in self.active_edges():
            d_cw = (pos[b] - pos[a]) % m
            between_cw = d_cw - 1
            between_acw = m - d_cw - 1
            gap = min(between_cw, between_acw)
            if gap < 2:
                continue
            key = (gap, pos[a])
            if best is None or key < best[0]:
                best = (key, (a, b), between_cw <= between_acw)
        if best is None:
            return None
        return best[1], best[2]

    # -- hub placement ---------------------------------------------------------

    def place_hub(
        self,
        us: int,
        vs: int,
        lower: list[int],
        sealed_pairs: list[EdgeKey],
        s_lower: set[int],
        s_upper: set[int],
    ) -> Point:
        """Pick an exact hub position just inside the vacated arc.

        The position must keep the next cycle strictly convex and keep the
        freshly sealed area clear of the two hub boundary edges, so that the
        running straight-segment drawing never develops an unresolved
        crossing.  The offset from the chord midpoint is halved until every
        condition holds; success is guaranteed for small enough offsets.
        """
        c = self.coords
        a, b = c[us], c[vs]
        mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        refx = sum((c[v][0] for v in lower), Fraction(0)) / len(lower)
        refy = sum((c[v][1] for v in lower), Fraction(0)) / len(lower)
        taken = set(self.coords.values())
        m = len(self.cycle)
        pos = {v: i for i, v in enumerate(self.cycle)}
        # neighbours of the chord endpoints on the surviving (upper) side;
        # when the vacated arc follows us in cycle order the new cycle walks
        # us -> hub -> vs, otherwise vs -> hub -> us, flipping the turn sign
        if self.cycle[(pos[us] + 1) % m] in set(lower):
            upper_prev = self.cycle[(pos[us] - 1) % m]
            upper_next = self.cycle[(pos[vs] + 1) % m]
            want_sign = self.turn_sign
        else:
            upper_prev = self.cycle[(pos[us] + 1) % m]
            upper_next = self.cycle[(pos[vs] - 1) % m]
            want_sign = -self.turn_sign
        ic = self.icoords
        sealed_segments = [
            (ic[x], ic[y]) for (x, y) in set(sealed_pairs) if x != y
        ]
        lower_pts = [ic[v] for v in lower]
        for attempt in range(80):
            delta = Fraction(1, 2 ** (attempt + 1))
            cand = snap_point(
                (mid[0] + delta * (refx - mid[0]), mid[1] + delta * (refy - mid[1])),
                bits=_SNAP_BITS,
            )
            if cand in taken:
                continue
            icand = (int(cand[0] * _SCALE), int(cand[1] * _SCALE))
            if self._hub_ok(
                icand, us, vs, upper_prev, upper_next, want_sign, lower_pts,
                sealed_segments, s_lower, s_upper,
            ):
                return cand
        raise GadgetInvariantError("could not place hub vertex in vacated arc")

    def _hub_ok(
        self,
        cand: tuple[int, int],
        us: int,
        vs: int,
        upper_prev: int,
        upper_next: int,
        want_sign: int,
        lower_pts: list[tuple[int, int]],
        sealed_segments: list[tuple[tuple[int, int], tuple[int, int]]],
        s_lower: set[int],
        s_upper: set[int],
    ) -> bool:
        ic = self.icoords
        a, b = ic[us], ic[vs]
        # strict convexity of the upcoming cycle at the three affected
        # corners, in the orientation of the walk through the hub
        t1 = orient(ic[upper_prev], a, cand)
        t2 = orient(a, cand, b)
        t3 = orient(cand, b, ic[upper_next])
        if not (t1 == t2 == t3 == want_sign):
            return False
        # the vacated arc must stay strictly outside the new hull
        for p in lower_pts:
            if point_in_triangle_closed(p, a, cand, b):
                return False
        hub_lower = [(ic[x], cand) for x in s_lower]
        hub_upper = [(ic[x], cand) for x in s_upper]
        boundary = [(a, cand), (cand, b)]
        for seg in sealed_segments + hub_lower:
            for bseg in boundary + hub_upper:
                if segments_cross(*seg, *bseg):
                    return False
                if segments_overlap(*seg, *bseg):
                    return False
            if on_segment_interior(cand, *seg):
                return False
        # no current cycle vertex may sit on a fresh segment
        cycle_pts = [ic[v] for v in self.cycle]
        for seg in hub_lower + hub_upper + boundary:
            for p in cycle_pts:
                if p != seg[0] and p != seg[1] and on_segment_interior(p, *seg):
                    return False
        return True

    # -- level recomputation -----------------------------------------------------

    def calc_levels(
        self, t_lower: list[int], t_upper: list[int]
    ) -> tuple[list[Optional[Level]], list[Optional[Level]]]:
        """Fresh in/out levels for the rim vertices behind the processed chord.

        Stage of the new in-level of the i-th lower vertex: largest index of
        an upper vertex it reaches; stage of the new out-level: smallest index
        of an upper vertex reaching it; both tie-broken by ``i / n``.  A shift
        pass then raises suffixes so every in-level strictly exceeds every
        earlier out-level, preserving order and magnitude relations.
        """
        n = self.n
        has = self.circle.has
        k = len(t_lower)
        temp_in: list[Optional[Level]] = [None] * (k + 1)
        temp_out: list[Optional[Level]] = [None] * (k + 1)
        for i in range(1, k + 1):
            tl = t_lower[i - 1]
            out_partners = [j for j in range(1, len(t_upper) + 1) if has(tl, t_upper[j - 1])]
            in_partners = [j for j in range(1, len(t_upper) + 1) if has(t_upper[j - 1], tl)]
            if out_partners:
                temp_in[i] = Level.finite(max(out_partners), i, n)
            if in_partners:
                temp_out[i] = Level.finite(min(in_partners), i, n)
        new_in = list(temp_in)
        new_out = list(temp_out)
        if not mutations.SKIP_LEVEL_SHIFT_PASS:
            for i in range(1, k + 1):
                if new_in[i] is None:
                    continue
                base = new_in[i].value - Fraction(i, n)
                prior = [
                    new_out[j].value - Fraction(j, n)
                    for j in range(1, i)
                    if new_out[j] is not None
                ]
                if not prior:
                    continue
                delta = max(prior) - base
                if delta <= 0:
                    continue
                if delta.denominator != 1:
                    raise GadgetInvariantError("level shift must be integral")
                for j in range(i, k + 1):
                    if new_in[j] is not None:
                        new_in[j] = new_in[j].shifted(delta)
                    if new_out[j] is not None:
                        new_out[j] = new_out[j].shifted(delta)
        if self.checks:
            self._assert_level_invariants(temp_in, temp_out, new_in, new_out)
        return new_in, new_out

    def _assert_level_invariants(self, temp_in, temp_out, new_in, new_out):
        k = len(temp_in) - 1
        # in/out separation: later in-levels strictly exceed earlier out-levels
        for i in range(1, k + 1):
            if new_in[i] is None:
                continue
            for j in range(1, i):
                if new_out[j] is not None and not (new_in[i] > new_out[j]):
                    raise LevelInvariantError(
                        f"in-level of index {i} not above out-level of index {j}"
                    )
        # strict index monotonicity and order preservation across the shift
        for arr_t, arr_f, kind in (
            (temp_in, new_in, "in"),
            (temp_out, new_out, "out"),
        ):
            prev_t = prev_f = None
            for i in range(1, k + 1):
                if arr_t[i] is None:
                    continue
                if prev_t is not None and not (arr_t[i] > prev_t and arr_f[i] > prev_f):
                    raise LevelInvariantError(
                        f"{kind}-levels are not strictly increasing with index"
                    )
                prev_t, prev_f = arr_t[i], arr_f[i]
        for i in range(1, k + 1):
            for j in range(1, i):
                for a_t, a_f in ((temp_in, new_in), (temp_out, new_out)):
                    for b_t, b_f in ((temp_in, new_in), (temp_out, new_out)):
                        if a_t[i] is None or b_t[j] is None:
                            continue
                        if a_t[i] > b_t[j] and not (a_f[i] > b_f[j]):
                            raise LevelInvariantError(
                                "shift pass broke level order preservation"
                            )
        # magnitude: provisional dominance survives the shift
        for p in range(1, k + 1):
            for q in range(1, k + 1):
                if temp_in[p] is None or temp_out[q] is None:
                    continue
                if temp_in[p] >= temp_out[q] and not (new_in[p] >= new_out[q]):
                    raise LevelInvariantError(
                        "shift pass broke level magnitude preservation"
                    )

    # -- planarisation ------------------------------------------------------------

    def make_planar(self, keys: list[EdgeKey], why: str) -> int:
        """Subdivide pairwise crossings among the given drawn edges.

        Crossing points become fresh inner vertices shared by every segment
        through them (in particular by a chord and its reverse).  Each
        subdivided edge turns into a mandatory-successor chain whose first
        piece keeps the original labels while later pieces carry
        ``out -> out`` pass-through labels.
        """
        c = self.coords
        ic = self.icoords
        keys = [k for k in keys if k in self.edges]
        hits: dict[EdgeKey, list[Point]] = {}
        point_ids: dict[Point, int] = {}
        # float bounding boxes and orientations screen the pairs; only pairs
        # the floats cannot decisively clear are re-examined with the exact
        # integer-scaled coordinates, so the outcome stays exact
        fpts = [
            (
                float(ic[k[0]][0]),
                float(ic[k[0]][1]),
                float(ic[k[1]][0]),
                float(ic[k[1]][1]),
            )
            for k in keys
        ]
        boxes = [
            (min(x1, x2), min(y1, y2), max(x1, x2), max(y1, y2))
            for x1, y1, x2, y2 in fpts
        ]
        mag = max((max(abs(v) for v in f) for f in fpts), default=1.0) or 1.0
        box_slack = 1e-9 * mag + 1.0
        orient_eps = 1e-9 * mag * mag + 1.0
        for i in range(len(keys)):
            ka = keys[i]
            ia = (ic[ka[0]], ic[ka[1]])
            x1, y1, x2, y2 = fpts[i]
            lx, ly, hx, hy = boxes[i]
            for j in range(i + 1, len(keys)):
                kb = keys[j]
                if set(ka) == set(kb):
                    continue  # reverse pair: same drawn segment
                blx, bly, bhx, bhy = boxes[j]
                if (
                    bhx < lx - box_slack
                    or blx > hx + box_slack
                    or bhy < ly - box_slack
                    or bly > hy + box_slack
                ):
                    continue
                x3, y3, x4, y4 = fpts[j]
                o1 = (x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)
                o2 = (x2 - x1) * (y4 - y1) - (y2 - y1) * (x4 - x1)
                o3 = (x4 - x3) * (y1 - y3) - (y4 - y3) * (x1 - x3)
                o4 = (x4 - x3) * (y2 - y3) - (y4 - y3) * (x2 - x3)
                if min(abs(o1), abs(o2), abs(o3), abs(o4)) > orient_eps and not (
                    (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0)
                ):
                    continue  # decisively non-collinear and non-crossing
                ib = (ic[kb[0]], ic[kb[1]])
                if segments_overlap(*ia, *ib):
                    raise GadgetInvariantError(f"drawn edges {ka} and {kb} overlap")
                if set(ia) & set(ib):
                    continue  # shared endpoint, no proper crossing possible
                if not segments_cross(*ia, *ib):
                    continue
                p = line_intersection(c[ka[0]], c[ka[1]], c[kb[0]], c[kb[1]])
                hits.setdefault(ka, []).append(p)
                hits.setdefault(kb, []).append(p)
        made = 0
        for key in keys:
            pts = hits.get(key)
            if not pts:
                continue
            tail, head = key
            a, b = c[tail], c[head]
            dx, dy = b[0] - a[0], b[1] - a[1]
            uniq = sorted(set(pts), key=lambda p: (p[0] - a[0]) * dx + (p[1] - a[1]) * dy)
            edge = self.edges.pop(key)
            if edge.ksucc is not None:
                raise GadgetInvariantError("re-subdividing a chained edge")
            vids = []
            for p in uniq:
                vid = point_ids.get(p)
                if vid is None:
                    vid = self.new_vertex(p, f"cross {why} {made}")
                    point_ids[p] = vid
                    made += 1
                vids.append(vid)
            path = [tail] + vids + [head]
            pass_labels = {(lb, lb) for (_, lb) in edge.labels}
            prev_key: Optional[EdgeKey] = None
            for idx in range(len(path) - 1):
                piece_key = (path[idx], path[idx + 1])
                piece = self.add_edge(*piece_key)
                piece.labels |= edge.labels if idx == 0 else pass_labels
                if prev_key is not None:
                    self.edges[prev_key].ksucc = piece_key
                prev_key = piece_key
        return made

    # -- one hub step -----------------------------------------------------------

    def run_step(self, chord: EdgeKey, lower_is_cw: bool) -> None:
        us, vs = chord
        m = len(self.cycle)
        pos = {v: i for i, v in enumerate(self.cycle)}
        pa, pb = pos[us], pos[vs]
        d_cw = (pb - pa) % m
        if lower_is_cw:
            lower = [self.cycle[(pa + i) % m] for i in range(1, d_cw)]
            upper_cycle = [self.cycle[(pb + i) % m] for i in range(m - d_cw + 1)]
        else:
            lower = [self.cycle[(pb + i) % m] for i in range(1, m - d_cw)]
            upper_cycle = [self.cycle[(pa + i) % m] for i in range(d_cw + 1)]
        lower_set = set(lower)
        upper_set = self.cycle_set - lower_set - {us, vs}

        crossing = [
            (a, b)
            for (a, b) in self.active_edges()
            if (a in lower_set and b in upper_set)
            or (a in upper_set and b in lower_set)
        ]
        s_lower = {a if a in lower_set else b for (a, b) in crossing}
        s_upper = {a if a in upper_set else b for (a, b) in crossing}

        # sealed edges are those stranded behind the chord after rerouting
        sealed_static = [
            (a, b)
            for (a, b) in self.active_edges()
            if (a in lower_set or b in lower_set) and (a, b) not in set(crossing)
        ]
        hub_point = self.place_hub(us, vs, lower, sealed_static, s_lower, s_upper)
        w = self.new_vertex(hub_point, f"hub {self.step}", snapped=True)

        # reroute crossing edges through the hub and add its boundary edges
        for (a, b) in crossing:
            del self.edges[(a, b)]
            self.add_edge(a, w)
            self.add_edge(w, b)
        self.add_edge(us, w).labels.add(PROHIBITED_LABEL)
        self.add_edge(w, vs).labels.add(PROHIBITED_LABEL)

        self._assign_labels(us, vs, w, s_lower, s_upper, lower_set)

        # reparent everything behind the chord onto the hub
        for v in range(self.n):
            if self.parent[v] in lower_set:
                self.parent[v] = w

        sealed = [
            (a, b)
            for (a, b) in self.edges
            if a in lower_set or b in lower_set
        ]
        self.make_planar(sealed, f"step {self.step}")

        new_cycle = upper_cycle + [w]
        self.cycle = new_cycle
        self.cycle_set = set(new_cycle)
        self.step += 1

    def _assign_labels(
        self,
        us: int,
        vs: int,
        w: int,
        s_lower: set[int],
        s_upper: set[int],
        lower_set: set[int],
    ) -> None:
        n = self.n
        has = self.circle.has
        children: dict[int, list[int]] = {}
        for v in range(n):
            children.setdefault(self.parent[v], []).append(v)
        if not children.get(us) or not children.get(vs):
            raise GadgetInvariantError("chord endpoint with no rim descendants")
        x_ref = min(children[us])
        y_ref = min(children[vs])

        def order_arc(members: list[int]) -> tuple[list[int], Optional[bool]]:
            """Order members from y_ref towards x_ref along one rim arc.

            Returns the ordered list and which arc was used (True = the
            clockwise tour from y_ref to x_ref)."""
            if not members:
                return [], None
            in_cw = all(cw_open(n, y_ref, x_ref, v) for v in members)
            in_acw = all(cw_open(n, x_ref, y_ref, v) for v in members)
            if in_cw == in_acw:
                raise GadgetInvariantError(
                    "rim descendants do not sit on a single arc"
                )
            if in_cw:
                return sorted(members, key=lambda v: (v - y_ref) % n), True
            return sorted(members, key=lambda v: (y_ref - v) % n), False

        t_lower_members = [v for v in range(n) if self.parent[v] in s_lower]
        t_upper_members = [v for v in range(n) if self.parent[v] in s_upper]
        t_lower, arc_l = order_arc(t_lower_members)
        t_upper, arc_u = order_arc(t_upper_members)
        if arc_l is not None and arc_u is not None and arc_l == arc_u:
            raise GadgetInvariantError("lower and upper descendants share an arc")

        new_in, new_out = self.calc_levels(t_lower, t_upper)

        old_in = {v: self.lin[v] for v in t_lower}
        old_out = {v: self.lout[v] for v in t_lower}

        # labels of the sealed side: entering the hub replays a descendant's
        # in-level bump, leaving it replays the out-level drop
        for i, v in enumerate(t_lower, start=1):
            u = self.parent[v]
            e_in = self.edges.get((u, w))
            if e_in is not None and old_in[v] is not None and new_in[i] is not None:
                e_in.labels.add((old_in[v], new_in[i]))
            e_out = self.edges.get((w, u))
            if e_out is not None and new_out[i] is not None and old_out[v] is not None:
                e_out.labels.add((new_out[i], old_out[v]))

        # labels of the surviving side: aggregate over reachable sealed-side
        # descendants (best out-level when entering, least in-level when leaving)
        for tu in t_upper:
            u = self.parent[tu]
            e_in = self.edges.get((u, w))
            if e_in is not None and self.lin[tu] is not None:
                cands = [
                    new_out[i]
                    for i, tl in enumerate(t_lower, start=1)
                    if has(tu, tl)
                ]
                if any(cv is None for cv in cands):
                    raise GadgetInvariantError("reachable descendant lost its out-level")
                if cands:
                    e_in.labels.add((self.lin[tu], max(cands)))
            e_out = self.edges.get((w, u))
            if e_out is not None and self.lout[tu] is not None:
                cands = [
                    new_in[i]
                    for i, tl in enumerate(t_lower, start=1)
                    if has(tl, tu)
                ]
                if any(cv is None for cv in cands):
                    raise GadgetInvariantError("reaching descendant lost its in-level")
                if cands:
                    e_out.labels.add((min(cands), self.lout[tu]))

        for i, v in enumerate(t_lower, start=1):
            self.lin[v] = new_in[i]
            self.lout[v] = new_out[i]

    # -- driver ------------------------------------------------------------------

    def build(self) -> GadgetGraph:
        guard = 0
        while True:
            picked = self.pick_chord()
            if picked is None:
                break
            self.run_step(*picked)
            guard += 1
            if guard > self.n:
                raise GadgetInvariantError("hub steps exceeded rim size")
        self.make_planar(self.active_edges(), "final")
        if self.next_vid > 6 * max(1, self.n):
            raise GadgetInvariantError(
                f"gadget grew to {self.next_vid} vertices for rim size {self.n}"
            )
        edges = {
            k: GadgetEdge(k[0], k[1], frozenset(e.labels), e.ksucc)
            for k, e in sorted(self.edges.items())
        }
        g = GadgetGraph(
            n_out=self.n,
            denominator=max(1, self.n),
            edges=edges,
            coords=dict(self.coords),
            provenance=dict(self.provenance),
        )
        g.kinv()  # validates injectivity
        return g


def transform(circle: CircleGraph, checks: bool = True) -> GadgetGraph:
    """Build the plane gadget graph equivalent to a block's circle graph."""
    return _Builder(circle, checks).build()


# -- drawing check ----------------------------------------------------------------


def planarity_violations(g: GadgetGraph, limit: int = 10) -> list[str]:
    """Straight-segment crossing report for a gadget drawing (empty = plane)."""
    segments = [
        (k, g.coords[k[0]], g.coords[k[1]]) for k in g.edges
    ]
    points = [(v, p) for v, p in g.coords.items()]
    return drawing_violations(segments, points, limit=limit)


# -- debug dump --------------------------------------------------------------------


def dump_gadget(g: GadgetGraph) -> str:
    lines = [f"gadget {g.n_out} {g.n_inner}"]
    for v in sorted(g.coords):
        x, y = g.coords[v]
        lines.append(
            f"v {v} {x.numerator}/{x.denominator} {y.numerator}/{y.denominator}"
            f" {g.provenance[v].replace(' ', '_')}"
        )
    edge_ids = {k: i for i, k in enumerate(sorted(g.edges))}
    for k in sorted(g.edges):
        e = g.edges[k]
        ksucc = "-" if e.ksucc is None else str(edge_ids[e.ksucc])
        labels = ",".join(
            f"{a.render()}->{b.render()}" for a, b in sorted(e.labels)
        )
        lines.append(f"ge {k[0]} {k[1]} K={ksucc} L={labels}")
    return "\n".join(lines) + "\n"
