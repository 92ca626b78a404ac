"""Compact rectangle complexes, planar-end completion, mirror doubling and
horizontal cylinder decomposition.

A :class:`FlatComplex` is a finite set of axis-parallel rectangles whose
sides are cut into segments.  Segments are either glued in pairs or left as
labelled boundary arcs: ``a`` (horizontal) or ``b`` (vertical).

Side parameters run counterclockwise around each rectangle of size w x h:
bottom ``s = x``, right ``s = y``, top ``s = w - x``, left ``s = h - y``.
Gluing a pair matches the start of one segment to the end of the other,
which is the orientation-compatible identification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import BoundaryMismatch, ComplexError, NoBArcs, NonAlternatingBoundary, NotClosed
from .surface import HalfPlaneSurface, as_rational

SIDES = ("B", "R", "T", "L")
DIRECTION = {"B": "E", "R": "N", "T": "W", "L": "S"}
MIRROR_X = {"B": "B", "T": "T", "R": "L", "L": "R"}
MIRROR_Y = {"B": "T", "T": "B", "R": "R", "L": "L"}


@dataclass(frozen=True, order=True)
class Segment:
    rect: int
    side: str
    s0: Fraction
    s1: Fraction

    @property
    def length(self) -> Fraction:
        return self.s1 - self.s0

    @property
    def horizontal(self) -> bool:
        return self.side in ("B", "T")


@dataclass(frozen=True)
class FlatComplex:
    rectangles: tuple[tuple[Fraction, Fraction], ...]
    pairs: tuple[tuple[Segment, Segment], ...]
    arcs: tuple[tuple[Segment, str], ...] = ()

    def __post_init__(self):
        rects = tuple((as_rational(w), as_rational(h)) for w, h in self.rectangles)
        object.__setattr__(self, "rectangles", rects)
        for w, h in rects:
            if w <= 0 or h <= 0:
                raise ComplexError("rectangles need positive width and height")
        cover: dict[tuple[int, str], list[Segment]] = {}
        for a, b in self.pairs:
            if a.length != b.length:
                raise ComplexError(f"glued segments {a} and {b} differ in length")
            if a.horizontal != b.horizontal:
                raise ComplexError(f"cannot glue horizontal to vertical: {a}, {b}")
            cover.setdefault((a.rect, a.side), []).append(a)
            cover.setdefault((b.rect, b.side), []).append(b)
        for seg, label in self.arcs:
            if label not in ("a", "b"):
                raise ComplexError(f"arc label must be 'a' or 'b', got {label!r}")
            if (label == "a") != seg.horizontal:
                raise ComplexError(f"{label}-arc {seg} has the wrong orientation")
            cover.setdefault((seg.rect, seg.side), []).append(seg)
        for i in range(len(rects)):
            for side in SIDES:
                segs = sorted(cover.get((i, side), []), key=lambda s: s.s0)
                pos = Fraction(0)
                for seg in segs:
                    if seg.s0 != pos or seg.s1 <= seg.s0:
                        raise ComplexError(f"side {side} of rectangle {i} is not partitioned at {pos}")
                    pos = seg.s1
                if pos != self.side_length(i, side):
                    raise ComplexError(f"side {side} of rectangle {i} is not fully covered")

    def side_length(self, rect: int, side: str) -> Fraction:
        w, h = self.rectangles[rect]
        return w if side in ("B", "T") else h

    def point(self, rect: int, side: str, s) -> tuple[Fraction, Fraction]:
        w, h = self.rectangles[rect]
        return {"B": (s, Fraction(0)), "R": (w, s), "T": (w - s, h), "L": (Fraction(0), h - s)}[side]

    @property
    def area(self) -> Fraction:
        return sum((w * h for w, h in self.rectangles), Fraction(0))

    @property
    def closed(self) -> bool:
        return not self.arcs

    def partner_map(self) -> dict[Segment, Segment]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def side_segments(self, rect: int, side: str) -> list[Segment]:
        segs = [s for p in self.pairs for s in p if s.rect == rect and s.side == side]
        segs += [s for s, _ in self.arcs if s.rect == rect and s.side == side]
        return sorted(segs, key=lambda s: s.s0)

    def to_poly(self) -> "PolyComplex":
        return _poly_from_complex(self)[0]


def single_rectangle(W, h) -> FlatComplex:
    """A W x h rectangle with a-arcs on top and bottom and b-arcs on the sides."""
    W, h = as_rational(W), as_rational(h)
    arcs = (
        (Segment(0, "B", Fraction(0), W), "a"),
        (Segment(0, "T", Fraction(0), W), "a"),
        (Segment(0, "R", Fraction(0), h), "b"),
        (Segment(0, "L", Fraction(0), h), "b"),
    )
    return FlatComplex(((W, h),), (), arcs)


def notch_complex(surface: HalfPlaneSurface, h) -> FlatComplex:
    """Keep the part of each half-plane of height ``h`` above its finite boundary.

    Rectangle k spans the finite boundary of plane k; its bottom is glued as
    the surface glues those intervals, its top is an a-arc and its side walls
    are b-arcs.
    """
    h = as_rational(h)
    index = {}
    rects = []
    for p in surface.planes:
        if p.n_finite == 0:
            raise ComplexError(f"plane {p.id} has no finite boundary")
        index[p.id] = len(rects)
        rects.append((p.width, h))
    pairs, arcs = [], []
    for a, b in surface.gluing.pairs:
        if isinstance(a[1], str):
            continue
        segs = []
        for pid, k in (a, b):
            p = surface.plane(pid)
            iv = p.interval(k)
            x0 = p.cuts[0]
            segs.append(Segment(index[pid], "B", iv.left - x0, iv.right - x0))
        pairs.append(tuple(segs))
    for i, (w, _) in enumerate(rects):
        arcs.append((Segment(i, "T", Fraction(0), w), "a"))
        arcs.append((Segment(i, "R", Fraction(0), h), "b"))
        arcs.append((Segment(i, "L", Fraction(0), h), "b"))
    return FlatComplex(tuple(rects), tuple(pairs), tuple(arcs))


def truncation_complex(n: int, H, a=0, h=None) -> FlatComplex:
    """n rectangles of height ``h`` (default H/2) and widths ``H + a, H, ..., H``
    whose boundary is one alternating polygon with b-sides of length ``2h``."""
    from .builders import truncation_core

    H = as_rational(H)
    h = H / 2 if h is None else as_rational(h)
    return notch_complex(truncation_core(n, H, a), h)


def subdivide(cx: FlatComplex, rect: int, x) -> FlatComplex:
    """Cut rectangle ``rect`` by the vertical line at ``x``; the two halves are glued back."""
    x = as_rational(x)
    w, h = cx.rectangles[rect]
    if not 0 < x < w:
        raise ComplexError("cut must be interior")
    pairs = [list(p) for p in cx.pairs]
    arcs = [[s, lab] for s, lab in cx.arcs]
    # split bottom/top segments through the cut (and their partners)
    cuts = {"B": x, "T": w - x}
    changed = True
    while changed:
        changed = False
        for pi, (a, b) in enumerate(pairs):
            for me, other in ((a, b), (b, a)):
                if me.rect == rect and me.side in cuts and me.s0 < cuts[me.side] < me.s1:
                    t = cuts[me.side] - me.s0
                    m1, m2 = Segment(me.rect, me.side, me.s0, me.s0 + t), Segment(me.rect, me.side, me.s0 + t, me.s1)
                    o1 = Segment(other.rect, other.side, other.s0, other.s1 - t)
                    o2 = Segment(other.rect, other.side, other.s1 - t, other.s1)
                    pairs[pi] = [m1, o2]
                    pairs.append([m2, o1])
                    changed = True
                    break
            if changed:
                break
    for ai, (s, lab) in enumerate(list(arcs)):
        if s.rect == rect and s.side in cuts and s.s0 < cuts[s.side] < s.s1:
            c = cuts[s.side]
            arcs[ai] = [Segment(rect, s.side, s.s0, c), lab]
            arcs.append([Segment(rect, s.side, c, s.s1), lab])
    new_id = len(cx.rectangles)
    rects = list(cx.rectangles)
    rects[rect] = (x, h)
    rects.append((w - x, h))

    def move(seg: Segment) -> Segment:
        if seg.rect != rect:
            return seg
        if seg.side == "B" and seg.s0 >= x:
            return Segment(new_id, "B", seg.s0 - x, seg.s1 - x)
        if seg.side == "T" and seg.s1 <= w - x:
            return Segment(new_id, "T", seg.s0, seg.s1)
        if seg.side == "T":
            return Segment(rect, "T", seg.s0 - (w - x), seg.s1 - (w - x))
        if seg.side == "R":
            return Segment(new_id, "R", seg.s0, seg.s1)
        return seg

    new_pairs = [(move(a), move(b)) for a, b in pairs]
    new_pairs.append((Segment(rect, "R", Fraction(0), h), Segment(new_id, "L", Fraction(0), h)))
    new_arcs = [(move(s), lab) for s, lab in arcs]
    return FlatComplex(tuple(rects), tuple(new_pairs), tuple(new_arcs))


# ---------------------------------------------------------------------------
# polygon complexes: the shared CW structure


@dataclass
class PolyEdge:
    cell: int
    length: Fraction | None  # None: a ray to an ideal vertex
    direction: str  # E, N, W, S in the cell's own chart
    tag: object = None


class PolyComplex:
    """Polygonal cells glued along edges; corners carry angles in quarter turns.

    ``angles[c][k]`` is the angle at the corner where edge ``k`` of cell ``c``
    starts; ``None`` marks an ideal vertex (a point at infinity).
    """

    def __init__(self):
        self.cell_edges: list[list[int]] = []
        self.angles: list[list[int | None]] = []
        self.edges: dict[int, PolyEdge] = {}
        self.glue: dict[int, int] = {}
        self._next = 0

    def add_cell(self, edges: Sequence[tuple], angles: Sequence[int | None]) -> list[int]:
        cid = len(self.cell_edges)
        ids = []
        for length, direction, tag in edges:
            self.edges[self._next] = PolyEdge(cid, None if length is None else as_rational(length), direction, tag)
            ids.append(self._next)
            self._next += 1
        self.cell_edges.append(ids)
        self.angles.append(list(angles))
        return ids

    def pair(self, e: int, f: int) -> None:
        if e in self.glue or f in self.glue or e == f:
            raise ComplexError("edge already glued")
        if self.edges[e].length != self.edges[f].length:
            raise BoundaryMismatch(f"edge lengths differ: {self.edges[e].length} vs {self.edges[f].length}")
        self.glue[e] = f
        self.glue[f] = e

    def position(self, e: int) -> tuple[int, int]:
        c = self.edges[e].cell
        return c, self.cell_edges[c].index(e)

    def start_corner(self, e: int) -> tuple[int, int]:
        return self.position(e)

    def end_corner(self, e: int) -> tuple[int, int]:
        c, k = self.position(e)
        return c, (k + 1) % len(self.cell_edges[c])

    def next_edge(self, e: int) -> int:
        c, k = self.position(e)
        es = self.cell_edges[c]
        return es[(k + 1) % len(es)]

    def split(self, e: int, t) -> tuple[int, int]:
        """Split edge ``e`` at distance ``t`` from its start (and its partner accordingly)."""
        t = as_rational(t)
        info = self.edges[e]
        if info.length is None or not 0 < t < info.length:
            raise ComplexError("split point must be interior to a finite edge")
        partner = self.glue.pop(e, None)
        if partner is not None:
            del self.glue[partner]
        c, k = self.position(e)
        e1, e2 = self._next, self._next + 1
        self._next += 2
        self.edges[e1] = PolyEdge(c, t, info.direction, info.tag)
        self.edges[e2] = PolyEdge(c, info.length - t, info.direction, info.tag)
        del self.edges[e]
        self.cell_edges[c][k : k + 1] = [e1, e2]
        self.angles[c].insert(k + 1, 2)
        if partner is not None:
            f1, f2 = self.split(partner, info.length - t)
            self.pair(e1, f2)
            self.pair(e2, f1)
        return e1, e2

    def boundary_edges(self) -> list[int]:
        return [e for e in self.edges if e not in self.glue]

    def boundary_step(self, e: int) -> tuple[int, int | None]:
        """Next boundary edge after ``e`` and the total angle at the junction."""
        total = 0
        cur = e
        while True:
            c, k = self.end_corner(cur)
            ang = self.angles[c][k]
            if ang is None:
                return self.next_edge(cur), None
            total += ang
            nxt = self.next_edge(cur)
            if nxt not in self.glue:
                return nxt, total
            cur = self.glue[nxt]

    def boundary_cycles(self) -> list[list[tuple[int, int | None]]]:
        seen = set()
        cycles = []
        for e in sorted(self.boundary_edges()):
            if e in seen:
                continue
            cyc = []
            cur = e
            while cur not in seen:
                seen.add(cur)
                nxt, ang = self.boundary_step(cur)
                cyc.append((cur, ang))
                cur = nxt
            cycles.append(cyc)
        return cycles

    def corner_classes(self) -> dict[tuple[int, int], tuple[int, int]]:
        corners = [(c, k) for c, es in enumerate(self.cell_edges) for k in range(len(es))]
        ds = DisjointSet(corners)
        for e, f in self.glue.items():
            ds.merge(self.start_corner(e), self.end_corner(f))
            ds.merge(self.end_corner(e), self.start_corner(f))
        return {c: min(ds.subset(c)) for c in corners}

    def vertices(self) -> dict[tuple[int, int], list[tuple[int, int]]]:
        groups: dict = {}
        for c, rep in self.corner_classes().items():
            groups.setdefault(rep, []).append(c)
        return dict(sorted(groups.items()))

    def boundary_corners(self) -> set[tuple[int, int]]:
        out = set()
        for e in self.boundary_edges():
            out.add(self.start_corner(e))
            out.add(self.end_corner(e))
        return out

    def euler_characteristic(self) -> int:
        n_edges = len(self.glue) // 2 + len(self.boundary_edges())
        return len(self.vertices()) - n_edges + len(self.cell_edges)

    def genus(self) -> int:
        b = len(self.boundary_cycles())
        chi = self.euler_characteristic()
        if (2 - chi - b) % 2:
            raise ComplexError("non-orientable or inconsistent gluing")
        return (2 - chi - b) // 2

    def cone_angles(self) -> list[tuple[tuple[int, int], int, bool]]:
        """``(vertex, quarter turns, on_boundary)`` for every finite vertex."""
        bd = self.boundary_corners()
        rep_bd = {self.corner_classes()[c] for c in bd}
        out = []
        for rep, members in self.vertices().items():
            angs = [self.angles[c][k] for c, k in members]
            if any(a is None for a in angs):
                continue
            out.append((rep, sum(angs), rep in rep_bd))
        return out

    def ideal_cycles(self) -> list[list[int]]:
        """Cells around each ideal vertex, in the order crossed by rays."""
        cycles = []
        seen = set()
        for c, angs in enumerate(self.angles):
            if c in seen or None not in angs:
                continue
            cyc = [c]
            seen.add(c)
            cur = c
            while True:
                k = self.angles[cur].index(None)
                out_ray = self.cell_edges[cur][k - 1]  # the ray ending at the ideal corner
                nxt = self.edges[self.glue[out_ray]].cell
                if nxt == c:
                    break
                if nxt in seen:
                    raise ComplexError("ideal vertex cycle is inconsistent")
                cyc.append(nxt)
                seen.add(nxt)
                cur = nxt
            cycles.append(cyc)
        return cycles

    def cell_width(self, c: int) -> Fraction:
        total = Fraction(0)
        for e in self.cell_edges[c]:
            info = self.edges[e]
            if info.length is None:
                continue
            if info.direction == "E":
                total += info.length
            elif info.direction == "W":
                total -= info.length
        return total


def _poly_from_complex(cx: FlatComplex):
    poly = PolyComplex()
    seg_edge: dict[Segment, int] = {}
    corner_point: dict[tuple[int, int], tuple[int, Fraction, Fraction]] = {}
    labels = {s: lab for s, lab in cx.arcs}
    for i in range(len(cx.rectangles)):
        spec, angles, segs = [], [], []
        for side in SIDES:
            for j, seg in enumerate(cx.side_segments(i, side)):
                spec.append((seg.length, DIRECTION[side], labels.get(seg)))
                angles.append(1 if j == 0 else 2)
                segs.append(seg)
        ids = poly.add_cell(spec, angles)
        for k, (eid, seg) in enumerate(zip(ids, segs)):
            seg_edge[seg] = eid
            x, y = cx.point(i, seg.side, seg.s0)
            corner_point[(i, k)] = (i, x, y)
    for a, b in cx.pairs:
        poly.pair(seg_edge[a], seg_edge[b])
    return poly, seg_edge, corner_point


# ---------------------------------------------------------------------------
# boundary


@dataclass(frozen=True)
class BoundaryArc:
    label: str
    length: Fraction
    edges: tuple[int, ...]


@dataclass(frozen=True)
class BoundaryCycle:
    arcs: tuple[BoundaryArc, ...]
    angles: tuple[int, ...]  # quarter turns at the junction after each arc

    @property
    def sides(self) -> tuple[Fraction, ...]:
        return tuple(a.length for a in self.arcs)

    @property
    def labels(self) -> str:
        return "".join(a.label for a in self.arcs)


def _cycles_of(poly: PolyComplex) -> list[BoundaryCycle]:
    out = []
    for cyc in poly.boundary_cycles():
        items = [(e, poly.edges[e].tag, poly.edges[e].length, ang) for e, ang in cyc]
        for e, lab, _, _ in items:
            if lab not in ("a", "b"):
                raise NonAlternatingBoundary(f"boundary edge {e} carries no a/b label")
        # rotate so that the cycle starts right after a non-straight junction
        breaks = [j for j, it in enumerate(items) if not (it[1] == items[(j + 1) % len(items)][1] and it[3] == 2)]
        if not breaks:
            total = sum(it[2] for it in items)
            out.append(BoundaryCycle((BoundaryArc(items[0][1], total, tuple(it[0] for it in items)),), ()))
            continue
        start = (breaks[0] + 1) % len(items)
        items = items[start:] + items[:start]
        arcs, angles = [], []
        cur_edges, cur_len = [], Fraction(0)
        for j, (e, lab, ln, ang) in enumerate(items):
            cur_edges.append(e)
            cur_len += ln
            nxt_lab = items[(j + 1) % len(items)][1]
            if nxt_lab == lab and ang == 2:
                continue
            if nxt_lab == lab:
                raise NonAlternatingBoundary(f"two {lab}-arcs meet at a corner (angle {ang}/4 turns)")
            arcs.append(BoundaryArc(lab, cur_len, tuple(cur_edges)))
            angles.append(ang)
            cur_edges, cur_len = [], Fraction(0)
        out.append(BoundaryCycle(tuple(arcs), tuple(angles)))
    return out


def validate_polygonal_boundary(cx: FlatComplex) -> list[BoundaryCycle]:
    """Boundary cycles as alternating a/b side lists (complex on the left)."""
    return _cycles_of(cx.to_poly())


# ---------------------------------------------------------------------------
# planar end completion


@dataclass
class MixedSurface:
    """Rectangles and notched half-planes glued into one flat surface."""

    poly: PolyComplex
    rect_cells: int
    notch_cells: list[int] = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return not self.poly.boundary_edges()

    def genus(self) -> int:
        return self.poly.genus()

    def zeros(self) -> list[int]:
        """Zero order of every interior finite vertex (0 for regular points)."""
        out = []
        for _, quarters, on_bd in self.poly.cone_angles():
            if on_bd:
                continue
            if quarters % 2:
                raise ComplexError("cone angle is not a multiple of pi")
            out.append(quarters // 2 - 2)
        return out

    def ends(self) -> list[tuple[int, Fraction, tuple[Fraction, ...]]]:
        """``(order, residue, widths)`` per ideal vertex."""
        out = []
        for cyc in self.poly.ideal_cycles():
            widths = tuple(self.poly.cell_width(c) for c in cyc)
            if len(cyc) % 2:
                res = Fraction(0)
            else:
                res = abs(sum(w if i % 2 == 0 else -w for i, w in enumerate(widths)))
            out.append((len(cyc) + 2, res, widths))
        return out

    def gauss_bonnet(self) -> tuple[int, int, bool]:
        if not self.closed:
            raise NotClosed("surface still has boundary")
        lhs = sum(self.zeros()) - sum(o for o, _, _ in self.ends())
        rhs = 4 * self.genus() - 4
        return lhs, rhs, lhs == rhs


def _glue_chain(poly: PolyComplex, chain_a: list[int], chain_b: list[int]) -> None:
    """Glue two straight chains of boundary edges, start of one to end of the other."""
    total_a = sum(poly.edges[e].length for e in chain_a)
    total_b = sum(poly.edges[e].length for e in chain_b)
    if total_a != total_b:
        raise BoundaryMismatch(f"chains have lengths {total_a} and {total_b}")

    def breaks(chain):
        out, pos = [], Fraction(0)
        for e in chain[:-1]:
            pos += poly.edges[e].length
            out.append(pos)
        return out

    cut_a = set(breaks(chain_a)) | {total_a - t for t in breaks(chain_b)}

    def refine(chain, cuts):
        out, pos = [], Fraction(0)
        for e in chain:
            ln = poly.edges[e].length
            inner = sorted(c - pos for c in cuts if pos < c < pos + ln)
            cur = e
            done = Fraction(0)
            for t in inner:
                left, cur = poly.split(cur, t - done)
                out.append(left)
                done = t
            out.append(cur)
            pos += ln
        return out

    pieces_a = refine(chain_a, cut_a)
    pieces_b = refine(chain_b, {total_a - c for c in cut_a})
    for e, f in zip(pieces_a, reversed(pieces_b)):
        poly.pair(e, f)


def glue_planar_end(cx: FlatComplex, cycle: int, H, a) -> MixedSurface:
    """Close up one boundary cycle by gluing in n notched half-planes.

    The cycle must consist of n horizontal a-sides (all ``H`` except one
    ``H + a``) alternating with n vertical b-sides of length ``H``.  Each
    notched half-plane is an upper half-plane minus a notch of height H/2;
    its notch top is glued to an a-side and its two walls to halves of the
    neighbouring b-sides.
    """
    H, a = as_rational(H), as_rational(a)
    poly = cx.to_poly()
    cycles = _cycles_of(poly)
    if not 0 <= cycle < len(cycles):
        raise BoundaryMismatch(f"no boundary cycle {cycle}")
    cyc = cycles[cycle]
    arcs = list(cyc.arcs)
    if arcs[0].label != "a":
        arcs = arcs[1:] + arcs[:1]
    n = len(arcs) // 2
    if n < 2 or len(arcs) % 2:
        raise BoundaryMismatch(f"a planar end needs at least 2 alternating side pairs, got {len(arcs)} sides")
    a_sides, b_sides = arcs[0::2], arcs[1::2]
    if any(s.label != "a" for s in a_sides) or any(s.label != "b" for s in b_sides):
        raise BoundaryMismatch("sides do not alternate a/b")
    if any(s.length != H for s in b_sides):
        raise BoundaryMismatch(f"vertical sides must have length {H}")
    widths = [s.length for s in a_sides]
    big = [w for w in widths if w != H]
    if a == 0 and big:
        raise BoundaryMismatch(f"horizontal sides must all be {H}")
    if a != 0 and (n % 2 or len(big) != 1 or big[0] != H + a):
        raise BoundaryMismatch(f"need exactly one horizontal side {H + a} on an even cycle, others {H}")
    if H <= 0 or a < 0:
        raise BoundaryMismatch("need H > 0 and a >= 0")

    first = len(poly.cell_edges)
    cells = []
    for k in range(n):
        j = (-k) % n
        w = widths[j]
        ids = poly.add_cell(
            [(None, "E", "L"), (H / 2, "N", "up"), (w, "E", "top"), (H / 2, "S", "down"), (None, "E", "R")],
            [None, 1, 3, 3, 1],
        )
        cells.append(ids)
    for k in range(n):
        j = (-k) % n
        _glue_chain(poly, [cells[k][2]], list(a_sides[j].edges))
        b = b_sides[(j - 1) % n]
        nxt = cells[(k + 1) % n]
        _glue_chain(poly, [cells[k][3], nxt[1]], list(b.edges))
        poly.pair(cells[k][4], nxt[0])
    return MixedSurface(poly, first, list(range(first, first + n)))


# ---------------------------------------------------------------------------
# doubling


@dataclass(frozen=True)
class RectInvolution:
    """Maps rectangle i to ``image[i]`` by the mirror ``flip`` ('x' or 'y')."""

    image: tuple[int, ...]
    flip: str

    def segment(self, seg: Segment, cx: FlatComplex) -> Segment:
        side_map = MIRROR_X if self.flip == "x" else MIRROR_Y
        ln = cx.side_length(seg.rect, seg.side)
        return Segment(self.image[seg.rect], side_map[seg.side], ln - seg.s1, ln - seg.s0)

    def fixed_segments(self, cx: FlatComplex) -> list[Segment]:
        """Glued segments whose partner is their own mirror image (pointwise fixed)."""
        partner = cx.partner_map()
        return sorted(s for s, t in partner.items() if self.segment(s, cx) == t)

    def compose(self, other: "RectInvolution") -> tuple[int, ...]:
        return tuple(self.image[other.image[i]] for i in range(len(self.image)))


def _mirror(cx: FlatComplex, flip: str, offset: int) -> tuple[list, list]:
    side_map = MIRROR_X if flip == "x" else MIRROR_Y

    def m(seg: Segment) -> Segment:
        ln = cx.side_length(seg.rect, seg.side)
        return Segment(seg.rect + offset, side_map[seg.side], ln - seg.s1, ln - seg.s0)

    return [(m(a), m(b)) for a, b in cx.pairs], [(m(s), lab) for s, lab in cx.arcs]


def _double(cx: FlatComplex, flip: str, label: str) -> tuple[FlatComplex, RectInvolution]:
    n = len(cx.rectangles)
    glued = [s for s, lab in cx.arcs if lab == label]
    m_pairs, m_arcs = _mirror(cx, flip, n)
    side_map = MIRROR_X if flip == "x" else MIRROR_Y
    pairs = list(cx.pairs) + m_pairs
    for s in glued:
        ln = cx.side_length(s.rect, s.side)
        pairs.append((s, Segment(s.rect + n, side_map[s.side], ln - s.s1, ln - s.s0)))
    arcs = [(s, lab) for s, lab in list(cx.arcs) + m_arcs if lab != label]
    image = tuple(range(n, 2 * n)) + tuple(range(n))
    return FlatComplex(cx.rectangles * 2, tuple(pairs), tuple(arcs)), RectInvolution(image, flip)


def double_b(cx: FlatComplex) -> tuple[FlatComplex, RectInvolution]:
    """Glue the complex to its left-right mirror image along every b-arc."""
    if not any(lab == "b" for _, lab in cx.arcs):
        raise NoBArcs("complex has no b-arcs")
    return _double(cx, "x", "b")


@dataclass(frozen=True)
class Quadrupled:
    complex: FlatComplex
    involution_b: RectInvolution  # left-right mirror, fixes the b-locus
    involution_a: RectInvolution  # up-down mirror, fixes the a-locus


def quadruple(cx: FlatComplex) -> Quadrupled:
    """Double along b-arcs, then double the result along a-arcs: a closed surface."""
    validate_polygonal_boundary(cx)
    d, inv_b = double_b(cx)
    q, inv_a = _double(d, "y", "a")
    n2 = len(d.rectangles)
    inv_b_full = RectInvolution(inv_b.image + tuple(i + n2 for i in inv_b.image), "x")
    return Quadrupled(q, inv_b_full, inv_a)


def fundamental_domain(result: Quadrupled) -> tuple[tuple[Fraction, Fraction], ...]:
    """Rectangles of one orbit representative each under the two involutions."""
    seen, reps = set(), []
    for i in range(len(result.complex.rectangles)):
        if i in seen:
            continue
        orbit = {i, result.involution_b.image[i], result.involution_a.image[i]}
        orbit.add(result.involution_a.image[result.involution_b.image[i]])
        seen |= orbit
        reps.append(result.complex.rectangles[i])
    return tuple(reps)


# ---------------------------------------------------------------------------
# cylinders


@dataclass(frozen=True)
class CylinderReport:
    cylinders: tuple[tuple[Fraction, Fraction], ...]  # (circumference, height)

    @property
    def area(self) -> Fraction:
        return sum((c * h for c, h in self.cylinders), Fraction(0))


def horizontal_cylinder_decomposition(cx: FlatComplex) -> CylinderReport:
    """Maximal horizontal cylinders of a closed rectangle complex."""
    if not cx.closed:
        raise NotClosed("complex has boundary arcs")
    partner = cx.partner_map()
    poly, _, corner_point = _poly_from_complex(cx)
    classes = poly.corner_classes()
    quarters: dict = {}
    for c, rep in classes.items():
        quarters[rep] = quarters.get(rep, 0) + poly.angles[c[0]][c[1]]
    point_angle = {corner_point[c]: quarters[rep] for c, rep in classes.items()}

    def to_s(rect, side, y):
        return y if side == "R" else cx.rectangles[rect][1] - y

    def to_y(rect, side, s):
        return s if side == "R" else cx.rectangles[rect][1] - s

    def across(rect, side, y):
        """Where the point at height y on a vertical side is glued to."""
        s = to_s(rect, side, y)
        for seg in cx.side_segments(rect, side):
            if seg.s0 <= s <= seg.s1:
                other = partner[seg]
                t = other.s0 + other.s1 - s
                return other.rect, other.side, to_y(other.rect, other.side, t)
        raise ComplexError("point not on side")

    heights = {i: {Fraction(0), h} for i, (_, h) in enumerate(cx.rectangles)}
    for i in range(len(cx.rectangles)):
        for side in ("R", "L"):
            for seg in cx.side_segments(i, side):
                heights[i] |= {to_y(i, side, seg.s0), to_y(i, side, seg.s1)}
    todo = [(i, y) for i, ys in heights.items() for y in ys]
    while todo:
        i, y = todo.pop()
        for side in ("R", "L"):
            j, _, y2 = across(i, side, y)
            if y2 not in heights[j]:
                heights[j].add(y2)
                todo.append((j, y2))
    levels = {i: sorted(ys) for i, ys in heights.items()}
    strips = [(i, y0, y1) for i, ys in levels.items() for y0, y1 in zip(ys, ys[1:])]

    def step(strip, d):
        i, y0, y1 = strip
        side = "R" if d > 0 else "L"
        j, jside, a = across(i, side, y0)
        _, _, b = across(i, side, y1)
        lo, hi = min(a, b), max(a, b)
        return (j, lo, hi), (1 if jside == "L" else -1)

    cycle_of, cycles = {}, []
    for st in strips:
        if st in cycle_of:
            continue
        cyc = [(st, 1)]
        cycle_of[st] = len(cycles)
        cur, d = step(st, 1)
        while cur != st:
            if cur in cycle_of:
                raise ComplexError("horizontal leaf does not close up")
            cycle_of[cur] = len(cycles)
            cyc.append((cur, d))
            cur, d = step(cur, d)
        cycles.append(cyc)

    def side_singular(i, side):
        w, h = cx.rectangles[i]
        y = Fraction(0) if side == "B" else h
        return any(point_angle[p] != 4 for p in point_angle if p[0] == i and p[2] == y)

    def leaf_singular(cyc, top=True):
        for (i, y0, y1), d in cyc:
            up = (d > 0) == top
            z = y1 if up else y0
            h = cx.rectangles[i][1]
            if z in (0, h):
                if side_singular(i, "T" if z == h else "B"):
                    return True
            else:
                w = cx.rectangles[i][0]
                for p in ((i, Fraction(0), z), (i, w, z)):
                    if point_angle.get(p, 4) != 4:
                        return True
        return False

    def neighbour(cyc, top=True):
        (i, y0, y1), d = cyc[0]
        ys = levels[i]
        h = cx.rectangles[i][1]
        up = (d > 0) == top
        z = y1 if up else y0
        if 0 < z < h:
            k = ys.index(z)
            return (i, z, ys[k + 1]) if up else (i, ys[k - 1], z)
        seg = cx.side_segments(i, "T" if z == h else "B")[0]
        other = partner[seg]
        j = other.rect
        return (j, levels[j][0], levels[j][1]) if other.side == "B" else (j, levels[j][-2], levels[j][-1])

    ds = DisjointSet(range(len(cycles)))
    for ci, cyc in enumerate(cycles):
        for top in (True, False):
            if not leaf_singular(cyc, top):
                ds.merge(ci, cycle_of[neighbour(cyc, top)])
    out = []
    for group in ds.subsets():
        group = sorted(group)
        circs = {sum(cx.rectangles[s[0]][0] for s, _ in cycles[c]) for c in group}
        if len(circs) != 1:
            raise ComplexError("merged strips have different circumferences")
        height = sum(cycles[c][0][0][2] - cycles[c][0][0][1] for c in group)
        out.append((circs.pop(), height))
    report = CylinderReport(tuple(sorted(out)))
    if report.area != cx.area:
        raise ComplexError(f"cylinder area {report.area} differs from complex area {cx.area}")
    return report
