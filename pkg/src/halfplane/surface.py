"""Half-plane surfaces: exact data model, metric spine and invariants.

A half-plane surface is a finite collection of euclidean upper half-planes
whose boundary lines are partitioned into intervals, glued in pairs by
orientation-reversing isometries.  Each half-plane's boundary is oriented
left to right (the half-plane lies on the left), and a glued pair matches
the left endpoint of one interval with the right endpoint of the other.

All boundary coordinates are :class:`fractions.Fraction`; every invariant
computed here is exact.

Slots
-----
An interval is addressed by a *slot* ``(plane_id, key)`` where ``key`` is
``"L"`` (left ray), ``"R"`` (right ray), ``"F"`` (full line) or an integer
``k`` (the k-th finite interval from the left).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from scipy.cluster.hierarchy import DisjointSet

from .errors import (
    DegenerateVertex,
    Disconnected,
    InvalidPath,
    KindMismatch,
    LengthMismatch,
    MalformedPartition,
    NonIntegerGenus,
    NotInvolution,
    SelfInfiniteGluing,
    SurfaceError,
    TooFewPlanes,
)

Key = Union[str, int]
Slot = tuple[int, Key]
Point = tuple[int, int]  # (plane id, cut index)


def as_rational(value) -> Fraction:
    """Convert ints, strings like ``"3/2"`` and Fractions to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not lengths")
    if isinstance(value, float):
        # floats are accepted but converted through their decimal repr so that
        # 0.1 means 1/10 rather than the nearest binary double
        return Fraction(repr(value))
    return Fraction(value)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Kind(str, Enum):
    FINITE = "finite"
    LEFT_RAY = "left_ray"
    RIGHT_RAY = "right_ray"
    FULL_LINE = "full_line"


def slot_sort_key(slot: Slot) -> tuple[int, int, int]:
    plane, key = slot
    if key in ("L", "F"):
        return (plane, 0, 0)
    if key == "R":
        return (plane, 2, 0)
    return (plane, 1, int(key))


def slot_label(slot: Slot) -> str:
    return f"{slot[0]}:{slot[1]}"


def parse_slot_label(text: str) -> Slot:
    plane, _, key = text.strip().partition(":")
    key = key.strip()
    return (int(plane), key if key in ("L", "R", "F") else int(key))


@dataclass(frozen=True)
class BoundaryInterval:
    kind: Kind
    left: Fraction | None = None
    right: Fraction | None = None

    def __post_init__(self):
        need_left = self.kind in (Kind.FINITE, Kind.RIGHT_RAY)
        need_right = self.kind in (Kind.FINITE, Kind.LEFT_RAY)
        if need_left != (self.left is not None) or need_right != (self.right is not None):
            raise MalformedPartition(f"endpoints do not match interval kind {self.kind.value}")
        if self.kind is Kind.FINITE and not self.left < self.right:
            raise MalformedPartition(f"finite interval [{self.left}, {self.right}] has non-positive length")

    @property
    def length(self) -> Fraction | None:
        if self.kind is Kind.FINITE:
            return self.right - self.left
        return None

    @property
    def is_infinite(self) -> bool:
        return self.kind is not Kind.FINITE


@dataclass(frozen=True)
class HalfPlane:
    """One upper half-plane and the partition of its boundary line."""

    id: int
    partition: tuple[BoundaryInterval, ...]

    def __post_init__(self):
        parts = self.partition
        if len(parts) == 1 and parts[0].kind is Kind.FULL_LINE:
            return
        if len(parts) < 2 or parts[0].kind is not Kind.LEFT_RAY or parts[-1].kind is not Kind.RIGHT_RAY:
            raise MalformedPartition(f"plane {self.id}: partition must run from a left ray to a right ray")
        for prev, cur in zip(parts, parts[1:]):
            if cur.kind in (Kind.LEFT_RAY, Kind.FULL_LINE) or prev.kind in (Kind.RIGHT_RAY, Kind.FULL_LINE):
                raise MalformedPartition(f"plane {self.id}: misplaced infinite interval")
            if prev.right != cur.left:
                raise MalformedPartition(f"plane {self.id}: gap or overlap at {prev.right} / {cur.left}")

    @classmethod
    def from_cuts(cls, id: int, cuts: Iterable) -> "HalfPlane":
        """Build a plane from its ascending cut points; no cuts means a full line."""
        cuts = [as_rational(c) for c in cuts]
        if not cuts:
            return cls(id, (BoundaryInterval(Kind.FULL_LINE),))
        parts = [BoundaryInterval(Kind.LEFT_RAY, right=cuts[0])]
        parts += [BoundaryInterval(Kind.FINITE, a, b) for a, b in zip(cuts, cuts[1:])]
        parts.append(BoundaryInterval(Kind.RIGHT_RAY, left=cuts[-1]))
        return cls(id, tuple(parts))

    @property
    def is_full_line(self) -> bool:
        return self.partition[0].kind is Kind.FULL_LINE

    @property
    def cuts(self) -> tuple[Fraction, ...]:
        if self.is_full_line:
            return ()
        return (self.partition[0].right,) + tuple(p.right for p in self.partition[1:-1])

    @property
    def keys(self) -> tuple[Key, ...]:
        if self.is_full_line:
            return ("F",)
        return ("L",) + tuple(range(len(self.partition) - 2)) + ("R",)

    @property
    def n_finite(self) -> int:
        return 0 if self.is_full_line else len(self.partition) - 2

    @property
    def width(self) -> Fraction:
        """Span of the finite part of the boundary (0 for a full line)."""
        cuts = self.cuts
        return cuts[-1] - cuts[0] if cuts else Fraction(0)

    def interval(self, key: Key) -> BoundaryInterval:
        if key == "F":
            if not self.is_full_line:
                raise KeyError(key)
            return self.partition[0]
        if self.is_full_line:
            raise KeyError(key)
        if key == "L":
            return self.partition[0]
        if key == "R":
            return self.partition[-1]
        if not 0 <= key < self.n_finite:
            raise KeyError(key)
        return self.partition[key + 1]

    def endpoints(self, key: Key) -> tuple[int | None, int | None]:
        """Cut indices of the left and right endpoint of an interval."""
        if key == "F":
            return (None, None)
        if key == "L":
            return (None, 0)
        if key == "R":
            return (len(self.cuts) - 1, None)
        return (key, key + 1)


@dataclass(frozen=True)
class GluingPairing:
    """A fixed-point-free involution on slots, stored as sorted pairs."""

    pairs: tuple[tuple[Slot, Slot], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Slot, Slot]]) -> "GluingPairing":
        seen: set[Slot] = set()
        canon = []
        for a, b in pairs:
            a = (int(a[0]), a[1])
            b = (int(b[0]), b[1])
            if a == b:
                raise NotInvolution(f"slot {slot_label(a)} is paired with itself", (a,))
            for s in (a, b):
                if s in seen:
                    raise NotInvolution(f"slot {slot_label(s)} is glued twice", (s,))
                seen.add(s)
            canon.append(tuple(sorted((a, b), key=slot_sort_key)))
        canon.sort(key=lambda p: slot_sort_key(p[0]))
        return cls(tuple(canon))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Slot, Slot]) -> "GluingPairing":
        pairs = []
        for a, b in mapping.items():
            if mapping.get(b) != a:
                raise NotInvolution(f"mapping is not an involution at {slot_label(a)}", (a,))
            if slot_sort_key(a) < slot_sort_key(b):
                pairs.append((a, b))
            elif a == b:
                raise NotInvolution(f"slot {slot_label(a)} is fixed", (a,))
        return cls.from_pairs(pairs)

    @cached_property
    def mapping(self) -> dict[Slot, Slot]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def partner(self, slot: Slot) -> Slot:
        return self.mapping[slot]


# ---------------------------------------------------------------------------
# derived data types


@dataclass(frozen=True)
class SpineVertex:
    id: str
    multiplicity: int
    instances: tuple[Point, ...]

    @property
    def regular(self) -> bool:
        return self.multiplicity == 2


@dataclass(frozen=True)
class SpineEdge:
    id: str
    slots: tuple[Slot, Slot]
    length: Fraction | None  # None marks an infinite edge
    ends: tuple[str, str]

    @property
    def infinite(self) -> bool:
        return self.length is None


@dataclass(frozen=True)
class MetricSpine:
    vertices: tuple[SpineVertex, ...]
    pole_vertices: tuple[str, ...]
    edges: tuple[SpineEdge, ...]
    faces: tuple[int, ...]
    connected: bool

    @property
    def finite_edges(self) -> tuple[SpineEdge, ...]:
        return tuple(e for e in self.edges if not e.infinite)

    @property
    def infinite_edges(self) -> tuple[SpineEdge, ...]:
        return tuple(e for e in self.edges if e.infinite)

    @property
    def regular_vertices(self) -> tuple[SpineVertex, ...]:
        return tuple(v for v in self.vertices if v.regular)

    def edge(self, edge_id: str) -> SpineEdge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)


@dataclass(frozen=True)
class Zero:
    vertex: str
    multiplicity: int

    @property
    def cone_angle_over_pi(self) -> int:
        return self.multiplicity

    @property
    def cone_angle(self) -> float:
        import math

        return self.multiplicity * math.pi

    @property
    def order(self) -> int:
        return self.multiplicity - 2

    @property
    def regular(self) -> bool:
        return self.multiplicity == 2


@dataclass(frozen=True)
class EndData:
    plane_cycle: tuple[int, ...]
    order: int
    widths: tuple[Fraction, ...]
    residue: Fraction
    start_index: int  # index in plane_cycle at which the alternating sum is non-negative

    @property
    def signed_sum(self) -> Fraction:
        """Alternating sum of widths starting at ``start_index`` (0 for odd cycles)."""
        if len(self.widths) % 2:
            return Fraction(0)
        return self.residue


@dataclass(frozen=True)
class Holonomy:
    """Planar isometry ``z -> sign * z + shift`` with real rational shift."""

    sign: int = 1
    shift: Fraction = Fraction(0)

    def __call__(self, z):
        return self.sign * z + self.shift

    def compose(self, other: "Holonomy") -> "Holonomy":
        """Return ``self o other``."""
        return Holonomy(self.sign * other.sign, self.sign * other.shift + self.shift)

    @property
    def is_translation(self) -> bool:
        return self.sign == 1

    @property
    def reverses_direction(self) -> bool:
        """True when the linear part is -1 (horizontal direction flipped)."""
        return self.sign == -1

    @property
    def translation_length(self) -> Fraction:
        if self.sign != 1:
            raise ValueError("holonomy is not a translation")
        return abs(self.shift)


@dataclass(frozen=True)
class GaussBonnetReport:
    lhs: int
    rhs: int
    ok: bool
    zero_orders: tuple[int, ...]
    pole_orders: tuple[int, ...]
    genus: int


# ---------------------------------------------------------------------------


def _vertex_name(point: Point) -> str:
    return f"v{point[0]}.{point[1]}"


@dataclass(frozen=True)
class HalfPlaneSurface:
    """Validated half-plane surface.  Construction checks every invariant."""

    planes: tuple[HalfPlane, ...]
    gluing: GluingPairing

    def __post_init__(self):
        _validate(self)

    # -- lookups -------------------------------------------------------------

    @cached_property
    def plane_index(self) -> dict[int, HalfPlane]:
        return {p.id: p for p in self.planes}

    def plane(self, plane_id: int) -> HalfPlane:
        return self.plane_index[plane_id]

    def interval(self, slot: Slot) -> BoundaryInterval:
        return self.plane_index[slot[0]].interval(slot[1])

    def partner(self, slot: Slot) -> Slot:
        return self.gluing.partner(slot)

    @property
    def slots(self) -> list[Slot]:
        return [(p.id, k) for p in self.planes for k in p.keys]

    def point_value(self, point: Point) -> Fraction:
        return self.plane_index[point[0]].cuts[point[1]]

    # -- vertex classes ------------------------------------------------------

    @cached_property
    def _classes(self) -> dict[Point, Point]:
        """Map each boundary point instance to the least instance of its class."""
        points = [(p.id, i) for p in self.planes for i in range(len(p.cuts))]
        ds = DisjointSet(points)
        for a, b in self.gluing.pairs:
            pa, pb = self.plane_index[a[0]], self.plane_index[b[0]]
            la, ra = pa.endpoints(a[1])
            lb, rb = pb.endpoints(b[1])
            # left endpoint of one matches the right endpoint of the other
            if la is not None and rb is not None:
                ds.merge((a[0], la), (b[0], rb))
            if ra is not None and lb is not None:
                ds.merge((a[0], ra), (b[0], lb))
        return {pt: min(ds.subset(pt)) for pt in points}

    @cached_property
    def vertex_classes(self) -> dict[str, tuple[Point, ...]]:
        groups: dict[Point, list[Point]] = {}
        for pt, rep in self._classes.items():
            groups.setdefault(rep, []).append(pt)
        return {_vertex_name(rep): tuple(sorted(v)) for rep, v in sorted(groups.items())}

    def vertex_of(self, point: Point) -> str:
        return _vertex_name(self._classes[point])

    # -- ends ----------------------------------------------------------------

    @cached_property
    def successor(self) -> dict[int, int]:
        """Plane reached by crossing the right ray (or full line) of each plane."""
        out = {}
        for p in self.planes:
            key = "F" if p.is_full_line else "R"
            out[p.id] = self.partner((p.id, key))[0]
        return out

    @cached_property
    def end_cycles(self) -> tuple[tuple[int, ...], ...]:
        seen: set[int] = set()
        cycles = []
        for p in self.planes:
            if p.id in seen:
                continue
            cyc = [p.id]
            seen.add(p.id)
            nxt = self.successor[p.id]
            while nxt != p.id:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.successor[nxt]
            cycles.append(tuple(cyc))
        return tuple(cycles)

    def end_of_plane(self, plane_id: int) -> int:
        for j, cyc in enumerate(self.end_cycles):
            if plane_id in cyc:
                return j
        raise KeyError(plane_id)

    @cached_property
    def connected(self) -> bool:
        ids = [p.id for p in self.planes]
        ds = DisjointSet(ids)
        for a, b in self.gluing.pairs:
            ds.merge(a[0], b[0])
        return ds.n_subsets == 1


def _validate(surface: HalfPlaneSurface) -> None:
    planes = surface.planes
    if len(planes) < 2:
        raise TooFewPlanes(f"a half-plane surface needs at least 2 planes, got {len(planes)}")
    ids = [p.id for p in planes]
    if len(set(ids)) != len(ids):
        raise SurfaceError("duplicate plane ids")
    index = {p.id: p for p in planes}
    mapping = surface.gluing.mapping
    expected = {(p.id, k) for p in planes for k in p.keys}
    for slot in mapping:
        if slot not in expected:
            raise NotInvolution(f"gluing refers to unknown slot {slot_label(slot)}", (slot,))
    for a, b in surface.gluing.pairs:
        ia, ib = index[a[0]].interval(a[1]), index[b[0]].interval(b[1])
        kinds = {ia.kind, ib.kind}
        if ia.kind is Kind.FINITE and ib.kind is Kind.FINITE:
            if ia.length != ib.length:
                raise LengthMismatch(
                    f"{slot_label(a)} (length {ia.length}) glued to {slot_label(b)} (length {ib.length})", (a, b)
                )
        elif kinds == {Kind.LEFT_RAY, Kind.RIGHT_RAY} or (ia.kind is ib.kind is Kind.FULL_LINE):
            if a[0] == b[0]:
                raise SelfInfiniteGluing(f"the two infinite intervals of plane {a[0]} are glued together", (a, b))
        else:
            raise KindMismatch(f"cannot glue {ia.kind.value} {slot_label(a)} to {ib.kind.value} {slot_label(b)}", (a, b))
    for slot in sorted(expected, key=slot_sort_key):
        if slot not in mapping:
            raise NotInvolution(f"slot {slot_label(slot)} is not glued", (slot,))
    for name, inst in surface.vertex_classes.items():
        if len(inst) < 2:
            # a folded interval: the point has cone angle pi, i.e. a simple pole
            raise DegenerateVertex(f"vertex {name} has multiplicity {len(inst)} (cone angle pi)", ())


def build_surface(planes: Sequence[HalfPlane], gluing: GluingPairing | Iterable[tuple[Slot, Slot]]) -> HalfPlaneSurface:
    """Validate and assemble a half-plane surface."""
    if not isinstance(gluing, GluingPairing):
        gluing = GluingPairing.from_pairs(gluing)
    return HalfPlaneSurface(tuple(sorted(planes, key=lambda p: p.id)), gluing)


def surface_from_cuts(cuts: Mapping[int, Sequence], pairs: Iterable[tuple[Slot, Slot]]) -> HalfPlaneSurface:
    """Shorthand: ``{plane_id: [cut, ...]}`` plus slot pairs."""
    planes = [HalfPlane.from_cuts(pid, cs) for pid, cs in cuts.items()]
    return build_surface(planes, pairs)


# ---------------------------------------------------------------------------
# operations


def spine(surface: HalfPlaneSurface) -> MetricSpine:
    """Quotient metric graph of the half-plane boundaries."""
    classes = surface.vertex_classes
    vertices = tuple(SpineVertex(name, len(inst), inst) for name, inst in classes.items())
    poles = tuple(f"p{j}" for j in range(len(surface.end_cycles)))
    edges = []
    for a, b in surface.gluing.pairs:
        plane = surface.plane(a[0])
        iv = plane.interval(a[1])
        lo, hi = plane.endpoints(a[1])
        if iv.kind is Kind.FINITE:
            ends = (surface.vertex_of((a[0], lo)), surface.vertex_of((a[0], hi)))
            edges.append(SpineEdge(slot_label(a), (a, b), iv.length, ends))
        else:
            pole = f"p{surface.end_of_plane(a[0])}"
            if iv.kind is Kind.FULL_LINE:
                ends = (pole, pole)
            else:
                pt = lo if lo is not None else hi
                ends = (surface.vertex_of((a[0], pt)), pole)
            edges.append(SpineEdge(slot_label(a), (a, b), None, ends))
    return MetricSpine(vertices, poles, tuple(edges), tuple(p.id for p in surface.planes), surface.connected)


def zeros(surface: HalfPlaneSurface) -> list[Zero]:
    """One entry per non-pole spine vertex; regular points have order 0."""
    out = []
    for name, inst in surface.vertex_classes.items():
        if len(inst) < 2:
            raise DegenerateVertex(f"vertex {name} has multiplicity {len(inst)}")
        out.append(Zero(name, len(inst)))
    return out


def ends(surface: HalfPlaneSurface) -> list[EndData]:
    """Ends of the surface with pole order, widths and metric residue."""
    out = []
    for cyc in surface.end_cycles:
        widths = tuple(surface.plane(pid).width for pid in cyc)
        order = len(cyc) + 2
        if len(cyc) % 2:
            residue, start = Fraction(0), 0
        else:
            s = sum(w if i % 2 == 0 else -w for i, w in enumerate(widths))
            residue, start = abs(s), (0 if s >= 0 else 1)
        out.append(EndData(cyc, order, widths, residue, start))
    return out


def end_path(surface: HalfPlaneSurface, end: EndData | int) -> list[Slot]:
    """Crossings that walk once around an end, following right rays."""
    cyc = surface.end_cycles[end] if isinstance(end, int) else end.plane_cycle
    return [(pid, "F" if surface.plane(pid).is_full_line else "R") for pid in cyc]


def crossing_map(surface: HalfPlaneSurface, slot: Slot) -> Holonomy:
    """Chart change from the partner plane of ``slot`` into the plane of ``slot``.

    The partner plane is developed across the glued interval, i.e. rotated by
    pi so that it lies below the boundary line of ``slot``'s plane.
    """
    other = surface.partner(slot)
    ia, ib = surface.interval(slot), surface.interval(other)
    if ia.kind is Kind.FULL_LINE:
        anchor = Fraction(0)
    elif ia.kind is Kind.FINITE:
        anchor = ia.left + ib.right
    elif ia.kind is Kind.RIGHT_RAY:
        anchor = ia.left + ib.right
    else:
        anchor = ia.right + ib.left
    return Holonomy(-1, anchor)


def develop(surface: HalfPlaneSurface, boundary_path: Sequence[Slot]) -> Holonomy:
    """Holonomy of a closed path given as the sequence of intervals it crosses.

    After crossing ``slot`` the path is in the partner's plane; the next
    crossing must be an interval of that plane and the last crossing must
    return to the plane of the first.
    """
    path = [(int(p), k) for p, k in boundary_path]
    if not path:
        return Holonomy()
    total = Holonomy()
    current = path[0][0]
    for slot in path:
        if slot[0] != current:
            raise InvalidPath(f"crossing {slot_label(slot)} does not start in plane {current}", (slot,))
        try:
            other = surface.partner(slot)
        except KeyError:
            raise InvalidPath(f"unknown slot {slot_label(slot)}", (slot,)) from None
        total = total.compose(crossing_map(surface, slot))
        current = other[0]
    if current != path[0][0]:
        raise InvalidPath(f"path ends in plane {current}, not {path[0][0]}")
    return total


def euler_characteristic(surface: HalfPlaneSurface) -> int:
    n_vertices = len(surface.vertex_classes) + len(surface.end_cycles)
    n_edges = len(surface.gluing.pairs)
    return n_vertices - n_edges + len(surface.planes)


def genus(surface: HalfPlaneSurface) -> int:
    if not surface.connected:
        raise Disconnected("genus is only defined for connected surfaces")
    chi = euler_characteristic(surface)
    if chi % 2:
        raise NonIntegerGenus(f"odd Euler characteristic {chi}")
    return (2 - chi) // 2


def gauss_bonnet_check(surface: HalfPlaneSurface) -> GaussBonnetReport:
    """Compare sum of zero orders minus pole orders with 4g - 4."""
    g = genus(surface)
    zs = tuple(z.order for z in zeros(surface))
    ps = tuple(e.order for e in ends(surface))
    lhs = sum(zs) - sum(ps)
    rhs = 4 * g - 4
    return GaussBonnetReport(lhs, rhs, lhs == rhs, zs, ps, g)


def is_generic(surface: HalfPlaneSurface) -> bool:
    """Every spine vertex is trivalent."""
    return all(len(v) == 3 for v in surface.vertex_classes.values())


# ---------------------------------------------------------------------------
# editing


DraftKey = tuple[int, Union[str, Fraction]]


class SurfaceDraft:
    """Mutable gluing data used by surgeries.

    Finite intervals are keyed by ``(plane, left_endpoint)``, rays and full
    lines by ``(plane, "L" | "R" | "F")``, so that inserting and removing cut
    points never renumbers unrelated intervals.
    """

    def __init__(self, cuts: dict[int, list[Fraction]], pairs: dict[DraftKey, DraftKey]):
        self.cuts = {pid: sorted(as_rational(c) for c in cs) for pid, cs in cuts.items()}
        self.pairs = dict(pairs)

    @classmethod
    def from_surface(cls, surface: HalfPlaneSurface) -> "SurfaceDraft":
        draft = cls({p.id: list(p.cuts) for p in surface.planes}, {})
        for a, b in surface.gluing.pairs:
            ka, kb = draft.key_of(surface, a), draft.key_of(surface, b)
            draft.pairs[ka] = kb
            draft.pairs[kb] = ka
        return draft

    @staticmethod
    def key_of(surface: HalfPlaneSurface, slot: Slot) -> DraftKey:
        if isinstance(slot[1], str):
            return slot
        return (slot[0], surface.plane(slot[0]).cuts[slot[1]])

    def copy(self) -> "SurfaceDraft":
        return SurfaceDraft({k: list(v) for k, v in self.cuts.items()}, dict(self.pairs))

    def bounds(self, key: DraftKey) -> tuple[Fraction | None, Fraction | None]:
        pid, k = key
        cs = self.cuts[pid]
        if k == "F":
            return (None, None)
        if k == "L":
            return (None, cs[0])
        if k == "R":
            return (cs[-1], None)
        i = cs.index(k)
        return (cs[i], cs[i + 1])

    def length(self, key: DraftKey) -> Fraction | None:
        lo, hi = self.bounds(key)
        return None if lo is None or hi is None else hi - lo

    def glue(self, a: DraftKey, b: DraftKey) -> None:
        self.pairs[a] = b
        self.pairs[b] = a

    def unglue(self, a: DraftKey) -> DraftKey:
        b = self.pairs.pop(a)
        del self.pairs[b]
        return b

    def _insert(self, pid: int, x: Fraction) -> None:
        cs = self.cuts[pid]
        if x in cs:
            raise SurfaceError(f"plane {pid} already has a cut at {x}")
        cs.append(x)
        cs.sort()

    def split(self, key: DraftKey, x) -> tuple[DraftKey, DraftKey]:
        """Insert a cut at ``x`` inside the interval ``key`` and the matching cut on its partner.

        Returns the keys of the left and right pieces of ``key``.
        """
        x = as_rational(x)
        pid, k = key
        other = self.pairs[key]
        qid = other[0]
        lo, hi = self.bounds(key)
        olo, ohi = self.bounds(other)
        if (lo is not None and x <= lo) or (hi is not None and x >= hi):
            raise SurfaceError(f"split point {x} is not interior to {key}")
        self.unglue(key)
        if k == "F":
            y = -x
            self._insert(pid, x)
            self._insert(qid, y)
            self.glue((pid, "L"), (qid, "R"))
            self.glue((pid, "R"), (qid, "L"))
            for kk in ((pid, "F"), (qid, "F")):
                self.pairs.pop(kk, None)
            return (pid, "L"), (pid, "R")
        if k == "L":
            y = olo + (hi - x)
            self._insert(pid, x)
            self._insert(qid, y)
            self.glue((pid, "L"), (qid, "R"))
            self.glue((pid, x), (qid, olo))
            return (pid, "L"), (pid, x)
        if k == "R":
            y = ohi - (x - lo)
            self._insert(pid, x)
            self._insert(qid, y)
            self.glue((pid, "R"), (qid, "L"))
            self.glue((pid, lo), (qid, y))
            return (pid, lo), (pid, "R")
        y = ohi - (x - lo)
        self._insert(pid, x)
        self._insert(qid, y)
        self.glue((pid, lo), (qid, y))
        self.glue((pid, x), (qid, olo))
        return (pid, lo), (pid, x)

    def piece_ending_at(self, pid: int, x: Fraction) -> DraftKey:
        cs = self.cuts[pid]
        i = cs.index(x)
        return (pid, "L") if i == 0 else (pid, cs[i - 1])

    def piece_starting_at(self, pid: int, x: Fraction) -> DraftKey:
        cs = self.cuts[pid]
        i = cs.index(x)
        return (pid, "R") if i == len(cs) - 1 else (pid, x)

    def remove_regular_point(self, p: tuple[int, Fraction], q: tuple[int, Fraction]) -> None:
        """Erase a multiplicity-2 vertex whose two instances are ``p`` and ``q``."""
        (pid, x), (qid, y) = p, q
        a_l, a_r = self.piece_ending_at(pid, x), self.piece_starting_at(pid, x)
        b_l, b_r = self.piece_ending_at(qid, y), self.piece_starting_at(qid, y)
        if self.pairs.get(a_l) != b_r or self.pairs.get(a_r) != b_l:
            raise SurfaceError("points do not form a regular vertex")
        for kk in (a_l, a_r):
            if kk in self.pairs:
                self.unglue(kk)
        merged = []
        for left, right, plane, pt in ((a_l, a_r, pid, x), (b_l, b_r, qid, y)):
            if left[1] == "L" and right[1] == "R":
                merged.append((plane, "F"))
            elif left[1] == "L":
                merged.append((plane, "L"))
            elif right[1] == "R":
                merged.append((plane, "R"))
            else:
                merged.append(left)
        self.cuts[pid].remove(x)
        self.cuts[qid].remove(y)
        self.glue(merged[0], merged[1])

    def to_surface(self) -> HalfPlaneSurface:
        planes = [HalfPlane.from_cuts(pid, cs) for pid, cs in sorted(self.cuts.items())]
        index = {pid: {c: i for i, c in enumerate(cs)} for pid, cs in self.cuts.items()}

        def slot(k: DraftKey) -> Slot:
            if isinstance(k[1], str):
                return k
            return (k[0], index[k[0]][k[1]])

        pairs = []
        for a, b in self.pairs.items():
            sa, sb = slot(a), slot(b)
            if slot_sort_key(sa) < slot_sort_key(sb):
                pairs.append((sa, sb))
        return build_surface(planes, pairs)


# ---------------------------------------------------------------------------
# transformations


def translate_plane(surface: HalfPlaneSurface, plane_id: int, dx) -> HalfPlaneSurface:
    dx = as_rational(dx)
    planes = [HalfPlane.from_cuts(p.id, [c + dx for c in p.cuts]) if p.id == plane_id else p for p in surface.planes]
    return build_surface(planes, surface.gluing)


def relabel(surface: HalfPlaneSurface, mapping: Mapping[int, int]) -> HalfPlaneSurface:
    planes = [HalfPlane(mapping[p.id], p.partition) for p in surface.planes]
    pairs = [((mapping[a[0]], a[1]), (mapping[b[0]], b[1])) for a, b in surface.gluing.pairs]
    return build_surface(planes, pairs)


def scale(surface: HalfPlaneSurface, factor) -> HalfPlaneSurface:
    factor = as_rational(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    planes = [HalfPlane.from_cuts(p.id, [c * factor for c in p.cuts]) for p in surface.planes]
    return build_surface(planes, surface.gluing)


def refine(surface: HalfPlaneSurface, slot: Slot, x) -> HalfPlaneSurface:
    """Insert a regular (multiplicity 2) point at coordinate ``x`` of interval ``slot``."""
    draft = SurfaceDraft.from_surface(surface)
    draft.split(SurfaceDraft.key_of(surface, slot), x)
    return draft.to_surface()


def normalize(surface: HalfPlaneSurface) -> HalfPlaneSurface:
    """Remove every multiplicity-2 vertex by merging its incident intervals."""
    while True:
        regular = [inst for inst in surface.vertex_classes.values() if len(inst) == 2]
        if not regular:
            return surface
        draft = SurfaceDraft.from_surface(surface)
        p, q = regular[0]
        draft.remove_regular_point((p[0], surface.point_value(p)), (q[0], surface.point_value(q)))
        surface = draft.to_surface()
