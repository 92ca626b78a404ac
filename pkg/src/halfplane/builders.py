"""Constructions of half-plane surfaces: examples, trees, exchanges and surgeries."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import networkx as nx

from .errors import (
    BadPermutation,
    DegenerateVertex,
    InvalidOrder,
    InvalidRayCount,
    MalformedTree,
    NotGeneric,
    SubintervalOutOfRange,
    TooFewInfiniteEdges,
)
from .surface import (
    HalfPlaneSurface,
    Kind,
    Slot,
    SurfaceDraft,
    as_rational,
    ends,
    genus,
    is_generic,
    parse_slot_label,
    spine,
    surface_from_cuts,
    zeros,
)


def standard_plane() -> HalfPlaneSurface:
    """The plane with dz^2: two full-line half-planes glued by t -> -t."""
    return surface_from_cuts({0: [], 1: []}, [((0, "F"), (1, "F"))])


def monomial_surface(n: int) -> HalfPlaneSurface:
    """z^n dz^2: n+2 half-planes cut at 0, right rays glued to the next left ray."""
    if not isinstance(n, int) or n < 1:
        raise InvalidOrder(f"monomial order must be a positive integer, got {n!r}")
    k = n + 2
    return surface_from_cuts({i: [0] for i in range(k)}, [((i, "R"), ((i + 1) % k, "L")) for i in range(k)])


# ---------------------------------------------------------------------------
# metric trees


@dataclass(frozen=True)
class MetricTree:
    """A planar metric tree with semi-infinite edges.

    ``finite`` maps an edge name to ``(u, v, length)``, ``infinite`` maps an
    edge name to the vertex it emanates from, and ``rotation`` lists the edges
    at each vertex in counterclockwise order.
    """

    finite: Mapping[str, tuple]
    infinite: Mapping[str, object]
    rotation: Mapping[object, Sequence[str]]

    def __post_init__(self):
        darts: dict[object, list[str]] = {}
        for name, (u, v, length) in self.finite.items():
            if as_rational(length) <= 0:
                raise MalformedTree(f"edge {name} has non-positive length")
            if u == v:
                raise MalformedTree(f"edge {name} is a loop")
            darts.setdefault(u, []).append(name)
            darts.setdefault(v, []).append(name)
        for name, u in self.infinite.items():
            if name in self.finite:
                raise MalformedTree(f"edge name {name} used twice")
            darts.setdefault(u, []).append(name)
        if len(self.infinite) < 2:
            raise TooFewInfiniteEdges(f"need at least 2 infinite edges, got {len(self.infinite)}")
        if set(darts) != set(self.rotation):
            raise MalformedTree("rotation system must list exactly the vertices of the tree")
        for v, ds in darts.items():
            if sorted(ds) != sorted(self.rotation[v]):
                raise MalformedTree(f"rotation at {v!r} does not match its incident edges")
            if len(ds) < 2:
                raise MalformedTree(f"vertex {v!r} has valence {len(ds)}; dangling leaves are not allowed")
        g = nx.MultiGraph()
        g.add_nodes_from(darts)
        g.add_edges_from((u, v) for u, v, _ in self.finite.values())
        if not nx.is_connected(g) or g.number_of_edges() != g.number_of_nodes() - 1:
            raise MalformedTree("finite edges do not form a tree")

    def next_edge(self, v, e: str) -> str:
        rot = list(self.rotation[v])
        return rot[(rot.index(e) + 1) % len(rot)]

    def other_end(self, e: str, v):
        u, w, _ = self.finite[e]
        return w if v == u else u


def tree_boundary_walk(tree: MetricTree) -> list[tuple[str, list[tuple[str, object, Fraction]]]]:
    """Split the boundary of the thickened tree at its infinite edges.

    Returns, in boundary order, ``(infinite_edge, sides)`` for each boundary
    line: the line starts along ``infinite_edge`` and traverses the listed
    finite edge sides ``(edge, start_vertex, length)``.
    """
    names = sorted(tree.infinite)
    start = names[0]
    lines = []
    e, v = start, tree.infinite[start]
    while True:
        sides = []
        cur_e, cur_v = e, v
        while True:
            f = tree.next_edge(cur_v, cur_e)
            if f in tree.infinite:
                break
            w = tree.other_end(f, cur_v)
            sides.append((f, cur_v, as_rational(tree.finite[f][2])))
            cur_e, cur_v = f, w
        lines.append((e, sides))
        e, v = f, cur_v
        if e == start:
            break
    if len(lines) != len(tree.infinite):
        raise MalformedTree("boundary walk did not visit every infinite edge once")
    return lines


def from_metric_tree(tree: MetricTree) -> HalfPlaneSurface:
    """Attach one half-plane to each boundary line of the thickened tree."""
    lines = tree_boundary_walk(tree)
    cuts: dict[int, list[Fraction]] = {}
    side_key: dict[tuple[str, object], tuple[int, int]] = {}
    for i, (_, sides) in enumerate(lines):
        pos = Fraction(0)
        cuts[i] = [pos]
        for j, (edge, start, length) in enumerate(sides):
            side_key[(edge, start)] = (i, j)
            pos += length
            cuts[i].append(pos)
    pairs = []
    for name, (u, v, _) in tree.finite.items():
        pairs.append((side_key[(name, u)], side_key[(name, v)]))
    k = len(lines)
    pairs += [((i, "R"), ((i + 1) % k, "L")) for i in range(k)]
    return surface_from_cuts(cuts, pairs)


def segment_tree(b) -> MetricTree:
    """One finite edge of length ``b`` with two infinite edges at each end."""
    return MetricTree(
        finite={"e": ("u", "v", as_rational(b))},
        infinite={"a1": "u", "a2": "u", "b1": "v", "b2": "v"},
        rotation={"u": ("e", "a1", "a2"), "v": ("e", "b1", "b2")},
    )


def star_tree(k: int) -> MetricTree:
    """A single vertex with ``k`` infinite edges."""
    names = [f"r{i}" for i in range(k)]
    return MetricTree(finite={}, infinite={n: "o" for n in names}, rotation={"o": tuple(names)})


def path_tree(lengths: Sequence, twists: Sequence[bool] | None = None) -> MetricTree:
    """A path of finite edges ``a1, a2, ...`` with two infinite edges at each end
    and one at each interior vertex.

    ``twists[i]`` puts the infinite edge at interior vertex ``i+1`` on the
    other side of the path.
    """
    k = len(lengths)
    if k < 1:
        raise MalformedTree("path needs at least one finite edge")
    twists = list(twists or [False] * (k - 1))
    finite = {f"a{i + 1}": (i, i + 1, as_rational(x)) for i, x in enumerate(lengths)}
    infinite = {"s0": 0, "t0": 0, "s1": k, "t1": k}
    rotation = {0: ("a1", "s0", "t0"), k: (f"a{k}", "s1", "t1")}
    for i in range(1, k):
        infinite[f"m{i}"] = i
        left, right = f"a{i}", f"a{i + 1}"
        rotation[i] = (left, f"m{i}", right) if not twists[i - 1] else (left, right, f"m{i}")
    return MetricTree(finite=finite, infinite=infinite, rotation=rotation)


def zigzag_tree(a1, a2, a3) -> MetricTree:
    """Three-edge path whose two interior rays point to opposite sides.

    Six infinite edges, so the end has order 8; its residue is ``|2 a1 - 2 a3|``.
    """
    return path_tree([a1, a2, a3], twists=[False, True])


def spine_graph(surface: HalfPlaneSurface) -> nx.MultiGraph:
    """Finite part of the spine as a networkx multigraph (lengths on edges,
    number of incident infinite edges on nodes)."""
    sp = spine(surface)
    g = nx.MultiGraph()
    for v in sp.vertices:
        g.add_node(v.id, rays=0)
    for e in sp.edges:
        if e.infinite:
            for end in e.ends:
                if end in g.nodes:
                    g.nodes[end]["rays"] += 1
        else:
            g.add_edge(e.ends[0], e.ends[1], key=e.id, length=e.length)
    return g


def tree_graph(tree: MetricTree) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for v in tree.rotation:
        g.add_node(v, rays=sum(1 for u in tree.infinite.values() if u == v))
    for name, (u, v, length) in tree.finite.items():
        g.add_edge(u, v, key=name, length=as_rational(length))
    return g


# ---------------------------------------------------------------------------
# surgeries


def _finite_slot(surface: HalfPlaneSurface, edge) -> Slot:
    slot = parse_slot_label(edge) if isinstance(edge, str) else (int(edge[0]), edge[1])
    try:
        surface.interval(slot)
    except (KeyError, IndexError):
        raise SubintervalOutOfRange(f"no spine edge {edge!r}") from None
    return slot


def _open_window(surface: HalfPlaneSurface, edge, offset, length):
    """Cut out ``[p + offset, p + offset + length]`` from the interval ``edge``.

    ``p`` is the left endpoint of the interval; for a left ray the offset is
    measured leftwards from its endpoint, for a full line from 0.  Returns the
    draft, the key of the window piece in the edge's plane and its partner.
    """
    offset, length = as_rational(offset), as_rational(length)
    slot = _finite_slot(surface, edge)
    iv = surface.interval(slot)
    draft = SurfaceDraft.from_surface(surface)
    key = SurfaceDraft.key_of(surface, slot)
    if offset <= 0 or length <= 0:
        raise SubintervalOutOfRange("offset and length must be positive")
    if iv.kind is Kind.FINITE:
        if offset + length >= iv.length:
            raise SubintervalOutOfRange(
                f"window [{offset}, {offset + length}] does not fit strictly inside edge of length {iv.length}"
            )
        lo = iv.left + offset
    elif iv.kind is Kind.RIGHT_RAY:
        lo = iv.left + offset
    elif iv.kind is Kind.LEFT_RAY:
        lo = iv.right - offset - length
    else:
        lo = offset
    hi = lo + length
    # isolate [lo, hi] as a finite piece
    pid = slot[0]
    if iv.kind is Kind.LEFT_RAY:
        draft.split(key, hi)
        draft.split((pid, "L"), lo)
    elif iv.kind is Kind.FULL_LINE:
        draft.split(key, lo)
        draft.split((pid, "R"), hi)
    else:
        _, piece = draft.split(key, lo)
        draft.split(piece, hi)
    key = (pid, lo)
    return draft, key, draft.pairs[key]


def attach_pole(
    surface: HalfPlaneSurface,
    edge,
    offset,
    length,
    ray_count: int,
    arcs: Sequence | None = None,
    phase=None,
) -> HalfPlaneSurface:
    """Slit a spine edge and glue a planar end of ``ray_count`` half-planes into the hole.

    The window ``[offset, offset + length]`` of ``edge`` opens to a circle of
    circumference ``2 * length``.  ``ray_count`` new vertices are placed on it,
    at ``phase`` and then separated by ``arcs`` (default: equal arcs, phase
    half the first arc).  Each new half-plane spans one arc.
    """
    if not isinstance(ray_count, int) or ray_count < 2:
        raise InvalidRayCount(f"need at least 2 rays, got {ray_count!r}")
    length = as_rational(length)
    circ = 2 * length
    if arcs is None:
        arcs = [circ / ray_count] * ray_count
    arcs = [as_rational(a) for a in arcs]
    if len(arcs) != ray_count or any(a <= 0 for a in arcs) or sum(arcs) != circ:
        raise SubintervalOutOfRange(f"arcs must be {ray_count} positive lengths summing to {circ}")
    phase = arcs[0] / 2 if phase is None else as_rational(phase) % circ

    draft, wa, wb = _open_window(surface, edge, offset, length)
    aid, a_lo = wa
    bid, b_lo = wb
    a_hi, b_hi = a_lo + length, b_lo + length
    draft.unglue(wa)

    starts = [phase]
    for a in arcs[:-1]:
        starts.append(starts[-1] + a)
    for t in starts:
        t %= circ
        if 0 < t < length:
            draft._insert(aid, a_hi - t)
        elif length < t < circ:
            draft._insert(bid, b_hi - (t - length))

    first_new = max(draft.cuts) + 1
    for k, (t0, arc) in enumerate(zip(starts, arcs)):
        pid = first_new + k
        t1 = t0 + arc
        breaks = [t0]
        m = (t0 // length + 1) * length
        while m < t1:
            breaks.append(m)
            m += length
        breaks.append(t1)
        draft.cuts[pid] = [b - t0 for b in breaks]
        for ta, tb in zip(breaks, breaks[1:]):
            ua = ta % circ
            ub = ua + (tb - ta)
            if ua < length:
                target = (aid, a_hi - ub)
            else:
                target = (bid, b_hi - (ub - length))
            draft.glue((pid, ta - t0), target)
    for k in range(ray_count):
        draft.glue((first_new + k, "R"), (first_new + (k + 1) % ray_count, "L"))
    return draft.to_surface()


def slit_reglue(surface: HalfPlaneSurface, edge, offset, lengths: Sequence, permutation: Sequence[int]) -> HalfPlaneSurface:
    """Slit a window of ``edge`` and reglue its two sides by an interval exchange.

    The window is cut into pieces of the given ``lengths`` on the edge's own
    side; on the partner side the piece labelled ``permutation[j]`` is the
    j-th from the window's left end (read in the edge's coordinates).
    """
    lengths = [as_rational(x) for x in lengths]
    _check_permutation(permutation, len(lengths))
    if any(x <= 0 for x in lengths):
        raise SubintervalOutOfRange("piece lengths must be positive")
    total = sum(lengths)
    draft, wa, wb = _open_window(surface, edge, offset, total)
    aid, a_lo = wa
    bid, b_lo = wb
    draft.unglue(wa)
    # A point x of the window was glued to B point (a_lo + b_lo + total) - x
    mirror = a_lo + b_lo + total
    top_start = {}
    x = a_lo
    for c, ln in enumerate(lengths):
        top_start[c] = x
        if x != a_lo:
            draft._insert(aid, x)
        x += ln
    bottom_b = {}
    x = a_lo
    for c in permutation:
        right_b = mirror - x
        bottom_b[c] = right_b - lengths[c]
        x += lengths[c]
        if x != a_lo + total:
            draft._insert(bid, mirror - x)
    for c in range(len(lengths)):
        draft.glue((aid, top_start[c]), (bid, bottom_b[c]))
    return draft.to_surface()


def _check_permutation(permutation: Sequence[int], k: int) -> None:
    if sorted(permutation) != list(range(k)):
        raise BadPermutation(f"{list(permutation)!r} is not a permutation of 0..{k - 1}")


def interval_exchange_surface(lengths: Sequence, permutation: Sequence[int]) -> HalfPlaneSurface:
    """Two half-planes above and below a slit glued by an interval exchange.

    The slit is ``[0, W]`` with intervals of the given ``lengths`` labelled
    ``0..k-1`` on top from left to right; ``permutation[j]`` is the label of
    the j-th interval on the bottom side.  Plane 0 is the upper side; plane 1
    is the lower side in its own coordinate ``u = W - x``.
    """
    lengths = [as_rational(x) for x in lengths]
    if not lengths or any(x <= 0 for x in lengths):
        raise BadPermutation("lengths must be a non-empty list of positive numbers")
    _check_permutation(permutation, len(lengths))
    total = sum(lengths)
    top = [Fraction(0)]
    for x in lengths:
        top.append(top[-1] + x)
    bottom_left = {}
    x = Fraction(0)
    for c in permutation:
        bottom_left[c] = x
        x += lengths[c]
    bottom_cuts = sorted({total - y for y in bottom_left.values()} | {Fraction(0)})
    k = len(lengths)
    pairs = [((0, "L"), (1, "R")), ((0, "R"), (1, "L"))]
    for c in range(k):
        right_in_plane1 = total - bottom_left[c]
        idx = bottom_cuts.index(right_in_plane1 - lengths[c])
        pairs.append(((0, c), (1, idx)))
    return surface_from_cuts({0: top, 1: bottom_cuts}, pairs)


def truncation_core(n: int, H, a=0) -> HalfPlaneSurface:
    """Single-end surface whose n half-planes have finite spans ``H + a, H, ..., H``.

    Every ray endpoint is a regular point, so cutting each half-plane at a
    fixed height leaves n rectangles whose side walls pair up into straight
    vertical arcs of length ``2 * height``.  Plane k carries two intervals
    ``l_k, r_k`` with ``r_k`` glued to ``l_{k+1}``.  For even n and ``a != 0``
    those lengths cannot be solved for, and plane 0 instead gets two extra
    interleaved pairs of length ``a/4`` glued to each other (a handle).
    """
    H, a = as_rational(H), as_rational(a)
    if n < 2:
        raise InvalidOrder("need at least two half-planes")
    if H <= a or a < 0:
        raise SubintervalOutOfRange("need 0 <= a < H")
    handle = n % 2 == 0 and a != 0
    if handle:
        left = [H / 2] * n
    else:
        left = [(H + a) / 2] + [H + a - (H + a) / 2 if k % 2 else (H + a) / 2 - a for k in range(1, n)]
    right = [left[(k + 1) % n] for k in range(n)]
    cuts, pairs = {}, []
    for k in range(n):
        pieces = [left[k]] + ([a / 4] * 4 if handle and k == 0 else []) + [right[k]]
        pos = Fraction(0)
        cuts[k] = [pos]
        for x in pieces:
            pos += x
            cuts[k].append(pos)
        last = len(pieces) - 1
        pairs.append(((k, last), ((k + 1) % n, 0)))
        pairs.append(((k, "R"), ((k + 1) % n, "L")))
    if handle:
        pairs += [((0, 1), (0, 3)), ((0, 2), (0, 4))]
    return surface_from_cuts(cuts, pairs)


# ---------------------------------------------------------------------------
# counts and searches


@dataclass(frozen=True)
class EdgeCountReport:
    genus: int
    finite_edges: int
    infinite_edges: int
    vertices: int
    expected_finite: int
    ok: bool

    @property
    def total_edges(self) -> int:
        return self.finite_edges + self.infinite_edges

    @property
    def parameter_dimension(self) -> int:
        """Finite edge lengths modulo overall scaling."""
        return self.finite_edges - 1


def generic_edge_count_check(surface: HalfPlaneSurface) -> EdgeCountReport:
    """Edge count of a generic two-plane surface with one order-4 pole.

    For such a surface with all vertices trivalent, Euler's formula forces
    ``6g - 1`` finite edges (and ``6g + 1`` edges counting the two rays).
    """
    es = ends(surface)
    if len(surface.planes) != 2 or len(es) != 1 or es[0].order != 4:
        raise NotGeneric("expected two half-planes and a single pole of order 4")
    if not is_generic(surface):
        ms = sorted({len(v) for v in surface.vertex_classes.values()})
        raise NotGeneric(f"vertex multiplicities {ms} are not all 3")
    sp = spine(surface)
    g = genus(surface)
    nf = len(sp.finite_edges)
    return EdgeCountReport(g, nf, len(sp.infinite_edges), len(sp.vertices), 6 * g - 1, nf == 6 * g - 1)


def linear_involution_surface(top: Sequence, bottom: Sequence, lengths: Mapping) -> HalfPlaneSurface:
    """Two half-planes glued ray to ray, with finite intervals labelled by words.

    ``top`` and ``bottom`` list interval labels of plane 0 and plane 1 from
    left to right (each in its own coordinates); every label occurs exactly
    twice and the two occurrences are glued.  Unlike an interval exchange,
    both occurrences may lie on the same plane.
    """
    count: dict = {}
    for lab in list(top) + list(bottom):
        count[lab] = count.get(lab, 0) + 1
    if any(c != 2 for c in count.values()) or set(count) != set(lengths):
        raise BadPermutation("every label must occur exactly twice and have a length")
    cuts, where = {}, {}
    for pid, word in ((0, top), (1, bottom)):
        pos = Fraction(0)
        cuts[pid] = [pos]
        for j, lab in enumerate(word):
            where.setdefault(lab, []).append((pid, j))
            pos += as_rational(lengths[lab])
            cuts[pid].append(pos)
    pairs = [((0, "L"), (1, "R")), ((0, "R"), (1, "L"))]
    pairs += [tuple(w) for w in where.values()]
    return surface_from_cuts(cuts, pairs)


def _matchings(items: list):
    if not items:
        yield []
        return
    first = items[0]
    for j in range(1, len(items)):
        rest = items[1:j] + items[j + 1 :]
        for m in _matchings(rest):
            yield [(first, items[j])] + m


def linear_involution_words(k: int):
    """All (top, bottom) label words with ``k`` labels, up to relabelling."""
    positions = list(range(2 * k))
    for m in _matchings(positions):
        word = [0] * (2 * k)
        for lab, (a, b) in enumerate(m):
            word[a] = word[b] = lab
        for split in range(2 * k + 1):
            yield tuple(word[:split]), tuple(word[split:])


@dataclass(frozen=True)
class ExchangeHit:
    permutation: tuple[int, ...]
    lengths: tuple[Fraction, ...]
    genus: int
    zero_orders: tuple[int, ...]
    top: tuple | None = None
    bottom: tuple | None = None

    def surface(self) -> HalfPlaneSurface:
        if self.permutation is not None:
            return interval_exchange_surface(self.lengths, self.permutation)
        return linear_involution_surface(self.top, self.bottom, {lab: 1 for lab in range(len(self.lengths))})


def search_exchange(
    target_genus: int,
    zero_order: int | None = None,
    max_intervals: int = 5,
    exact_zeros: Sequence[int] | None = None,
    limit: int = 1,
    flips: bool = True,
) -> list[ExchangeHit]:
    """Enumerate small two-plane gluings with unit lengths.

    Interval exchanges (translation gluings between the two planes) are
    tried first for each size; with ``flips`` the search continues through
    linear involutions, which also glue intervals of one plane to each other.
    A hit has the requested genus and, if ``zero_order`` is given, exactly
    one zero of that order.  ``exact_zeros`` instead fixes the multiset of
    non-trivial zero orders.
    """
    hits = []

    def consider(s, perm, top=None, bottom=None):
        if genus(s) != target_genus:
            return False
        orders = tuple(sorted((z.order for z in zeros(s) if z.order > 0), reverse=True))
        if exact_zeros is not None and sorted(orders) != sorted(exact_zeros):
            return False
        if zero_order is not None and orders.count(zero_order) != 1:
            return False
        hits.append(ExchangeHit(perm, tuple(Fraction(1) for _ in range(len(s.gluing.pairs) - 2)), target_genus, orders, top, bottom))
        return len(hits) >= limit

    for k in range(1, max_intervals + 1):
        for perm in itertools.permutations(range(k)):
            if consider(interval_exchange_surface([1] * k, perm), perm):
                return hits
        if not flips:
            continue
        for top, bottom in linear_involution_words(k):
            try:
                s = linear_involution_surface(top, bottom, {lab: 1 for lab in range(k)})
            except DegenerateVertex:
                continue
            if consider(s, None, top, bottom):
                return hits
    return hits
