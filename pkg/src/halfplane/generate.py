"""Seeded random surfaces for property checks and the acceptance corpus."""

from __future__ import annotations

import random
from fractions import Fraction

from .builders import (
    MetricTree,
    attach_pole,
    from_metric_tree,
    interval_exchange_surface,
    linear_involution_surface,
    monomial_surface,
    slit_reglue,
)
from .errors import DegenerateVertex
from .surface import HalfPlaneSurface, Kind, spine


def random_length(rng: random.Random, max_num: int = 12, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_tree(rng: random.Random, max_vertices: int = 6) -> MetricTree:
    """Random planar metric tree; every vertex gets enough rays to have valence >= 3."""
    nv = rng.randint(1, max_vertices)
    finite = {}
    incident: dict[int, list[str]] = {v: [] for v in range(nv)}
    for v in range(1, nv):
        u = rng.randrange(v)
        name = f"e{v}"
        finite[name] = (u, v, random_length(rng))
        incident[u].append(name)
        incident[v].append(name)
    infinite = {}
    for v in range(nv):
        need = max(0, 3 - len(incident[v])) + rng.choice([0, 0, 1])
        if nv == 1:
            need = max(need, 2)
        for j in range(need):
            name = f"r{v}_{j}"
            infinite[name] = v
            incident[v].append(name)
    rotation = {}
    for v, names in incident.items():
        names = list(names)
        rng.shuffle(names)
        rotation[v] = tuple(names)
    return MetricTree(finite=finite, infinite=infinite, rotation=rotation)


def random_exchange(rng: random.Random, max_intervals: int = 6) -> HalfPlaneSurface:
    k = rng.randint(1, max_intervals)
    lengths = [random_length(rng) for _ in range(k)]
    perm = list(range(k))
    rng.shuffle(perm)
    return interval_exchange_surface(lengths, perm)


def random_linear_involution(rng: random.Random, labels: int) -> HalfPlaneSurface:
    """Random two-plane gluing with ``labels`` finite edges; folds are rejected and resampled."""
    while True:
        word = [lab for lab in range(labels) for _ in range(2)]
        rng.shuffle(word)
        split = rng.randint(0, len(word))
        lengths = {lab: random_length(rng) for lab in range(labels)}
        try:
            return linear_involution_surface(word[:split], word[split:], lengths)
        except DegenerateVertex:
            continue


def random_finite_edge(rng: random.Random, surface: HalfPlaneSurface):
    edges = spine(surface).edges
    return rng.choice(edges)


def random_surgery(rng: random.Random, surface: HalfPlaneSurface) -> HalfPlaneSurface:
    """Apply attach_pole or slit_reglue at a random window of a random edge."""
    edge = random_finite_edge(rng, surface)
    iv = surface.interval(edge.slots[0])
    span = iv.length if iv.kind is Kind.FINITE else Fraction(rng.randint(2, 10))
    offset = span * Fraction(rng.randint(1, 3), 8)
    width = span * Fraction(rng.randint(1, 3), 8)
    if rng.random() < 0.5:
        n_rays = rng.randint(2, 4)
        if rng.random() < 0.5:
            return attach_pole(surface, edge.id, offset, width, n_rays)
        cuts = sorted(rng.sample(range(1, 40), n_rays - 1))
        pieces = [b - a for a, b in zip([0] + cuts, cuts + [40])]
        arcs = [2 * width * Fraction(p, 40) for p in pieces]
        phase = 2 * width * Fraction(rng.randint(0, 39), 40)
        return attach_pole(surface, edge.id, offset, width, n_rays, arcs=arcs, phase=phase)
    k = rng.randint(1, 4)
    weights = [rng.randint(1, 5) for _ in range(k)]
    lengths = [width * Fraction(w, sum(weights)) for w in weights]
    perm = list(range(k))
    rng.shuffle(perm)
    return slit_reglue(surface, edge.id, offset, lengths, perm)


def random_surface(rng: random.Random) -> HalfPlaneSurface:
    kind = rng.choice(["tree", "tree", "exchange", "involution", "monomial"])
    if kind == "tree":
        s = from_metric_tree(random_tree(rng))
    elif kind == "exchange":
        s = random_exchange(rng)
    elif kind == "involution":
        s = random_linear_involution(rng, rng.randint(1, 6))
    else:
        s = monomial_surface(rng.randint(1, 6))
    for _ in range(rng.choice([0, 0, 1, 2])):
        s = random_surgery(rng, s)
    return s


def corpus(seed: int, count: int) -> list[HalfPlaneSurface]:
    rng = random.Random(seed)
    return [random_surface(rng) for _ in range(count)]


def random_generic_two_plane(rng: random.Random, genus: int) -> HalfPlaneSurface:
    """Random generic two-plane surface with a single order-4 pole.

    Builds a random trivalent ribbon graph on ``4 genus`` vertices and keeps
    it when it has exactly two boundary cycles lying on the two sides of one
    marked edge.  Cutting the marked edge open gives the two rays; each
    boundary cycle read from there is the word of one half-plane.
    """
    if genus < 1:
        raise ValueError("generic two-plane surfaces with one order-4 pole have genus >= 1")
    n = 12 * genus  # half-edges, three per vertex
    while True:
        halves = list(range(n))
        rng.shuffle(halves)
        partner = [0] * n
        for a, b in zip(halves[::2], halves[1::2]):
            partner[a], partner[b] = b, a

        def face_next(h):
            o = partner[h]
            return 3 * (o // 3) + (o + 1) % 3

        seen: set[int] = set()
        faces = []
        for h in range(n):
            if h in seen:
                continue
            cyc = [h]
            seen.add(h)
            x = face_next(h)
            while x != h:
                cyc.append(x)
                seen.add(x)
                x = face_next(x)
            faces.append(cyc)
        if len(faces) != 2:
            continue
        top_face = next(f for f in faces if 0 in f)
        if partner[0] in top_face:
            continue
        bottom_face = next(f for f in faces if partner[0] in f)
        labels: dict[int, int] = {}

        def word(face, start):
            i = face.index(start)
            return [labels.setdefault(min(h, partner[h]), len(labels)) for h in face[i + 1 :] + face[:i]]

        top, bottom = word(top_face, 0), word(bottom_face, partner[0])
        lengths = {lab: random_length(rng) for lab in labels.values()}
        return linear_involution_surface(top, bottom, lengths)
