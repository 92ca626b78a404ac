"""Degenerations of metric spines: collapsing short edges and the limit surface."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import DivergingEdges, InvalidEpsilon, MissingLimit, NotForest
from .surface import (
    HalfPlane,
    HalfPlaneSurface,
    Slot,
    as_rational,
    build_surface,
    slot_label,
    slot_sort_key,
    spine,
)

INF = math.inf


def edge_lengths(surface: HalfPlaneSurface) -> dict[str, Fraction]:
    return {e.id: e.length for e in spine(surface).finite_edges}


@dataclass(frozen=True)
class SpineFamily:
    """A fixed gluing pattern with a sequence of finite edge lengths and an optional limit.

    Limit values may be 0 (collapsing edge) or ``math.inf`` (diverging edge).
    """

    template: HalfPlaneSurface
    assignments: tuple[Mapping[str, Fraction], ...] = ()
    limit: Mapping[str, object] | None = None

    def __post_init__(self):
        keys = set(edge_lengths(self.template))
        for a in self.assignments:
            if set(a) != keys:
                raise ValueError("assignment keys must be the finite spine edges of the template")
            if any(as_rational(v) <= 0 for v in a.values()):
                raise ValueError("assignments must be positive")
        if self.limit is not None:
            if set(self.limit) != keys:
                raise ValueError("limit keys must be the finite spine edges of the template")
            for v in self.limit.values():
                if v != INF and as_rational(v) < 0:
                    raise ValueError("limit lengths must be non-negative")

    def surface_at(self, index: int) -> HalfPlaneSurface:
        return with_lengths(self.template, self.assignments[index])


def collapsing_locus(family: SpineFamily) -> frozenset[str]:
    if family.limit is None:
        raise MissingLimit("family has no limit assignment")
    return frozenset(e for e, v in family.limit.items() if v != INF and as_rational(v) == 0)


def diverging_locus(family: SpineFamily) -> frozenset[str]:
    if family.limit is None:
        raise MissingLimit("family has no limit assignment")
    return frozenset(e for e, v in family.limit.items() if v == INF)


def check_forest(surface: HalfPlaneSurface, C: Iterable[str]) -> bool:
    """True iff the edges ``C`` of the spine contain no cycle."""
    sp = spine(surface)
    ds = DisjointSet([v.id for v in sp.vertices])
    for eid in C:
        u, v = sp.edge(eid).ends
        if ds.connected(u, v):
            return False
        ds.merge(u, v)
    return True


def _slot_edges(surface: HalfPlaneSurface) -> dict[Slot, str]:
    out = {}
    for e in spine(surface).finite_edges:
        for s in e.slots:
            out[s] = e.id
    return out


@dataclass(frozen=True)
class Collapse:
    surface: HalfPlaneSurface
    edge_map: dict[str, str] = field(default_factory=dict)  # surviving old edge id -> new edge id


def with_lengths(surface: HalfPlaneSurface, lengths: Mapping[str, object]) -> HalfPlaneSurface:
    return _rebuild(surface, lengths).surface


def _rebuild(surface: HalfPlaneSurface, lengths: Mapping[str, object]) -> Collapse:
    """Reassign finite edge lengths; zero-length edges are contracted."""
    owner = _slot_edges(surface)
    new_len = {e: as_rational(v) for e, v in lengths.items()}
    planes, index = [], {}
    for p in surface.planes:
        if p.is_full_line:
            planes.append(p)
            continue
        pos = p.cuts[0]
        cuts = [pos]
        for k in range(p.n_finite):
            ln = new_len.get(owner[(p.id, k)], p.interval(k).length)
            if ln < 0:
                raise ValueError("lengths must be non-negative")
            if ln == 0:
                continue
            index[(p.id, k)] = len(cuts) - 1
            pos += ln
            cuts.append(pos)
        planes.append(HalfPlane.from_cuts(p.id, cuts))

    def remap(s: Slot) -> Slot:
        return s if isinstance(s[1], str) else (s[0], index[s])

    pairs, edge_map = [], {}
    for a, b in surface.gluing.pairs:
        if not isinstance(a[1], str) and a not in index:
            continue
        na, nb = remap(a), remap(b)
        pairs.append((na, nb))
        if not isinstance(a[1], str):
            edge_map[owner[a]] = slot_label(min(na, nb, key=slot_sort_key))
    return Collapse(build_surface(planes, pairs), edge_map)


def collapse(surface: HalfPlaneSurface, C: Iterable[str]) -> HalfPlaneSurface:
    """Contract every component tree of ``C`` to a single vertex."""
    return collapse_with_map(surface, C).surface


def collapse_with_map(surface: HalfPlaneSurface, C: Iterable[str]) -> Collapse:
    C = set(C)
    known = set(edge_lengths(surface))
    if not C <= known:
        raise KeyError(f"unknown edges {sorted(C - known)}")
    if not check_forest(surface, C):
        raise NotForest("the collapsing edges contain a cycle")
    return _rebuild(surface, {e: 0 for e in C})


def limit_surface(family: SpineFamily) -> HalfPlaneSurface:
    """The surface with the family's limit lengths, collapsing edges contracted."""
    D = diverging_locus(family)
    if D:
        raise DivergingEdges(f"edges {sorted(D)} diverge; no limit half-plane surface")
    C = collapsing_locus(family)
    if not check_forest(family.template, C):
        raise NotForest("the collapsing locus contains a cycle")
    return with_lengths(family.template, {e: as_rational(v) for e, v in family.limit.items()})


# ---------------------------------------------------------------------------
# stretch map


@dataclass(frozen=True)
class StretchMap:
    """Height-preserving map of the upper half-plane collapsing ``[-eps/2, eps/2]``.

    ``(x, y) -> (phi(x, y) x, y)`` with
    ``phi = clip(max(2|x|/eps - 1, y/eps), 0, 1)`` on ``[-eps, eps] x [0, eps]``
    and ``phi = 1`` elsewhere.
    """

    eps: float

    def _phi_parts(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        e = self.eps
        inside = (np.abs(x) <= e) & (y <= e)
        horiz = 2 * np.abs(x) / e - 1
        vert = y / e
        raw = np.maximum(horiz, vert)
        phi = np.where(inside, np.clip(raw, 0.0, 1.0), 1.0)
        return x, y, inside, horiz, vert, phi

    def phi(self, x, y):
        return self._phi_parts(x, y)[-1]

    def __call__(self, x, y):
        x, y, *_, phi = self._phi_parts(x, y)
        return phi * x, y

    def dilatation(self, x, y):
        """Pointwise ``(|f_z| + |f_zbar|) / (|f_z| - |f_zbar|)``; infinite where the Jacobian vanishes."""
        x, y, inside, horiz, vert, phi = self._phi_parts(x, y)
        e = self.eps
        use_h = horiz >= vert
        phi_x = np.where(use_h, 2 * np.sign(x) / e, 0.0)
        phi_y = np.where(use_h, 0.0, 1 / e)
        clipped = (inside & ((np.maximum(horiz, vert) < 0) | (np.maximum(horiz, vert) > 1))) | ~inside
        phi_x = np.where(clipped, 0.0, phi_x)
        phi_y = np.where(clipped, 0.0, phi_y)
        gx = phi + x * phi_x
        gy = x * phi_y
        fz = np.abs(((gx + 1) - 1j * gy) / 2)
        fzb = np.abs(((gx - 1) + 1j * gy) / 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.where(fz > fzb, (fz + fzb) / (fz - fzb), np.inf)
        return k


def stretch_map(eps: float) -> StretchMap:
    if not 0 < eps < 1:
        raise InvalidEpsilon("eps must lie in (0, 1)")
    return StretchMap(float(eps))
