"""Deterministic SVG figures: metric spines, truncation polygons and planar-end boundaries."""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")

import networkx as nx
import numpy as np
from matplotlib.figure import Figure

from .analytic import PlanarEndModel, TruncationPolygon
from .builders import spine_graph
from .errors import UnrenderableTarget
from .surface import HalfPlaneSurface, format_rational, spine

_RC = {
    "svg.hashsalt": "halfplane",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}
EDGE_COLOR = "#1f4e79"
RAY_COLOR = "#8c8c8c"


def _to_svg(fig: Figure) -> str:
    buf = io.StringIO()
    with matplotlib.rc_context(_RC):
        fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    return buf.getvalue()


def _new_figure(w=5.0, h=4.0) -> Figure:
    with matplotlib.rc_context(_RC):
        return Figure(figsize=(w, h))


def _layout(g: nx.MultiGraph) -> dict:
    finite = nx.Graph()
    finite.add_nodes_from(g.nodes)
    finite.add_edges_from((u, v) for u, v in g.edges() if u != v)
    nodes = sorted(finite.nodes)
    if len(nodes) == 1:
        return {nodes[0]: np.zeros(2)}
    pos = nx.kamada_kawai_layout(finite) if nx.is_connected(finite) else nx.spring_layout(finite, seed=7)
    return {n: np.asarray(pos[n], dtype=float) for n in nodes}


def render_spine(surface: HalfPlaneSurface) -> str:
    """The metric spine with finite edge lengths; rays are drawn as grey arrows."""
    sp = spine(surface)
    fig = _new_figure()
    ax = fig.add_subplot()
    ax.set_aspect("equal")
    ax.axis("off")
    if not sp.vertices:
        # a single full line: one infinite edge, no vertices
        ax.annotate("", xy=(1, 0), xytext=(-1, 0), arrowprops={"arrowstyle": "<->", "color": RAY_COLOR})
        ax.set_xlim(-1.2, 1.2)
        ax.set_ylim(-0.5, 0.5)
        return _to_svg(fig)
    g = spine_graph(surface)
    pos = _layout(g)
    span = max(1.0, max(float(np.ptp([p[i] for p in pos.values()])) for i in (0, 1)))
    ray_len = 0.25 * span
    seen_pairs: dict[tuple, int] = {}
    for e in sp.finite_edges:
        u, v = e.ends
        label = format_rational(e.length)
        if u == v:
            c = pos[u] + np.array([0.0, 0.12 * span])
            t = np.linspace(0, 2 * np.pi, 60)
            ax.plot(c[0] + 0.12 * span * np.cos(t), c[1] + 0.12 * span * np.sin(t), color=EDGE_COLOR, lw=1.5, gid=f"edge-{e.id}")
            ax.text(c[0], c[1] + 0.14 * span, label, ha="center", va="bottom")
            continue
        key = tuple(sorted((u, v)))
        k = seen_pairs.get(key, 0)
        seen_pairs[key] = k + 1
        p, q = pos[u], pos[v]
        d = q - p
        normal = np.array([-d[1], d[0]]) / (np.linalg.norm(d) or 1.0)
        bend = (0.0 if k == 0 else (0.15 * ((k + 1) // 2) * (-1) ** k)) * span
        mid = (p + q) / 2 + bend * normal
        t = np.linspace(0, 1, 30)[:, None]
        curve = (1 - t) ** 2 * p + 2 * t * (1 - t) * mid + t**2 * q
        ax.plot(curve[:, 0], curve[:, 1], color=EDGE_COLOR, lw=1.5, gid=f"edge-{e.id}")
        lab = curve[15] + 0.04 * span * normal
        ax.text(lab[0], lab[1], label, ha="center", va="center", bbox={"fc": "white", "ec": "none", "pad": 0.5})
    centre = np.mean(list(pos.values()), axis=0)
    rays = {v: d["rays"] for v, d in g.nodes(data=True) if d["rays"]}
    for v in sorted(rays):
        away = pos[v] - centre
        base = math.atan2(away[1], away[0]) if np.linalg.norm(away) > 1e-9 else math.pi / 2
        k = rays[v]
        spread = 2 * math.pi / k if len(pos) == 1 else min(math.pi / 2, 2 * math.pi / (k + 1))
        for j in range(k):
            ang = base + (j - (k - 1) / 2) * spread
            tip = pos[v] + ray_len * np.array([math.cos(ang), math.sin(ang)])
            ann = ax.annotate("", xy=tip, xytext=pos[v], arrowprops={"arrowstyle": "->", "color": RAY_COLOR, "lw": 1.0})
            ann.arrow_patch.set_gid(f"ray-{v}-{j}")
    for name in sorted(pos):
        m = next(x.multiplicity for x in sp.vertices if x.id == name)
        ax.plot(*pos[name], "o", color="black", ms=5 if m > 2 else 3, gid=f"vertex-{name}")
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    pad = ray_len * 1.3
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    ax.set_ylim(min(ys) - pad, max(ys) + pad)
    return _to_svg(fig)


def render_polygon(poly: TruncationPolygon) -> str:
    """The truncation boundary, developed as a staircase of its 2n sides.

    The endpoints of the staircase are identified; a dotted line marks that.
    """
    pts = [(0.0, 0.0)]
    x, y = 0.0, 0.0
    for h, v in zip(poly.horizontal, poly.vertical):
        x += h
        pts.append((x, y))
        y += v
        pts.append((x, y))
    pts = np.array(pts)
    fig = _new_figure(6, 4)
    ax = fig.add_subplot()
    ax.set_aspect("equal")
    ax.plot(pts[:, 0], pts[:, 1], color=EDGE_COLOR, lw=1.5, gid="truncation-boundary")
    ax.plot([pts[-1, 0], pts[0, 0]], [pts[-1, 1], pts[0, 1]], ":", color=RAY_COLOR, lw=1.0)
    for k, (h, v) in enumerate(zip(poly.horizontal, poly.vertical)):
        x0, y0 = pts[2 * k]
        ax.text(x0 + h / 2, y0, f"{h:g}", ha="center", va="top")
        ax.text(x0 + h, y0 + v / 2, f" {v:g}", ha="left", va="center")
    ax.set_title(f"n = {poly.n}, a = {poly.a:g}, H = {poly.H:g}")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    return _to_svg(fig)


def render_end(model: PlanarEndModel) -> str:
    """Boundary of the truncated planar end in the coordinate disk, with axes."""
    w = model.boundary
    fig = _new_figure(5, 5)
    ax = fig.add_subplot()
    ax.set_aspect("equal")
    ax.plot(w.real, w.imag, color=EDGE_COLOR, lw=1.2, gid="end-boundary")
    t = np.linspace(0, 2 * np.pi, 200)
    ax.plot(model.dist0 * np.cos(t), model.dist0 * np.sin(t), "--", color=RAY_COLOR, lw=0.8)
    ax.plot([0], [0], "+", color="black")
    ax.axhline(0, color="#dddddd", lw=0.5, zorder=0)
    ax.axvline(0, color="#dddddd", lw=0.5, zorder=0)
    ax.set_xlabel("Re w")
    ax.set_ylabel("Im w")
    ax.set_title(f"n = {model.n}, a = {model.a:g}, H = {model.H:g}; dist = {model.dist0:.4g}")
    return _to_svg(fig)


def render_svg(target) -> str:
    if isinstance(target, HalfPlaneSurface):
        return render_spine(target)
    if isinstance(target, TruncationPolygon):
        return render_polygon(target)
    if isinstance(target, PlanarEndModel):
        return render_end(target)
    raise UnrenderableTarget(f"cannot render {type(target).__name__}")
