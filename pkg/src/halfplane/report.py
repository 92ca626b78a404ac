"""JSON invariant reports for half-plane surfaces."""

from __future__ import annotations

import json
from fractions import Fraction

from .surface import (
    HalfPlaneSurface,
    develop,
    end_path,
    ends,
    format_rational,
    gauss_bonnet_check,
    is_generic,
    spine,
    zeros,
)

SCHEMA = "hps-report/1"


def rational_json(x: Fraction) -> dict:
    return {"exact": format_rational(x), "decimal": float(x)}


def report(surface: HalfPlaneSurface) -> dict:
    """Genus, zeros, ends, Gauss-Bonnet balance and spine edge counts."""
    gb = gauss_bonnet_check(surface)
    sp = spine(surface)
    end_items = []
    for e in ends(surface):
        hol = develop(surface, end_path(surface, e))
        end_items.append(
            {
                "order": e.order,
                "planes": list(e.plane_cycle),
                "widths": [format_rational(w) for w in e.widths],
                "residue": format_rational(e.residue),
                "residue_decimal": float(e.residue),
                "holonomy": {"sign": hol.sign, "shift": format_rational(hol.shift)},
            }
        )
    zs = [z for z in zeros(surface) if not z.regular]
    return {
        "schema": SCHEMA,
        "genus": gb.genus,
        "zeros": sorted((z.order for z in zs), reverse=True),
        "zero_vertices": {z.vertex: z.order for z in zs},
        "regular_points": sum(1 for z in zeros(surface) if z.regular),
        "ends": end_items,
        "gauss_bonnet": {"lhs": gb.lhs, "rhs": gb.rhs, "ok": gb.ok},
        "edge_count": {
            "finite": len(sp.finite_edges),
            "infinite": len(sp.infinite_edges),
            "total": len(sp.edges),
        },
        "vertex_count": len(sp.vertices),
        "generic_flag": is_generic(surface),
        "planes": len(surface.planes),
    }


def report_text(data: dict) -> str:
    lines = [
        f"genus        {data['genus']}",
        f"zeros        {' '.join(map(str, data['zeros'])) or '-'}",
    ]
    for e in data["ends"]:
        lines.append(f"end          order {e['order']}, residue {e['residue']}")
    gb = data["gauss_bonnet"]
    lines.append(f"gauss-bonnet {gb['lhs']} = {gb['rhs']} ({'ok' if gb['ok'] else 'FAILED'})")
    ec = data["edge_count"]
    lines.append(f"edges        {ec['finite']} finite, {ec['infinite']} infinite")
    lines.append(f"generic      {'yes' if data['generic_flag'] else 'no'}")
    return "\n".join(lines) + "\n"


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
