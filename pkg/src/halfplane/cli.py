"""Command line interface: ``hps <command> ...``.

Surfaces are read from ``.hps`` files, rectangle complexes from JSON.
Results go to stdout or ``--out``; the exit code is nonzero exactly when a
command fails or a check does not hold.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import analytic, builders, degeneration, flat, render
from .errors import HalfPlaneError
from .hpsformat import complex_from_json, complex_to_json, emit_hps, parse_hps, parse_hps_document
from .report import dumps, report, report_text
from .surface import format_rational


class CommandFailed(Exception):
    """A check ran but did not pass; carries the result to print anyway."""

    def __init__(self, payload):
        super().__init__("check failed")
        self.payload = payload


def _frac_list(text: str) -> list[Fraction]:
    return [Fraction(t) for t in text.replace(",", " ").split()]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _rat(x: Fraction) -> str:
    return format_rational(Fraction(x))


def _emit(args, payload) -> None:
    """Write text, SVG or JSON-able data to ``--out`` or stdout."""
    if isinstance(payload, str):
        text = payload
    elif args.format == "text" and isinstance(payload, dict) and payload.get("schema") == "hps-report/1":
        text = report_text(payload)
    elif args.format == "text" and isinstance(payload, dict):
        text = "".join(f"{k}: {json.dumps(v)}\n" for k, v in payload.items())
    else:
        text = dumps(payload)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args):
    doc = parse_hps_document(_read(args.file))
    problems = doc.check_expectations()
    result = {"valid": not problems, "problems": problems, "planes": len(doc.surface.planes)}
    if problems:
        raise CommandFailed(result)
    return result


def cmd_report(args):
    surface = parse_hps(_read(args.file))
    data = report(surface)
    if args.figures:
        out = Path(args.figures)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{Path(args.file).stem}-spine.svg"
        path.write_text(render.render_svg(surface))
        data["figures"] = [str(path)]
    return data


def cmd_example(args):
    p = args.params
    name = args.name
    if name == "example0":
        s = builders.standard_plane()
    elif name == "monomial":
        s = builders.monomial_surface(int(p[0]) if p else 1)
    elif name == "segment-tree":
        s = builders.from_metric_tree(builders.segment_tree(Fraction(p[0]) if p else Fraction(1)))
    elif name == "tree":
        ls = [Fraction(x) for x in p] if p else [Fraction(5), Fraction(7), Fraction(11)]
        if len(ls) != 3:
            raise HalfPlaneError("tree takes three edge lengths a1 a2 a3")
        s = builders.from_metric_tree(builders.zigzag_tree(*ls))
    elif name == "exchange":
        ls = [Fraction(x) for x in p] if p else [Fraction(1)] * 3
        perm = _int_list(args.perm) if args.perm else list(reversed(range(len(ls))))
        s = builders.interval_exchange_surface(ls, perm)
    else:
        raise HalfPlaneError(f"unknown example {name!r}")
    return emit_hps(s, {"name": name})


def cmd_surgery(args):
    s = parse_hps(_read(args.file))
    if args.kind == "attach-pole":
        if args.length is None:
            raise HalfPlaneError("attach-pole needs --length")
        arcs = _frac_list(args.arcs) if args.arcs else None
        phase = Fraction(args.phase) if args.phase else None
        out = builders.attach_pole(s, args.edge, Fraction(args.offset), Fraction(args.length), args.rays, arcs, phase)
    else:
        if not args.lengths or not args.perm:
            raise HalfPlaneError("slit-reglue needs --lengths and --perm")
        out = builders.slit_reglue(s, args.edge, Fraction(args.offset), _frac_list(args.lengths), _int_list(args.perm))
    return emit_hps(out)


def cmd_truncate(args):
    n, a, H = args.n, Fraction(args.a), Fraction(args.H)
    cx = flat.truncation_complex(n, H, a)
    cycles = flat.validate_polygonal_boundary(cx)
    return {
        "polygon": {
            "n": n,
            "a": _rat(a),
            "H": _rat(H),
            "sides": [_rat(x) for x in (H + a,) + (H,) * (n - 1)],
            "alternating_sum": _rat(a if n % 2 == 0 else 0),
        },
        "boundary_cycles": [{"labels": c.labels, "sides": [_rat(x) for x in c.sides]} for c in cycles],
        "complex": complex_to_json(cx),
    }


def cmd_glue_end(args):
    cx = complex_from_json(_read(args.file))
    m = flat.glue_planar_end(cx, args.cycle, Fraction(args.H), Fraction(args.a))
    result = {"closed": m.closed, "ends": [{"order": o, "residue": _rat(r)} for o, r, _ in m.ends()]}
    if m.closed:
        lhs, rhs, ok = m.gauss_bonnet()
        result.update(genus=m.genus(), zeros=sorted((z for z in m.zeros() if z), reverse=True),
                      gauss_bonnet={"lhs": lhs, "rhs": rhs, "ok": ok})
    return result


def cmd_quadruple(args):
    cx = complex_from_json(_read(args.file))
    q = flat.quadruple(cx)
    cyl = flat.horizontal_cylinder_decomposition(q.complex)
    return {
        "genus": q.complex.to_poly().genus(),
        "area": _rat(q.complex.area),
        "cylinders": [[_rat(c), _rat(h)] for c, h in cyl.cylinders],
        "fixed_b": [[s.rect, s.side, _rat(s.s0), _rat(s.s1)] for s in q.involution_b.fixed_segments(q.complex)],
        "fixed_a": [[s.rect, s.side, _rat(s.s0), _rat(s.s1)] for s in q.involution_a.fixed_segments(q.complex)],
        "complex": complex_to_json(q.complex),
    }


def cmd_cylinders(args):
    cx = complex_from_json(_read(args.file))
    cyl = flat.horizontal_cylinder_decomposition(cx)
    return {"cylinders": [[_rat(c), _rat(h)] for c, h in cyl.cylinders], "area": _rat(cyl.area)}


def cmd_collapse(args):
    s = parse_hps(_read(args.file))
    edges = [e for e in args.edges.split(",") if e.strip()]
    res = degeneration.collapse_with_map(s, [e.strip() for e in edges])
    return emit_hps(res.surface)


def cmd_analytic(args):
    what = args.what
    if what == "residue":
        q = analytic.LaurentQD.cylinder(args.C) if args.C is not None else analytic.LaurentQD.standard(args.n, args.alpha)
        r = analytic.residue_details(q, args.r, samples=args.samples or 2**14)
        return {"residue": r.value, "radius": r.radius, "loops": r.loops, "defect": r.defect}
    if what == "circumference":
        q = analytic.LaurentQD.standard(args.n, args.alpha)
        return {"r": args.r or 0.01, "circumference": analytic.circumference(q, args.r or 0.01)}
    if what == "exponent":
        q = analytic.LaurentQD.standard(args.n, args.alpha)
        slope = analytic.scaling_exponent(q, args.r_min, args.r_max)
        return {"n": args.n, "slope": slope, "expected": -args.n / 2}
    if what == "pullback":
        rng = np.random.default_rng(args.seed)
        rows = []
        for _ in range(args.samples or 10):
            coeffs = rng.normal(size=4) + 1j * rng.normal(size=4)
            f = analytic.PowerSeriesMap(coeffs)
            q = analytic.LaurentQD({-args.n: complex(rng.normal(), rng.normal()), -args.n + 1: rng.normal()})
            lead = analytic.leading_order_pullback(q, f)
            want = abs(f.derivative_at_zero) ** (2 - args.n) * abs(q.leading)
            rows.append(abs(abs(lead) - want) / want)
        return {"n": args.n, "samples": len(rows), "max_relative_error": max(rows)}
    if what == "end-model":
        m = analytic.planar_end_model(args.n, args.a, args.H)
        out = {"n": m.n, "a": m.a, "H": m.H, "dist0": m.dist0, "closure_defect": m.closure_defect, "alpha": m.alpha}
        if args.svg:
            Path(args.svg).write_text(render.render_svg(m))
            out["figure"] = args.svg
        return out
    raise HalfPlaneError(f"unknown analytic command {what!r}")


def _params(path: str) -> dict:
    data = json.loads(_read(path))
    return data.get("polygon", data)


def cmd_render(args):
    if args.kind == "spine":
        return render.render_svg(parse_hps(_read(args.file)))
    p = _params(args.file)
    n, a, H = int(p["n"]), float(Fraction(str(p["a"]))), float(Fraction(str(p["H"])))
    if args.kind == "polygon":
        return render.render_svg(analytic.truncation_polygon(n, a, H))
    return render.render_svg(analytic.planar_end_model(n, a, H))


def cmd_search(args):
    hits = builders.search_exchange(args.genus, args.zero_order, args.max_intervals, limit=args.limit)
    items = []
    for h in hits:
        s = h.surface()
        items.append(
            {
                "kind": "exchange" if h.permutation is not None else "linear-involution",
                "permutation": list(h.permutation) if h.permutation is not None else None,
                "top": list(h.top) if h.top is not None else None,
                "bottom": list(h.bottom) if h.bottom is not None else None,
                "genus": h.genus,
                "zero_orders": list(h.zero_orders),
                "hps": emit_hps(s),
            }
        )
    result = {"genus": args.genus, "zero_order": args.zero_order, "hits": items}
    if not items:
        raise CommandFailed(result)
    return result


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="hps", description="Half-plane surfaces and their invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("validate", parents=[common], help="parse a .hps file and check its expectations")
    c.add_argument("file")
    c.set_defaults(func=cmd_validate)

    c = sub.add_parser("report", parents=[common], help="genus, zeros, ends and counts of a surface")
    c.add_argument("file")
    c.add_argument("--figures", metavar="DIR", help="also write an SVG of the spine into DIR")
    c.set_defaults(func=cmd_report)

    c = sub.add_parser("example", parents=[common], help="emit a built-in surface as .hps")
    c.add_argument("name", choices=("example0", "monomial", "tree", "exchange", "segment-tree"))
    c.add_argument("params", nargs="*")
    c.add_argument("--perm", help="bottom order of an exchange, e.g. 2,1,0")
    c.set_defaults(func=cmd_example)

    c = sub.add_parser("surgery", parents=[common], help="attach a pole or reglue a slit")
    c.add_argument("kind", choices=("attach-pole", "slit-reglue"))
    c.add_argument("file")
    c.add_argument("--edge", required=True, help="edge id such as 0:1")
    c.add_argument("--offset", required=True)
    c.add_argument("--length", default=None, help="window length (attach-pole)")
    c.add_argument("--rays", type=int, default=2)
    c.add_argument("--arcs")
    c.add_argument("--phase")
    c.add_argument("--lengths", help="piece lengths (slit-reglue)")
    c.add_argument("--perm")
    c.set_defaults(func=cmd_surgery)

    c = sub.add_parser("truncate", parents=[common], help="truncation polygon and its rectangle complex")
    c.add_argument("n", type=int)
    c.add_argument("a")
    c.add_argument("H")
    c.set_defaults(func=cmd_truncate)

    c = sub.add_parser("glue-end", parents=[common], help="close a boundary cycle with a planar end")
    c.add_argument("file")
    c.add_argument("cycle", type=int)
    c.add_argument("H")
    c.add_argument("a")
    c.set_defaults(func=cmd_glue_end)

    for name, func, text in (
        ("quadruple", cmd_quadruple, "double along b-arcs and then a-arcs"),
        ("cylinders", cmd_cylinders, "horizontal cylinders of a closed complex"),
    ):
        c = sub.add_parser(name, parents=[common], help=text)
        c.add_argument("file")
        c.set_defaults(func=func)

    c = sub.add_parser("collapse", parents=[common], help="contract a forest of spine edges")
    c.add_argument("file")
    c.add_argument("--edges", required=True, help="comma separated edge ids")
    c.set_defaults(func=cmd_collapse)

    c = sub.add_parser("analytic", parents=[common], help="numerics for the standard differentials")
    c.add_argument("what", choices=("residue", "circumference", "exponent", "pullback", "end-model"))
    c.add_argument("--n", type=int, default=4)
    c.add_argument("--alpha", type=float, default=0.0)
    c.add_argument("--a", type=float, default=0.0)
    c.add_argument("--H", type=float, default=20.0)
    c.add_argument("--C", type=float, default=None, help="order-2 cylinder -C^2/z^2 instead")
    c.add_argument("--r", type=float, default=None)
    c.add_argument("--r-min", type=float, default=1e-3)
    c.add_argument("--r-max", type=float, default=1e-2)
    c.add_argument("--svg", help="end-model: also write the boundary figure here")
    c.set_defaults(func=cmd_analytic)

    c = sub.add_parser("render", parents=[common], help="SVG of a spine, truncation polygon or planar end")
    c.add_argument("file", help=".hps file for spines; JSON with n, a, H otherwise")
    c.add_argument("--kind", choices=("spine", "polygon", "end"), default="spine")
    c.set_defaults(func=cmd_render)

    c = sub.add_parser("search-exchange", parents=[common], help="find small two-plane gluings")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--zero-order", type=int, default=None)
    c.add_argument("--max-intervals", type=int, default=5)
    c.add_argument("--limit", type=int, default=1)
    c.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _emit(args, args.func(args))
    except CommandFailed as failed:
        _emit(args, failed.payload)
        return 1
    except (HalfPlaneError, ValueError, KeyError, OSError) as err:
        print(f"hps: error: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
