"""The ``.hps`` text format for half-plane surfaces and a JSON form for rectangle complexes.

Grammar, one record per line::

    hps 1
    plane <id>: [c1 c2 ...]          # ascending rationals; [] is a full line
    glue (<id>,<slot>) (<id>,<slot>) # slot is L, R, F or a finite index
    meta <key> <value>               # optional, free text
    expect genus <int>               # optional checks run by ``hps validate``
    expect zeros <o1,o2,...>
    expect poles <o1,o2,...>

``#`` starts a comment.  Rationals are integers or ``p/q``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import HpsSyntaxError, SurfaceError
from .flat import FlatComplex, Segment
from .surface import (
    HalfPlane,
    HalfPlaneSurface,
    Slot,
    build_surface,
    ends,
    format_rational,
    genus,
    zeros,
)

VERSION = 1
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_SLOT = re.compile(r"\(\s*(\d+)\s*,\s*(L|R|F|\d+)\s*\)")


@dataclass
class HpsDocument:
    surface: HalfPlaneSurface
    metadata: dict[str, str] = field(default_factory=dict)
    expect: dict[str, object] = field(default_factory=dict)

    def check_expectations(self) -> list[str]:
        """Human-readable mismatches between ``expect`` records and the surface."""
        problems = []
        s = self.surface
        actual = {
            "genus": genus(s),
            "zeros": sorted(z.order for z in zeros(s) if not z.regular),
            "poles": sorted(e.order for e in ends(s)),
        }
        for key, want in self.expect.items():
            got = actual[key]
            if key != "genus":
                want = sorted(want)
            if got != want:
                problems.append(f"expected {key} {want}, found {got}")
        return problems


def _rational(tok: str, line: int, col: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise HpsSyntaxError(f"not a rational number: {tok!r}", line, col)
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise HpsSyntaxError(f"zero denominator in {tok!r}", line, col) from None


def _int_list(text: str, line: int, col: int) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise HpsSyntaxError(f"expected a list of integers, got {text!r}", line, col) from None


def parse_hps_document(text: str) -> HpsDocument:
    planes: dict[int, tuple[list[Fraction], int]] = {}
    glues: list[tuple[Slot, Slot, int]] = []
    meta: dict[str, str] = {}
    expect: dict[str, object] = {}
    header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        word, _, rest = stripped.partition(" ")
        rest_col = col + len(word) + 1
        if not header:
            if word != "hps":
                raise HpsSyntaxError("document must start with 'hps 1'", lineno, col)
            if rest.strip() != str(VERSION):
                raise HpsSyntaxError(f"unsupported format version {rest.strip()!r}", lineno, rest_col)
            header = True
            continue
        if word == "plane":
            m = re.match(r"^\s*(\d+)\s*:\s*\[(.*)\]\s*$", rest)
            if not m:
                raise HpsSyntaxError("expected 'plane <id>: [c1 c2 ...]'", lineno, rest_col)
            pid = int(m.group(1))
            if pid in planes:
                raise HpsSyntaxError(f"plane {pid} declared twice", lineno, rest_col)
            inner_col = rest_col + m.start(2)
            cuts = []
            for tm in re.finditer(r"\S+", m.group(2)):
                cuts.append(_rational(tm.group(), lineno, inner_col + tm.start()))
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise HpsSyntaxError("cut points must be strictly ascending", lineno, inner_col)
            planes[pid] = (cuts, lineno)
        elif word == "glue":
            slots = []
            pos = 0
            for _ in range(2):
                pos += len(rest[pos:]) - len(rest[pos:].lstrip())
                m = _SLOT.match(rest, pos)
                if not m:
                    raise HpsSyntaxError("expected 'glue (<id>,<slot>) (<id>,<slot>)'", lineno, rest_col + pos)
                key = m.group(2)
                slots.append((int(m.group(1)), key if key in ("L", "R", "F") else int(key)))
                pos = m.end()
            if rest[pos:].strip():
                raise HpsSyntaxError("unexpected text after glue record", lineno, rest_col + pos)
            glues.append((slots[0], slots[1], lineno))
        elif word == "meta":
            key, _, value = rest.strip().partition(" ")
            if not key:
                raise HpsSyntaxError("meta record needs a key", lineno, rest_col)
            meta[key] = value.strip()
        elif word == "expect":
            key, _, value = rest.strip().partition(" ")
            if key == "genus":
                vals = _int_list(value, lineno, rest_col)
                if len(vals) != 1:
                    raise HpsSyntaxError("expect genus takes one integer", lineno, rest_col)
                expect["genus"] = vals[0]
            elif key in ("zeros", "poles"):
                expect[key] = _int_list(value, lineno, rest_col)
            else:
                raise HpsSyntaxError(f"unknown expectation {key!r}", lineno, rest_col)
        elif word == "hps":
            raise HpsSyntaxError("duplicate header", lineno, col)
        else:
            raise HpsSyntaxError(f"unknown record {word!r}", lineno, col)
    if not header:
        raise HpsSyntaxError("empty document", 1, 1)

    slot_line: dict[Slot, int] = {}
    for a, b, ln in glues:
        for s in (a, b):
            if s[0] not in planes:
                raise HpsSyntaxError(f"glue refers to undeclared plane {s[0]}", ln, 1)
            slot_line.setdefault(s, ln)
    try:
        hp = [HalfPlane.from_cuts(pid, cuts) for pid, (cuts, _) in planes.items()]
        surface = build_surface(hp, [(a, b) for a, b, _ in glues])
    except SurfaceError as err:
        lines = [slot_line[s] for s in err.slots if s in slot_line]
        if not lines:
            lines = [planes[s[0]][1] for s in err.slots if s[0] in planes]
        if lines:
            err.line = min(lines)
            err.args = (f"line {err.line}: {err.args[0]}",)
        raise
    return HpsDocument(surface, meta, expect)


def parse_hps(text: str) -> HalfPlaneSurface:
    return parse_hps_document(text).surface


def emit_hps(surface: HalfPlaneSurface, metadata: dict[str, str] | None = None) -> str:
    """Canonical text: planes by id, then gluings in slot order."""
    lines = [f"hps {VERSION}"]
    for key, value in sorted((metadata or {}).items()):
        lines.append(f"meta {key} {value}")
    for p in surface.planes:
        cuts = " ".join(format_rational(c) for c in p.cuts)
        lines.append(f"plane {p.id}: [{cuts}]")
    for a, b in surface.gluing.pairs:
        lines.append(f"glue ({a[0]},{a[1]}) ({b[0]},{b[1]})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rectangle complexes as JSON


def _seg_json(seg: Segment) -> list:
    return [seg.rect, seg.side, format_rational(seg.s0), format_rational(seg.s1)]


def _seg_from(item) -> Segment:
    rect, side, s0, s1 = item
    return Segment(int(rect), str(side), Fraction(s0), Fraction(s1))


def complex_to_json(cx: FlatComplex) -> dict:
    return {
        "schema": "hps-complex/1",
        "rectangles": [[format_rational(w), format_rational(h)] for w, h in cx.rectangles],
        "pairs": [[_seg_json(a), _seg_json(b)] for a, b in cx.pairs],
        "arcs": [[_seg_json(s), lab] for s, lab in cx.arcs],
    }


def complex_from_json(data: dict | str) -> FlatComplex:
    if isinstance(data, str):
        data = json.loads(data)
    if "complex" in data and "rectangles" not in data:
        data = data["complex"]
    rects = tuple((Fraction(w), Fraction(h)) for w, h in data["rectangles"])
    pairs = tuple((_seg_from(a), _seg_from(b)) for a, b in data.get("pairs", ()))
    arcs = tuple((_seg_from(s), lab) for s, lab in data.get("arcs", ()))
    return FlatComplex(rects, pairs, arcs)
