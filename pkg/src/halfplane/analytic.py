"""Numerical checks of the analytic side: residues, circumferences, pullbacks
and the shape of truncated planar ends.

Everything here is floating point.  Contour integrals use the composite
trapezoid rule on a uniform angle grid, which is spectrally accurate for
smooth periodic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    BranchAmbiguity,
    IntegrationFailure,
    InvalidParams,
    SingularContour,
    TruncationInsufficient,
)


@dataclass(frozen=True)
class LaurentQD:
    """``q = (sum_k c_k z^k) dz^2`` with finitely many terms."""

    coefficients: Mapping[int, complex]

    def __post_init__(self):
        clean = {int(k): complex(v) for k, v in self.coefficients.items() if v != 0}
        object.__setattr__(self, "coefficients", clean)

    @property
    def pole_order(self) -> int:
        if not self.coefficients:
            return 0
        return max(0, -min(self.coefficients))

    @property
    def leading(self) -> complex:
        """Coefficient of the most singular term."""
        return self.coefficients[min(self.coefficients)]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in self.coefficients.items():
            out = out + c * z**k
        return out

    def other_singularities(self) -> np.ndarray:
        """Nonzero roots of ``z^p q(z)``, i.e. the zeros of q away from 0."""
        if not self.coefficients:
            return np.array([], dtype=complex)
        lo, hi = min(self.coefficients), max(self.coefficients)
        poly = np.zeros(hi - lo + 1, dtype=complex)
        for k, c in self.coefficients.items():
            poly[hi - k] = c
        roots = np.roots(poly) if len(poly) > 1 else np.array([], dtype=complex)
        return roots[np.abs(roots) > 1e-14]

    @classmethod
    def standard(cls, n: int, alpha: float = 0.0) -> "LaurentQD":
        """``(1/w^{n+2} + i alpha / w^{n/2+2}) dw^2``; the alpha term only exists for even n."""
        if n < 1:
            raise InvalidParams("n must be positive")
        coeffs = {-(n + 2): 1.0}
        if alpha:
            if n % 2:
                raise InvalidParams("odd-order poles have no residue term")
            coeffs[-(n // 2 + 2)] = 1j * alpha
        return cls(coeffs)

    @classmethod
    def cylinder(cls, C: float) -> "LaurentQD":
        """``-C^2/z^2 dz^2``: a half-infinite cylinder of circumference 2 pi C."""
        return cls({-2: -(C**2)})


def _check_contour(q: LaurentQD, r: float | None) -> float:
    roots = q.other_singularities()
    inner = float(np.min(np.abs(roots))) if len(roots) else math.inf
    if r is None:
        return 1.0 if math.isinf(inner) else inner / 2
    if r <= 0:
        raise InvalidParams("contour radius must be positive")
    if inner <= r * (1 + 1e-9):
        raise SingularContour(f"q has a zero at radius {inner:.6g}, on or inside |z| = {r:.6g}")
    return r


def tracked_sqrt(values: np.ndarray) -> np.ndarray:
    """Continuous branch of the square root along a sampled path.

    Each sample takes the root closer to its predecessor.  Raises
    :class:`BranchAmbiguity` when consecutive roots are nearly orthogonal,
    i.e. the sampling is too coarse to tell the two roots apart.
    """
    s = np.sqrt(values.astype(complex))
    if len(s) < 2:
        return s
    dots = (s[1:] * np.conj(s[:-1])).real
    norms = np.abs(s[1:]) * np.abs(s[:-1])
    if np.any(norms == 0):
        raise SingularContour("square root vanishes on the path")
    if np.any(np.abs(dots) < 0.5 * norms):
        raise BranchAmbiguity("sampling too coarse for branch tracking; increase samples")
    flips = np.concatenate([[1.0], np.cumprod(np.sign(dots))])
    return s * flips


@dataclass(frozen=True)
class ResidueResult:
    value: float
    integral: complex
    radius: float
    samples: int
    loops: int
    defect: float = 0.0  # odd order: |integral over the double cover| / 2
    method: str = "trapezoid, nearest-root branch continuation"


def residue_details(q: LaurentQD, r: float | None = None, samples: int = 2**14) -> ResidueResult:
    p = q.pole_order
    if p < 2:
        raise InvalidParams("analytic residue needs a pole of order at least 2")
    r = _check_contour(q, r)
    loops = 1 if p % 2 == 0 else 2
    total = samples * loops
    theta = 2 * np.pi * loops * np.arange(total) / total
    z = r * np.exp(1j * theta)
    s = tracked_sqrt(q(z))
    dz = 1j * z * (2 * np.pi * loops / total)
    integral = complex(np.sum(s * dz))
    if loops == 1:
        return ResidueResult(abs(integral), integral, r, samples, 1)
    return ResidueResult(0.0, integral, r, samples, 2, abs(integral) / 2)


def analytic_residue(q: LaurentQD, r: float | None = None, samples: int = 2**14) -> float:
    """``|contour integral of sqrt(q)|`` around the pole at 0 (0 for odd order)."""
    return residue_details(q, r, samples).value


def circumference(q: LaurentQD, r: float, samples: int = 2**12) -> float:
    """Flat length of the circle ``|z| = r``."""
    r = _check_contour(q, r)
    z = r * np.exp(2j * np.pi * np.arange(samples) / samples)
    return float(np.sum(np.sqrt(np.abs(q(z)))) * r * 2 * np.pi / samples)


def scaling_exponent(q: LaurentQD, r_min: float, r_max: float, points: int = 9, samples: int = 2**12) -> float:
    """Least-squares slope of ``log C(r)`` against ``log r``."""
    rs = np.geomspace(r_min, r_max, points)
    cs = np.array([circumference(q, float(r), samples) for r in rs])
    slope, _ = np.polyfit(np.log(rs), np.log(cs), 1)
    return float(slope)


def residue_normalization(n: int = 4, alpha: float = 1.0, samples: int = 2**14) -> float:
    """Measured ratio between the contour residue of the standard differential and its parameter."""
    return analytic_residue(LaurentQD.standard(n, alpha), samples=samples) / alpha


# ---------------------------------------------------------------------------
# pullback of the leading term


@dataclass(frozen=True)
class PowerSeriesMap:
    """``f(z) = b_1 z + b_2 z^2 + ...`` (a polynomial, taken as exact)."""

    coefficients: Sequence[complex]

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coefficients)
        if not coeffs or coeffs[0] == 0:
            raise InvalidParams("f must fix 0 with nonzero derivative there")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def derivative_at_zero(self) -> complex:
        return self.coefficients[0]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return sum(c * z ** (k + 1) for k, c in enumerate(self.coefficients))

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return sum((k + 1) * c * z**k for k, c in enumerate(self.coefficients))


def _series_power(h: np.ndarray, alpha: float, depth: int) -> np.ndarray:
    """Coefficients of ``h^alpha`` to ``depth`` for a series with ``h[0] = 1``."""
    out = np.zeros(depth + 1, dtype=complex)
    out[0] = 1.0
    hh = np.zeros(depth + 1, dtype=complex)
    hh[: min(len(h), depth + 1)] = h[: depth + 1]
    for k in range(1, depth + 1):
        j = np.arange(1, k + 1)
        out[k] = np.sum(((alpha + 1) * j - k) * hh[j] * out[k - j]) / k
    return out


def pullback_series(q: LaurentQD, f: PowerSeriesMap, depth: int) -> dict[int, complex]:
    """Laurent coefficients of ``(q o f) f'^2`` from ``z^{-p}`` up to ``z^{-p+depth}``."""
    if depth < 0:
        raise TruncationInsufficient("depth must be non-negative")
    p = q.pole_order
    b = np.array(f.coefficients)
    b1 = b[0]
    # f(z) = b1 z (1 + g(z)),  f'(z) = b1 (1 + g'(z) stuff)
    unit = np.zeros(depth + 1, dtype=complex)
    unit[: min(len(b), depth + 1)] = b[: depth + 1] / b1
    fprime = np.zeros(depth + 1, dtype=complex)
    for k in range(min(len(b), depth + 1)):
        fprime[k] = (k + 1) * b[k]
    fprime_sq = np.convolve(fprime, fprime)[: depth + 1]
    total: dict[int, complex] = {}
    for k, c in q.coefficients.items():
        # c (b1 z)^k (1+g)^k f'^2  contributes from z^k upwards
        shift = k + p
        if shift > depth:
            continue
        term = c * b1**k * np.convolve(_series_power(unit, k, depth), fprime_sq)[: depth + 1 - shift]
        for j, v in enumerate(term):
            total[k + j] = total.get(k + j, 0) + v
    return {e: total.get(e, 0j) for e in range(-p, -p + depth + 1)}


def leading_order_pullback(q: LaurentQD, f: PowerSeriesMap) -> complex:
    """Coefficient of ``z^{-n}`` in ``f^* q`` where ``n`` is the pole order of q."""
    if q.pole_order < 3:
        raise InvalidParams("leading-order pullback needs a pole of order at least 3")
    return pullback_series(q, f, 0)[-q.pole_order]


# ---------------------------------------------------------------------------
# truncated planar ends


@dataclass(frozen=True)
class TruncationPolygon:
    n: int
    a: float
    H: float
    horizontal: tuple[float, ...]
    vertical: tuple[float, ...]

    @property
    def sides(self) -> tuple[float, ...]:
        out = []
        for h, v in zip(self.horizontal, self.vertical):
            out += [h, v]
        return tuple(out)

    @property
    def alternating_sum(self) -> float:
        if self.n % 2:
            return 0.0
        return float(sum(h if k % 2 == 0 else -h for k, h in enumerate(self.horizontal)))

    def notch_rectangles(self) -> list[tuple[float, float, float, float]]:
        """Each plane's notch ``(x0, y0, width, height)``, laid side by side for drawing."""
        out, x = [], 0.0
        for w in self.horizontal:
            out.append((x, 0.0, w, self.H / 2))
            x += w + self.H / 4
        return out


def truncation_polygon(n: int, a: float, H: float) -> TruncationPolygon:
    """Boundary of a planar end truncated at height H/2 in every half-plane.

    One horizontal side is ``H + a`` and the others ``H``; each vertical side
    is two notch walls of height ``H/2`` glued across a ray.
    """
    if n < 2:
        raise InvalidParams("need at least two half-planes")
    if H <= 0 or a < 0:
        raise InvalidParams("H must be positive and a non-negative")
    if H <= a:
        raise InvalidParams("H must exceed a")
    if n % 2 and a != 0:
        raise InvalidParams("ends of odd order have residue 0")
    return TruncationPolygon(n, a, H, (H + a,) + (H,) * (n - 1), (H,) * n)


@dataclass(frozen=True)
class PlanarEndModel:
    n: int
    a: float
    H: float
    boundary: np.ndarray = field(repr=False)  # sampled boundary of U_H in the w-plane
    dist0: float
    closure_defect: float
    alpha: float


def _notch_paths(widths: Sequence[float], H: float, samples: int):
    """Developed notch walks, one per plane, as ``(start, increments)`` in local coordinates."""
    per = max(4, samples // (3 * len(widths)))
    paths = []
    for w in widths:
        start = complex(-w / 2, 0)
        corners = [start, start + 0.5j * H, start + w + 0.5j * H, start + w]
        pts = np.concatenate(
            [np.linspace(c0, c1, per, endpoint=False) for c0, c1 in zip(corners, corners[1:])] + [[corners[-1]]]
        )
        paths.append(pts)
    return paths


def planar_end_model(n: int, a: float, H: float, samples: int = 4096) -> PlanarEndModel:
    """Image in the w-plane of the truncated planar end ``U_H`` of the standard differential.

    For ``a = 0`` the coordinate change is explicit; otherwise the inverse
    developing map is integrated along the notch walls.
    """
    poly = truncation_polygon(n, a, H)
    if H < 10 * max(1.0, a):
        raise InvalidParams("H must be at least 10 max(1, a)")
    paths = _notch_paths(poly.horizontal, H, samples)
    if a == 0:
        zs = []
        for k, pts in enumerate(paths):
            z = np.exp(2j * np.pi * k / n) * ((n / 2) * pts.astype(complex)) ** (2 / n)
            zs.append(z)
        z = np.concatenate(zs)
        w = 1 / z
        return PlanarEndModel(n, a, H, w, float(np.min(np.abs(w))), 0.0, 0.0)
    best = None
    for alpha in (a / math.pi, -a / math.pi):
        try:
            z, defect = _integrate_end(n, alpha, poly.horizontal, H, samples)
        except IntegrationFailure:
            continue
        if best is None or defect < best[2]:
            best = (z, alpha, defect)
    if best is None:
        raise IntegrationFailure("inverse developing map could not be integrated")
    z, alpha, defect = best
    scale = float(np.max(np.abs(z)))
    if defect > 1e-6 * scale:
        raise IntegrationFailure(f"boundary curve does not close (defect {defect:.3g})")
    w = 1 / z
    return PlanarEndModel(n, a, H, w, float(np.min(np.abs(w))), defect, alpha)


def _integrate_end(n: int, alpha: float, widths: Sequence[float], H: float, samples: int):
    def rhs(t, y, d):
        z = y[0] + 1j * y[1]
        v = d * z ** (1 - n // 2) * (1 + 1j * alpha * z ** (-(n // 2))) ** -0.5
        return [v.real, v.imag]

    z = (n * widths[0] / 4) ** (2 / n) * np.exp(2j * np.pi / n)
    out = [z]
    per = max(4, samples // (3 * len(widths)))
    for k, w in enumerate(widths):
        sign = (-1) ** k
        for d in (0.5j * H, w, -0.5j * H):
            d = sign * d
            sol = solve_ivp(rhs, (0, 1), [z.real, z.imag], args=(d,), method="DOP853", rtol=1e-11, atol=1e-12,
                            t_eval=np.linspace(0, 1, per + 1)[1:])
            if not sol.success:
                raise IntegrationFailure(sol.message)
            seg = sol.y[0] + 1j * sol.y[1]
            out.extend(seg)
            z = seg[-1]
    return np.array(out), abs(out[-1] - out[0])


def h_schedule(H0: float, i: int, n: int) -> float:
    """``(H0 2^i)^{n/2}``: truncation heights whose ends shrink by half at each step."""
    if i < 0:
        raise InvalidParams("i must be non-negative")
    return float((H0 * 2**i) ** (n / 2))
