"""Contour integration of x^k dx/y and y dx/x^2 on y^2 = f(x).

The square root is continued step by step along each contour; a lift is
accepted only when every step has an unambiguous sign choice and the lift
closes up after a full circuit.  User-facing integrals are anchored to a
single-valued branch of sqrt(f) whose cuts are the segments of the canonical
pairing and which behaves like +x^{g+1} at large positive real x; because the
branch is evaluated pointwise, homotopic contours always integrate on the
same sheet.  Action integrals are instead anchored where the contour crosses
the real axis (f > 0 there when the curve has no real branch points), which
normalizes the vanishing cycle the same way at every cut.  The internal
period engine used by the tracker fixes the principal branch at the first
node, which is deterministic per fiber and lets basis-change bookkeeping
absorb sheet flips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateInputError,
    NearDiscriminantError,
    QuadratureError,
    ValidationError,
)
from .homology import (
    _GAMMA_DELTA_NEXT,
    _GAMMA_DELTA_SAME,
    BranchConfig,
    build_basis,
)
from .poly import ComplexPoly, discriminant, real_root_count, roots as poly_roots
from .spectral import SpectralCoeffs

_AMBIGUITY_LIMIT = 0.7
_MAX_ELLIPSE_NODES = 1 << 16
_MAX_EDGE_NODES = 1 << 11


@dataclass(frozen=True)
class ContourSpec:
    """Realized closed contour in the x-plane.

    kind is "pair-loop" (ellipse around a two-point cut), "big-loop"
    (circle around every branch point) or "polyline"; clearance is the
    minimum distance the contour keeps from the points it must avoid.
    """

    kind: str
    orientation: int = 1
    clearance: float = math.inf
    center: complex = 0.0 + 0.0j
    axis: complex = 1.0 + 0.0j
    semi_major: float = 0.0
    semi_minor: float = 0.0
    vertices: tuple = ()
    enclosed: tuple = ()

    def nodes(self, n):
        """Sample points and quadrature weights for one positive circuit."""
        if self.kind in ("pair-loop", "big-loop"):
            t = np.arange(n) * (2.0 * math.pi / n)
            osc = self.semi_major * np.cos(t) + 1j * self.semi_minor * np.sin(t)
            x = self.center + self.axis * osc
            dx = self.axis * (
                -self.semi_major * np.sin(t) + 1j * self.semi_minor * np.cos(t)
            )
            return x, dx * (2.0 * math.pi / n)
        xs, ws = [], []
        glx, glw = np.polynomial.legendre.leggauss(n)
        verts = self.vertices
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            xs.append(mid + half * glx)
            ws.append(half * glw * np.ones_like(glx))
        return np.concatenate(xs), np.concatenate(ws)


def _min_distance_to(points, x_samples):
    if not points:
        return math.inf
    pts = np.asarray(points, dtype=complex)
    return float(np.min(np.abs(x_samples[:, None] - pts[None, :])))


def pair_loop(roots, pair, orientation=1, avoid=(), pad_frac=0.45):
    """Ellipse around the cut joining roots[pair[0]] and roots[pair[1]].

    Every other root, plus the points in avoid, stays outside with margin.
    """
    pts = tuple(complex(r) for r in roots)
    i, j = pair
    if not (0 <= i < len(pts) and 0 <= j < len(pts)) or i == j:
        raise ValidationError("pair must name two distinct root indices")
    r1, r2 = pts[i], pts[j]
    d = abs(r2 - r1)
    if d == 0.0:
        raise DegenerateInputError("cut endpoints coincide")
    axis = (r2 - r1) / d
    center = 0.5 * (r1 + r2)
    excluded = [p for k, p in enumerate(pts) if k not in (i, j)]
    excluded += [complex(p) for p in avoid]

    def seg_dist(p):
        t = ((p - center) / axis).real
        t = min(d / 2.0, max(-d / 2.0, t))
        return abs(p - (center + axis * t))

    base = min((seg_dist(p) for p in excluded), default=1.0 + d)
    if base <= 1e-9 * d:
        raise DegenerateInputError("an excluded point sits on the cut")
    pad = pad_frac * base
    for _ in range(10):
        a, b = 0.5 * d + pad, pad
        ok = True
        for p in excluded:
            z = (p - center) / axis
            if (z.real / a) ** 2 + (z.imag / b) ** 2 < 1.44:
                ok = False
                break
        if ok:
            t = np.arange(128) * (2.0 * math.pi / 128)
            samples = center + axis * (a * np.cos(t) + 1j * b * np.sin(t))
            clearance = _min_distance_to(excluded, samples)
            return ContourSpec(
                kind="pair-loop",
                orientation=orientation,
                clearance=clearance,
                center=center,
                axis=axis,
                semi_major=a,
                semi_minor=b,
                enclosed=(i, j),
            )
        pad *= 0.6
    raise DegenerateInputError("cannot fit a pair loop between branch points")


def big_loop(roots, orientation=1, factor=2.0, pad=1.0):
    """Circle around every branch point (and the origin)."""
    pts = np.asarray(tuple(complex(r) for r in roots))
    center = complex(np.mean(pts))
    reach = float(np.max(np.abs(pts - center)))
    radius = factor * reach + pad
    clearance = min(radius - reach, radius - abs(center))
    return ContourSpec(
        kind="big-loop",
        orientation=orientation,
        clearance=clearance,
        center=center,
        axis=1.0 + 0.0j,
        semi_major=radius,
        semi_minor=radius,
        enclosed=tuple(range(len(pts))),
    )


def polyline(vertices, orientation=1, avoid=()):
    """Closed polygonal contour through the given vertices."""
    verts = tuple(complex(v) for v in vertices)
    if len(verts) >= 2 and verts[0] == verts[-1]:
        verts = verts[:-1]
    if len(verts) < 3:
        raise ValidationError("polyline needs at least 3 distinct vertices")
    clearance = math.inf
    if avoid:
        samples = []
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            samples.append(a + (b - a) * np.linspace(0.0, 1.0, 64, endpoint=False))
        clearance = _min_distance_to(tuple(avoid), np.concatenate(samples))
    return ContourSpec(
        kind="polyline", orientation=orientation, clearance=clearance, vertices=verts
    )


def _as_poly(f):
    if isinstance(f, SpectralCoeffs):
        return f.poly()
    if isinstance(f, ComplexPoly):
        return f
    return ComplexPoly.of(f)


def _lift_open(fvals, y_start=None):
    """Continuous square root along a sampled path; returns (y, ambiguity)."""
    if np.any(fvals == 0.0):
        raise QuadratureError("contour passes through a branch point")
    cand = np.sqrt(fvals)
    a, b = cand[:-1], cand[1:]
    d_keep = np.abs(b - a)
    d_flip = np.abs(b + a)
    lo = np.minimum(d_keep, d_flip)
    hi = np.maximum(d_keep, d_flip)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(hi > 0.0, lo / hi, 1.0)
    worst = float(np.max(ratio)) if len(ratio) else 0.0
    signs = np.concatenate(([1.0], np.cumprod(np.where(d_flip < d_keep, -1.0, 1.0))))
    y = cand * signs
    if y_start is not None and abs(y[0] - y_start) > abs(y[0] + y_start):
        y = -y
    return y, worst


def _lift_closed(fvals):
    """Lift around a closed circuit; also reports whether the sheet closes up."""
    y, worst = _lift_open(fvals)
    d_keep = abs(y[0] - y[-1])
    d_flip = abs(y[0] + y[-1])
    hi = max(d_keep, d_flip)
    if hi > 0.0:
        worst = max(worst, min(d_keep, d_flip) / hi)
    return y, worst, d_keep < d_flip


def _pair_product(lead, cut_pairs, x):
    """Value of the cut-plane branch of sqrt(f) at x (array or scalar).

    Each cut (r1, r2) contributes d*sqrt(w - 1)*sqrt(w + 1) with
    w = (x - m)/d, m the midpoint and d the half-chord, which has its branch
    cut exactly on the segment and behaves like x - m far away.
    """
    val = np.full_like(np.asarray(x, dtype=complex), np.sqrt(complex(lead)))
    for r1, r2 in cut_pairs:
        m, d = 0.5 * (r1 + r2), 0.5 * (r2 - r1)
        w = (np.asarray(x, dtype=complex) - m) / d
        val = val * (d * np.sqrt(w - 1.0) * np.sqrt(w + 1.0))
    return val


def reference_branch(f, x):
    """Single-valued sqrt of f away from the canonical pairing's cuts.

    Evaluated pointwise, so the same x always lands on the same sheet; the
    branch behaves like +x^{g+1} (times sqrt of the leading coefficient) at
    large positive real x.
    """
    fpoly = _as_poly(f)
    rs = poly_roots(fpoly)
    config = build_basis(rs, len(rs) // 2 - 1)
    pairs = [(rs[i], rs[j]) for i, j in config.pairing]
    out = _pair_product(fpoly.coeffs[-1], pairs, x)
    return out if np.ndim(x) else complex(out)


def _branch_anchor(fpoly):
    """Anchor that compares the continued lift with the cut-plane branch."""
    state = {}

    def anchor(x, fv, y):
        if "pairs" not in state:
            rs = poly_roots(fpoly)
            config = build_basis(rs, len(rs) // 2 - 1)
            state["pairs"] = [(rs[i], rs[j]) for i, j in config.pairing]
            state["lead"] = complex(fpoly.coeffs[-1])
        j = int(np.argmax(np.abs(fv)))
        ref = complex(_pair_product(state["lead"], state["pairs"], x[j]))
        return 1 if abs(y[j] - ref) <= abs(y[j] + ref) else -1

    return anchor


def _real_axis_anchor(x, fv, y):
    """Anchor y = +sqrt(f) at the contour's rightmost real-axis crossing.

    Valid when f > 0 on the real line (no real branch points): continuing
    +sqrt(f) from far on the positive real axis stays real positive all the
    way in, so the rightmost crossing (the one on the right of the enclosed
    cut) sits on the reference sheet.
    """
    right = np.nonzero(x.real >= float(np.median(x.real)))[0]
    j = int(right[np.argmin(np.abs(x.imag[right]))])
    if abs(x[j].imag) > 1e-2 * (1.0 + abs(x[j].real)):
        raise QuadratureError("loop does not cross the real axis", location=x[j])
    ref = np.sqrt(fv[j])
    return 1 if abs(y[j] - ref) <= abs(y[j] + ref) else -1


def _principal_anchor(x, fv, y):
    return 1


_HOLOMORPHIC = {"dx/y": 0, "x dx/y": 1, "x^2 dx/y": 2, "x^3 dx/y": 3}


def _integrand_values(differential, x, y):
    if differential in _HOLOMORPHIC:
        k = _HOLOMORPHIC[differential]
        return x**k / y
    if differential == "y dx/x^2":
        return y / x**2
    raise ValidationError(f"unknown differential {differential!r}")


def _anchored_values(fpoly, contour, differentials, tol, anchor):
    """Adaptive integrals of several differentials with the given anchoring.

    Node counts double until two consecutive refinements agree to tol; the
    lift must be unambiguous at every step and close up after a circuit.
    Returns (values, x, y, weights) from the final refinement, with the
    contour orientation already applied to the values.
    """
    if contour.clearance <= 0.0:
        raise ValidationError("contour has nonpositive clearance")
    needs_origin = any(d == "y dx/x^2" for d in differentials)
    n = 256 if contour.kind != "polyline" else 24
    cap = _MAX_ELLIPSE_NODES if contour.kind != "polyline" else _MAX_EDGE_NODES
    prev = None
    worst_x = None
    while n <= cap:
        x, w = contour.nodes(n)
        if needs_origin and np.min(np.abs(x)) < 1e-12:
            raise QuadratureError("contour passes through the origin pole", location=0.0)
        fv = fpoly(x)
        y, worst, closes = _lift_closed(fv)
        if worst < _AMBIGUITY_LIMIT and closes:
            y = y * anchor(x, fv, y)
            vals = np.array(
                [np.sum(_integrand_values(d, x, y) * w) for d in differentials]
            )
            if prev is not None and np.max(np.abs(vals - prev)) < tol:
                return contour.orientation * vals, x, y, w
            prev = vals
        else:
            prev = None
            worst_x = complex(x[int(np.argmin(np.abs(fv)))])
        n *= 2
    if prev is not None:
        raise QuadratureError(f"quadrature did not reach tol={tol}")
    raise QuadratureError("branch tracking stayed ambiguous", location=worst_x)


def cycle_integral(f, contour: ContourSpec, differential: str, tol: float = 1e-10):
    """Integral of the differential over the contour on the cut-plane branch.

    The lift is pinned to the single-valued branch of reference_branch, so
    homotopic contours give equal values and loop classes add up literally.
    """
    fpoly = _as_poly(f)
    vals, _, _, _ = _anchored_values(
        fpoly, contour, (differential,), tol, _branch_anchor(fpoly)
    )
    return complex(vals[0])


def contour_periods(f, contour: ContourSpec, differentials, tol: float = 1e-9):
    """Integrals of several differentials in one pass, principal lift at node 0.

    The sheet is chosen per fiber (principal square root at the contour's
    first node), which is deterministic for fixed f and contour; callers that
    need a geometric sheet use cycle_integral instead.
    """
    fpoly = _as_poly(f)
    vals, _, _, _ = _anchored_values(
        fpoly, contour, tuple(differentials), tol, _principal_anchor
    )
    return vals


def polygon_periods(f, vertices, y_ref, differentials, tol: float = 1e-9):
    """Integrals over a closed polygon with the sheet pinned near vertex 0.

    The lift's sign is chosen so that its value at the first quadrature node
    (adjacent to vertices[0]) matches y_ref; a caller that transports y_ref
    continuously between nearby fibers therefore integrates homologous cycles
    on matching sheets.  The traversal order of the vertices carries the
    orientation.
    """
    fpoly = _as_poly(f)
    spec = polyline(vertices)
    y0 = complex(y_ref)
    if y0 == 0.0:
        raise ValidationError("y_ref must be a nonzero square root of f")

    def anchor(x, fv, y):
        return 1 if abs(y[0] - y0) <= abs(y[0] + y0) else -1

    vals, _, _, _ = _anchored_values(fpoly, spec, tuple(differentials), tol, anchor)
    return vals


def basis_contours(config: BranchConfig, avoid=()):
    """Realized contours for (gamma_1..gamma_{g+1}, delta_1..delta_g).

    Each loop tries to keep the points in avoid outside; when that is
    geometrically impossible the loop is built without them.
    """
    g = config.g
    contours = []
    specs = [config.pairing[j] for j in range(g + 1)]
    specs += [
        (config.pairing[j][1], config.pairing[j + 1][0]) for j in range(g)
    ]
    for pair in specs:
        try:
            contours.append(pair_loop(config.roots, pair, avoid=avoid))
        except DegenerateInputError:
            contours.append(pair_loop(config.roots, pair))
    return contours


def _ellipse_point(spec, t):
    return spec.center + spec.axis * (
        spec.semi_major * np.cos(t) + 1j * spec.semi_minor * np.sin(t)
    )


def _ellipse_tangent(spec, t):
    return spec.axis * (
        -spec.semi_major * np.sin(t) + 1j * spec.semi_minor * np.cos(t)
    )


def _lift_to_parameter(fpoly, spec, t):
    """Continuous sqrt from node 0 (principal branch) to ellipse parameter t."""
    if t < 1e-12:
        return complex(np.sqrt(fpoly(_ellipse_point(spec, 0.0))))
    n = max(64, int(8192 * t / (2.0 * math.pi)))
    x = _ellipse_point(spec, np.linspace(0.0, t, n))
    y, worst = _lift_open(fpoly(x))
    if worst >= _AMBIGUITY_LIMIT:
        raise QuadratureError("ambiguous lift while locating a crossing")
    return complex(y[-1])


def realized_intersection(f, spec_a: ContourSpec, spec_b: ContourSpec) -> int:
    """Signed same-sheet crossing count of two realized elliptical contours.

    Crossings are located as sign changes of b's ellipse form along a; a
    crossing counts when both lifts land on the same sheet there, with sign
    +1 when (tangent of a, tangent of b) is a positively oriented frame.
    """
    fpoly = _as_poly(f)

    def q_form(spec, z):
        w = (z - spec.center) / spec.axis
        return (w.real / spec.semi_major) ** 2 + (w.imag / spec.semi_minor) ** 2

    n = 1 << 12
    ts = np.arange(n) * (2.0 * math.pi / n)
    za = _ellipse_point(spec_a, ts)
    w = (za - spec_b.center) / spec_b.axis
    q = (w.real / spec_b.semi_major) ** 2 + (w.imag / spec_b.semi_minor) ** 2 - 1.0
    total = 0
    for i in range(n):
        j = (i + 1) % n
        if q[i] == 0.0:
            raise QuadratureError("contours touch tangentially")
        if q[i] * q[j] >= 0.0:
            continue
        lo, hi = ts[i], ts[i] + 2.0 * math.pi / n
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if (q_form(spec_b, complex(_ellipse_point(spec_a, mid))) - 1.0) * q[
                i
            ] > 0.0:
                lo = mid
            else:
                hi = mid
        sa = 0.5 * (lo + hi)
        z = complex(_ellipse_point(spec_a, sa))
        wz = (z - spec_b.center) / spec_b.axis
        tb = math.atan2(
            wz.imag / spec_b.semi_minor, wz.real / spec_b.semi_major
        ) % (2.0 * math.pi)
        ya = _lift_to_parameter(fpoly, spec_a, sa)
        yb = _lift_to_parameter(fpoly, spec_b, tb)
        if abs(ya - yb) >= abs(ya + yb):
            continue
        da = complex(_ellipse_tangent(spec_a, sa))
        db = complex(_ellipse_tangent(spec_b, tb))
        total += 1 if (da.conjugate() * db).imag > 0.0 else -1
    return total * spec_a.orientation * spec_b.orientation


def normalized_basis_contours(f, config: BranchConfig):
    """Basis contours with orientations fixed against the intersection form.

    The raw per-contour lifts leave each realized basis class defined only up
    to sign.  Signs are pinned by measuring the realized crossing numbers
    along the chain gamma_1, delta_1, gamma_2, ..., delta_g, gamma_{g+1} and
    flipping orientations until <gamma_j, delta_j> and <gamma_{j+1}, delta_j>
    take their canonical values.  The remaining global sign cannot affect any
    reported monodromy matrix.
    """
    fpoly = _as_poly(f)
    g = config.g
    cons = basis_contours(config)
    eps = [0] * (2 * g + 1)
    eps[0] = 1
    for j in range(1, g + 1):
        gi, di = j - 1, g + j
        s = realized_intersection(fpoly, cons[gi], cons[di])
        if abs(s) != 1:
            raise QuadratureError(
                f"unexpected crossing count {s} between basis contours"
            )
        eps[di] = _GAMMA_DELTA_SAME * eps[gi] * s
        s2 = realized_intersection(fpoly, cons[j], cons[di])
        if abs(s2) != 1:
            raise QuadratureError(
                f"unexpected crossing count {s2} between basis contours"
            )
        eps[j] = _GAMMA_DELTA_NEXT * eps[di] * s2
    return [
        replace(c, orientation=c.orientation * e) for c, e in zip(cons, eps)
    ]


def basis_periods(
    f,
    config: BranchConfig,
    contours=None,
    with_action: bool = False,
    tol: float = 1e-9,
):
    """Period data of the canonical basis contours at one fiber.

    Returns (P, Q): P[(2g+1) x (g+1)] holds integrals of x^k dx/y over the
    basis contours, and Q (length 2g+1) holds y dx/x^2 integrals when
    requested, all with the per-fiber deterministic lift.
    """
    g = config.g
    diffs = [d for d, k in _HOLOMORPHIC.items() if k <= g]
    diffs.sort(key=lambda d: _HOLOMORPHIC[d])
    if with_action:
        diffs.append("y dx/x^2")
    if contours is None:
        contours = basis_contours(config, avoid=(0.0,) if with_action else ())
    rows = [contour_periods(f, c, diffs, tol=tol) for c in contours]
    block = np.asarray(rows)
    P = block[:, : g + 1]
    Q = block[:, g + 1] if with_action else None
    return P, Q


def residue_check(a, tol: float = 1e-10) -> float:
    """Defect |I + i*pi*a1| of the loop-at-infinity integral of y dx/x^2.

    The class at infinity is realized as a negatively oriented circle around
    every branch point, lifted to the reference sheet, where the integral
    must equal -i*pi*a1 exactly.
    """
    f = SpectralCoeffs.of(1, (a[0], a[1], a[2], 1.0))
    rs = poly_roots(f.poly())
    loop = big_loop(rs, orientation=-1)
    val = cycle_integral(f, loop, "y dx/x^2", tol=tol)
    return abs(val + 1j * math.pi * a[0])


def _a2_deformation_path(a1, a2, a3):
    """Waypoints for the downward a2 deformation to the real-root boundary.

    The boundary is the a2 value where the quartic first touches the real
    axis (a real double root); interior discriminant touches along the way
    (complex double roots on the a1 = a3 stratum) are bypassed by small
    semicircles in the upper half of the complex a2 plane.
    """
    # the real touch maximizes -(x^4 + a1 x^3 + a3 x + 1)/x^2 over real
    # critical points of that expression
    h = ComplexPoly.of((-2.0, -a3, 0.0, a1, 2.0))
    crit = [r.real for r in poly_roots(h) if abs(r.imag) < 1e-9 and abs(r.real) > 1e-9]
    if not crit:
        raise DegenerateInputError("no real touch point for the a2 deformation")
    a2_low = max(-(x**4 + a1 * x**3 + a3 * x + 1.0) / x**2 for x in crit)
    if a2 - a2_low < 1e-7 * max(1.0, abs(a2)):
        raise NearDiscriminantError("parameters lie on or near the discriminant")
    stop = a2_low + 1e-3 * (a2 - a2_low)

    # disc(a2') is a polynomial of degree <= 4 in a2'; locate interior zeros
    # by a Chebyshev fit (zeros may be double, hence the loose realness
    # filter; circling a spurious point is harmless)
    mid, half = 0.5 * (a2_low - 0.5 + a2), 0.5 * (a2 - a2_low + 0.5)
    ts = np.cos(np.pi * np.arange(13) / 12.0)
    vals = np.array(
        [
            discriminant(ComplexPoly.of((1.0, a3, mid + half * t, a1, 1.0))).real
            for t in ts
        ]
    )
    coeffs = np.polyfit(ts, vals / float(np.max(np.abs(vals))), 6)[::-1]
    while len(coeffs) > 1 and abs(coeffs[-1]) < 1e-9 * float(np.max(np.abs(coeffs))):
        coeffs = coeffs[:-1]
    zeros = poly_roots(ComplexPoly.of(tuple(coeffs)), tol=1e-12)
    interior = sorted(
        {
            round(mid + half * z.real, 12)
            for z in zeros
            if abs(z.imag) < 1e-4 * (1.0 + abs(z.real))
            and stop + 1e-6 < mid + half * z.real < a2 - 1e-6
        },
        reverse=True,
    )
    if any(a2 - z < 0.01 * (a2 - stop) for z in interior):
        raise NearDiscriminantError("parameters are too close to the discriminant")

    span = a2 - stop
    waypoints = [complex(a2)]
    pos = a2
    for z in interior:
        if pos - z < 0.01 * span:
            continue
        r = min(0.05 * span, 0.5 * (pos - z), 0.5 * (z - stop))
        waypoints.append(complex(z + r))
        for th in np.linspace(0.0, math.pi, 25)[1:]:
            waypoints.append(z + r * complex(math.cos(th), math.sin(th)))
        pos = z - r
    waypoints.append(complex(stop))
    return waypoints


def _vanishing_pair(a):
    """Roots of the action quartic plus the indices of the cycle-defining pair.

    The distinguished cycle is the one that vanishes when a2 is deformed
    downward to the no-real-root boundary at fixed (a1, a3): the roots are
    tracked along that deformation and the pair that collides at the real
    touch is returned.
    """
    a1, a2, a3 = a
    fpoly = ComplexPoly.of((1.0, a3, a2, a1, 1.0))
    if real_root_count(fpoly) > 0:
        raise ValidationError("parameters are outside component C (real roots)")
    waypoints = _a2_deformation_path(a1, a2, a3)
    rs = poly_roots(fpoly)
    scale = max(1.0, max(abs(r) for r in rs))
    per_seg = 40
    while True:
        samples = []
        for k in range(len(waypoints) - 1):
            seg = np.linspace(waypoints[k], waypoints[k + 1], per_seg)
            samples.extend(seg[1:] if k else seg)
        cur = list(rs)
        ok = True
        for s in samples[1:]:
            prev_sep = min(
                abs(cur[i] - cur[j]) for i in range(4) for j in range(i + 1, 4)
            )
            new = poly_roots(ComplexPoly.of((1.0, a3, s, a1, 1.0)), initial=cur)
            used = [False] * 4
            matched = [0j] * 4
            moved = 0.0
            for i, c0 in enumerate(cur):
                j = min(
                    (k for k in range(4) if not used[k]),
                    key=lambda k: abs(new[k] - c0),
                )
                used[j] = True
                matched[i] = new[j]
                moved = max(moved, abs(new[j] - c0))
            if moved > prev_sep / 3.0:
                ok = False
                break
            cur = matched
        if ok:
            pairs = sorted(
                (
                    (abs(cur[i] - cur[j]), (i, j))
                    for i in range(4)
                    for j in range(i + 1, 4)
                )
            )
            if pairs[0][0] > 0.2 * scale:
                raise DegenerateInputError(
                    "no vanishing pair found at the boundary touch"
                )
            return rs, pairs[0][1]
        if per_seg >= 5120:
            raise DegenerateInputError("root tracking for the a2 deformation failed")
        per_seg *= 2


def _sheet_sign_at_origin(fpoly, x, y):
    """Continue an anchored lift from its node nearest the origin to x = 0.

    Returns the sign s with y(0) = s * sqrt(f(0)) for positive sqrt; the
    constant coefficient of fpoly must be 1 (so y(0) = +-1).
    """
    j = int(np.argmin(np.abs(x)))
    n = 256
    while n <= 1 << 14:
        seg = x[j] * np.linspace(1.0, 0.0, n)
        ys, worst = _lift_open(fpoly(seg), y_start=y[j])
        if worst < _AMBIGUITY_LIMIT:
            return 1 if ys[-1].real > 0.0 else -1
        n *= 2
    raise QuadratureError("could not continue the lift to the origin", location=0.0)


def _action_origin_blocked(fpoly, rs, pair, a, A):
    """Action value when no origin-avoiding ellipse fits around the pair.

    If the tracked pair is a conjugate pair its cut merely passes close to
    the origin: integrate over the enclosing ellipse and strip the origin
    residue using the sheet sign measured by continuing the lift to x = 0.
    A mixed pair (one upper, one lower branch point) occurs only on the
    palindromic stratum a1 == a3, where the a2 deformation detours around a
    complex double root; there the cycle's value equals the real part of the
    loop around the conjugate pair inside the unit circle, with the same
    residue correction, because that loop averages the two detour images.
    """
    a1, _, a3 = a
    scale = max(1.0, max(abs(r) for r in rs))
    i, j = pair
    if abs(rs[i] - rs[j].conjugate()) > 1e-8 * scale:
        if abs(a1 - a3) > 1e-8 * scale:
            raise DegenerateInputError(
                "mixed vanishing pair away from the palindromic stratum"
            )
        upper = [k for k in range(len(rs)) if rs[k].imag > 0.0]
        i = min(upper, key=lambda k: abs(rs[k]))
        j = min(
            (k for k in range(len(rs)) if rs[k].imag < 0.0),
            key=lambda k: abs(rs[k] - rs[i].conjugate()),
        )
    loop = pair_loop(rs, (i, j), orientation=-1)
    vals, x, y, _ = _anchored_values(
        fpoly, loop, ("y dx/x^2",), 1e-10, _real_axis_anchor
    )
    out = (A * 1j / (2.0 * math.pi)) * complex(vals[0])
    z = -loop.center / loop.axis
    origin_inside = (z.real / loop.semi_major) ** 2 + (
        z.imag / loop.semi_minor
    ) ** 2 < 1.0
    if origin_inside and abs(a3) > 1e-13:
        s = _sheet_sign_at_origin(fpoly, x, y)
        out -= A * s * 0.5 * a3
    if abs(out.imag) > 1e-9 * max(1.0, abs(out)):
        raise QuadratureError("action integral has a nonreal value")
    return out.real


def action_I1(a, A: float = 1.0) -> float:
    """Action integral I1 = (A i/2pi) * integral of y dx/x^2 over gamma_1.

    gamma_1 is realized as a negatively oriented loop around the pair of
    branch points that collides under the downward a2 deformation, kept
    clear of the origin pole, with the lift positive where the loop crosses
    the real axis.
    """
    rs, pair = _vanishing_pair(a)
    f = SpectralCoeffs.of(1, (a[0], a[1], a[2], 1.0))
    fpoly = f.poly()
    scale = max(1.0, max(abs(r) for r in rs))
    if abs(rs[pair[0]] - rs[pair[1]].conjugate()) > 1e-8 * scale:
        return _action_origin_blocked(fpoly, rs, pair, a, A)
    try:
        loop = pair_loop(rs, pair, orientation=-1, avoid=(0.0,))
    except DegenerateInputError:
        return _action_origin_blocked(fpoly, rs, pair, a, A)
    vals, _, _, _ = _anchored_values(
        fpoly, loop, ("y dx/x^2",), 1e-10, _real_axis_anchor
    )
    out = (A * 1j / (2.0 * math.pi)) * complex(vals[0])
    if abs(out.imag) > 1e-9 * max(1.0, abs(out)):
        raise QuadratureError("action integral has a nonreal value")
    return out.real


_CUBIC_NODES = 420


def _action_cubic_polynomial(a):
    a1, a2, a3 = a
    return ComplexPoly.of(
        (a2 - 0.25 * (a1 * a1 + a3 * a3), 0.5 * a1 * a3 - 2.0, -a2, 2.0)
    )


def action_I1_cubic(a, A: float = 1.0) -> float:
    """Action integral through the real cubic form.

    I1 = (A/pi) * integral over [u1, u2] of sqrt(g(u))/(1-u^2) du where
    g(u) = 2u^3 - a2 u^2 + (a1 a3/2 - 2) u + a2 - (a1^2+a3^2)/4 and
    u1 <= u2 are the two smallest real roots of g.
    """
    gpoly = _action_cubic_polynomial(a)
    rs = poly_roots(gpoly, tol=1e-13)
    scale = max(1.0, max(abs(r) for r in rs))
    real = sorted(r.real for r in rs if abs(r.imag) < 1e-9 * scale)
    if len(real) != 3:
        raise DegenerateInputError("cubic form does not have three real roots")
    u1, u2, u3 = real
    if not (u2 - u1 > 1e-12 and u3 - u2 > 1e-12):
        raise DegenerateInputError("cubic form has a repeated root")
    c, w = 0.5 * (u1 + u2), 0.5 * (u2 - u1)

    def value(n):
        t, gw = np.polynomial.legendre.leggauss(n)
        t = 0.5 * math.pi * t
        gw = 0.5 * math.pi * gw
        u = c + w * np.sin(t)
        core = np.sqrt(2.0 * (u3 - u)) * (w * np.cos(t)) ** 2
        return float(np.sum(core / ((1.0 - u) * (1.0 + u)) * gw))

    v1, v2 = value(_CUBIC_NODES), value(_CUBIC_NODES + 160)
    if abs(v1 - v2) > 1e-9 * max(1.0, abs(v2)):
        raise QuadratureError("cubic action quadrature did not converge")
    return (A / math.pi) * v2
