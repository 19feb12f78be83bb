"""Numerical monodromy of the period lattice along loops in parameter space.

A loop in the reduced coefficient chart is traversed by continuing the
branch points (adaptive-bisection root tracking) while the canonical basis
contours are carried along as polygons.  Each polygon keeps a guaranteed
margin from every branch point: vertices inside a margin disk are pushed
radially outward, crowded edges gain midpoints, and straight stretches are
re-simplified, so the transported polygon never changes homology class.  A
reference square root pinned at each polygon's first vertex is continued in
both the fiber and the position, which fixes the transported cycle's sheet.

No integration happens at intermediate fibers.  The periods of the carried
differentials x^k dx/y, k = 0..g (a rank 2g+1 real frame, since x^g dx/y
keeps a residue at the two punctures over infinity) are computed only at the
base fiber, before and after the circuit; the transported cycles are then
expressed over the starting frame by a least-squares fit whose entries must
round to integers.  The reported residual is the distance of that fit from
the integer lattice, so it reflects quadrature noise only.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .discriminant import g2_branch, quartic_poly, sextic_poly
from .errors import (
    DegenerateInputError,
    NearDiscriminantError,
    QuadratureError,
    RootFindingError,
    ValidationError,
)
from .homology import (
    CycleClass,
    build_basis,
    cycle_labels,
    intersection,
    picard_lefschetz,
)
from .periods import (
    _HOLOMORPHIC,
    _lift_open,
    normalized_basis_contours,
    pair_loop,
    polygon_periods,
)
from .poly import normalized_discriminant, real_root_count, roots

_MARGIN_FRAC = 0.25  # margin = this fraction of the minimal root separation
_STEP_FRAC = 1.0 / 3.0  # accept a step when roots move less than margin * this
_PUSH_TARGET = 1.15  # vertices inside a margin disk are pushed to this * margin
_EDGE_CLEAR = 0.95  # edges are refined below this * margin of clearance
_SIMPLIFY_AT = 170  # polygons above this vertex count get re-simplified
_POLY_VERTS = 48  # vertices used when a realized ellipse becomes a polygon
_MAX_DEPTH = 24  # dyadic subdivision limit per marched segment
_SEP_FLOOR = 1e-6  # relative root-separation floor before giving up
_NEAR_STOP = 0.05  # relative separation at which a vanishing pair is close
_WAYPOINT_DISC_FLOOR = 1e-8
_COND_LIMIT = 1e8


def fiber_polynomial(g, point):
    """Spectral polynomial of a point in the reduced parameter chart.

    Genus 1 uses (a1, a2, a3) -> x^4 + a1 x^3 + a2 x^2 + a3 x + 1 and genus 2
    uses (a, b, c) -> (x^2+1)^3 + x^3 (a x^2 + b x + c); both charts are
    affine in the parameters, so fibers blend linearly along segments.
    """
    if g == 1:
        return quartic_poly(point)
    if g == 2:
        return sextic_poly(point)
    raise ValidationError("parameter loops are supported for genus 1 and 2")


@dataclass(frozen=True)
class ParameterLoop:
    """Closed polygonal path in the reduced parameter chart."""

    g: int
    waypoints: tuple
    orientation: int = 1
    name: str = ""
    stratum: tuple = None

    def path_points(self):
        """Waypoints in traversal order (orientation -1 walks them backwards)."""
        if self.orientation == 1:
            return self.waypoints
        return tuple(reversed(self.waypoints))

    @property
    def base(self):
        return self.waypoints[0]


def parameter_loop(g, waypoints, orientation=1, name="", stratum=None):
    """Validated closed loop through the given chart waypoints.

    The path must return to its first waypoint, every waypoint must keep a
    normalized discriminant above a fixed floor, and the base fiber must have
    no real branch points (the canonical cut system needs a free real axis).
    """
    if g not in (1, 2):
        raise ValidationError("parameter loops are supported for genus 1 and 2")
    if orientation not in (1, -1):
        raise ValidationError("orientation must be +1 or -1")
    pts = []
    for w in waypoints:
        t = tuple(float(v) for v in w)
        if len(t) != 3 or not all(math.isfinite(v) for v in t):
            raise ValidationError("each waypoint needs 3 finite coordinates")
        pts.append(t)
    if len(pts) < 2:
        raise ValidationError("a loop needs at least 2 waypoints")
    if pts[0] != pts[-1]:
        raise ValidationError("a loop must end at its base waypoint")
    for t in pts:
        if normalized_discriminant(fiber_polynomial(g, t)) < _WAYPOINT_DISC_FLOOR:
            raise NearDiscriminantError(f"waypoint {t} sits on the discriminant")
    if real_root_count(fiber_polynomial(g, pts[0])) > 0:
        raise ValidationError("the base fiber must have no real branch points")
    st = None if stratum is None else tuple(float(v) for v in stratum)
    return ParameterLoop(
        g=g, waypoints=tuple(pts), orientation=orientation, name=name, stratum=st
    )


def compose_loops(first: ParameterLoop, second: ParameterLoop) -> ParameterLoop:
    """Loop that traverses `first` and then `second` (common base required)."""
    if first.g != second.g:
        raise ValidationError("loops live over different genera")
    p1, p2 = first.path_points(), second.path_points()
    if p1[0] != p2[0]:
        raise ValidationError("composition needs a common base waypoint")
    name = f"{first.name}*{second.name}" if first.name and second.name else ""
    return parameter_loop(first.g, p1 + p2[1:], name=name)


_CUSHMAN_BASE = (0.0, 1.0, 0.0)
_CUSHMAN_CENTER = (0.0, 2.0, 0.0)
_CUSHMAN_RADIUS = 0.5
_KAPPA_BASE = (0.0, 0.5, 0.0)
# Must stay below 0.18: the double-pair branch curve re-enters the transverse
# plane of its c2 = 1.3 point at in-plane radius about 0.18 (and the plane of
# the c2 = 0.75 point at about 0.25), and a meridian may enclose only the
# central stratum point.
_KAPPA_RADIUS = 0.08
# (branch parameter c2, branch sign, circle direction); the side and
# direction assignments are frozen against the loops' documented lattice maps.
_KAPPA_GEOMETRY = {
    "kappa1": (1.3, 1, 1),
    "kappa2": (1.3, -1, 1),
    "kappa3": (0.75, 1, 1),
}
_CIRCLE_POINTS = 64


def _cushman_waypoints():
    pts = [_CUSHMAN_BASE]
    for k in range(_CIRCLE_POINTS + 1):
        th = -0.5 * math.pi - 2.0 * math.pi * k / _CIRCLE_POINTS
        pts.append(
            (
                _CUSHMAN_CENTER[0] + _CUSHMAN_RADIUS * math.cos(th),
                _CUSHMAN_CENTER[1] + _CUSHMAN_RADIUS * math.sin(th),
                0.0,
            )
        )
    pts.append(_CUSHMAN_BASE)
    return pts


def _g2_branch_frame(c2, sign):
    """Branch point with an orthonormal frame of its normal plane."""
    h = 1e-5
    b0 = np.array(g2_branch(c2, sign).abc)
    bp = np.array(g2_branch(c2 + h, sign).abc)
    bm = np.array(g2_branch(c2 - h, sign).abc)
    t = (bp - bm) / (2.0 * h)
    t = t / np.linalg.norm(t)
    u = np.array([0.0, 1.0, 0.0])
    if abs(float(u @ t)) > 0.9:
        u = np.array([1.0, 0.0, 0.0])
    n1 = u - float(u @ t) * t
    n1 = n1 / np.linalg.norm(n1)
    n2 = np.cross(t, n1)
    return b0, n1, n2


def _kappa_waypoints(c2, sign, direction):
    b0, n1, n2 = _g2_branch_frame(c2, sign)
    pts = [_KAPPA_BASE]
    for k in range(_CIRCLE_POINTS + 1):
        ph = direction * 2.0 * math.pi * k / _CIRCLE_POINTS
        p = b0 + _KAPPA_RADIUS * (math.cos(ph) * n1 + math.sin(ph) * n2)
        pts.append(tuple(float(v) for v in p))
    pts.append(_KAPPA_BASE)
    return pts, tuple(float(v) for v in b0)


def named_loop(name: str, orientation: int = 1) -> ParameterLoop:
    """A documented loop: "cushman" (genus 1) or "kappa1"/"kappa2"/"kappa3".

    "cushman" circles the isolated complex-double-pair point (0, 2) of the
    quartic chart clockwise in the a3 = 0 plane from the base (0, 1, 0).
    The kappa loops ring the sextic's double-root branch in a transverse
    plane from a common base; their side and direction are frozen so that
    each reproduces its documented lattice map.
    """
    if name == "cushman":
        return parameter_loop(
            1,
            _cushman_waypoints(),
            orientation=orientation,
            name=name,
            stratum=_CUSHMAN_CENTER,
        )
    if name in _KAPPA_GEOMETRY:
        c2, sign, direction = _KAPPA_GEOMETRY[name]
        pts, stratum = _kappa_waypoints(c2, sign, direction)
        return parameter_loop(
            2, pts, orientation=orientation, name=name, stratum=stratum
        )
    raise ValidationError(f"unknown named loop {name!r}")


@dataclass(frozen=True)
class MonodromyResult:
    """Integer lattice map around a loop; columns are images of basis cycles."""

    name: str
    basis: tuple
    matrix: tuple
    residual: float
    permutation: tuple
    orientation: int
    steps_used: int = 0
    condition: float = 0.0

    def as_array(self):
        return np.array(self.matrix, dtype=int)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "basis": list(self.basis),
                "matrix": [list(row) for row in self.matrix],
                "residual": self.residual,
                "permutation": list(self.permutation),
                "orientation": self.orientation,
            },
            sort_keys=True,
        )


def _differentials(g):
    diffs = [d for d, k in _HOLOMORPHIC.items() if k <= g]
    diffs.sort(key=lambda d: _HOLOMORPHIC[d])
    return tuple(diffs)


def _pairwise_min_sep(rs):
    n = len(rs)
    return min(abs(rs[i] - rs[j]) for i in range(n) for j in range(i + 1, n))


def _match_roots(old, new):
    """Greedy nearest-distance bijection; returns (reordered new, max move)."""
    n = len(old)
    order = sorted(
        (abs(o - w), i, j) for i, o in enumerate(old) for j, w in enumerate(new)
    )
    out = [None] * n
    used = set()
    filled = 0
    for _, i, j in order:
        if out[i] is not None or j in used:
            continue
        out[i] = new[j]
        used.add(j)
        filled += 1
        if filled == n:
            break
    disp = max(abs(o - w) for o, w in zip(old, out))
    return out, disp


def _segment_point_distance(a, b, p):
    d = b - a
    l2 = (d * d.conjugate()).real
    if l2 == 0.0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / l2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def _in_triangle(a, b, c, p):
    def cross(u, v):
        return u.real * v.imag - u.imag * v.real

    s1 = cross(b - a, p - a)
    s2 = cross(c - b, p - b)
    s3 = cross(a - c, p - c)
    has_neg = s1 < 0.0 or s2 < 0.0 or s3 < 0.0
    has_pos = s1 > 0.0 or s2 > 0.0 or s3 > 0.0
    return not (has_neg and has_pos)


def _winding_numbers(verts, rs):
    """Turn count of the polygon around each point (straight edges subtend
    less than a half turn, so the principal-angle sum per edge is exact)."""
    v = np.asarray(verts, dtype=complex)
    out = []
    for r in rs:
        w = v - r
        total = float(np.sum(np.angle(np.roll(w, -1) / w)))
        out.append(int(round(total / (2.0 * math.pi))))
    return tuple(out)


def _continue_sqrt(values, y_start):
    """End value of the square root continued along sampled f-values."""
    vals = np.asarray(values, dtype=complex)
    if np.any(vals == 0.0):
        return None
    y, worst = _lift_open(vals, y_start=y_start)
    if worst >= 0.7:
        return None
    return complex(y[-1])


def _polygonize(spec, n=_POLY_VERTS):
    """Ellipse contour as a vertex list whose order carries the orientation."""
    ts = np.arange(n) * (2.0 * math.pi / n)
    pts = spec.center + spec.axis * (
        spec.semi_major * np.cos(ts) + 1j * spec.semi_minor * np.sin(ts)
    )
    verts = [complex(p) for p in pts]
    if spec.orientation == -1:
        verts = [verts[0]] + verts[1:][::-1]
    return verts


class _Cable:
    """A transported polygon with its pinned reference square root."""

    __slots__ = ("verts", "y_ref", "windings")

    def __init__(self, verts, y_ref, windings=()):
        self.verts = verts
        self.y_ref = y_ref
        self.windings = windings


def _maintain_cable(cable, rs, margin, fpoly):
    """Restore the margin invariant after the branch points moved.

    Vertices inside a root's margin disk move radially outward (the disks are
    disjoint, so the move stays inside one disk and cannot cross any root);
    edges with less clearance than the margin gain midpoints until every edge
    clears.  Returns None when the geometry cannot be restored, which makes
    the caller bisect the parameter step.
    """
    verts = list(cable.verts)
    y_ref = cable.y_ref
    for _ in range(8):
        moved = False
        for i, v in enumerate(verts):
            for r in rs:
                d = abs(v - r)
                if d < margin:
                    if d == 0.0:
                        return None
                    target = r + (v - r) * (_PUSH_TARGET * margin / d)
                    if i == 0:
                        xs = np.linspace(v, target, 17)
                        y_new = _continue_sqrt(fpoly(xs), y_ref)
                        if y_new is None:
                            return None
                        y_ref = y_new
                    verts[i] = target
                    moved = True
                    break
        refined = []
        n = len(verts)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            refined.append(a)
            if any(
                _segment_point_distance(a, b, r) < _EDGE_CLEAR * margin for r in rs
            ):
                refined.append(0.5 * (a + b))
                moved = True
        verts = refined
        if not moved:
            return _Cable(verts, y_ref, cable.windings)
    return None


def _simplify_cable(verts, rs, margin):
    """Drop vertices whose removal keeps clearance and crosses no root."""
    changed = True
    while len(verts) > _SIMPLIFY_AT and changed:
        changed = False
        keep = [True] * len(verts)
        i = 1
        while i < len(verts):
            a = verts[i - 1]
            v = verts[i]
            b = verts[(i + 1) % len(verts)]
            safe = all(
                _segment_point_distance(a, b, r) >= 1.05 * margin
                and not _in_triangle(a, v, b, r)
                for r in rs
            )
            if safe:
                keep[i] = False
                changed = True
                i += 2
            else:
                i += 1
        verts = [v for v, k in zip(verts, keep) if k]
    return verts


class _March:
    """Root (and optionally cable) transport along chart segments."""

    def __init__(self, g, point, with_cables):
        self.g = g
        self.point = tuple(float(v) for v in point)
        self.fpoly = fiber_polynomial(g, self.point)
        self.rs = [complex(r) for r in roots(self.fpoly)]
        self.min_sep = _pairwise_min_sep(self.rs)
        self.fibers = [tuple(self.rs)]
        self.steps_used = 0
        self.cables = None
        if with_cables:
            config = build_basis(tuple(self.rs), g)
            margin = _MARGIN_FRAC * self.min_sep
            self.cables = []
            for spec in normalized_basis_contours(self.fpoly, config):
                verts = _polygonize(spec)
                y0 = complex(np.sqrt(self.fpoly(verts[0])))
                cable = _maintain_cable(_Cable(verts, y0), self.rs, margin, self.fpoly)
                if cable is None:
                    raise DegenerateInputError(
                        "cannot realize a basis contour with a safety margin"
                    )
                cable.windings = _winding_numbers(cable.verts, self.rs)
                self.cables.append(cable)

    def _try_advance(self, target):
        fp_new = fiber_polynomial(self.g, target)
        try:
            rs_new = roots(fp_new, initial=np.asarray(self.rs))
        except RootFindingError:
            return False
        matched, disp = _match_roots(self.rs, [complex(r) for r in rs_new])
        sep_new = _pairwise_min_sep(matched)
        scale = max(1.0, max(abs(r) for r in matched))
        if sep_new < _SEP_FLOOR * scale:
            return False
        margin = _MARGIN_FRAC * min(self.min_sep, sep_new)
        if disp >= _STEP_FRAC * margin:
            return False
        new_cables = None
        if self.cables is not None:
            new_cables = []
            for cable in self.cables:
                x0 = cable.verts[0]
                blend = np.linspace(0.0, 1.0, 9)
                vals = (1.0 - blend) * complex(self.fpoly(x0)) + blend * complex(
                    fp_new(x0)
                )
                y_new = _continue_sqrt(vals, cable.y_ref)
                if y_new is None:
                    return False
                moved = _maintain_cable(
                    _Cable(list(cable.verts), y_new, cable.windings),
                    matched,
                    margin,
                    fp_new,
                )
                if moved is None:
                    return False
                moved.verts = _simplify_cable(moved.verts, matched, margin)
                if _winding_numbers(moved.verts, matched) != cable.windings:
                    raise QuadratureError(
                        "a branch point crossed a transported contour"
                    )
                new_cables.append(moved)
        self.point = tuple(target)
        self.fpoly = fp_new
        self.rs = matched
        self.min_sep = sep_new
        self.fibers.append(tuple(matched))
        self.steps_used += 1
        if new_cables is not None:
            self.cables = new_cables
        return True

    def traverse(self, target, presplit=1, stop=None):
        """March to target; an optional stop predicate ends the walk early."""
        start = self.point
        end = tuple(float(v) for v in target)
        if end == start:
            return False
        k = max(1, int(presplit))
        stack = [(i / k, (i + 1) / k) for i in reversed(range(k))]
        while stack:
            t0, t1 = stack.pop()
            q = tuple((1.0 - t1) * a + t1 * b for a, b in zip(start, end))
            if self._try_advance(q):
                if stop is not None and stop(self):
                    return True
                continue
            if (t1 - t0) <= 2.0**-_MAX_DEPTH:
                raise NearDiscriminantError(
                    f"root tracking stalled between {start} and {end}"
                )
            tm = 0.5 * (t0 + t1)
            stack.append((tm, t1))
            stack.append((t0, tm))
        return False


def _run_march(loop, with_cables, steps=0, stop=None):
    path = loop.path_points()
    state = _March(loop.g, path[0], with_cables)
    hops = list(zip(path[:-1], path[1:]))
    lengths = [math.dist(a, b) for a, b in hops]
    total = sum(lengths) or 1.0
    for (a, b), length in zip(hops, lengths):
        if length == 0.0:
            continue
        k = max(1, round(steps * length / total)) if steps else 1
        if state.traverse(b, presplit=k, stop=stop):
            return state, True
    return state, False


def _closure_permutation(state, rs0):
    scale = max(1.0, max(abs(r) for r in rs0))
    order = sorted(
        (abs(c - r), i, j)
        for i, c in enumerate(state.rs)
        for j, r in enumerate(rs0)
    )
    perm = [None] * len(rs0)
    used = set()
    worst = 0.0
    filled = 0
    for d, i, j in order:
        if perm[i] is not None or j in used:
            continue
        perm[i] = j
        used.add(j)
        worst = max(worst, d)
        filled += 1
        if filled == len(rs0):
            break
    if worst > 1e-6 * scale:
        raise QuadratureError("the loop failed to close on its starting fiber")
    return tuple(perm)


def _frame_condition(frame):
    sv = np.linalg.svd(frame, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > _COND_LIMIT:
        raise QuadratureError("the period frame is ill-conditioned")
    return float(sv[0] / sv[-1])


def _integer_fit(frame, rows):
    """Express rows over the frame; returns (ints, residual) of the fit."""
    sol, *_ = np.linalg.lstsq(frame.T, rows.T, rcond=None)
    flo = sol.T
    ints = np.rint(flo).astype(int)
    residual = float(np.max(np.abs(flo - ints)))
    scale = max(1.0, float(np.max(np.abs(frame))))
    residual = max(residual, float(np.max(np.abs(ints @ frame - rows))) / scale)
    return ints, residual


def monodromy_periods(loop: ParameterLoop, tol: float = 1e-9, steps: int = 0):
    """Integer monodromy of the period lattice around the loop.

    The canonical basis contours are carried around the loop as polygons and
    integrated only at the base fiber, before and after the circuit; the
    transported cycles are expressed over the starting period frame by a fit
    that must round to a unimodular integer matrix.  Columns of the returned
    matrix are the images of (gamma_1..gamma_{g+1}, delta_1..delta_g).
    """
    g = loop.g
    diffs = _differentials(g)
    path = loop.path_points()
    state = _March(g, path[0], with_cables=True)
    rs0 = tuple(state.rs)
    base_poly = state.fpoly
    P0 = np.array(
        [
            polygon_periods(base_poly, c.verts, c.y_ref, diffs, tol)
            for c in state.cables
        ]
    )
    frame = np.hstack([P0.real, P0.imag])
    condition = _frame_condition(frame)
    for a, b in zip(path[:-1], path[1:]):
        state.traverse(b, presplit=max(1, steps // max(1, len(path) - 1)))
    V = np.array(
        [
            polygon_periods(base_poly, c.verts, c.y_ref, diffs, tol)
            for c in state.cables
        ]
    )
    rows = np.hstack([V.real, V.imag])
    m_row, residual = _integer_fit(frame, rows)
    if abs(int(round(float(np.linalg.det(m_row))))) != 1:
        raise QuadratureError("the transported lattice map is not unimodular")
    perm = _closure_permutation(state, rs0)
    matrix = tuple(tuple(int(v) for v in row) for row in m_row.T)
    return MonodromyResult(
        name=loop.name,
        basis=tuple(cycle_labels(g)),
        matrix=matrix,
        residual=residual,
        permutation=perm,
        orientation=loop.orientation,
        steps_used=state.steps_used,
        condition=condition,
    )


def track_roots(loop: ParameterLoop, steps: int = 64):
    """Branch-point trajectories along the loop.

    Returns (paths, permutation): paths[t, i] follows the root that starts
    at sorted position i of the base fiber, one row per accepted step, and
    permutation[i] names the sorted base root where trajectory i ends.
    """
    state, _ = _run_march(loop, with_cables=False, steps=steps)
    perm = _closure_permutation(state, state.fibers[0])
    return np.asarray(state.fibers, dtype=complex), perm


def _half_turns(fibers, i, j):
    """Signed half-turn count of the separation r_i - r_j along the fibers."""
    s = np.array([f[i] - f[j] for f in fibers])
    total = float(np.sum(np.angle(s[1:] / s[:-1])))
    n = int(round(total / math.pi))
    if abs(total - n * math.pi) > 0.5:
        raise QuadratureError("separation winding is not a half-turn multiple")
    return n


def picard_lefschetz_route(loop: ParameterLoop, tol: float = 1e-9):
    """Lattice monodromy assembled from local twists at the loop's stratum.

    Marches straight from the base toward the stratum until the vanishing
    pairs stand out, expresses their cycles over the transported frame by
    integer fits, counts each pair's half-turns around the full loop, and
    applies the twist formula once per half-turn.  Assumes the loop is a
    meridian of the stratum it names.
    """
    if loop.stratum is None:
        raise ValidationError("this route needs a loop with a stratum point")
    g = loop.g
    diffs = _differentials(g)

    root_state, _ = _run_march(loop, with_cables=False)
    perm = _closure_permutation(root_state, root_state.fibers[0])

    state = _March(g, loop.path_points()[0], with_cables=True)

    def near(st):
        scale = max(1.0, max(abs(r) for r in st.rs))
        return st.min_sep <= _NEAR_STOP * scale

    if not state.traverse(loop.stratum, presplit=8, stop=near):
        raise ValidationError(
            "no vanishing pair emerged on the way to the stratum point"
        )
    rs_near = state.rs
    d_min = state.min_sep
    n = len(rs_near)
    close = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if abs(rs_near[i] - rs_near[j]) < 5.0 * d_min
    ]
    seen = [i for pair in close for i in pair]
    if not close or len(set(seen)) != len(seen):
        raise DegenerateInputError("ambiguous vanishing-cycle identification")

    A = np.array(
        [
            polygon_periods(state.fpoly, c.verts, c.y_ref, diffs, tol)
            for c in state.cables
        ]
    )
    frame = np.hstack([A.real, A.imag])
    condition = _frame_condition(frame)
    twists = []
    residual = 0.0
    for i, j in close:
        spec = pair_loop(tuple(rs_near), (i, j))
        verts = _polygonize(spec)
        y0 = complex(np.sqrt(state.fpoly(verts[0])))
        q = np.asarray(polygon_periods(state.fpoly, verts, y0, diffs, tol))
        coords, fit_res = _integer_fit(
            frame, np.concatenate([q.real, q.imag])[np.newaxis, :]
        )
        residual = max(residual, fit_res)
        v = CycleClass.of(g, tuple(int(c) for c in coords[0]))
        if v.is_zero():
            raise QuadratureError("a vanishing-cycle fit collapsed to zero")
        w = _half_turns(root_state.fibers, i, j)
        twists.append((v, w))
    if len(twists) == 2 and intersection(twists[0][0], twists[1][0]) != 0:
        raise DegenerateInputError("vanishing cycles fail to be disjoint")

    dim = 2 * g + 1
    columns = []
    for idx in range(dim):
        unit = [0] * dim
        unit[idx] = 1
        c = CycleClass.of(g, unit)
        for v, w in twists:
            for _ in range(abs(w)):
                c = picard_lefschetz(c, v, orientation=1 if w > 0 else -1)
        columns.append(c.coeffs)
    matrix = tuple(tuple(int(v) for v in row) for row in np.array(columns).T)
    return MonodromyResult(
        name=loop.name,
        basis=tuple(cycle_labels(g)),
        matrix=matrix,
        residual=residual,
        permutation=perm,
        orientation=loop.orientation,
        steps_used=root_state.steps_used + state.steps_used,
        condition=condition,
    )


_TORUS_BASIS = ("gamma1", "gamma3", "gamma_inf")
# Columns express (gamma_1, gamma_3, gamma_inf, delta_1, delta_2) over the
# canonical five-cycle basis.  The curve has two points over infinity; the
# torus basis uses the puncture class gamma_inf = gamma_1+gamma_2+gamma_3,
# the loop around the puncture opposite to the one the genus-1 action
# normalization singles out.
_TORUS_CHANGE = np.array(
    [
        [1, 0, 1, 0, 0],
        [0, 0, 1, 0, 0],
        [0, 1, 1, 0, 0],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ]
)


def torus_block(result: MonodromyResult) -> MonodromyResult:
    """Genus-2 lattice map rewritten over (gamma_1, gamma_3, gamma_infinity).

    Those three cycles span the invariant lattice of the torus fibration;
    the map must carry no components onto the delta cycles from them.
    """
    if len(result.basis) != 5:
        raise ValidationError("the torus block is defined for genus-2 results")
    b = _TORUS_CHANGE
    b_inv = np.rint(np.linalg.inv(b)).astype(int)
    m_new = b_inv @ result.as_array() @ b
    if np.any(m_new[3:, :3] != 0):
        raise ValidationError("the lattice map does not preserve the torus cycles")
    block = m_new[:3, :3]
    return MonodromyResult(
        name=result.name,
        basis=_TORUS_BASIS,
        matrix=tuple(tuple(int(v) for v in row) for row in block),
        residual=result.residual,
        permutation=result.permutation,
        orientation=result.orientation,
        steps_used=result.steps_used,
        condition=result.condition,
    )


_ACTION_BASIS = ("I1", "I2", "I3")


def monodromy_actions_g1(result: MonodromyResult) -> MonodromyResult:
    """Action-variable monodromy implied by a genus-1 lattice map.

    Valid when the map fixes the puncture class gamma_infinity and shifts
    gamma_1 by a multiple of it; then the first action gains that multiple
    of the puncture action I2 while I2 and the fiber-wise constant I3 stay
    fixed.  Columns are the images of (I1, I2, I3).
    """
    if len(result.basis) != 3:
        raise ValidationError("action extraction is defined for genus-1 results")
    m = result.as_array()
    image_inf = -(m[:, 0] + m[:, 1])
    if list(image_inf) != [-1, -1, 0]:
        raise ValidationError("the lattice map does not fix the puncture class")
    n1, n2, nd = int(m[0, 0]), int(m[1, 0]), int(m[2, 0])
    if nd != 0 or n1 - n2 != 1:
        raise ValidationError(
            "gamma_1 is not shifted by a multiple of the puncture class"
        )
    k = -n2
    return MonodromyResult(
        name=result.name,
        basis=_ACTION_BASIS,
        matrix=((1, 0, 0), (k, 1, 0), (0, 0, 1)),
        residual=result.residual,
        permutation=result.permutation,
        orientation=result.orientation,
        steps_used=result.steps_used,
        condition=result.condition,
    )
