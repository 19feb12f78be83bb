import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topmonodromy.errors import (
    DegenerateInputError,
    NearDiscriminantError,
    QuadratureError,
    ValidationError,
)
from topmonodromy.homology import build_basis
from topmonodromy.periods import (
    action_I1,
    action_I1_cubic,
    basis_contours,
    basis_periods,
    big_loop,
    contour_periods,
    cycle_integral,
    normalized_basis_contours,
    pair_loop,
    polyline,
    realized_intersection,
    reference_branch,
    residue_check,
)
from topmonodromy.poly import ComplexPoly, roots
from topmonodromy.spectral import SpectralCoeffs


UNIT_QUARTIC = ComplexPoly.of([1, 0, 1, 0, 1])  # x^4 + x^2 + 1


def quartic_in_C(rng):
    """Random spectral quartic A^2 f with no real roots (component C)."""
    while True:
        a1 = rng.uniform(-2, 2)
        a3 = rng.uniform(-2, 2)
        a2 = rng.uniform(-2, 5)
        f = ComplexPoly.of([1.0, a3, a2, a1, 1.0])
        rs = roots(f)
        if min(abs(r.imag) for r in rs) > 0.05:
            return (a1, a2, a3), f, rs


# ---------------------------------------------------------------------------
# branch of sqrt(f)
# ---------------------------------------------------------------------------


def test_reference_branch_squares_to_f():
    rng = np.random.default_rng(3)
    _, f, _ = quartic_in_C(rng)
    x = rng.normal(size=40) + 1j * rng.normal(size=40)
    y = reference_branch(f, x)
    assert np.allclose(y * y, f(x), rtol=1e-12, atol=1e-12)


def test_reference_branch_positive_leading_asymptotics():
    # far from all cuts the branch behaves like +x^{g+1} sqrt(lead), off by
    # at most the subleading coefficient ratio
    for coeffs in ([1, 0, 1, 0, 1], [1.0, 0.3, 2.0, 0.1, 1.0, 0.2, 2.0]):
        f = ComplexPoly.of(coeffs)
        g1 = (f.degree + 1) // 2  # g + 1
        for x in (1e4, 1e4j, -1e4, 3e3 - 4e3j):
            y = reference_branch(f, x)
            ref = x**g1 * math.sqrt(coeffs[-1])
            assert abs(y / ref - 1) < 1.0 / abs(x)


def test_reference_branch_scalar_and_array_agree():
    f = UNIT_QUARTIC
    xs = [0.3 + 0.2j, -1.5, 2j]
    arr = reference_branch(f, np.array(xs))
    for x, v in zip(xs, arr):
        assert reference_branch(f, x) == pytest.approx(v)


# ---------------------------------------------------------------------------
# contours and cycle integrals
# ---------------------------------------------------------------------------


def test_pair_loop_encloses_only_its_pair():
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    for j in range(2):
        spec = pair_loop(rs, cfg.pairing[j])
        assert sorted(spec.enclosed) == sorted(cfg.pairing[j])
        x, _ = spec.nodes(512)
        others = [rs[i] for i in range(4) if i not in cfg.pairing[j]]
        assert min(np.abs(x - r).min() for r in others) > 0.05
        assert spec.clearance > 0.05


def test_pair_loop_rejects_bad_input():
    rs = roots(UNIT_QUARTIC)
    with pytest.raises(ValidationError):
        pair_loop(rs, (0, 0))
    with pytest.raises(ValidationError):
        pair_loop(rs, (0, 9))


def test_big_loop_contains_all_roots():
    rs = roots(UNIT_QUARTIC)
    spec = big_loop(rs)
    assert sorted(spec.enclosed) == [0, 1, 2, 3]
    x, _ = spec.nodes(256)
    r_min = float(np.min(np.abs(x - spec.center)))
    assert r_min > max(abs(r - spec.center) for r in rs)


def test_quartic_pair_periods_purely_imaginary():
    # x^4+x^2+1 has conjugate root pairs; the dx/y pair periods are
    # purely imaginary and opposite in sign between the two pairs.
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    vals = [
        cycle_integral(UNIT_QUARTIC, pair_loop(rs, cfg.pairing[j]), "dx/y")
        for j in range(2)
    ]
    for v in vals:
        assert abs(v.real) < 1e-10
        assert abs(v.imag) > 1.0
    assert abs(vals[0] + vals[1]) < 1e-8
    assert abs(abs(vals[0]) - 4.3130312950) < 1e-6


def test_big_loop_equals_minus_sum_of_pairs_g1():
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    pairs = sum(
        cycle_integral(UNIT_QUARTIC, pair_loop(rs, cfg.pairing[j]), "dx/y")
        for j in range(2)
    )
    big = cycle_integral(UNIT_QUARTIC, big_loop(rs), "dx/y")
    assert abs(big + pairs) < 1e-8


def test_big_loop_equals_minus_sum_of_pairs_g2():
    f = ComplexPoly.of([1.0, 0.3, 2.0, 0.1, 1.0, 0.2, 2.0])
    rs = roots(f)
    cfg = build_basis(rs, 2)
    pairs = sum(
        cycle_integral(f, pair_loop(rs, cfg.pairing[j]), "dx/y") for j in range(3)
    )
    big = cycle_integral(f, big_loop(rs), "dx/y")
    assert abs(big + pairs) < 1e-8


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=8, deadline=None)
def test_big_loop_sum_rule_random_quartics(seed):
    rng = np.random.default_rng(seed)
    _, f, rs = quartic_in_C(rng)
    cfg = build_basis(rs, 1)
    pairs = sum(
        cycle_integral(f, pair_loop(rs, cfg.pairing[j]), "dx/y") for j in range(2)
    )
    big = cycle_integral(f, big_loop(rs), "dx/y")
    assert abs(big + pairs) < 1e-8 * max(1.0, abs(big))


def test_orientation_flip_negates_integral():
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    ccw = pair_loop(rs, cfg.pairing[0])
    cw = pair_loop(rs, cfg.pairing[0], orientation=-1)
    v1 = cycle_integral(UNIT_QUARTIC, ccw, "dx/y")
    v2 = cycle_integral(UNIT_QUARTIC, cw, "dx/y")
    assert abs(v1 + v2) < 1e-12 * max(1.0, abs(v1))


def test_deformation_invariance_ellipse_vs_rectangle():
    f = ComplexPoly.of([1.0, 0.5, 2.0, 0.3, 1.0])
    rs = roots(f)
    cfg = build_basis(rs, 1)
    i, j = cfg.pairing[0]
    ellipse = pair_loop(rs, (i, j))
    m = 0.5 * (rs[i] + rs[j])
    d = rs[j] - rs[i]  # rectangle spans past both cut endpoints
    corners = [m + u * d for u in (0.6 + 0.15j, -0.6 + 0.15j, -0.6 - 0.15j, 0.6 - 0.15j)]
    rect = polyline(corners)
    v1 = cycle_integral(f, ellipse, "dx/y")
    v2 = cycle_integral(f, rect, "dx/y")
    assert abs(v1 - v2) < 1e-10 * max(1.0, abs(v1))


def test_contour_enclosing_no_branch_points_integrates_to_zero():
    f = UNIT_QUARTIC
    rs = roots(f)
    # a small hexagon well away from every root
    center = 2.5 + 2.5j
    corners = [center + 0.3 * np.exp(2j * math.pi * k / 6) for k in range(6)]
    spec = polyline(corners)
    assert min(abs(np.asarray(rs) - center)) > 1.0
    assert abs(cycle_integral(f, spec, "dx/y")) < 1e-10


def test_residue_identity_on_big_loop():
    # clockwise big loop of y dx/x^2 picks up the pole at infinity:
    # the integral equals -i pi a1 exactly.
    for a in [(0.0, 2.0, 0.0), (1.0, 0.3, -0.4), (-0.7, 1.9, 0.3)]:
        assert residue_check(a) < 1e-10


def test_big_loop_y_dx_over_x2_matches_minus_i_pi_a1():
    a1, a2, a3 = 1.3, 2.1, -0.6
    f = ComplexPoly.of([1.0, a3, a2, a1, 1.0])
    rs = roots(f)
    val = cycle_integral(f, big_loop(rs, orientation=-1), "y dx/x^2")
    assert abs(val + 1j * math.pi * a1) < 1e-10


def test_cycle_integral_rejects_unknown_differential():
    rs = roots(UNIT_QUARTIC)
    with pytest.raises(ValidationError):
        cycle_integral(UNIT_QUARTIC, big_loop(rs), "dx/y^3")


def test_origin_pole_requires_origin_free_contour():
    # y dx/x^2 along a contour through the origin must fail loudly
    with pytest.raises(QuadratureError):
        cycle_integral(UNIT_QUARTIC, polyline([0.0, 0.3, 0.3j]), "y dx/x^2")


def test_tolerance_is_honored():
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    spec = pair_loop(rs, cfg.pairing[0])
    loose = cycle_integral(UNIT_QUARTIC, spec, "dx/y", tol=1e-6)
    tight = cycle_integral(UNIT_QUARTIC, spec, "dx/y", tol=1e-12)
    assert abs(loose - tight) < 1e-6


def test_contour_through_branch_point_raises():
    # a vertex sitting on a root makes the lift ambiguous at every refinement
    rs = roots(UNIT_QUARTIC)
    bad = polyline([rs[0], rs[0] + 0.3, rs[0] + 0.3j])
    with pytest.raises(QuadratureError):
        cycle_integral(UNIT_QUARTIC, bad, "dx/y")


# ---------------------------------------------------------------------------
# basis contours and realized intersections
# ---------------------------------------------------------------------------


def test_basis_contours_counts():
    for coeffs, g in [([1, 0, 1, 0, 1], 1), ([1.0, 0.3, 2.0, 0.1, 1.0, 0.2, 2.0], 2)]:
        rs = roots(ComplexPoly.of(coeffs))
        cont = basis_contours(build_basis(rs, g))
        assert len(cont) == 2 * g + 1
        assert all(c.kind == "pair-loop" for c in cont)


def test_normalized_basis_realizes_canonical_intersections():
    for coeffs, g in [([1, 0, 1, 0, 1], 1), ([1.0, 0.3, 2.0, 0.1, 1.0, 0.2, 2.0], 2)]:
        f = ComplexPoly.of(coeffs)
        cfg = build_basis(roots(f), g)
        cont = normalized_basis_contours(f, cfg)
        for j in range(g):
            assert realized_intersection(f, cont[j], cont[g + 1 + j]) == 1
            assert realized_intersection(f, cont[j + 1], cont[g + 1 + j]) == -1
        assert realized_intersection(f, cont[0], cont[1]) == 0


def test_basis_periods_shape_and_finite():
    f = ComplexPoly.of([1.0, 0.3, 2.0, 0.1, 1.0, 0.2, 2.0])
    cfg = build_basis(roots(f), 2)
    P, Q = basis_periods(f, cfg)
    assert P.shape == (5, 3)
    assert Q is None
    assert np.all(np.isfinite(P))
    P2, _ = basis_periods(f, cfg)
    assert np.array_equal(P, P2)
    P3, Q3 = basis_periods(f, cfg, with_action=True)
    assert Q3.shape == (5,)
    assert np.all(np.isfinite(Q3))
    assert np.allclose(P3, P, rtol=1e-8, atol=1e-10)


def test_contour_periods_consistent_with_cycle_integral_up_to_sheet():
    rs = roots(UNIT_QUARTIC)
    cfg = build_basis(rs, 1)
    spec = pair_loop(rs, cfg.pairing[0])
    anchored = cycle_integral(UNIT_QUARTIC, spec, "dx/y")
    free = contour_periods(UNIT_QUARTIC, spec, ("dx/y",))[0]
    assert min(abs(free - anchored), abs(free + anchored)) < 1e-9


# ---------------------------------------------------------------------------
# action integral
# ---------------------------------------------------------------------------


def test_action_matches_cubic_reduction():
    pts = [
        (0.9, 2.8, -0.4),
        (-1.1, 3.2, 0.6),
        (0.3, 2.1, 0.2),
        (1.4, 4.0, 1.0),
        (-0.5, 2.4, -1.3),
    ]
    for a in pts:
        assert abs(action_I1(a) - action_I1_cubic(a)) < 1e-8


def test_action_matches_cubic_on_palindromic_stratum():
    for a in [(0.1, 2.4, 0.1), (-0.2, 2.6, -0.2), (0.0, 2.2, 0.0)]:
        assert abs(action_I1(a) - action_I1_cubic(a)) < 1e-8


def test_action_scales_linearly_in_A():
    a = (0.9, 2.8, -0.4)
    assert action_I1(a, A=2.5) == pytest.approx(2.5 * action_I1(a), rel=1e-12)


def test_action_monotone_along_symmetric_line():
    vals = [action_I1((0.0, a2, 0.0)) for a2 in (2.2, 2.6, 3.0, 4.5)]
    assert vals[0] == pytest.approx(1.3805430020, abs=1e-6)
    assert vals[1] == pytest.approx(1.5412360815, abs=1e-6)
    assert vals[2] == pytest.approx(1.6776099719, abs=1e-6)
    assert vals[3] == pytest.approx(2.0938007123, abs=1e-6)
    assert all(v1 < v2 for v1, v2 in zip(vals, vals[1:]))


def test_action_vanishes_toward_discriminant():
    # a = (0, -2 + eps, 0) approaches the double-root boundary where the
    # distinguished pair collides; the action must shrink to zero with it.
    seq = [action_I1((0.0, -2.0 + eps, 0.0)) for eps in (0.5, 0.1, 0.02, 0.004)]
    assert all(v1 > v2 > 0 for v1, v2 in zip(seq, seq[1:]))
    assert seq[0] == pytest.approx(0.127051137, abs=1e-6)
    assert action_I1((0.0, -2.0 + 2e-4, 0.0)) < 1e-4


def test_action_rejects_real_root_parameters():
    with pytest.raises(ValidationError):
        action_I1((0.0, -3.0, 0.0))


def test_action_near_discriminant_guard():
    with pytest.raises(NearDiscriminantError):
        action_I1((0.0, -2.0 + 1e-13, 0.0))
    with pytest.raises(NearDiscriminantError):
        action_I1((0.0, 2.02, 0.0))


# ---------------------------------------------------------------------------
# spectral-coefficient plumbing
# ---------------------------------------------------------------------------


def test_spectral_coeffs_feed_periods_directly():
    sc = SpectralCoeffs.of(1, (1.0, 0.3, -0.4, 1.0))
    rs = roots(sc.poly())
    assert all(abs(r.imag) > 1e-6 for r in rs)
    val = cycle_integral(sc, big_loop(rs, orientation=-1), "y dx/x^2")
    assert abs(val + 1j * math.pi * 1.0) < 1e-10
