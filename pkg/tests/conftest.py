"""Shared helpers and independent oracles for the test suite.

The oracle functions below are written as explicit scalar formulas on
purpose: they must not share code paths with the library, so that an
algebra bug in one place cannot cancel in both.
"""

import numpy as np

from topmonodromy.topsys import TopState


def random_top_state(rng, g, m=None, scale=1.0):
    """Random state with entries in [-scale, scale] and a safe mass parameter."""
    if m is None:
        m = float(rng.uniform(0.2, 2.0))
    omega = rng.uniform(-scale, scale, size=3)
    gamma = rng.uniform(-scale, scale, size=(g, 3))
    return TopState.of(m, omega, gamma)


def closed_form_integrals(s):
    """Hand-written conserved quantities for g <= 2, term by term.

    Returns the tuple (h_minus1, h, h_1, ..., h_{2g}).
    """
    big = 1.0 + s.m
    w1, w2, w3 = s.omega
    hm1 = big * w3
    h0 = 0.5 * (w1 * w1 + w2 * w2 + big * big * w3 * w3)
    if s.g >= 1:
        h0 -= s.gamma[0][2]
    h = h0 - 0.5 * s.m * big * w3 * w3
    if s.g == 0:
        return (hm1, h)
    g1, g2, g3 = s.gamma[0]
    h1 = -(w1 * g1 + w2 * g2 + big * w3 * g3)
    h2 = 0.5 * (g1 * g1 + g2 * g2 + g3 * g3)
    if s.g == 1:
        return (hm1, h, h1, h2)
    if s.g == 2:
        t1, t2, t3 = s.gamma[1]
        h1 -= t3
        h2 -= w1 * t1 + w2 * t2 + big * w3 * t3
        h3 = g1 * t1 + g2 * t2 + g3 * t3
        h4 = 0.5 * (t1 * t1 + t2 * t2 + t3 * t3)
        return (hm1, h, h1, h2, h3, h4)
    raise ValueError("closed forms are written out for g <= 2 only")


def hand_expanded_rhs_g2(s):
    """The nine scalar equations of motion for g = 2, written out termwise."""
    assert s.g == 2
    w1, w2, w3 = s.omega
    g1, g2, g3 = s.gamma[0]
    t1, t2, t3 = s.gamma[1]
    m = s.m
    domega = (-m * w2 * w3 - g2, m * w1 * w3 + g1, 0.0)
    dgamma1 = (
        g2 * w3 - g3 * w2 + t2,
        g3 * w1 - g1 * w3 - t1,
        g1 * w2 - g2 * w1,
    )
    dgamma2 = (
        t2 * w3 - t3 * w2,
        t3 * w1 - t1 * w3,
        t1 * w2 - t2 * w1,
    )
    return domega, (dgamma1, dgamma2)
