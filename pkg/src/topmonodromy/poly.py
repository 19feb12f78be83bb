"""Dense complex polynomial arithmetic.

Coefficients are stored in ascending degree order (coeffs[k] multiplies x^k).
The zero polynomial is the empty coefficient list and has degree -1.

Root finding is a simultaneous Aberth-Ehrlich iteration started on a circle
of radius given by the Fujiwara bound.  Discriminants go through the
Sylvester matrix with the normalization

    disc(p) = (-1)^(n(n-1)/2) * Res(p, p') / lead(p)

so that disc(x^2 + b x + c) = b^2 - 4c.  Real-root counting uses Sturm
sequences in exact rational arithmetic; float coefficients are dyadic
rationals, so the exact branch covers every input this package produces.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateInputError, RootFindingError, ValidationError

_ABERTH_BUDGET = 400


@dataclass(frozen=True)
class ComplexPoly:
    """Immutable dense polynomial over the complex numbers."""

    coeffs: tuple

    @staticmethod
    def of(coeffs) -> "ComplexPoly":
        """Build a polynomial, stripping exact trailing zeros."""
        cs = [complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return ComplexPoly(tuple(cs))

    @staticmethod
    def from_roots(roots, lead=1.0) -> "ComplexPoly":
        p = ComplexPoly.of([lead])
        for r in roots:
            p = p * ComplexPoly.of([-r, 1.0])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        if not self.coeffs:
            raise ValidationError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        """Horner evaluation; accepts scalars or numpy arrays."""
        if not self.coeffs:
            return np.zeros_like(x) if isinstance(x, np.ndarray) else 0j
        if isinstance(x, np.ndarray):
            acc = np.full_like(x, self.coeffs[-1], dtype=complex)
            for c in self.coeffs[-2::-1]:
                acc = acc * x + c
            return acc
        acc = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            acc = acc * x + c
        return acc

    def derivative(self) -> "ComplexPoly":
        return ComplexPoly.of([k * c for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0j] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0j] * (n - len(other.coeffs))
        return ComplexPoly.of([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return ComplexPoly.of([c * other for c in self.coeffs])
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1) if self.coeffs and other.coeffs else []
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ComplexPoly.of(out)

    __rmul__ = __mul__

    def monic(self) -> "ComplexPoly":
        return self * (1.0 / self.lead)

    def coeff_scale(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def is_real(self, tol: float = 1e-12) -> bool:
        scale = self.coeff_scale()
        return all(abs(c.imag) <= tol * max(scale, 1.0) for c in self.coeffs)


def _fujiwara_radius(coeffs) -> float:
    """Upper bound on root magnitudes: 2 * max_k |a_{n-k}/a_n|^(1/k)."""
    n = len(coeffs) - 1
    lead = abs(coeffs[-1])
    best = 0.0
    for k in range(1, n + 1):
        c = abs(coeffs[n - k]) / lead
        if k == n:
            c = c / 2.0
        if c > 0.0:
            best = max(best, c ** (1.0 / k))
    return 2.0 * best if best > 0.0 else 1.0


def roots(p: ComplexPoly, tol: float = 1e-12, initial=None):
    """All roots of p by simultaneous Aberth-Ehrlich iteration.

    Returns exactly p.degree values sorted lexicographically by (real, imag).
    `initial` optionally warm-starts the iteration (used by continuation).
    Residual contract: |p(r)| <= tol * max|coeff| * max(1,|r|)^degree.
    """
    n = p.degree
    if n < 1:
        raise ValidationError("roots requires degree >= 1")
    a = np.asarray(p.coeffs, dtype=complex)
    dp = p.derivative()
    scale = p.coeff_scale()

    if initial is not None:
        z = np.asarray(initial, dtype=complex).copy()
        if z.shape != (n,):
            raise ValidationError("initial guesses must match the degree")
    else:
        radius = _fujiwara_radius(a)
        angles = 2.0 * np.pi * (np.arange(n) + 0.5) / n + 0.41
        z = radius * np.exp(1j * angles)

    best = math.inf
    for _ in range(_ABERTH_BUDGET):
        pv = p(z)
        bound = tol * scale * np.maximum(1.0, np.abs(z)) ** n
        resid = np.abs(pv)
        best = min(best, float(np.max(resid / np.maximum(bound, 1e-300)) ))
        if np.all(resid <= bound):
            break
        dpv = dp(z)
        dpv = np.where(np.abs(dpv) < 1e-300, 1e-300, dpv)
        newton = pv / dpv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        ssum = inv.sum(axis=1)
        denom = 1.0 - newton * ssum
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        step = np.where(np.isfinite(step), step, newton)
        z = z - step
    else:
        raise RootFindingError(
            "Aberth iteration did not converge within %d sweeps" % _ABERTH_BUDGET,
            best_residual=best,
        )
    order = np.lexsort((z.imag, z.real))
    return [complex(v) for v in z[order]]


def _sylvester(p: ComplexPoly, q: ComplexPoly) -> np.ndarray:
    """Sylvester matrix of p (degree n) and q (degree m), descending rows."""
    n, m = p.degree, q.degree
    pd = list(p.coeffs[::-1])
    qd = list(q.coeffs[::-1])
    size = n + m
    S = np.zeros((size, size), dtype=complex)
    for r in range(m):
        S[r, r : r + n + 1] = pd
    for r in range(n):
        S[m + r, r : r + m + 1] = qd
    return S


def resultant(p: ComplexPoly, q: ComplexPoly) -> complex:
    if p.degree < 1 or q.degree < 1:
        raise ValidationError("resultant requires both degrees >= 1")
    return complex(np.linalg.det(_sylvester(p, q)))


def discriminant(p: ComplexPoly) -> complex:
    """disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lead(p)."""
    n = p.degree
    if n < 2:
        raise ValidationError("discriminant requires degree >= 2")
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    return sign * resultant(p, p.derivative()) / p.lead


def normalized_discriminant(p: ComplexPoly) -> float:
    """|disc(p)| made scale-invariant: divide by max|coeff|^(2n-2)."""
    n = p.degree
    scale = p.coeff_scale()
    return abs(discriminant(p)) / scale ** (2 * n - 2)


def _to_fractions(p: ComplexPoly):
    scale = max(p.coeff_scale(), 1.0)
    for c in p.coeffs:
        if abs(c.imag) > 1e-12 * scale:
            raise ValidationError("real_root_count requires real coefficients")
    return [Fraction(c.real) for c in p.coeffs]


def _frac_eval(cs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _frac_rem(a, b):
    """Remainder of a by b over the rationals (ascending coefficient lists)."""
    a = a[:]
    while a and a[-1] == 0:
        a.pop()
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        factor = a[-1] / lb
        for i, c in enumerate(b):
            a[i + shift] -= factor * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def _sturm_chain(cs):
    chain = [cs]
    d = [k * c for k, c in enumerate(cs)][1:]
    while d and any(c != 0 for c in d):
        chain.append(d)
        r = _frac_rem(chain[-2], chain[-1])
        d = [-c for c in r]
    return chain


def _sign_changes(values) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def real_root_count(p: ComplexPoly, interval=None) -> int:
    """Number of distinct real roots of p, exactly, via a Sturm sequence.

    `interval` is an optional (lo, hi) pair of reals; the default counts over
    all of R.  A root exactly at a finite endpoint raises
    DegenerateInputError, so open/closed endpoint semantics never matter.
    """
    if p.degree < 1:
        raise ValidationError("real_root_count requires degree >= 1")
    cs = _to_fractions(p)
    chain = _sturm_chain(cs)

    def signs_at_minus_inf():
        out = []
        for poly in chain:
            c = poly[-1]
            deg = len(poly) - 1
            out.append(c if deg % 2 == 0 else -c)
        return out

    def signs_at_plus_inf():
        return [poly[-1] for poly in chain]

    if interval is None:
        lo_signs, hi_signs = signs_at_minus_inf(), signs_at_plus_inf()
    else:
        lo, hi = interval
        if not lo < hi:
            raise ValidationError("interval must satisfy lo < hi")
        if math.isinf(lo):
            lo_signs = signs_at_minus_inf()
        else:
            lo_f = Fraction(lo)
            if _frac_eval(cs, lo_f) == 0:
                raise DegenerateInputError("root exactly at interval endpoint %r" % lo)
            lo_signs = [_frac_eval(poly, lo_f) for poly in chain]
        if math.isinf(hi):
            hi_signs = signs_at_plus_inf()
        else:
            hi_f = Fraction(hi)
            if _frac_eval(cs, hi_f) == 0:
                raise DegenerateInputError("root exactly at interval endpoint %r" % hi)
            hi_signs = [_frac_eval(poly, hi_f) for poly in chain]
    return _sign_changes(lo_signs) - _sign_changes(hi_signs)


def real_roots(p: ComplexPoly, tol: float = 1e-9):
    """Real roots of a real-coefficient polynomial, via the complex solver."""
    out = [r.real for r in roots(p) if abs(r.imag) <= tol * max(1.0, abs(r))]
    out.sort()
    return out
