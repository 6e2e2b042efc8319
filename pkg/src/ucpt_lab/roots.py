"""Exact rational roots plus Aberth-Ehrlich numeric roots of t-polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _intpoly as ip
from .field import Rational, mpq, rational_text, to_rational
from .poly import TPoly

# divisor enumeration is used when both end coefficients are at most this
DIVISOR_LIMIT = 10**6
ROOT_TOL = 1e-12
REAL_TOL = 1e-9


@dataclass
class RootReport:
    """Root certificate for a polynomial in t.

    ``exact_roots`` holds (rational, multiplicity) pairs verified exactly;
    ``numeric_roots`` holds (complex, relative residual) pairs for the factor
    left after deflation, listed with multiplicity.  ``roots_in_interval``
    lists the distinct real roots strictly inside ``interval``: rationals for
    exact roots, floats for numeric ones.
    """

    polynomial: TPoly
    degree_bound: int | None = None
    exact_roots: list = field(default_factory=list)
    numeric_roots: list = field(default_factory=list)
    roots_in_interval: list = field(default_factory=list)
    identically_zero: bool = False
    certified: bool = True
    remaining: TPoly | None = None
    interval: tuple = (mpq(-1), mpq(1))

    @property
    def degree(self) -> int:
        return self.polynomial.degree()

    def exact_root_set(self) -> set:
        return {r for r, _ in self.exact_roots}

    def multiplicity(self, r) -> int:
        r = to_rational(r)
        return next((m for x, m in self.exact_roots if x == r), 0)

    def degree_ok(self) -> bool:
        if self.degree_bound is None or self.identically_zero:
            return True
        return self.degree <= self.degree_bound

    def to_json(self) -> dict:
        return {
            "polynomial": self.polynomial.to_json(),
            "degree": self.degree,
            "degree_bound": self.degree_bound,
            "identically_zero": self.identically_zero,
            "certified": self.certified,
            "exact_roots": [[rational_text(r), m] for r, m in self.exact_roots],
            "numeric_roots": [[z.real, z.imag, res] for z, res in self.numeric_roots],
            "interval": [rational_text(self.interval[0]), rational_text(self.interval[1])],
            "roots_in_interval": [
                rational_text(r) if isinstance(r, Rational) else float(r)
                for r in self.roots_in_interval
            ],
        }


def _to_floats(a):
    """Float coefficients of an integer polynomial, rescaled to avoid overflow."""
    shift = max(ip.maxbits(a) - 900, 0)
    if shift == 0:
        return np.array([float(v) for v in a])
    return np.array([float(mpq(v, 1 << shift)) for v in a])


def aberth(coeffs, rng=None, tol: float = ROOT_TOL, max_iter: int = 500, restarts: int = 8):
    """All complex roots by Aberth-Ehrlich simultaneous iteration.

    Parameters
    ----------
    coeffs : array_like
        Complex coefficients, lowest degree first, nonzero leading term.

    Returns
    -------
    roots : ndarray
    residuals : ndarray
        |p(z)| divided by sum |a_k| |z|^k for each root.
    """
    a = np.asarray(coeffs, dtype=complex)
    n = len(a) - 1
    if n < 1:
        return np.zeros(0, dtype=complex), np.zeros(0)
    a = a / a[-1]
    hi = a[::-1]
    dhi = np.polyder(hi)
    absa = np.abs(hi)
    if n == 1:
        z = np.array([-a[0]])
        return z, _residuals(hi, absa, z)
    rng = rng if rng is not None else np.random.default_rng(0x5EED)
    # Fujiwara bound on root moduli
    radius = 2 * max(abs(a[k]) ** (1.0 / (n - k)) for k in range(n))
    radius = max(radius, 1e-8)
    best = None
    for attempt in range(restarts):
        ang = 2 * np.pi * (np.arange(n) + 0.25 + 0.5 * rng.random()) / n
        r = radius * (0.5 + 0.5 * rng.random(n)) if attempt else radius * 0.75 * np.ones(n)
        z = r * np.exp(1j * ang) - a[n - 1] / n
        for _ in range(max_iter):
            pz = np.polyval(hi, z)
            dz = np.polyval(dhi, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = pz / dz
                diff = z[:, None] - z[None, :]
                np.fill_diagonal(diff, 1.0)
                inv = 1.0 / diff
                np.fill_diagonal(inv, 0.0)
                s = inv.sum(axis=1)
                w = ratio / (1.0 - ratio * s)
            w[~np.isfinite(w)] = 0.0
            z = z - w
            if np.all(np.abs(w) <= 1e-15 * np.maximum(np.abs(z), 1e-300)):
                break
        res = _residuals(hi, absa, z)
        if best is None or res.max() < best[1].max():
            best = (z, res)
        if res.max() <= tol:
            break
    return best


def _residuals(hi, absa, z):
    num = np.abs(np.polyval(hi, z))
    den = np.polyval(absa, np.abs(z))
    return num / np.where(den > 0, den, 1.0)


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _squarefree_part(a):
    p = TPoly.from_rationals(a)
    g = p.gcd(p.derivative())
    return p.exact_div(g).primitive_integer()


def _candidates(a):
    """Rational root candidates p/q of a primitive integer polynomial with a[0] != 0."""
    lead, const = a[-1], a[0]
    if abs(lead) <= DIVISOR_LIMIT and abs(const) <= DIVISOR_LIMIT:
        out = set()
        for q in _divisors(lead):
            for p in _divisors(const):
                out.add(mpq(p, q))
                out.add(mpq(-p, q))
        return sorted(out, key=lambda r: (r.denominator, abs(r)))
    # large coefficients: approximate the roots of the squarefree part and read
    # off continued-fraction convergents that pass the divisibility filter
    sf = _squarefree_part(a)
    z, _ = aberth(_to_floats(sf))
    out = set()
    for root in z:
        if abs(root.imag) > 1e-6 * max(1.0, abs(root.real)):
            continue
        for c in _convergents(root.real, max_den=abs(lead)):
            if c and lead % c.denominator == 0 and const % c.numerator == 0:
                out.add(mpq(c.numerator, c.denominator))
    return sorted(out)


def _convergents(x: float, max_den: int):
    if not np.isfinite(x):
        return []
    fr = Fraction(x)
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    num, den = fr.numerator, fr.denominator
    for _ in range(64):
        if den == 0:
            break
        q, r = divmod(num, den)
        h0, h1 = h1, q * h1 + h0
        k0, k1 = k1, q * k1 + k0
        if k1 > max_den:
            break
        out.append(Fraction(h1, k1))
        num, den = den, r
    return out


def _yun(a):
    """Squarefree decomposition: list of (primitive integer factor, multiplicity)."""
    p = TPoly.from_rationals(a)
    if p.degree() <= 0:
        return []
    dp = p.derivative()
    g = p.gcd(dp)
    b = p.exact_div(g)
    c = dp.exact_div(g)
    d = c - b.derivative()
    out = []
    k = 1
    while b.degree() > 0:
        h = b.gcd(d)
        if h.degree() > 0:
            out.append((h.primitive_integer(), k))
        b = b.exact_div(h)
        c = d.exact_div(h)
        d = c - b.derivative()
        k += 1
    return out


def find_roots(p: TPoly, interval=(-1, 1), degree_bound: int | None = None, rng=None) -> RootReport:
    """Exact rational roots with multiplicity, then numeric roots of the rest.

    A zero polynomial yields a report with ``identically_zero`` set; that is a
    verdict, not an error.  Non-rational coefficients skip the exact phase and
    mark the report as not certified.
    """
    lo, hi = to_rational(interval[0]), to_rational(interval[1])
    rep = RootReport(polynomial=p, degree_bound=degree_bound, interval=(lo, hi))
    if p.is_zero:
        rep.identically_zero = True
        rep.remaining = p
        return rep
    if not p.is_rational:
        rep.certified = False
        coeffs = [complex(c) for c in p.coefficients]
        z, res = aberth(coeffs, rng=rng)
        rep.numeric_roots = list(zip(z.tolist(), res.tolist()))
        rep.remaining = p
        rep.roots_in_interval = _numeric_in_interval(z, lo, hi)
        return rep

    a = p.primitive_integer()
    exact = []
    k = 0
    while a[k] == 0:
        k += 1
    if k:
        exact.append((mpq(0), k))
        a = a[k:]
    if len(a) > 1:
        for r in _candidates(a):
            if len(a) <= 1:
                break
            mult = 0
            while len(a) > 1 and ip.eval_frac(a, int(r.numerator), int(r.denominator)) == 0:
                a = ip.div_linear(a, int(r.numerator), int(r.denominator))
                mult += 1
            if mult:
                exact.append((r, mult))
    exact.sort()
    rep.exact_roots = exact
    remaining = TPoly.from_rationals(a)
    rep.remaining = remaining

    numeric = []
    for factor, mult in _yun(a):
        z, res = aberth(_to_floats(factor), rng=rng)
        for zi, ri in zip(z.tolist(), res.tolist()):
            numeric.extend([(zi, ri)] * mult)
    numeric.sort(key=lambda zr: (zr[0].real, zr[0].imag))
    rep.numeric_roots = numeric

    inside = [r for r, _ in exact if lo < r < hi]
    inside += _numeric_in_interval(np.array([z for z, _ in numeric]), lo, hi)
    rep.roots_in_interval = inside
    return rep


def _numeric_in_interval(z, lo, hi):
    out = []
    seen = []
    for zi in np.atleast_1d(z):
        if abs(zi.imag) <= REAL_TOL * max(1.0, abs(zi.real)) and float(lo) < zi.real < float(hi):
            if not any(abs(zi.real - s) <= 1e-9 * max(1.0, abs(s)) for s in seen):
                seen.append(zi.real)
                out.append(float(zi.real))
    return out
