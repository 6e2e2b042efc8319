"""Univariate polynomials in the channel parameter t over Q(i, sqrt2, sqrt3)."""

from __future__ import annotations

from math import gcd, lcm
from numbers import Integral

from .errors import DivideByZero, NotDivisible
from .field import ExScalar, Rational, as_scalar, mpq, rational_text

# degree reported for the zero polynomial
DEG_ZERO = -1


def _strip(seq):
    seq = list(seq)
    while seq and not seq[-1]:
        seq.pop()
    return seq


class TPoly:
    """Polynomial with exact coefficients, lowest degree first.

    Purely rational polynomials keep their coefficients as ``mpq`` internally;
    ``coefficients`` always returns ExScalar values.  Conjugation acts on the
    coefficients only, the variable being real.
    """

    __slots__ = ("_c", "_rat")

    def __init__(self, coeffs=()):
        if isinstance(coeffs, TPoly):
            self._c, self._rat = coeffs._c, coeffs._rat
            return
        if isinstance(coeffs, (ExScalar, Integral, Rational, str)):
            coeffs = [coeffs]
        xs = [as_scalar(c) for c in coeffs]
        if all(x.is_rational for x in xs):
            self._c = tuple(_strip(x.c[0] for x in xs))
            self._rat = True
        else:
            self._c = tuple(_strip(xs))
            self._rat = False

    @classmethod
    def _q(cls, coeffs):
        p = object.__new__(cls)
        p._c = tuple(_strip(coeffs))
        p._rat = True
        return p

    @classmethod
    def _ex(cls, coeffs):
        coeffs = _strip(coeffs)
        if all(c.is_rational for c in coeffs):
            return cls._q([c.c[0] for c in coeffs])
        p = object.__new__(cls)
        p._c = tuple(coeffs)
        p._rat = False
        return p

    @classmethod
    def from_rationals(cls, coeffs) -> "TPoly":
        return cls._q([mpq(c) for c in coeffs])

    @classmethod
    def from_roots(cls, roots) -> "TPoly":
        p = ONE_POLY
        for r in roots:
            p = p * TPoly([-as_scalar(r), 1])
        return p

    # ---- basic properties ---------------------------------------------------
    @property
    def coefficients(self) -> tuple:
        if self._rat:
            return tuple(ExScalar(c) for c in self._c)
        return self._c

    def rational_coefficients(self) -> tuple:
        if not self._rat:
            raise ValueError("polynomial has non-rational coefficients")
        return self._c

    @property
    def is_rational(self) -> bool:
        return self._rat

    @property
    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        return len(self._c) - 1 if self._c else DEG_ZERO

    def lead(self) -> ExScalar:
        if not self._c:
            return ExScalar(0)
        return as_scalar(self._c[-1])

    def __len__(self):
        return len(self._c)

    def _exc(self):
        return self._c if not self._rat else tuple(ExScalar(c) for c in self._c)

    # ---- ring operations ----------------------------------------------------
    def __add__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if self._rat and o._rat:
            a, b = self._c, o._c
        else:
            a, b = self._exc(), o._exc()
        n = max(len(a), len(b))
        zero = mpq(0) if self._rat and o._rat else ExScalar(0)
        out = [(a[k] if k < len(a) else zero) + (b[k] if k < len(b) else zero) for k in range(n)]
        return TPoly._q(out) if self._rat and o._rat else TPoly._ex(out)

    __radd__ = __add__

    def __neg__(self):
        if self._rat:
            return TPoly._q([-c for c in self._c])
        return TPoly._ex([-c for c in self._c])

    def __sub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if not self._c or not o._c:
            return ZERO_POLY
        rat = self._rat and o._rat
        a, b = (self._c, o._c) if rat else (self._exc(), o._exc())
        zero = mpq(0) if rat else ExScalar(0)
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return TPoly._q(out) if rat else TPoly._ex(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = ONE_POLY
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, other) -> tuple["TPoly", "TPoly"]:
        o = _as_poly(other)
        if o.is_zero:
            raise DivideByZero("polynomial division by zero")
        rat = self._rat and o._rat
        num = list(self._c if rat else self._exc())
        den = o._c if rat else o._exc()
        dl = den[-1]
        inv = 1 / dl if rat else dl.inverse()
        nq = len(num) - len(den) + 1
        if nq <= 0:
            return ZERO_POLY, self
        quo = [None] * nq
        for k in range(nq - 1, -1, -1):
            coef = num[k + len(den) - 1] * inv
            quo[k] = coef
            if coef:
                for j, dj in enumerate(den):
                    num[k + j] = num[k + j] - coef * dj
        rem = num[: len(den) - 1]
        mk = TPoly._q if rat else TPoly._ex
        return mk(quo), mk(rem)

    def exact_div(self, other) -> "TPoly":
        """Quotient r with r*other == self; raises NotDivisible otherwise."""
        q, r = self.divmod(other)
        if not r.is_zero:
            raise NotDivisible("polynomial division leaves a remainder")
        return q

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    # ---- evaluation and calculus ------------------------------------------
    def eval(self, x):
        if self._rat and not isinstance(x, ExScalar):
            try:
                xq = mpq(x)
            except (TypeError, ValueError):
                xq = None
            if xq is not None:
                acc = mpq(0)
                for c in reversed(self._c):
                    acc = acc * xq + c
                return ExScalar(acc)
        x = as_scalar(x)
        if self._rat and x.is_rational:
            xq = x.c[0]
            acc = mpq(0)
            for c in reversed(self._c):
                acc = acc * xq + c
            return ExScalar(acc)
        acc = ExScalar(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    __call__ = eval

    def eval_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self._c):
            acc = acc * z + complex(as_scalar(c))
        return acc

    def derivative(self) -> "TPoly":
        out = [k * c for k, c in enumerate(self._c)][1:]
        return TPoly._q(out) if self._rat else TPoly._ex(out)

    def conj(self) -> "TPoly":
        if self._rat:
            return self
        return TPoly._ex([c.conj() for c in self._c])

    def monic(self) -> "TPoly":
        if self.is_zero:
            return self
        lead = self._c[-1]
        if self._rat:
            return TPoly._q([c / lead for c in self._c])
        inv = lead.inverse()
        return TPoly._ex([c * inv for c in self._c])

    def gcd(self, other) -> "TPoly":
        """Monic greatest common divisor (zero if both are zero)."""
        a, b = self, _as_poly(other)
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def primitive_integer(self) -> list[int]:
        """Integer coefficients of the primitive part with positive leading term."""
        if not self._rat:
            raise ValueError("polynomial has non-rational coefficients")
        if not self._c:
            return []
        den = 1
        for c in self._c:
            den = lcm(den, int(c.denominator))
        ints = [int(c * den) for c in self._c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints

    # ---- equality, text ---------------------------------------------------
    def __eq__(self, other):
        o = _as_poly(other)
        if o is None:
            return NotImplemented
        if self._rat != o._rat:
            return False
        return self._c == o._c

    def __hash__(self):
        return hash((self._rat, self._c))

    def to_json(self) -> list:
        return [as_scalar(c).to_json() for c in self._c]

    @classmethod
    def from_json(cls, obj) -> "TPoly":
        return cls([ExScalar.from_json(c) for c in obj])

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if not c:
                continue
            cs = rational_text(c) if self._rat else str(c)
            if not self._rat and not as_scalar(c).is_rational:
                cs = f"({cs})"
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and cs in ("1", "-1"):
                cs = cs[:-1]
            elif mono:
                cs += "*"
            terms.append(cs + mono)
        s = terms[0]
        for t in terms[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    def __repr__(self):
        return f"TPoly('{self}')"


def _as_poly(v):
    if isinstance(v, TPoly):
        return v
    try:
        return TPoly([v])
    except (TypeError, ValueError):
        return None


ZERO_POLY = TPoly._q([])
ONE_POLY = TPoly._q([mpq(1)])
T = TPoly._q([mpq(0), mpq(1)])
