"""Exact arithmetic in the field Q(i, sqrt2, sqrt3).

An element is stored as eight rational coordinates: the real and imaginary
parts of the coefficients of 1, sqrt2, sqrt3 and sqrt6.  Rationals are
``gmpy2.mpq`` values.  Products of the square roots close up through
sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3 and sqrt3*sqrt6 = 3*sqrt2.

Rational and Gaussian-rational elements take fast paths in every operation,
since the bulk of the package's work never leaves Q or Q(i).
"""

from __future__ import annotations

import ast
import math
import re
from fractions import Fraction
from numbers import Integral

import gmpy2

from .errors import BadParameters, DivideByZero, NotInField

Rational = type(gmpy2.mpq(0))
mpq = gmpy2.mpq

_Q0 = mpq(0)
_Q1 = mpq(1)

BASIS_NAMES = ("1", "sqrt2", "sqrt3", "sqrt6")
_BASIS_FLOATS = (1.0, math.sqrt(2.0), math.sqrt(3.0), math.sqrt(6.0))

# (b1, b2) -> (integer factor, resulting basis index)
_MULT = {}
for _a, _b, _f, _k in [
    (0, 0, 1, 0), (0, 1, 1, 1), (0, 2, 1, 2), (0, 3, 1, 3),
    (1, 1, 2, 0), (1, 2, 1, 3), (1, 3, 2, 2),
    (2, 2, 3, 0), (2, 3, 3, 1),
    (3, 3, 6, 0),
]:
    _MULT[(_a, _b)] = (_f, _k)
    _MULT[(_b, _a)] = (_f, _k)


def to_rational(value) -> Rational:
    """Convert an int, Fraction, mpq or text like "-3/7" to an mpq."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, (Integral, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        s = value.strip()
        try:
            return mpq(s)
        except ValueError:
            x = parse_scalar(s)
            if not x.is_rational:
                raise BadParameters(f"not a rational number: {value!r}")
            return x.c[0]
    if isinstance(value, ExScalar):
        if not value.is_rational:
            raise BadParameters(f"not a rational number: {value}")
        return value.c[0]
    if isinstance(value, float):
        return mpq(Fraction(value))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rational_text(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _gauss_text(re_: Rational, im: Rational) -> str:
    if im == 0:
        return rational_text(re_)
    im_part = rational_text(abs(im)) + "i"
    if re_ == 0:
        return ("-" if im < 0 else "") + im_part
    return rational_text(re_) + ("-" if im < 0 else "+") + im_part


class ExScalar:
    """Element of Q(i, sqrt2, sqrt3).

    Parameters
    ----------
    value : int, mpq, Fraction, str or ExScalar, optional
        Rational value or text to parse.  Use ``from_coords`` for the
        general case.
    """

    __slots__ = ("c",)

    def __init__(self, value=0):
        if isinstance(value, ExScalar):
            self.c = value.c
        elif isinstance(value, str):
            self.c = parse_scalar(value).c
        else:
            self.c = (to_rational(value),) + (_Q0,) * 7

    @classmethod
    def _raw(cls, coords):
        x = object.__new__(cls)
        x.c = coords
        return x

    @classmethod
    def from_coords(cls, coords) -> "ExScalar":
        """Build from eight rationals ordered (re, im) x (1, sqrt2, sqrt3, sqrt6)."""
        coords = tuple(to_rational(v) for v in coords)
        if len(coords) != 8:
            raise BadParameters("an ExScalar needs exactly 8 coordinates")
        return cls._raw(coords)

    @classmethod
    def gaussian(cls, re_, im=0) -> "ExScalar":
        return cls._raw((to_rational(re_), to_rational(im)) + (_Q0,) * 6)

    @classmethod
    def from_parts(cls, c1=0, cs2=0, cs3=0, cs6=0) -> "ExScalar":
        """Build c1 + cs2*sqrt2 + cs3*sqrt3 + cs6*sqrt6 from four exact parts.

        Each part may be rational or Gaussian-rational (an ExScalar of that kind).
        """
        out = []
        for part in (c1, cs2, cs3, cs6):
            p = as_scalar(part)
            if not p.is_gaussian:
                raise BadParameters("coordinates must be Gaussian rationals")
            out.extend(p.c[:2])
        return cls._raw(tuple(out))

    # ---- classification -------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not any(self.c)

    @property
    def is_rational(self) -> bool:
        c = self.c
        return not (c[1] or c[2] or c[3] or c[4] or c[5] or c[6] or c[7])

    @property
    def is_gaussian(self) -> bool:
        c = self.c
        return not (c[2] or c[3] or c[4] or c[5] or c[6] or c[7])

    @property
    def is_real(self) -> bool:
        c = self.c
        return not (c[1] or c[3] or c[5] or c[7])

    def rational(self) -> Rational:
        if not self.is_rational:
            raise NotInField(f"{self} is not rational")
        return self.c[0]

    def parts(self):
        """Return the four coefficients of 1, sqrt2, sqrt3, sqrt6 as (re, im) pairs."""
        c = self.c
        return tuple((c[2 * k], c[2 * k + 1]) for k in range(4))

    # ---- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        return ExScalar._raw(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        return ExScalar._raw(tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ExScalar._raw(tuple(-x for x in self.c))

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.c, o.c
        if o.is_rational:
            r = b[0]
            return ExScalar._raw(tuple(x * r for x in a))
        if self.is_rational:
            r = a[0]
            return ExScalar._raw(tuple(r * y for y in b))
        if self.is_gaussian and o.is_gaussian:
            ar, ai, br, bi = a[0], a[1], b[0], b[1]
            return ExScalar._raw(
                (ar * br - ai * bi, ar * bi + ai * br) + (_Q0,) * 6
            )
        out = [_Q0] * 8
        for i in range(4):
            xr, xi = a[2 * i], a[2 * i + 1]
            if not (xr or xi):
                continue
            for j in range(4):
                yr, yi = b[2 * j], b[2 * j + 1]
                if not (yr or yi):
                    continue
                f, k = _MULT[(i, j)]
                out[2 * k] += f * (xr * yr - xi * yi)
                out[2 * k + 1] += f * (xr * yi + xi * yr)
        return ExScalar._raw(tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "ExScalar":
        """Multiplicative inverse; solves the 8x8 rational system x*y = 1."""
        c = self.c
        if self.is_rational:
            if not c[0]:
                raise DivideByZero("inverse of zero")
            return ExScalar._raw((1 / c[0],) + (_Q0,) * 7)
        if self.is_gaussian:
            n = c[0] * c[0] + c[1] * c[1]
            return ExScalar._raw((c[0] / n, -c[1] / n) + (_Q0,) * 6)
        # column j of the multiplication-by-self matrix is self * e_j
        cols = []
        for j in range(8):
            e = [_Q0] * 8
            e[j] = _Q1
            cols.append((self * ExScalar._raw(tuple(e))).c)
        a = [[cols[j][i] for j in range(8)] + [_Q1 if i == 0 else _Q0] for i in range(8)]
        y = _solve_dense(a, 8)
        return ExScalar._raw(tuple(y))

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise DivideByZero("division by zero")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, Integral):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "ExScalar":
        c = self.c
        return ExScalar._raw(
            (c[0], -c[1], c[2], -c[3], c[4], -c[5], c[6], -c[7])
        )

    def conjugate(self) -> "ExScalar":
        return self.conj()

    @property
    def real(self) -> "ExScalar":
        c = self.c
        return ExScalar._raw((c[0], _Q0, c[2], _Q0, c[4], _Q0, c[6], _Q0))

    @property
    def imag(self) -> "ExScalar":
        c = self.c
        return ExScalar._raw((c[1], _Q0, c[3], _Q0, c[5], _Q0, c[7], _Q0))

    def abs2(self) -> "ExScalar":
        """|x|^2 as an exact real element."""
        if self.is_gaussian:
            c = self.c
            return ExScalar._raw((c[0] * c[0] + c[1] * c[1],) + (_Q0,) * 7)
        return self * self.conj()

    def sign(self) -> int:
        """Exact sign of a real element (-1, 0 or 1)."""
        if not self.is_real:
            raise NotInField(f"sign of a non-real element {self}")
        c = self.c
        return _sign_real(c[0], c[2], c[4], c[6])

    # ---- comparison and hashing -----------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o.c

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.is_rational:
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return not self.is_zero

    # ---- conversions --------------------------------------------------------
    def __complex__(self):
        c = self.c
        re_ = sum(float(c[2 * k]) * _BASIS_FLOATS[k] for k in range(4))
        im = sum(float(c[2 * k + 1]) * _BASIS_FLOATS[k] for k in range(4))
        return complex(re_, im)

    def __float__(self):
        if not self.is_real:
            raise TypeError("cannot convert a non-real element to float")
        return complex(self).real

    def to_json(self):
        """Rational elements become "a/b"; others a dict keyed by basis name."""
        if self.is_rational:
            return rational_text(self.c[0])
        c = self.c
        return {
            name: _gauss_text(c[2 * k], c[2 * k + 1])
            for k, name in enumerate(BASIS_NAMES)
        }

    @classmethod
    def from_json(cls, obj) -> "ExScalar":
        if isinstance(obj, ExScalar):
            return obj
        if isinstance(obj, (int, Rational, Fraction)):
            return cls(obj)
        if isinstance(obj, str):
            return parse_scalar(obj)
        if isinstance(obj, dict):
            unknown = set(obj) - set(BASIS_NAMES)
            if unknown:
                raise BadParameters(f"unknown scalar keys: {sorted(unknown)}")
            parts = [parse_scalar(str(obj.get(n, "0"))) for n in BASIS_NAMES]
            return cls.from_parts(*parts)
        raise BadParameters(f"cannot read a scalar from {obj!r}")

    def __str__(self):
        c = self.c
        terms = []
        for k, name in enumerate(BASIS_NAMES):
            re_, im = c[2 * k], c[2 * k + 1]
            if not (re_ or im):
                continue
            g = _gauss_text(re_, im)
            if k == 0:
                terms.append(g)
            elif re_ and im:
                terms.append(f"({g})*{name}")
            elif g == "1":
                terms.append(name)
            elif g == "-1":
                terms.append("-" + name)
            else:
                terms.append(f"{g}*{name}")
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += t if t.startswith("-") else "+" + t
        return s

    def __repr__(self):
        return f"ExScalar('{self}')"


def _coerce(v):
    if isinstance(v, ExScalar):
        return v
    if isinstance(v, (Integral, Rational, Fraction)):
        return ExScalar._raw((mpq(v),) + (_Q0,) * 7)
    return None


def as_scalar(v) -> ExScalar:
    """Coerce ints, rationals and text to ExScalar."""
    if isinstance(v, ExScalar):
        return v
    if isinstance(v, str):
        return parse_scalar(v)
    o = _coerce(v)
    if o is None:
        raise TypeError(f"cannot convert {type(v).__name__} to an exact scalar")
    return o


def _solve_dense(a, n):
    """Solve an n x n augmented rational system in place (unique solution)."""
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        row = [v * inv for v in a[col]]
        a[col] = row
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], row)]
    return [a[i][n] for i in range(n)]


def _sign2(u, v) -> int:
    """Sign of u + v*sqrt2 for rationals u, v."""
    su = (u > 0) - (u < 0)
    sv = (v > 0) - (v < 0)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv if su == 0 else su
    d = u * u - 2 * v * v
    return su if d > 0 else sv


def _sign_real(a, b, c, d) -> int:
    """Sign of a + b sqrt2 + c sqrt3 + d sqrt6 = P + sqrt3 Q with P, Q in Q(sqrt2)."""
    sp = _sign2(a, b)
    sq = _sign2(c, d)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq if sp == 0 else sp
    # compare P^2 with 3 Q^2, both in Q(sqrt2)
    u = (a * a + 2 * b * b) - 3 * (c * c + 2 * d * d)
    v = 2 * a * b - 6 * c * d
    s = _sign2(u, v)
    return sp if s > 0 else sq


def sqrt_rational(q) -> ExScalar:
    """Exact square root of a nonnegative rational, when it lies in the field."""
    q = to_rational(q)
    if q < 0:
        return ExScalar.gaussian(0, 1) * sqrt_rational(-q)
    if q == 0:
        return ZERO
    for k, basis in ((1, 0), (2, 1), (3, 2), (6, 3)):
        r = q / k
        n, d = r.numerator, r.denominator
        if gmpy2.is_square(n) and gmpy2.is_square(d):
            root = mpq(int(gmpy2.isqrt(n)), int(gmpy2.isqrt(d)))
            coords = [_Q0] * 8
            coords[2 * basis] = root
            return ExScalar._raw(tuple(coords))
    raise NotInField(f"sqrt({rational_text(q)}) is not in Q(i, sqrt2, sqrt3)")


ZERO = ExScalar(0)
ONE = ExScalar(1)
I = ExScalar.gaussian(0, 1)
SQRT2 = ExScalar._raw((_Q0, _Q0, _Q1, _Q0, _Q0, _Q0, _Q0, _Q0))
SQRT3 = ExScalar._raw((_Q0, _Q0, _Q0, _Q0, _Q1, _Q0, _Q0, _Q0))
SQRT6 = ExScalar._raw((_Q0, _Q0, _Q0, _Q0, _Q0, _Q0, _Q1, _Q0))
# primitive cube root of unity (-1 + i sqrt3)/2
OMEGA = ExScalar._raw((mpq(-1, 2), _Q0, _Q0, _Q0, _Q0, mpq(1, 2), _Q0, _Q0))


# ---- text parsing ---------------------------------------------------------

_NAMES = {"i": I, "I": I, "sqrt2": SQRT2, "sqrt3": SQRT3, "sqrt6": SQRT6}
_FRAC_I = re.compile(r"(?<![\w.])(\d+(?:\.\d+)?)\s*/\s*(\d+(?:\.\d+)?)\s*i\b")
_NUM_I = re.compile(r"(?<![\w.])(\d+(?:\.\d+)?)\s*i\b")
_NUM_NAME = re.compile(r"(?<![\w.])(\d+(?:\.\d+)?)\s*(sqrt[236])\b")


def parse_scalar(text: str) -> ExScalar:
    """Parse text such as "3/5", "4/5i", "3/5-4/5i", "sqrt2/2", "(1+i)/2".

    A trailing ``i`` binds to the preceding number or fraction, so "4/5i"
    means (4/5)*i.  ``sqrt(n)`` is accepted when the root lies in the field.
    """
    if not isinstance(text, str):
        raise BadParameters(f"expected text, got {type(text).__name__}")
    s = text.strip().replace("√", "sqrt").replace("^", "**")
    if not s:
        raise BadParameters("empty scalar text")
    s = _FRAC_I.sub(r"((\1/\2)*i)", s)
    s = _NUM_I.sub(r"(\1*i)", s)
    s = _NUM_NAME.sub(r"(\1*\2)", s)
    try:
        tree = ast.parse(s, mode="eval")
    except SyntaxError as exc:
        raise BadParameters(f"cannot parse scalar {text!r}") from exc
    try:
        return _eval_node(tree.body)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise BadParameters(f"cannot parse scalar {text!r}: {exc}") from exc


def _eval_node(node) -> ExScalar:
    if isinstance(node, ast.Constant):
        v = node.value
        if isinstance(v, bool):
            raise ValueError("booleans are not scalars")
        if isinstance(v, int):
            return ExScalar(v)
        if isinstance(v, float):
            return ExScalar(mpq(repr(v)))
        raise ValueError(f"unsupported literal {v!r}")
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise ValueError(f"unknown name {node.id}")
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _eval_node(node.operand)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        a = _eval_node(node.left)
        if isinstance(node.op, ast.Pow):
            b = _eval_node(node.right)
            if not b.is_rational or b.c[0].denominator != 1:
                raise ValueError("exponents must be integers")
            return a ** int(b.c[0])
        b = _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            return a / b
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt":
        if len(node.args) != 1:
            raise ValueError("sqrt takes one argument")
        return sqrt_rational(_eval_node(node.args[0]).rational())
    raise ValueError(f"unsupported expression {ast.dump(node)}")
