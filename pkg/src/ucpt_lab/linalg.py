"""Dense matrices over exact scalars, t-polynomials or complex doubles.

Exact matrices hold ExScalar entries, polynomial matrices hold TPoly entries
and float matrices wrap a complex numpy array.  Mixed operations promote
exact -> poly and exact -> float.  Indices are zero-based throughout.
"""

from __future__ import annotations

import math
from math import lcm
from numbers import Integral

import numpy as np

from . import _intpoly as ip
from .errors import ExplicitTooLarge, NotHermitian, ShapeError
from .field import ExScalar, Rational, as_scalar, mpq
from .poly import TPoly

EXACT, POLY, FLOAT = "exact", "poly", "float"
MAX_POLY_DET = 36
HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13

_EX0 = ExScalar(0)
_EX1 = ExScalar(1)


def _entry(v, backend):
    if backend == POLY:
        return v if isinstance(v, TPoly) else TPoly([v])
    return as_scalar(v)


class Mat:
    """Dense matrix with a uniform scalar backend.

    Parameters
    ----------
    rows, cols : int
    entries : sequence
        Row-major entries (ExScalar-coercible, TPoly, or complex numbers).
    backend : {"exact", "poly", "float"}, optional
        Inferred from the entries when omitted.
    """

    __slots__ = ("rows", "cols", "backend", "_e", "_a", "_q")

    def __init__(self, rows: int, cols: int, entries, backend: str | None = None):
        if rows < 1 or cols < 1:
            raise ShapeError("matrix dimensions must be positive")
        self.rows, self.cols = rows, cols
        self._q = None
        if backend is None:
            backend = _infer_backend(entries)
        self.backend = backend
        if backend == FLOAT:
            a = np.asarray(entries, dtype=complex).reshape(rows, cols)
            self._a = a
            self._e = None
        else:
            e = tuple(_entry(v, backend) for v in entries)
            if len(e) != rows * cols:
                raise ShapeError(f"expected {rows * cols} entries, got {len(e)}")
            self._e = e
            self._a = None

    # ---- constructors -----------------------------------------------------
    @classmethod
    def _exact(cls, rows, cols, entries, backend=EXACT):
        m = object.__new__(cls)
        m.rows, m.cols, m.backend = rows, cols, backend
        m._e, m._a, m._q = tuple(entries), None, None
        return m

    @classmethod
    def from_numpy(cls, a) -> "Mat":
        a = np.asarray(a, dtype=complex)
        if a.ndim != 2:
            raise ShapeError("expected a 2-d array")
        m = object.__new__(cls)
        m.rows, m.cols = a.shape
        m.backend, m._e, m._a, m._q = FLOAT, None, a.copy(), None
        return m

    @classmethod
    def from_rows(cls, rows, backend: str | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ShapeError("ragged or empty row list")
        flat = [v for r in rows for v in r]
        return cls(len(rows), len(rows[0]), flat, backend)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "Mat":
        if backend == FLOAT:
            return cls.from_numpy(np.eye(n))
        e = [_EX1 if i == j else _EX0 for i in range(n) for j in range(n)]
        m = cls._exact(n, n, e)
        return m.to_poly() if backend == POLY else m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, backend: str = EXACT) -> "Mat":
        cols = rows if cols is None else cols
        if backend == FLOAT:
            return cls.from_numpy(np.zeros((rows, cols)))
        m = cls._exact(rows, cols, [_EX0] * (rows * cols))
        return m.to_poly() if backend == POLY else m

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=1) -> "Mat":
        """Matrix unit |e_i><e_j| (zero-based), optionally scaled."""
        e = [_EX0] * (n * n)
        e[i * n + j] = as_scalar(value) if not isinstance(value, TPoly) else value
        if isinstance(value, TPoly):
            return cls._exact(n, n, [TPoly([x]) if not isinstance(x, TPoly) else x for x in e], POLY)
        return cls._exact(n, n, e)

    @classmethod
    def diag(cls, values, backend: str | None = None) -> "Mat":
        values = list(values)
        n = len(values)
        if backend == FLOAT or (backend is None and any(isinstance(v, (complex, float)) for v in values)):
            return cls.from_numpy(np.diag(np.asarray(values, dtype=complex)))
        if backend == POLY or any(isinstance(v, TPoly) for v in values):
            zero = TPoly([])
            e = [TPoly(values[i]) if i == j else zero for i in range(n) for j in range(n)]
            return cls._exact(n, n, e, POLY)
        e = [as_scalar(values[i]) if i == j else _EX0 for i in range(n) for j in range(n)]
        return cls._exact(n, n, e)

    # ---- access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple:
        if self.backend == FLOAT:
            return tuple(complex(v) for v in self._a.ravel())
        return self._e

    def __getitem__(self, ij):
        i, j = ij
        if self.backend == FLOAT:
            return complex(self._a[i, j])
        return self._e[i * self.cols + j]

    def row_list(self):
        c = self.cols
        e = self.entries
        return [list(e[i * c:(i + 1) * c]) for i in range(self.rows)]

    def rational_entries(self):
        """Entries as mpq when every entry is rational, else None (cached)."""
        if self.backend != EXACT:
            return None
        if self._q is None:
            if all(x.is_rational for x in self._e):
                self._q = tuple(x.c[0] for x in self._e)
            else:
                self._q = False
        return self._q or None

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # ---- conversions ------------------------------------------------------
    def to_numpy(self) -> np.ndarray:
        if self.backend == FLOAT:
            return self._a.copy()
        if self.backend == POLY:
            raise TypeError("evaluate a polynomial matrix before converting to numpy")
        return np.array([complex(v) for v in self._e], dtype=complex).reshape(self.rows, self.cols)

    def to_float(self) -> "Mat":
        return self if self.backend == FLOAT else Mat.from_numpy(self.to_numpy())

    def to_poly(self) -> "Mat":
        if self.backend == POLY:
            return self
        if self.backend == FLOAT:
            raise TypeError("float matrices cannot be promoted to polynomials")
        return Mat._exact(self.rows, self.cols, [TPoly([x]) for x in self._e], POLY)

    def eval(self, t) -> "Mat":
        """Substitute an exact value for t in a polynomial matrix."""
        if self.backend != POLY:
            return self
        t = as_scalar(t)
        return Mat._exact(self.rows, self.cols, [p.eval(t) for p in self._e])

    def map(self, fn, backend: str | None = None) -> "Mat":
        return Mat(self.rows, self.cols, [fn(v) for v in self.entries], backend)

    # ---- algebra ------------------------------------------------------------
    def _pair(self, other):
        if not isinstance(other, Mat):
            raise TypeError("expected a Mat")
        a, b = self, other
        if a.backend == b.backend:
            return a, b
        if FLOAT in (a.backend, b.backend):
            return a.to_float(), b.to_float()
        return a.to_poly(), b.to_poly()

    def __add__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        a, b = self._pair(other)
        if a.shape != b.shape:
            raise ShapeError(f"cannot add {a.shape} and {b.shape}")
        if a.backend == FLOAT:
            return Mat.from_numpy(a._a + b._a)
        return Mat._exact(a.rows, a.cols, [x + y for x, y in zip(a._e, b._e)], a.backend)

    def __sub__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        a, b = self._pair(other)
        if a.shape != b.shape:
            raise ShapeError(f"cannot subtract {b.shape} from {a.shape}")
        if a.backend == FLOAT:
            return Mat.from_numpy(a._a - b._a)
        return Mat._exact(a.rows, a.cols, [x - y for x, y in zip(a._e, b._e)], a.backend)

    def __neg__(self):
        if self.backend == FLOAT:
            return Mat.from_numpy(-self._a)
        return Mat._exact(self.rows, self.cols, [-x for x in self._e], self.backend)

    def scale(self, c) -> "Mat":
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a * complex(c))
        if isinstance(c, (complex, float)):
            return Mat.from_numpy(self.to_numpy() * c)
        if isinstance(c, TPoly):
            m = self.to_poly()
            return Mat._exact(m.rows, m.cols, [c * x for x in m._e], POLY)
        c = as_scalar(c)
        return Mat._exact(self.rows, self.cols, [x * c for x in self._e], self.backend)

    def __mul__(self, other):
        if isinstance(other, Mat):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        a, b = self._pair(other)
        if a.cols != b.rows:
            raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
        if a.backend == FLOAT:
            return Mat.from_numpy(a._a @ b._a)
        n, k, m = a.rows, a.cols, b.cols
        qa, qb = a.rational_entries(), b.rational_entries()
        if qa is not None and qb is not None:
            out = []
            for i in range(n):
                ra = qa[i * k:(i + 1) * k]
                for j in range(m):
                    s = mpq(0)
                    for l in range(k):
                        x = ra[l]
                        if x:
                            y = qb[l * m + j]
                            if y:
                                s += x * y
                    out.append(ExScalar(s))
            return Mat._exact(n, m, out)
        ea, eb = a._e, b._e
        zero = TPoly([]) if a.backend == POLY else _EX0
        out = []
        for i in range(n):
            ra = ea[i * k:(i + 1) * k]
            for j in range(m):
                s = zero
                for l in range(k):
                    x = ra[l]
                    if x:
                        y = eb[l * m + j]
                        if y:
                            s = s + x * y
                out.append(s)
        return Mat._exact(n, m, out, a.backend)

    def __pow__(self, k: int):
        if not self.is_square:
            raise ShapeError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative matrix powers are not supported")
        result = Mat.identity(self.rows, self.backend)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "Mat":
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a.T)
        r, c = self.rows, self.cols
        return Mat._exact(c, r, [self._e[i * c + j] for j in range(c) for i in range(r)], self.backend)

    @property
    def T(self) -> "Mat":
        return self.transpose()

    def conj(self) -> "Mat":
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a.conj())
        return Mat._exact(self.rows, self.cols, [x.conj() for x in self._e], self.backend)

    def adjoint(self) -> "Mat":
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a.conj().T)
        r, c = self.rows, self.cols
        e = self._e
        return Mat._exact(c, r, [e[i * c + j].conj() for j in range(c) for i in range(r)], self.backend)

    @property
    def H(self) -> "Mat":
        return self.adjoint()

    def trace(self):
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        if self.backend == FLOAT:
            return complex(np.trace(self._a))
        n = self.rows
        s = TPoly([]) if self.backend == POLY else _EX0
        for i in range(n):
            s = s + self._e[i * n + i]
        return s

    def kron(self, other: "Mat") -> "Mat":
        a, b = self._pair(other)
        if a.backend == FLOAT:
            return Mat.from_numpy(np.kron(a._a, b._a))
        ar, ac, br, bc = a.rows, a.cols, b.rows, b.cols
        out = []
        for i in range(ar):
            for k in range(br):
                for j in range(ac):
                    x = a._e[i * ac + j]
                    for l in range(bc):
                        out.append(x * b._e[k * bc + l])
        return Mat._exact(ar * br, ac * bc, out, a.backend)

    def direct_sum(self, other: "Mat") -> "Mat":
        a, b = self._pair(other)
        if a.backend == FLOAT:
            z = np.zeros((a.rows + b.rows, a.cols + b.cols), dtype=complex)
            z[: a.rows, : a.cols] = a._a
            z[a.rows:, a.cols:] = b._a
            return Mat.from_numpy(z)
        zero = TPoly([]) if a.backend == POLY else _EX0
        out = []
        for i in range(a.rows):
            out.extend(a._e[i * a.cols:(i + 1) * a.cols])
            out.extend([zero] * b.cols)
        for i in range(b.rows):
            out.extend([zero] * a.cols)
            out.extend(b._e[i * b.cols:(i + 1) * b.cols])
        return Mat._exact(a.rows + b.rows, a.cols + b.cols, out, a.backend)

    def vec(self) -> "Mat":
        """Row-major flattening to a 1 x (rows*cols) row."""
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a.reshape(1, -1))
        return Mat._exact(1, self.rows * self.cols, self._e, self.backend)

    def block(self, r0: int, c0: int, nr: int, nc: int) -> "Mat":
        if self.backend == FLOAT:
            return Mat.from_numpy(self._a[r0:r0 + nr, c0:c0 + nc])
        c = self.cols
        return Mat._exact(nr, nc, [self._e[(r0 + i) * c + c0 + j] for i in range(nr) for j in range(nc)], self.backend)

    # ---- predicates -------------------------------------------------------
    def is_zero(self, tol: float = 0.0) -> bool:
        if self.backend == FLOAT:
            return bool(np.max(np.abs(self._a)) <= tol)
        return not any(self._e)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.backend == FLOAT or other.backend == FLOAT:
            return bool(np.array_equal(self.to_numpy(), other.to_numpy()))
        a, b = self._pair(other)
        return a._e == b._e

    def __hash__(self):
        if self.backend == FLOAT:
            return hash((self.shape, self._a.tobytes()))
        return hash((self.shape, self._e))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.to_numpy()))) if self.backend != POLY else math.inf

    def close_to(self, other: "Mat", tol: float = 1e-10) -> bool:
        if self.shape != other.shape:
            return False
        return bool(np.max(np.abs(self.to_numpy() - other.to_numpy())) <= tol)

    # ---- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        if self.backend == FLOAT:
            ent = [[float(v.real), float(v.imag)] for v in self._a.ravel()]
        else:
            ent = [x.to_json() for x in self._e]
        return {"rows": self.rows, "cols": self.cols, "backend": self.backend, "entries": ent}

    @classmethod
    def from_json(cls, obj) -> "Mat":
        try:
            rows, cols, backend = int(obj["rows"]), int(obj["cols"]), obj.get("backend", EXACT)
            ent = obj["entries"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed matrix JSON: {exc}") from exc
        if len(ent) != rows * cols:
            raise ShapeError("entry count does not match the stated shape")
        if backend == FLOAT:
            vals = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in ent]
            return cls.from_numpy(np.array(vals).reshape(rows, cols))
        if backend == POLY:
            return cls._exact(rows, cols, [TPoly.from_json(v) for v in ent], POLY)
        if backend != EXACT:
            raise ShapeError(f"unknown backend {backend!r}")
        return cls._exact(rows, cols, [ExScalar.from_json(v) for v in ent])

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}, {self.backend})"

    def __str__(self):
        rows = self.row_list()
        return "[" + ",\n ".join("[" + ", ".join(str(v) for v in r) + "]" for r in rows) + "]"


def _infer_backend(entries):
    entries = list(entries)
    if any(isinstance(v, TPoly) for v in entries):
        return POLY
    if any(isinstance(v, (complex, float, np.floating, np.complexfloating)) for v in entries):
        return FLOAT
    return EXACT


# ---- module-level operations -----------------------------------------------

def kron(a: Mat, b: Mat) -> Mat:
    return a.kron(b)


def direct_sum(a: Mat, b: Mat) -> Mat:
    return a.direct_sum(b)


def hs_inner(a: Mat, b: Mat):
    """Hilbert-Schmidt inner product tr(A B*) = sum a_ij conj(b_ij)."""
    if a.shape != b.shape:
        raise ShapeError(f"hs_inner of {a.shape} and {b.shape}")
    if FLOAT in (a.backend, b.backend):
        return complex(np.vdot(b.to_numpy(), a.to_numpy()))
    qa, qb = a.rational_entries(), b.rational_entries()
    if qa is not None and qb is not None:
        s = mpq(0)
        for x, y in zip(qa, qb):
            if x and y:
                s += x * y
        return ExScalar(s)
    a, b = a._pair(b)
    s = TPoly([]) if a.backend == POLY else _EX0
    for x, y in zip(a._e, b._e):
        if x and y:
            s = s + x * y.conj()
    return s


def gram(mats) -> Mat:
    """Gram matrix G_jk = hs_inner(M_j, M_k)."""
    mats = list(mats)
    n = len(mats)
    if n == 0:
        raise ShapeError("empty matrix list")
    if any(m.backend == FLOAT for m in mats):
        v = np.array([m.to_numpy().ravel() for m in mats])
        return Mat.from_numpy(v @ v.conj().T)
    qs = [m.rational_entries() for m in mats]
    if all(q is not None for q in qs):
        out = [None] * (n * n)
        for j in range(n):
            for k in range(j, n):
                s = mpq(0)
                for x, y in zip(qs[j], qs[k]):
                    if x and y:
                        s += x * y
                out[j * n + k] = out[k * n + j] = ExScalar(s)
        return Mat._exact(n, n, out)
    if any(m.backend == POLY for m in mats):
        return _poly_gram(mats)
    out = [None] * (n * n)
    for j in range(n):
        for k in range(j, n):
            g = hs_inner(mats[j], mats[k])
            out[j * n + k] = g
            out[k * n + j] = g.conj()
    return Mat._exact(n, n, out)


def _poly_gram(mats):
    n = len(mats)
    ms = [m.to_poly() for m in mats]
    if all(all(p.is_rational for p in m._e) for m in ms):
        # integer kernels: scale each matrix to integer coefficients first
        ints, scales = [], []
        for m in ms:
            den = 1
            for p in m._e:
                for c in p.rational_coefficients():
                    den = lcm(den, int(c.denominator))
            ints.append([[int(c * den) for c in p.rational_coefficients()] for p in m._e])
            scales.append(den)
        out = [None] * (n * n)
        for j in range(n):
            for k in range(j, n):
                acc = []
                for x, y in zip(ints[j], ints[k]):
                    if x and y:
                        acc = ip.add(acc, ip.mul(x, y))
                s = mpq(1, scales[j] * scales[k])
                p = TPoly._q([mpq(c) * s for c in acc])
                out[j * n + k] = out[k * n + j] = p
        return Mat._exact(n, n, out, POLY)
    out = [None] * (n * n)
    for j in range(n):
        for k in range(j, n):
            g = hs_inner(ms[j], ms[k])
            out[j * n + k] = g
            out[k * n + j] = g.conj()
    return Mat._exact(n, n, out, POLY)


def stack_rows(mats) -> Mat:
    """Matrix whose rows are vec(M) for each M."""
    mats = list(mats)
    if any(m.backend == FLOAT for m in mats):
        return Mat.from_numpy(np.array([m.to_numpy().ravel() for m in mats]))
    backend = POLY if any(m.backend == POLY for m in mats) else EXACT
    if backend == POLY:
        mats = [m.to_poly() for m in mats]
    width = mats[0].rows * mats[0].cols
    if any(m.rows * m.cols != width for m in mats):
        raise ShapeError("matrices have different sizes")
    return Mat._exact(len(mats), width, [x for m in mats for x in m._e], backend)


def _echelon(rows, ncols, zero, one):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        inv = one / pr[c]
        pr = [x * inv if x else zero for x in pr]
        rows[r] = pr
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [x - f * y if y else x for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return pivots


def rank_nullspace(m: Mat):
    """Exact rank and a nullspace basis of an exact matrix.

    The basis comes from the reduced row echelon form with first-nonzero
    pivoting in row order, and each vector is scaled so that its first
    nonzero coordinate is 1.

    Returns
    -------
    rank : int
    basis : list of tuple of ExScalar
        Vectors v with M v = 0.
    """
    if m.backend != EXACT:
        raise TypeError("rank_nullspace needs an exact matrix")
    q = m.rational_entries()
    n = m.cols
    if q is not None:
        rows = [list(q[i * n:(i + 1) * n]) for i in range(m.rows)]
        zero, one = mpq(0), mpq(1)
    else:
        rows = [list(m._e[i * n:(i + 1) * n]) for i in range(m.rows)]
        zero, one = _EX0, _EX1
    pivots = _echelon(rows, n, zero, one)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        first = next(x for x in v if x)
        if first != one:
            inv = one / first
            v = [x * inv for x in v]
        basis.append(tuple(as_scalar(x) for x in v))
    return len(pivots), basis


def rank(m: Mat) -> int:
    if m.backend == FLOAT:
        return float_rank(m)
    return rank_nullspace(m)[0]


def matvec(m: Mat, v):
    n = m.cols
    out = []
    for i in range(m.rows):
        s = _EX0
        for j in range(n):
            x = m._e[i * n + j]
            if x and v[j]:
                s = s + x * v[j]
        out.append(s)
    return out


def det_bareiss(m: Mat):
    """Exact determinant by fraction-free Bareiss elimination.

    Rational polynomial matrices are scaled row-wise to integer coefficients
    and eliminated with big-integer polynomial kernels.
    """
    if not m.is_square:
        raise ShapeError("determinant of a non-square matrix")
    if m.backend == FLOAT:
        raise TypeError("det_bareiss needs an exact or polynomial matrix")
    n = m.rows
    if m.backend == POLY:
        if n > MAX_POLY_DET:
            raise ExplicitTooLarge(f"polynomial determinant of size {n} > {MAX_POLY_DET}")
        if all(p.is_rational for p in m._e):
            return _det_intpoly(m)
        return _bareiss([list(m._e[i * n:(i + 1) * n]) for i in range(n)], TPoly([]), TPoly([1]),
                        lambda a, b: a.exact_div(b))
    q = m.rational_entries()
    if q is not None:
        rows = [list(q[i * n:(i + 1) * n]) for i in range(n)]
        d = _bareiss(rows, mpq(0), mpq(1), lambda a, b: a / b)
        return ExScalar(d)
    rows = [list(m._e[i * n:(i + 1) * n]) for i in range(n)]
    return _bareiss(rows, _EX0, _EX1, lambda a, b: a / b)


def _bareiss(a, zero, one, exact_div):
    n = len(a)
    sign = 1
    prev = one
    for k in range(n - 1):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return zero
        if p != k:
            a[k], a[p] = a[p], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri = a[i]
            rk = a[k]
            for j in range(k + 1, n):
                num = akk * ri[j] - aik * rk[j] if aik else akk * ri[j]
                ri[j] = exact_div(num, prev) if num else zero
            ri[k] = zero
        prev = akk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _det_intpoly(m: Mat) -> TPoly:
    n = m.rows
    rows, scale = [], mpq(1)
    for i in range(n):
        row = m._e[i * n:(i + 1) * n]
        den = 1
        for p in row:
            for c in p.rational_coefficients():
                den = lcm(den, int(c.denominator))
        rows.append([[int(c * den) for c in p.rational_coefficients()] for p in row])
        scale *= den
    sign = 1
    prev = [1]
    det = None
    for k in range(n):
        p = next((i for i in range(k, n) if rows[i][k]), None)
        if p is None:
            return TPoly([])
        if p != k:
            rows[k], rows[p] = rows[p], rows[k]
            sign = -sign
        if k == n - 1:
            det = rows[k][k]
            break
        akk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            aik = ri[k]
            for j in range(k + 1, n):
                t1 = ip.mul(akk, ri[j]) if ri[j] else []
                t2 = ip.mul(aik, rk[j]) if aik and rk[j] else []
                num = ip.sub(t1, t2) if t2 else t1
                ri[j] = ip.exact_div(num, prev) if num and prev != [1] else num
            ri[k] = []
        prev = akk
    s = mpq(sign) / scale
    return TPoly._q([mpq(c) * s for c in det])


def cofactor_det(m: Mat):
    """Determinant by cofactor expansion (exponential; for cross-checks only)."""
    n = m.rows
    rows = m.row_list()

    def rec(r, cols):
        if r == n:
            return _EX1 if m.backend == EXACT else TPoly([1])
        total = None
        for idx, c in enumerate(cols):
            x = rows[r][c]
            if not x:
                continue
            term = x * rec(r + 1, cols[:idx] + cols[idx + 1:])
            if idx % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            return _EX0 if m.backend == EXACT else TPoly([])
        return total

    return rec(0, list(range(n)))


def partial_trace(m: Mat, dims, side: str = "second") -> Mat:
    """Partial trace of a pq x pq matrix over the first or second tensor factor.

    The tensor convention is numpy's kron: index (i, k) of A (x) B sits at
    row i*q + k.  ``side="second"`` traces out the q-dimensional factor.
    """
    p, q = int(dims[0]), int(dims[1])
    if not m.is_square or m.rows != p * q:
        raise ShapeError(f"matrix of shape {m.shape} is not {p * q}x{p * q}")
    if side not in ("first", "second"):
        raise ValueError("side must be 'first' or 'second'")
    if m.backend == FLOAT:
        a = m._a.reshape(p, q, p, q)
        r = np.einsum("ikjk->ij", a) if side == "second" else np.einsum("kikj->ij", a)
        return Mat.from_numpy(r)
    n = p * q
    e = m._e
    zero = TPoly([]) if m.backend == POLY else _EX0
    if side == "second":
        out = []
        for i in range(p):
            for j in range(p):
                s = zero
                for k in range(q):
                    x = e[(i * q + k) * n + j * q + k]
                    if x:
                        s = s + x
                out.append(s)
        return Mat._exact(p, p, out, m.backend)
    out = []
    for i in range(q):
        for j in range(q):
            s = zero
            for k in range(p):
                x = e[(k * q + i) * n + k * q + j]
                if x:
                    s = s + x
            out.append(s)
    return Mat._exact(q, q, out, m.backend)


def hermitian_eig(m: Mat):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns
    -------
    eigenvalues : ndarray
        Real, in descending order.
    eigenvectors : Mat
        Float matrix whose columns are the matching orthonormal eigenvectors.
    """
    a = m.to_numpy().astype(complex)
    if a.shape[0] != a.shape[1]:
        raise ShapeError("eigenvalues of a non-square matrix")
    if a.size and np.max(np.abs(a - a.conj().T)) >= HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian within 1e-10")
    w, v = _jacobi(a)
    order = np.argsort(-w, kind="stable")
    return w[order], Mat.from_numpy(v[:, order])


def _tournament(n: int):
    """Round-robin schedule: n-1 rounds of disjoint (p, q) pairs covering all pairs once."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            p, q = players[i], players[m - 1 - i]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(a, tol: float = JACOBI_TOL, max_sweeps: int = 100):
    """Cyclic complex Jacobi in round-robin order.

    Each round applies a set of disjoint rotations at once; disjoint
    rotations commute and leave each other's pivots untouched, so a round
    equals the same rotations applied one after another.
    """
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if n == 1 or norm == 0:
        return np.real(np.diag(a)).copy(), v
    thresh = tol * norm
    rounds = _tournament(n)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < thresh:
            break
        for P, Q in rounds:
            apq = a[P, Q]
            r = np.abs(apq)
            keep = r > max(1e-300, 1e-18 * thresh)
            if not keep.any():
                continue
            P, Q, apq, r = P[keep], Q[keep], apq[keep], r[keep]
            ph = apq / r
            theta = (a[Q, Q].real - a[P, P].real) / (2.0 * r)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # J acts on coordinates (p, q): [[c, s*ph], [-s*conj(ph), c]]
            jpq = s * ph
            jqp = -s * ph.conj()
            colp, colq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = c * colp + jqp * colq
            a[:, Q] = jpq * colp + c * colq
            rowp, rowq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = c[:, None] * rowp + jqp.conj()[:, None] * rowq
            a[Q, :] = jpq.conj()[:, None] * rowp + c[:, None] * rowq
            a[P, Q] = 0.0
            a[Q, P] = 0.0
            vp, vq = v[:, P].copy(), v[:, Q].copy()
            v[:, P] = c * vp + jqp * vq
            v[:, Q] = jpq * vp + c * vq
    return np.real(np.diag(a)).copy(), v


def float_rank(m: Mat, tol_rel: float = 1e-9, hermitian_psd: bool | None = None) -> int:
    """Numerical rank at relative tolerance ``tol_rel``.

    PSD input counts eigenvalues above tol_rel * max; otherwise singular
    values of M (LAPACK SVD) above tol_rel * max are counted.
    """
    a = m.to_numpy()
    if hermitian_psd is None:
        hermitian_psd = a.shape[0] == a.shape[1] and np.allclose(a, a.conj().T, atol=1e-12, rtol=0)
    if hermitian_psd:
        w, _ = hermitian_eig(Mat.from_numpy(a))
        w = np.abs(w)
        if not len(w) or w.max() == 0:
            return 0
        return int(np.sum(w > tol_rel * w.max()))
    if a.size == 0:
        return 0
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.max() <= 0:
        return 0
    return int(np.sum(sv > tol_rel * sv.max()))
