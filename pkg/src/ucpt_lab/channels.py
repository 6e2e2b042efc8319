"""Channel families given by Kraus generators, plus application, Choi matrix and UCPT checks.

A channel is stored as generators A_k together with a constant N, acting as

    Phi(rho) = (1/N) sum_k A_k^* rho A_k.

Families indexed by m = 1..d follow the partial-isometry pattern
A_m = S^(-m+1) (t (+) V_m) S^(m-1), where S = sum_k |e_k><e_{k+1}| is the cyclic
shift and (+) is the direct sum placing t in the top-left corner.  Public
family parameters are one-based (m = 1..d); matrices are indexed from zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadDimension, BadParameters, NotUnitary, ShapeError
from .field import ExScalar, as_scalar, mpq, sqrt_rational
from .linalg import EXACT, FLOAT, POLY, Mat, float_rank, rank_nullspace
from .poly import T, TPoly

FAMILIES = (
    "key", "odd_swap", "even_skew", "ucpt_alpha_beta", "arveson_ohno",
    "ohno_lowrank", "d6_xy", "general_partial_isometry", "asymmetric_w",
)
FLOAT_TOL = 1e-10

# orthogonal matrix used by the "asymmetric_w" family (d = 4, all V_m equal)
ASYMMETRIC_W = ((8, -11, 16), (-19, -8, 4), (-4, 16, 13))


@dataclass
class KrausSet:
    """Generators A_k and constant N with Phi(rho) = (1/N) sum A_k^* rho A_k."""

    d: int
    generators: list
    norm_sq: object
    name: str = ""
    notes: list = field(default_factory=list)

    def __post_init__(self):
        if not self.generators:
            raise ShapeError("a channel needs at least one generator")
        for a in self.generators:
            if a.shape != (self.d, self.d):
                raise ShapeError(f"generator of shape {a.shape} in a d={self.d} channel")
        backends = {a.backend for a in self.generators}
        if len(backends) > 1:
            if FLOAT in backends:
                self.generators = [a.to_float() for a in self.generators]
            else:
                self.generators = [a.to_poly() for a in self.generators]

    @property
    def backend(self) -> str:
        return self.generators[0].backend

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    def __len__(self):
        return len(self.generators)

    def eval(self, t) -> "KrausSet":
        """Substitute an exact t into a symbolic family."""
        if self.backend != POLY:
            return self
        n = self.norm_sq.eval(t) if isinstance(self.norm_sq, TPoly) else self.norm_sq
        return KrausSet(self.d, [a.eval(t) for a in self.generators], n, self.name, list(self.notes))

    def to_float(self) -> "KrausSet":
        return KrausSet(self.d, [a.to_float() for a in self.generators], complex(self.norm_sq).real,
                        self.name, list(self.notes))

    def to_json(self) -> dict:
        n = self.norm_sq
        if isinstance(n, (ExScalar, TPoly)):
            n = n.to_json()
        return {
            "d": self.d,
            "name": self.name,
            "norm_sq": n,
            "generators": [a.to_json() for a in self.generators],
            "notes": self.notes,
        }


@dataclass
class FamilySpec:
    """Parameters naming one channel family.

    ``t`` may be an exact scalar, the text "t" (or a TPoly) for the symbolic
    parameter, or a float for numeric families.
    """

    name: str
    d: int | None = None
    t: object = None
    alpha: object = None
    beta: object = None
    V_list: list | None = None

    @classmethod
    def from_json(cls, obj: dict) -> "FamilySpec":
        if not isinstance(obj, dict):
            raise BadParameters("family spec must be a JSON object")
        name = obj.get("family", obj.get("name"))
        if name not in FAMILIES:
            raise BadParameters(f"unknown family {name!r}")
        d = obj.get("d")
        if d is not None:
            if not isinstance(d, int) or isinstance(d, bool):
                raise BadDimension(f"d must be an integer, got {d!r}")
        vlist = obj.get("V") or obj.get("V_list")
        if vlist is not None:
            vlist = [Mat.from_json(v) for v in vlist]
        return cls(name=name, d=d, t=obj.get("t"), alpha=obj.get("alpha"), beta=obj.get("beta"), V_list=vlist)

    def to_json(self) -> dict:
        out = {"family": self.name}
        if self.d is not None:
            out["d"] = self.d
        for key in ("t", "alpha", "beta"):
            v = getattr(self, key)
            if v is None:
                continue
            if isinstance(v, TPoly):
                out[key] = "t" if v == T else v.to_json()
            elif isinstance(v, ExScalar):
                out[key] = v.to_json()
            else:
                out[key] = v
        if self.V_list is not None:
            out["V"] = [v.to_json() for v in self.V_list]
        return out


def _param_t(t):
    if t is None:
        raise BadParameters("this family needs a value of t")
    if isinstance(t, TPoly):
        return t
    if isinstance(t, str) and t.strip() == "t":
        return T
    if isinstance(t, float):
        return t
    return as_scalar(t)


def _backend_of(t):
    if isinstance(t, TPoly):
        return POLY
    if isinstance(t, float):
        return FLOAT
    return EXACT


def shift(d: int, backend: str = EXACT) -> Mat:
    """Cyclic shift S = sum_k |e_k><e_{k+1}| (indices mod d)."""
    if not isinstance(d, int) or d < 2:
        raise BadDimension(f"shift needs d >= 2, got {d!r}")
    m = Mat._exact(d, d, [ExScalar(1) if (i + 1) % d == j else ExScalar(0) for i in range(d) for j in range(d)])
    return m.to_float() if backend == FLOAT else m


def shift_power(d: int, k: int) -> Mat:
    """S^k for any integer k; (S^k)_{j, j+k} = 1."""
    k %= d
    return Mat._exact(d, d, [ExScalar(1) if (i + k) % d == j else ExScalar(0) for i in range(d) for j in range(d)])


def _zero(backend):
    return TPoly([]) if backend == POLY else (0j if backend == FLOAT else ExScalar(0))


def _assemble(d, cells, backend):
    """Matrix from a dict {(i, j): value} of nonzero cells."""
    z = _zero(backend)
    if backend == FLOAT:
        a = np.zeros((d, d), dtype=complex)
        for (i, j), v in cells.items():
            a[i, j] += complex(v) if not isinstance(v, float) else v
        return Mat.from_numpy(a)
    ent = [z] * (d * d)
    for (i, j), v in cells.items():
        if backend == POLY and not isinstance(v, TPoly):
            v = TPoly([v])
        ent[i * d + j] = ent[i * d + j] + v
    return Mat._exact(d, d, ent, backend)


def partial_isometry_generator(d: int, m: int, t, V: Mat) -> Mat:
    """A_m = S^(-m+1) (t (+) V) S^(m-1) for m = 1..d."""
    if V.shape != (d - 1, d - 1):
        raise ShapeError(f"V must be {(d - 1)}x{(d - 1)}, got {V.shape}")
    backend = POLY if isinstance(t, TPoly) else (FLOAT if (isinstance(t, float) or V.backend == FLOAT) else EXACT)
    k = m - 1
    cells = {(k % d, k % d): t}
    for i in range(d - 1):
        for j in range(d - 1):
            v = V[i, j]
            if v:
                cells[((i + 1 + k) % d, (j + 1 + k) % d)] = v
    return _assemble(d, cells, backend)


def key_unitary(n: int) -> Mat:
    """W_n = (2/n) J - I, the reflection through the all-ones vector."""
    c = mpq(2, n)
    return Mat._exact(n, n, [ExScalar(c - 1 if i == j else c) for i in range(n) for j in range(n)])


def _check_unitary(V: Mat, label: str):
    n = V.rows
    if not V.is_square:
        raise NotUnitary(f"{label} is not square")
    defect = V @ V.adjoint() - Mat.identity(n, V.backend)
    if V.backend == FLOAT:
        err = float(np.max(np.abs(defect.to_numpy())))
        if err > FLOAT_TOL:
            raise NotUnitary(f"{label} is not unitary (defect {err:.3g})", err)
    elif not defect.is_zero():
        raise NotUnitary(f"{label} is not unitary", float(np.max(np.abs(defect.to_numpy()))))


def _norm_pi(d, t):
    return (d - 1) + t * t


def build_family(spec: FamilySpec) -> KrausSet:
    """Construct the Kraus generators and normalization of a named family."""
    name = spec.name
    if name not in FAMILIES:
        raise BadParameters(f"unknown family {name!r}")
    if name == "ucpt_alpha_beta":
        return _alpha_beta(spec)
    if name == "arveson_ohno":
        return _arveson_ohno()
    if name == "d6_xy":
        return _d6_xy()
    d = spec.d
    if name == "asymmetric_w":
        d = 4 if d is None else d
        if d != 4:
            raise BadDimension("the asymmetric_w family is defined for d = 4 only")
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise BadDimension(f"family {name} needs an integer d >= 2, got {d!r}")
    if name == "ohno_lowrank":
        return _ohno_lowrank(d, spec.t)
    t = _param_t(spec.t)
    backend = _backend_of(t)
    if name == "key":
        if d < 3:
            raise BadDimension("the key family needs d >= 3")
        W = key_unitary(d - 1)
        gens = [partial_isometry_generator(d, m, t, W) for m in range(1, d + 1)]
    elif name == "asymmetric_w":
        W = Mat.from_rows(ASYMMETRIC_W).scale(mpq(1, 21))
        gens = [partial_isometry_generator(d, m, t, W) for m in range(1, d + 1)]
    elif name == "odd_swap":
        if d % 2 == 0 or d < 3:
            raise BadDimension("odd_swap needs odd d >= 3")
        gens = []
        for m0 in range(d):
            cells = {(j, (2 * m0 - j) % d): ExScalar(1) for j in range(d) if j != m0}
            cells[(m0, m0)] = t
            gens.append(_assemble(d, cells, backend))
    elif name == "even_skew":
        if d % 2 or d < 4:
            raise BadDimension("even_skew needs even d >= 4")
        nu = d // 2
        gens = []
        for m0 in range(d):
            cells = {}
            for k in range(1, nu):
                cells[((m0 + k) % d, (m0 - k) % d)] = ExScalar(1)
                cells[((m0 - k) % d, (m0 + k) % d)] = ExScalar(1)
            cells[((m0 + nu) % d, (m0 + nu) % d)] = ExScalar(1)
            cells[(m0, m0)] = t
            gens.append(_assemble(d, cells, backend))
    else:  # general_partial_isometry
        vl = spec.V_list
        if vl is None:
            raise BadParameters("general_partial_isometry needs V_list")
        if len(vl) == 1:
            vl = list(vl) * d
        if len(vl) != d:
            raise BadParameters(f"expected {d} unitaries, got {len(vl)}")
        for idx, V in enumerate(vl, 1):
            if V.shape != (d - 1, d - 1):
                raise ShapeError(f"V_{idx} must be {d - 1}x{d - 1}")
            _check_unitary(V, f"V_{idx}")
        gens = [partial_isometry_generator(d, m, t, V) for m, V in enumerate(vl, 1)]
        if any(g.backend == FLOAT for g in gens):
            gens = [g.to_float() for g in gens]
    return KrausSet(d, gens, _norm_pi(d, t), name)


def _alpha_beta(spec: FamilySpec) -> KrausSet:
    if spec.alpha is None or spec.beta is None:
        raise BadParameters("ucpt_alpha_beta needs alpha and beta")
    a, b = as_scalar(spec.alpha), as_scalar(spec.beta)
    if a.abs2() + b.abs2() != 1:
        raise BadParameters("ucpt_alpha_beta needs |alpha|^2 + |beta|^2 = 1 exactly")
    if spec.d not in (None, 3):
        raise BadDimension("ucpt_alpha_beta is defined for d = 3")
    one = ExScalar(1)
    gens = [
        _assemble(3, {(0, 0): a, (1, 2): one}, EXACT),
        _assemble(3, {(0, 2): b, (2, 1): one}, EXACT),
        _assemble(3, {(0, 1): -one, (2, 0): -b.conj()}, EXACT),
        _assemble(3, {(1, 0): one, (2, 2): a.conj()}, EXACT),
    ]
    return KrausSet(3, gens, ExScalar(2), "ucpt_alpha_beta")


def _arveson_ohno() -> KrausSet:
    r2, r3, one = sqrt_rational(2), sqrt_rational(3), ExScalar(1)
    gens = [
        _assemble(3, {(0, 0): one}, EXACT),
        _assemble(3, {(0, 1): one, (1, 2): r2}, EXACT),
        _assemble(3, {(1, 0): r2, (2, 1): r3}, EXACT),
        _assemble(3, {(2, 0): one, (0, 2): r2}, EXACT),
    ]
    return KrausSet(3, gens, ExScalar(4), "arveson_ohno",
                    ["normalization N = 4 is inferred from sum A_k^* A_k = 4 I"])


def _ohno_lowrank(d: int, t=None) -> KrausSet:
    if d < 3:
        raise BadDimension("ohno_lowrank needs d >= 3")
    try:
        c1 = sqrt_rational(mpq(d - 2, d - 1))
        ck = sqrt_rational(mpq(1, d - 1))
        backend = EXACT
    except Exception:
        c1 = float(np.sqrt((d - 2) / (d - 1)))
        ck = float(1 / np.sqrt(d - 1))
        backend = FLOAT
    gens = [_assemble(d, {(i, i): c1 for i in range(1, d)}, backend)]
    for k in range(1, d):
        gens.append(_assemble(d, {(0, k): ck, (k, 0): ck}, backend))
    return KrausSet(d, gens, ExScalar(1) if backend == EXACT else 1.0, "ohno_lowrank")


def _d6_xy() -> KrausSet:
    half = mpq(1, 2)
    X = ((-1, 1), (1, -1))
    Y = ((1, 1), (1, 1))

    def gen(blocks):
        cells = {}
        for (bi, bj), M in blocks.items():
            for i in range(2):
                for j in range(2):
                    if M[i][j]:
                        cells[(2 * bi + i, 2 * bj + j)] = ExScalar(half * M[i][j])
        return _assemble(6, cells, EXACT)

    gens = [
        gen({(0, 0): X, (0, 1): Y, (1, 0): Y, (1, 1): X}),
        gen({(0, 0): X, (0, 2): Y, (2, 0): Y, (2, 2): X}),
        gen({(1, 1): X, (1, 2): Y, (2, 1): Y, (2, 2): X}),
    ]
    return KrausSet(6, gens, ExScalar(2), "d6_xy")


def from_generators(gens, norm_sq=None, name: str = "custom") -> KrausSet:
    """Wrap arbitrary square generators; N defaults to tr(sum A^*A)/d."""
    gens = list(gens)
    d = gens[0].rows
    if norm_sq is None:
        s = sum_products(gens, adjoint_first=True)
        norm_sq = s.trace() / d if s.backend != FLOAT else complex(s.trace()).real / d
    return KrausSet(d, gens, norm_sq, name)


def sum_products(gens, adjoint_first: bool = True) -> Mat:
    """sum A^* A (adjoint_first) or sum A A^*."""
    total = None
    for a in gens:
        p = a.adjoint() @ a if adjoint_first else a @ a.adjoint()
        total = p if total is None else total + p
    return total


def _inv_norm(K: KrausSet):
    n = K.norm_sq
    if isinstance(n, TPoly):
        raise TypeError("evaluate a symbolic family at a value of t first")
    if isinstance(n, (float, complex)):
        return 1.0 / n
    return as_scalar(n).inverse()


def apply_channel(K: KrausSet, rho: Mat) -> Mat:
    """(1/N) sum_k A_k^* rho A_k."""
    if rho.shape != (K.d, K.d):
        raise ShapeError(f"input of shape {rho.shape} for a d={K.d} channel")
    total = None
    for a in K.generators:
        p = a.adjoint() @ rho @ a
        total = p if total is None else total + p
    return total.scale(_inv_norm(K))


def apply_adjoint(K: KrausSet, rho: Mat) -> Mat:
    """The Hilbert-Schmidt adjoint map (1/N) sum_k A_k rho A_k^*."""
    total = None
    for a in K.generators:
        p = a @ rho @ a.adjoint()
        total = p if total is None else total + p
    return total.scale(_inv_norm(K))


def choi(K: KrausSet):
    """Choi matrix sum_ij E_ij (x) Phi(E_ij) (trace d) and its rank.

    Entry ((i,k),(j,l)) equals (1/N) sum_a conj(A_a[i,k]) A_a[j,l], so the
    matrix is the complex conjugate of (1/N) sum_a vec(A_a) vec(A_a)^*.
    """
    d = K.d
    inv = _inv_norm(K)
    if K.backend == FLOAT:
        v = np.array([a.to_numpy().ravel() for a in K.generators])
        J = (v.conj().T @ v) * inv
        m = Mat.from_numpy(J)
        return m, float_rank(m, hermitian_psd=True)
    n = d * d
    vecs = [a.entries for a in K.generators]
    ent = []
    for r in range(n):
        for c in range(n):
            s = ExScalar(0)
            for v in vecs:
                x, y = v[r], v[c]
                if x and y:
                    s = s + x.conj() * y
            ent.append(s * inv)
    m = Mat._exact(n, n, ent)
    return m, rank_nullspace(m)[0]


def check_ucpt(K: KrausSet, tol: float = FLOAT_TOL):
    """(unital, trace_preserving): sum A^*A = N I and sum A A^* = N I."""
    d = K.d
    s1 = sum_products(K.generators, True)
    s2 = sum_products(K.generators, False)
    if K.backend == FLOAT:
        target = np.eye(d) * complex(K.norm_sq)
        return (bool(np.max(np.abs(s1.to_numpy() - target)) <= tol),
                bool(np.max(np.abs(s2.to_numpy() - target)) <= tol))
    target = Mat.identity(d, s1.backend).scale(K.norm_sq)
    return s1 == target, s2 == target


def matrix_units(d: int):
    """All |e_i><e_j| in row-major order."""
    return [Mat.unit(d, i, j) for i in range(d) for j in range(d)]


def map_table_choi(fn, d: int) -> Mat:
    """Choi matrix sum E_ij (x) fn(E_ij) of an arbitrary linear map on M_d."""
    from .linalg import kron

    total = None
    for i in range(d):
        for j in range(d):
            e = Mat.unit(d, i, j)
            term = kron(e, fn(e))
            total = term if total is None else total + term
    return total
