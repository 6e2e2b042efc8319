"""Pairwise product transforms X_mn, the Omega matrices and their eigenspaces.

For the key family, products A_m A_n (m != n) are rescaled and corrected on
the diagonal to X_mn; their symmetric and antisymmetric combinations reduce to
X^+(w) or X^-(w), which depend on t only through one number w.  Linear
independence of {X^(w)}_{m<n} is decided by the d(d-1)/2 square matrix
Omega(x) with x = w, and Omega(x) = Omega(0) + x I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

from .channels import FamilySpec, KrausSet, build_family
from .errors import BadCase, BadDimension, BadIndices, PreconditionFailed
from .extremality import independence
from .field import ExScalar, as_scalar, mpq, rational_text
from .linalg import EXACT, POLY, Mat, det_bareiss, matvec, rank_nullspace, stack_rows
from .poly import T, TPoly

SIGNS = ("+", "-")
CASES = ("skew_2_minus_d", "skew_2", "sym_2(2-d)", "sym_4_minus_d", "sym_2")
# sign of Omega and the value x whose nullspace each case spans
_CASE_SIGN = {"skew_2_minus_d": "-", "skew_2": "-", "sym_2(2-d)": "+", "sym_4_minus_d": "+", "sym_2": "+"}


def _sign(sign) -> int:
    if sign in ("+", 1, "plus"):
        return 1
    if sign in ("-", "−", -1, "minus"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def pairs(d: int):
    """Index pairs (m, n), m < n, zero-based, in lexicographic order."""
    return list(combinations(range(d), 2))


@dataclass
class OmegaMatrix:
    d: int
    sign: str
    x: object
    matrix: Mat

    @property
    def size(self) -> int:
        return self.d * (self.d - 1) // 2

    def to_json(self) -> dict:
        x = self.x.to_json() if hasattr(self.x, "to_json") else self.x
        return {"d": self.d, "sign": self.sign, "x": x, "matrix": self.matrix.to_json()}


@dataclass
class SpectrumClaim:
    eigenvalue: ExScalar
    claimed_multiplicity: int


def _omega_entry(s, mn, jk, x, one, zero):
    m, n = mn
    j, k = jk
    if (j, k) == (m, n):
        return x
    if (j == m and k != n) or (k == n and j != m):
        return one
    if k == m or j == n:
        return one if s > 0 else -one
    return zero


def build_omega(d: int, sign, x=0) -> OmegaMatrix:
    """Omega(x) indexed by pairs m<n (rows) and j<k (columns).

    Parameters
    ----------
    d : int
        At least 3.
    sign : {"+", "-"}
    x : exact scalar or TPoly
        Value placed on the diagonal.
    """
    if d < 3:
        raise BadDimension("Omega needs d >= 3")
    s = _sign(sign)
    pr = pairs(d)
    if isinstance(x, TPoly):
        one, zero = TPoly([1]), TPoly([])
        backend = POLY
    else:
        x = as_scalar(x)
        one, zero = ExScalar(1), ExScalar(0)
        backend = EXACT
    ent = [_omega_entry(s, mn, jk, x, one, zero) for mn in pr for jk in pr]
    n = len(pr)
    return OmegaMatrix(d, "+" if s > 0 else "-", x, Mat._exact(n, n, ent, backend))


def x_pattern(d: int, m: int, n: int, sign, x) -> Mat:
    """X^(x) = x (E_mn +- E_nm) + sum_{j != m,n} (E_mj +- E_jm + E_jn +- E_nj), one-based m, n."""
    s = _sign(sign)
    m0, n0 = m - 1, n - 1
    x = as_scalar(x)
    ent = [ExScalar(0)] * (d * d)

    def put(i, j, v):
        ent[i * d + j] = ent[i * d + j] + v

    put(m0, n0, x)
    put(n0, m0, x * s)
    for j in range(d):
        if j in (m0, n0):
            continue
        put(m0, j, 1)
        put(j, m0, s)
        put(j, n0, 1)
        put(n0, j, s)
    return Mat._exact(d, d, ent)


def w_plus(d: int, t):
    t = as_scalar(t)
    return ExScalar(2 * d) / (t * (d - 1) + (d + 1))


def w_minus(d: int, t):
    t = as_scalar(t)
    den = ExScalar(d - 3) - t * (d - 1)
    if not den:
        return None
    return ExScalar(2 * (d - 2)) / den


def p_d(d: int, t):
    """4 d (d-2) (1 + t (d-1)); vanishes exactly at t = -1/(d-1)."""
    t = as_scalar(t)
    return ExScalar(4 * d * (d - 2)) * (t * (d - 1) + 1)


def _key_t(K: KrausSet):
    if K.backend != EXACT:
        raise TypeError("xmn_transform needs an exact key channel")
    return K.generators[0][0, 0]


def xmn_transform(K: KrausSet, m: int, n: int) -> dict:
    """X_mn, X^+, X^- and the weights w^+, w^- for a key channel.

    X_mn = (d-1)^2 A_m A_n + 4 J - D_mn where J is the all-ones matrix and
    D_mn is the diagonal that zeroes the diagonal of the result.  At
    t = (d-3)/(d-1) the antisymmetric denominator vanishes; X^- is then
    returned unscaled as X_mn - X_nm and ``w_minus`` is None.

    Returns
    -------
    dict with keys X_mn, X_plus, X_minus, w_plus, w_minus, matches_pattern
    """
    d = K.d
    if m == n:
        raise BadIndices("X_mn needs m != n")
    if not (1 <= m <= d and 1 <= n <= d):
        raise BadIndices(f"indices must lie in 1..{d}")
    t = _key_t(K)
    A = K.generators
    J = Mat._exact(d, d, [ExScalar(4)] * (d * d))
    scale = ExScalar((d - 1) ** 2)

    def xmat(a, b):
        raw = (A[a - 1] @ A[b - 1]).scale(scale) + J
        corr = Mat.diag([-raw[i, i] for i in range(d)])
        return raw + corr

    Xmn, Xnm = xmat(m, n), xmat(n, m)
    a_hat = ExScalar(2 * (d - 1))
    b_hat = t * (2 * (d - 1)) + 4
    wp, wm = w_plus(d, t), w_minus(d, t)
    Xp = (Xmn + Xnm).scale((b_hat + a_hat).inverse())
    if wm is None:
        Xm = Xmn - Xnm
        ok_m = Xm == (Mat.unit(d, m - 1, n - 1) - Mat.unit(d, n - 1, m - 1)).scale(4 * (2 - d))
    else:
        Xm = (Xmn - Xnm).scale((b_hat - a_hat).inverse())
        ok_m = Xm == x_pattern(d, m, n, "-", wm)
    ok_p = Xp == x_pattern(d, m, n, "+", wp)
    return {"X_mn": Xmn, "X_plus": Xp, "X_minus": Xm, "w_plus": wp, "w_minus": wm,
            "matches_pattern": bool(ok_p and ok_m)}


def upper_vector(C: Mat):
    """Upper-triangle entries C[j, k], j < k, in pair order."""
    d = C.rows
    return [C[j, k] for j, k in pairs(d)]


def _nullity(M: Mat) -> int:
    r, _ = rank_nullspace(M)
    return M.cols - r


def spectrum_claims(d: int, sign) -> list:
    s = _sign(sign)
    if s < 0:
        return [SpectrumClaim(ExScalar(d - 2), d - 1), SpectrumClaim(ExScalar(-2), (d - 2) * (d - 1) // 2)]
    return [SpectrumClaim(ExScalar(2 * (d - 2)), 1), SpectrumClaim(ExScalar(d - 4), d - 1),
            SpectrumClaim(ExScalar(-2), d * (d - 3) // 2)]


def verify_spectrum(d: int, sign) -> list:
    """Check each claimed multiplicity as the exact nullity of Omega(0) - lambda I.

    Returns a list of (SpectrumClaim, computed multiplicity, verified) and the
    check that claimed multiplicities exhaust the dimension d(d-1)/2.
    """
    if not 3 <= d <= 8:
        raise BadDimension("spectrum verification covers 3 <= d <= 8")
    out = []
    for claim in spectrum_claims(d, sign):
        if claim.claimed_multiplicity == 0:
            out.append((claim, 0, True))
            continue
        mult = _nullity(build_omega(d, sign, -claim.eigenvalue).matrix)
        out.append((claim, mult, mult == claim.claimed_multiplicity))
    return out


def spectrum_exhaustive(d: int, sign) -> bool:
    return sum(c.claimed_multiplicity for c in spectrum_claims(d, sign)) == d * (d - 1) // 2


def omega_det(d: int, sign) -> TPoly:
    """det Omega(x) as a polynomial in x."""
    return det_bareiss(build_omega(d, sign, T).matrix)


# ---- explicit eigenbases ---------------------------------------------------

def _E(d, i, j, v=1):
    return Mat.unit(d, i, j, v)


def _sum(mats, d):
    out = Mat.zeros(d)
    for m in mats:
        out = out + m
    return out


def _skew_c_k(d, k):
    return _sum([_E(d, k, j) - _E(d, j, k) for j in range(d) if j != k], d)


def _skew_c_jk(d, j, k):
    return _E(d, 0, j) - _E(d, j, 0) - _E(d, 0, k) + _E(d, k, 0) + _E(d, j, k) - _E(d, k, j)


def _sym_c_1k(d, k):
    return _sum([_E(d, 0, j) + _E(d, j, 0) - _E(d, k, j) - _E(d, j, k)
                 for j in range(d) if j not in (0, k)], d)


def _b(d, j, k, m, n):
    """B_{jk,mn} = E_mj - E_mk - E_nj + E_nk (zero-based)."""
    return _E(d, m, j) - _E(d, m, k) - _E(d, n, j) + _E(d, n, k)


def _c_plus(d, j, k, m, n):
    B = _b(d, j, k, m, n)
    return B + B.transpose()


def case_x(d: int, case: str) -> ExScalar:
    """The value x with the case's basis in the nullspace of Omega(x)."""
    table = {"skew_2_minus_d": 2 - d, "skew_2": 2, "sym_2(2-d)": 2 * (2 - d), "sym_4_minus_d": 4 - d, "sym_2": 2}
    if case not in table:
        raise BadCase(f"unknown eigenspace {case!r}; expected one of {CASES}")
    return ExScalar(table[case])


def case_multiplicity(d: int, case: str) -> int:
    table = {"skew_2_minus_d": d - 1, "skew_2": (d - 1) * (d - 2) // 2, "sym_2(2-d)": 1,
             "sym_4_minus_d": d - 1, "sym_2": d * (d - 3) // 2}
    if case not in table:
        raise BadCase(f"unknown eigenspace {case!r}; expected one of {CASES}")
    return table[case]


def _raw_basis(d: int, case: str):
    if case == "skew_2_minus_d":
        return [_skew_c_k(d, k) for k in range(1, d)]
    if case == "skew_2":
        return [_skew_c_jk(d, j, k) for j in range(1, d) for k in range(j + 1, d)]
    if case == "sym_2(2-d)":
        return [Mat._exact(d, d, [ExScalar(0 if i == j else 1) for i in range(d) for j in range(d)])]
    if case == "sym_4_minus_d":
        return [_sym_c_1k(d, k) for k in range(1, d)]
    if case == "sym_2":
        # C^+_{2k,1n} for 3 <= n < k <= d and C^+_{3k,12} for 4 <= k <= d (one-based)
        out = [_c_plus(d, 1, k, 0, n) for k in range(3, d) for n in range(2, k)]
        out += [_c_plus(d, 2, k, 0, 1) for k in range(3, d)]
        return out
    raise BadCase(f"unknown eigenspace {case!r}; expected one of {CASES}")


def eigenbasis(d: int, case: str) -> list:
    """Explicit basis matrices of one Omega eigenspace, checked exactly.

    Each matrix C is identified with its upper-triangle vector c; the check
    is Omega(x) c = 0 for the case's x, plus linear independence and a count
    equal to the multiplicity.
    """
    if case not in CASES:
        raise BadCase(f"unknown eigenspace {case!r}; expected one of {CASES}")
    if d < 4:
        raise BadDimension("explicit eigenbases are given for d >= 4")
    basis = _raw_basis(d, case)
    om = build_omega(d, _CASE_SIGN[case], case_x(d, case)).matrix
    vecs = [upper_vector(C) for C in basis]
    for v in vecs:
        if any(matvec(om, v)):
            raise AssertionError(f"{case} basis element is not in the nullspace")
    if len(basis) != case_multiplicity(d, case):
        raise AssertionError(f"{case}: {len(basis)} elements, expected {case_multiplicity(d, case)}")
    if vecs and rank_nullspace(Mat._exact(len(vecs), len(vecs[0]), [x for v in vecs for x in v]))[0] != len(vecs):
        raise AssertionError(f"{case} basis is linearly dependent")
    return basis


# ---- dependence relations ---------------------------------------------------

@dataclass
class RelationReport:
    """Exactly verified identities; each residual is the largest |entry| over all instances."""

    title: str
    d: int
    identities: list = field(default_factory=list)
    facts: dict = field(default_factory=dict)

    def add(self, name: str, residual, instances: int = 1, **extra):
        residual = mpq(residual)
        self.identities.append({"name": name, "holds": residual == 0, "residual": residual,
                                "instances": instances, **extra})

    @property
    def all_hold(self) -> bool:
        return all(i["holds"] for i in self.identities) and all(
            v for k, v in self.facts.items() if isinstance(v, bool))

    def get(self, name: str) -> dict:
        return next(i for i in self.identities if i["name"] == name)

    def to_json(self) -> dict:
        ids = []
        for i in self.identities:
            j = dict(i)
            j["residual"] = rational_text(i["residual"])
            ids.append(j)
        facts = {k: (rational_text(v) if isinstance(v, type(mpq(0))) else v) for k, v in self.facts.items()}
        return {"title": self.title, "d": self.d, "all_hold": self.all_hold, "identities": ids, "facts": facts}


class _Products:
    """A_m A_n of a rational key channel as flat mpq tuples."""

    def __init__(self, K: KrausSet):
        self.d = K.d
        A = K.generators
        self.mats = {(m, n): A[m] @ A[n] for m in range(K.d) for n in range(K.d)}
        self.q = {}
        for key, M in self.mats.items():
            q = M.rational_entries()
            if q is None:
                raise TypeError("relation checks need a rational channel")
            self.q[key] = q

    def comb(self, terms):
        """max |entry| of sum c * A_m A_n over (c, m, n) terms."""
        acc = [mpq(0)] * (self.d * self.d)
        for c, m, n in terms:
            p = self.q[(m, n)]
            for i, v in enumerate(p):
                if v:
                    acc[i] += c * v
        return max(abs(v) for v in acc)


def _comm(j, k):
    return [(1, j, k), (-1, k, j)]


def _anti(j, k):
    return [(1, j, k), (1, k, j)]


def _neg(terms):
    return [(-c, m, n) for c, m, n in terms]


def _key_channel(d: int, t):
    return build_family(FamilySpec("key", d, as_scalar(t)))


def special_t_relations(d: int, t=None) -> RelationReport:
    """Dependence relations of the key family at t = -1/(d-1), 4 <= d <= 7.

    Checks that sum_{m != n} A_m A_n is a multiple of I (also relative to
    sum A_m^2), the commutator 3- and 4-cycles, the alternating
    anticommutator 4-cycle, (A_j - A_m)(A_k - A_n) = 0, that span{A_m A_n}
    has dimension 3d - 2 and that {A_m^2} is independent.
    """
    if not 4 <= d <= 7:
        raise BadDimension("special-t relations are checked for 4 <= d <= 7")
    t0 = mpq(-1, d - 1)
    if t is not None and as_scalar(t) != t0:
        raise PreconditionFailed(f"relations hold at t = {rational_text(t0)} only")
    K = _key_channel(d, t0)
    P = _Products(K)
    rep = RelationReport(f"key family d={d}, t={rational_text(t0)}", d)
    rep.facts["t"] = t0

    off = _sum([P.mats[(m, n)] for m in range(d) for n in range(d) if m != n], d)
    c = off[0, 0].rational()
    rep.add("sum_offdiag_scalar", (off - Mat.identity(d).scale(c)).max_abs(), d * (d - 1))
    rep.facts["sum_offdiag_constant"] = c
    rep.facts["sum_offdiag_constant_scaled"] = c * (d - 1) ** 2
    rep.facts["quoted_constant_scaled"] = mpq(d * (d - 1) ** 2 * (d - 2))
    sq = _sum([P.mats[(m, m)] for m in range(d)], d)
    kappa = c / sq[0, 0].rational()
    rep.facts["offdiag_over_squares"] = kappa
    rep.add("sum_offdiag_vs_squares",
            P.comb([(1, m, n) for m in range(d) for n in range(d) if m != n] + [(-kappa, m, m) for m in range(d)]),
            d * d)
    rep.facts["p_d_vanishes"] = not p_d(d, t0)

    worst = {"comm_3cycle": mpq(0), "comm_4cycle": mpq(0), "anti_4cycle": mpq(0), "diff_product": mpq(0)}
    counts = dict.fromkeys(worst, 0)
    for j, k, m in permutations(range(d), 3):
        r = P.comb(_comm(j, k) + _comm(k, m) + _comm(m, j))
        worst["comm_3cycle"] = max(worst["comm_3cycle"], r)
        counts["comm_3cycle"] += 1
    for j, k, m, n in permutations(range(d), 4):
        r = P.comb(_comm(j, k) + _comm(k, m) + _comm(m, n) + _comm(n, j))
        worst["comm_4cycle"] = max(worst["comm_4cycle"], r)
        r = P.comb(_anti(j, k) + _neg(_anti(k, m)) + _anti(m, n) + _neg(_anti(n, j)))
        worst["anti_4cycle"] = max(worst["anti_4cycle"], r)
        r = P.comb([(1, j, k), (-1, j, n), (-1, m, k), (1, m, n)])
        worst["diff_product"] = max(worst["diff_product"], r)
        for key in ("comm_4cycle", "anti_4cycle", "diff_product"):
            counts[key] += 1
    for key, r in worst.items():
        rep.add(key, r, counts[key])

    keys = [(m, n) for m in range(d) for n in range(d)]
    span = rank_nullspace(stack_rows([P.mats[k] for k in keys]))[0]
    rep.facts["span_dimension"] = span
    rep.facts["span_dimension_is_3d_minus_2"] = span == 3 * d - 2
    rep.facts["squares_independent"] = independence([P.mats[(m, m)] for m in range(d)]).independent
    rep.facts["relations_span_dependencies"] = _relations_span(P, kappa) == d * d - span
    return rep


def _relations_span(P: _Products, kappa) -> int:
    """Rank of the coefficient vectors of all relation instances (over the d^2 products)."""
    d = P.d
    idx = {(m, n): i for i, (m, n) in enumerate((m, n) for m in range(d) for n in range(d))}
    rows = []

    def vec(terms):
        v = [mpq(0)] * (d * d)
        for c, m, n in terms:
            v[idx[(m, n)]] += c
        rows.append(v)

    vec([(1, m, n) for m in range(d) for n in range(d) if m != n] + [(-kappa, m, m) for m in range(d)])
    for j, k, m in combinations(range(d), 3):
        vec(_comm(j, k) + _comm(k, m) + _comm(m, j))
    for j, k, m, n in permutations(range(d), 4):
        vec([(1, j, k), (-1, j, n), (-1, m, k), (1, m, n)])
    M = Mat._exact(len(rows), d * d, [ExScalar(x) for r in rows for x in r])
    return rank_nullspace(M)[0]


def d3_relations() -> RelationReport:
    """The d = 3 key channel at t = -1/2 (A_k) and t = 1 (B_k).

    At t = -1/2: sum_{m != n} A_m A_n = 0, the commutator 3-cycle,
    A1A2 + A2A3 + A3A1 = A1A3 + A3A2 + A2A1 = 0 and {A_m^2} independent.
    At t = 1: {B_j,B_k} = {B_j,B_l}, [B_j,B_k] = -[B_j,B_l] and
    B1B2 = B2B3 = B3B1 = Q, B2B1 = B3B2 = B1B3 = Q^T with Q the cyclic
    permutation e_1 -> e_2 -> e_3 -> e_1.
    """
    d = 3
    rep = RelationReport("key family d=3, t=-1/2 and t=1", d)
    PA = _Products(_key_channel(3, mpq(-1, 2)))
    rep.add("A_sum_offdiag_zero", PA.comb([(1, m, n) for m in range(3) for n in range(3) if m != n]))
    rep.add("A_comm_3cycle", PA.comb(_comm(0, 1) + _comm(1, 2) + _comm(2, 0)))
    rep.add("A_cyclic_sum", PA.comb([(1, 0, 1), (1, 1, 2), (1, 2, 0)]))
    rep.add("A_anticyclic_sum", PA.comb([(1, 0, 2), (1, 2, 1), (1, 1, 0)]))
    rep.facts["A_squares_independent"] = independence([PA.mats[(m, m)] for m in range(3)]).independent

    PB = _Products(_key_channel(3, mpq(1)))
    anti = comm = mpq(0)
    for j, k, l in permutations(range(3)):
        anti = max(anti, PB.comb(_anti(j, k) + _neg(_anti(j, l))))
        comm = max(comm, PB.comb(_comm(j, k) + _comm(j, l)))
    rep.add("B_anticomm_equal", anti, 6)
    rep.add("B_comm_cancel", comm, 6)
    Q = Mat.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    res = mpq(0)
    for m, n in ((0, 1), (1, 2), (2, 0)):
        res = max(res, mpq((PB.mats[(m, n)] - Q).max_abs()), mpq((PB.mats[(n, m)] - Q.transpose()).max_abs()))
    rep.add("B_products_cyclic", res, 6)
    rep.facts["Q"] = Q.to_json()
    return rep
