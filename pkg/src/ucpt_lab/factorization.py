"""Exact factorizations through M_d (x) M_nu, dual and complementary channels.

A channel has an exact factorization through M_d (x) M_nu when
Phi(rho) = (I (x) Tr) U^* (rho (x) I/nu) U for a unitary U.  Tensor
products follow numpy's kron convention and the normalized trace on M_nu is
Tr/nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .channels import FamilySpec, KrausSet, apply_channel, build_family, from_generators
from .errors import BadParameters, NotUnitary, PreconditionFailed, ShapeError
from .extremality import independence
from .field import OMEGA, ExScalar, as_scalar, mpq, sqrt_rational
from .linalg import EXACT, FLOAT, Mat, hermitian_eig, kron, partial_trace, rank_nullspace

FLOAT_TOL = 1e-9
NAMED_UNITARIES = ("block_diag", "ucpt_2x2", "d3_dual_U", "d3_dual_W", "choi4_square")


@dataclass
class FactorizationWitness:
    U: Mat
    nu: int
    side: str = "second"
    verified_unitary: bool = False
    verified_channel: bool = False
    max_residual: float = 0.0

    def to_json(self) -> dict:
        return {
            "nu": self.nu,
            "side": self.side,
            "verified_unitary": self.verified_unitary,
            "verified_channel": self.verified_channel,
            "max_residual": self.max_residual,
            "U": self.U.to_json(),
        }


def _residual(M: Mat) -> float:
    return M.max_abs()


def _is_zero(M: Mat, tol: float = FLOAT_TOL) -> bool:
    return M.is_zero(tol if M.backend == FLOAT else 0.0)


def unitarity_defect(U: Mat) -> float:
    n = U.rows
    if not U.is_square:
        raise ShapeError("a unitary must be square")
    eye = Mat.identity(n, U.backend)
    return max(_residual(U.adjoint() @ U - eye), _residual(U @ U.adjoint() - eye))


def _require_unitary(U: Mat):
    eye = Mat.identity(U.rows, U.backend)
    d1 = U.adjoint() @ U - eye
    d2 = U @ U.adjoint() - eye
    if not (_is_zero(d1) and _is_zero(d2)):
        raise NotUnitary("U is not unitary", max(_residual(d1), _residual(d2)))


def factorized_map(U: Mat, p: int, q: int, side: str = "second"):
    """The map induced by U with a maximally mixed ancilla on the traced factor.

    side="second": rho on M_p, ancilla I_q/q, trace over M_q.
    side="first": gamma on M_q, ancilla I_p/p, trace over M_p.
    """
    Uh = U.adjoint()

    if side == "second":
        anc = Mat.identity(q, U.backend if U.backend == FLOAT else EXACT).scale(mpq(1, q))

        def fn(rho):
            return partial_trace(Uh @ kron(rho, anc) @ U, (p, q), "second")
    elif side == "first":
        anc = Mat.identity(p, U.backend if U.backend == FLOAT else EXACT).scale(mpq(1, p))

        def fn(rho):
            return partial_trace(Uh @ kron(anc, rho) @ U, (p, q), "first")
    else:
        raise ValueError("side must be 'first' or 'second'")
    return fn


def verify_exact_factorization(U: Mat, K: KrausSet, nu: int, side: str = "second") -> FactorizationWitness:
    """Check that U is unitary and induces the channel of K on every matrix unit.

    side="second" means K acts on the first tensor factor (U is d nu x d nu);
    side="first" means K acts on the second factor (U is nu d x nu d).
    """
    d = K.d
    if U.shape != (d * nu, d * nu):
        raise ShapeError(f"U must be {d * nu}x{d * nu}, got {U.shape}")
    _require_unitary(U)
    w = FactorizationWitness(U, nu, side, verified_unitary=True)
    w.max_residual = unitarity_defect(U)
    p, q = (d, nu) if side == "second" else (nu, d)
    fn = factorized_map(U, p, q, side)
    ok = True
    for i in range(d):
        for j in range(d):
            e = Mat.unit(d, i, j)
            if U.backend == FLOAT:
                e = e.to_float()
            diff = fn(e) - apply_channel(K, e)
            w.max_residual = max(w.max_residual, _residual(diff))
            ok = ok and _is_zero(diff)
    w.verified_channel = ok
    return w


# ---- named unitaries --------------------------------------------------------

def _sum(mats):
    total = None
    for m in mats:
        total = m if total is None else total + m
    return total


def _key(d, t):
    return build_family(FamilySpec("key", d, as_scalar(t)))


def block_diag_unitary(K: KrausSet) -> Mat:
    """sum_m A_m (x) E_mm; unitary when each A_m is unitary (key family at t = +-1)."""
    n = len(K.generators)
    return _sum(kron(a, Mat.unit(n, m, m)) for m, a in enumerate(K.generators))


def ucpt_2x2_unitary(K: KrausSet) -> Mat:
    """sum_{j,k} A_{2(j-1)+k} (x) E_jk for the four generators of the alpha, beta family."""
    if len(K.generators) != 4:
        raise BadParameters("the 2x2 block unitary needs exactly 4 generators")
    A = K.generators
    return _sum(kron(A[2 * j + k], Mat.unit(2, j, k)) for j in range(2) for k in range(2))


def d3_pair():
    """Key channels for d = 3 at t = -1/2 (A_k) and t = 1 (B_k)."""
    return _key(3, mpq(-1, 2)), _key(3, 1)


def d3_dual_unitary(which: str = "U") -> Mat:
    """U = (2/3) sum A_k (x) B_k or W = (2/3) sum B_k (x) A_k."""
    KA, KB = d3_pair()
    A, B = KA.generators, KB.generators
    if which == "U":
        terms = [kron(a, b) for a, b in zip(A, B)]
    elif which == "W":
        terms = [kron(b, a) for a, b in zip(A, B)]
    else:
        raise BadParameters("which must be 'U' or 'W'")
    return _sum(terms).scale(mpq(2, 3))


def _pad4(K: KrausSet):
    gens = list(K.generators)
    if len(gens) > 4:
        raise BadParameters(f"choi4_square needs at most 4 generators, got {len(gens)}")
    while len(gens) < 4:
        gens.append(Mat.zeros(K.d, K.d, K.backend))
    return gens


def choi4_square_unitary(K: KrausSet) -> Mat:
    """U = (1/N) sum_{j,k} A_j^* A_k (x) (2 E_jk - delta_jk I_4).

    Induces Phi o Phi^* through M_d (x) M_4 whenever Phi has at most four
    generators with sum A^*A = sum A A^* = N I.
    """
    gens = _pad4(K)
    inv = as_scalar(K.norm_sq).inverse()
    terms = []
    for j in range(4):
        for k in range(4):
            c = Mat.unit(4, j, k, 2)
            if j == k:
                c = c - Mat.identity(4)
            terms.append(kron((gens[j].adjoint() @ gens[k]).scale(inv), c))
    return _sum(terms)


def composed_channel(K: KrausSet) -> KrausSet:
    """Phi o Phi^* as a Kraus set: generators A_k^* A_j with constant N^2."""
    gens = [b.adjoint() @ a for a in K.generators for b in K.generators]
    n = as_scalar(K.norm_sq)
    return KrausSet(K.d, gens, n * n, f"{K.name}_square")


def build_named_unitary(name: str, K: KrausSet | None = None) -> Mat:
    """One of the catalogued factorizing unitaries.

    block_diag and ucpt_2x2 and choi4_square take the channel K; the d = 3
    dual pair needs no input.
    """
    if name == "block_diag":
        return block_diag_unitary(K)
    if name == "ucpt_2x2":
        return ucpt_2x2_unitary(K)
    if name == "d3_dual_U":
        return d3_dual_unitary("U")
    if name == "d3_dual_W":
        return d3_dual_unitary("W")
    if name == "choi4_square":
        return choi4_square_unitary(K)
    raise BadParameters(f"unknown unitary {name!r}; expected one of {NAMED_UNITARIES}")


# ---- dual and complementary channels ---------------------------------------

def _choi_of(fn, d_in: int, backend) -> Mat:
    total = None
    for i in range(d_in):
        for j in range(d_in):
            e = Mat.unit(d_in, i, j)
            if backend == FLOAT:
                e = e.to_float()
            out = fn(e)
            term = kron(e, out)
            total = term if total is None else total + term
    return total


def dual_channels(U: Mat, p: int, q: int):
    """Choi matrices of the dual pair induced by a unitary on M_p (x) M_q.

    Phi(rho) = (I (x) Tr) U^*(rho (x) I_q/q) U on M_p and
    Psi(gamma) = (Tr (x) I) U^*(I_p/p (x) gamma) U on M_q.
    """
    if U.shape != (p * q, p * q):
        raise ShapeError(f"U must be {p * q}x{p * q}")
    _require_unitary(U)
    return (_choi_of(factorized_map(U, p, q, "second"), p, U.backend),
            _choi_of(factorized_map(U, p, q, "first"), q, U.backend))


def kraus_choi(K: KrausSet) -> Mat:
    """Choi matrix sum E_ij (x) Phi(E_ij) of a Kraus channel."""
    return _choi_of(lambda e: apply_channel(K, e), K.d, K.backend)


def complementary_channel(K: KrausSet) -> Mat:
    """Choi matrix of rho -> (1/N) sum_jk Tr(A_j^* rho A_k) E_jk (output size = #generators)."""
    gens = K.generators
    kappa = len(gens)
    inv = as_scalar(K.norm_sq).inverse() if K.backend != FLOAT else 1.0 / complex(K.norm_sq)

    def fn(rho):
        if K.backend == FLOAT:
            out = np.zeros((kappa, kappa), dtype=complex)
            for j, a in enumerate(gens):
                for k, b in enumerate(gens):
                    out[j, k] = complex((a.adjoint() @ rho @ b).trace()) * inv
            return Mat.from_numpy(out)
        ent = []
        for a in gens:
            left = a.adjoint() @ rho
            for b in gens:
                ent.append(as_scalar((left @ b).trace()) * inv)
        return Mat._exact(kappa, kappa, ent)

    return _choi_of(fn, K.d, K.backend)


# ---- d = 4 condition system -------------------------------------------------

def _tau(M: Mat):
    tr = M.trace()
    return tr / M.rows if M.backend != FLOAT else complex(tr) / M.rows


def _scalar_zero(x, exact: bool) -> bool:
    return (not x) if exact else abs(complex(x)) <= FLOAT_TOL


def d4_condition_check(U_list, mode: str = "unitary_ansatz") -> dict:
    """Evaluate the factorizability conditions on four candidate operators.

    With Q^+-_jk = U_j U_k^* +- U_k U_j^* and R^+-_jk = U_j^* U_k +- U_k^* U_j:
    orthonormality tau(U_j U_k^*) = delta_jk, Q^+ and R^+ equal on
    complementary pairs, the 3-cycle sums of Q^+-, R^+-, the asymmetric form
    U_j U_k^* + U_k U_m^* + U_m U_j^* = 0 and its starred twin, and the
    spectrum predicate M = U_3^* U_2 with M^3 = I, Tr M = Tr M^2 = 0.
    mode="general_M" also tests P = I + (3/14) sum_{k != j} Q^+_jk for
    positive definiteness and tau(P^-1 U_m U_n^*) = delta_mn.

    Returns
    -------
    dict mapping condition name to bool, plus "residuals".
    """
    U = list(U_list)
    if len(U) != 4:
        raise BadParameters("the condition system needs four operators")
    nu = U[0].rows
    if any(u.shape != (nu, nu) for u in U):
        raise ShapeError("operators must be square of equal size")
    exact = all(u.backend == EXACT for u in U)
    if not exact:
        U = [u.to_float() for u in U]
    Uh = [u.adjoint() for u in U]
    res = {}
    out = {"nu": nu, "exact": exact}

    def zero(name, M):
        r = _residual(M)
        res[name] = max(res.get(name, 0.0), r)
        return _is_zero(M)

    def Q(j, k, s):
        return U[j] @ Uh[k] + (U[k] @ Uh[j]).scale(s)

    def R(j, k, s):
        return Uh[j] @ U[k] + (Uh[k] @ U[j]).scale(s)

    out["unitary"] = all(zero("unitary", u @ uh - Mat.identity(nu, u.backend)) for u, uh in zip(U, Uh))
    ortho = True
    for j in range(4):
        for k in range(4):
            v = _tau(U[j] @ Uh[k]) - (1 if j == k else 0)
            res["orthonormal"] = max(res.get("orthonormal", 0.0), abs(complex(v)))
            ortho = ortho and _scalar_zero(v, exact)
    out["orthonormal"] = ortho

    splits = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    out["Q_plus_pairs_equal"] = all([zero("Q_plus_pairs_equal", Q(*a, 1) - Q(*b, 1)) for a, b in splits])
    out["R_plus_pairs_equal"] = all([zero("R_plus_pairs_equal", R(*a, 1) - R(*b, 1)) for a, b in splits])
    for label, fn, s in (("Q_plus", Q, 1), ("Q_minus", Q, -1), ("R_plus", R, 1), ("R_minus", R, -1)):
        name = f"{label}_3cycle"
        out[name] = all([zero(name, fn(j, k, s) + fn(k, m, s) + fn(m, j, s))
                         for j, k, m in combinations(range(4), 3)])
    out["asymmetric"] = all([zero("asymmetric", U[j] @ Uh[k] + U[k] @ Uh[m] + U[m] @ Uh[j])
                             for j, k, m in permutations(range(4), 3)])
    out["asymmetric_star"] = all([zero("asymmetric_star", Uh[j] @ U[k] + Uh[k] @ U[m] + Uh[m] @ U[j])
                                  for j, k, m in permutations(range(4), 3)])
    out["spectrum_predicate"] = spectrum_predicate(U[2].adjoint() @ U[1])
    out["nu_multiple_of_3"] = nu % 3 == 0
    if mode == "general_M":
        out.update(_general_m(U, Uh, Q, res))
    elif mode != "unitary_ansatz":
        raise BadParameters("mode must be 'unitary_ansatz' or 'general_M'")
    out["residuals"] = res
    return out


def spectrum_predicate(M: Mat) -> bool:
    """Eigenvalues of M are 1, w, w^2 in equal multiplicity, via M^3 = I and Tr M = Tr M^2 = 0."""
    n = M.rows
    exact = M.backend == EXACT
    cube = M @ M @ M - Mat.identity(n, M.backend)
    return bool(_is_zero(cube) and _scalar_zero(M.trace(), exact) and _scalar_zero((M @ M).trace(), exact))


def _general_m(U, Uh, Q, res) -> dict:
    nu = U[0].rows
    Ps = []
    for j in range(4):
        s = _sum(Q(j, k, 1) for k in range(4) if k != j)
        Ps.append((Mat.identity(nu, s.backend) + s.scale(mpq(3, 14))).to_float())
    same = all(p.close_to(Ps[0], FLOAT_TOL) for p in Ps)
    w, _ = hermitian_eig(Ps[0])
    pos = bool(w.min() > FLOAT_TOL)
    ortho = False
    if pos:
        Pinv = np.linalg.inv(Ps[0].to_numpy())
        worst = 0.0
        for m in range(4):
            for n in range(4):
                v = np.trace(Pinv @ (U[m] @ Uh[n]).to_numpy()) / nu - (1 if m == n else 0)
                worst = max(worst, abs(v))
        res["M_orthonormal"] = worst
        ortho = worst <= FLOAT_TOL
    return {"M_independent_of_j": same, "M_positive_definite": pos, "M_orthonormal": ortho}


def mub_default(nu: int = 4):
    """U_j = 2E_j - I with rank-two projections E_j from mutually unbiased bases of C^4.

    The default takes U = (X (x) I, Y (x) I, Z (x) X, Z (x) Y) for Pauli X, Y, Z:
    Hermitian unitaries whose +1 eigenspaces are rank-two projections onto
    spans of vectors from four distinct non-standard mutually unbiased bases.
    """
    if nu != 4:
        raise BadParameters("the default construction is for nu = 4")
    i = ExScalar.gaussian(0, 1)
    X = Mat.from_rows([[0, 1], [1, 0]])
    Y = Mat.from_rows([[0, -i], [i, 0]])
    Z = Mat.from_rows([[1, 0], [0, -1]])
    I2 = Mat.identity(2)
    return [kron(X, I2), kron(Y, I2), kron(Z, X), kron(Z, Y)]


def cube_root_witness():
    """nu = 3 operators (I, I, diag(1, w, w^2), I) with w a primitive cube root of unity."""
    I3 = Mat.identity(3)
    D = Mat.diag([ExScalar(1), OMEGA, OMEGA * OMEGA])
    return [I3, I3, D, I3]


# ---- explicit factorization conditions --------------------------------------

def factorization_ansatz_check(A_list, Y_list) -> dict:
    """Conditions for U = sum A_k (x) Y_k to factorize Phi(rho) = sum A_k^* rho A_k.

    Checks tau(Y_j Y_k^*) = delta_jk and, for all s, t,
    sum_jk <e_s, A_j A_k^* e_t> Y_j Y_k^* = delta_st I and
    sum_jk <e_s, A_j^* A_k e_t> Y_j^* Y_k = delta_st I.
    """
    A, Y = list(A_list), list(Y_list)
    if len(A) != len(Y):
        raise BadParameters("A_list and Y_list must have equal length")
    if all(a.backend == EXACT for a in A) and not independence(A).independent:
        raise PreconditionFailed("the A_k must be linearly independent")
    exact = all(y.backend == EXACT for y in Y) and all(a.backend == EXACT for a in A)
    if not exact:
        A = [a.to_float() for a in A]
        Y = [y.to_float() for y in Y]
    d, nu, n = A[0].rows, Y[0].rows, len(A)
    eye = Mat.identity(nu, Y[0].backend)
    ortho, worst = True, 0.0
    for j in range(n):
        for k in range(n):
            v = _tau(Y[j] @ Y[k].adjoint()) - (1 if j == k else 0)
            worst = max(worst, abs(complex(v)))
            ortho = ortho and _scalar_zero(v, exact)
    YY = {(j, k): Y[j] @ Y[k].adjoint() for j in range(n) for k in range(n)}
    YsY = {(j, k): Y[j].adjoint() @ Y[k] for j in range(n) for k in range(n)}
    AA = {(j, k): A[j] @ A[k].adjoint() for j in range(n) for k in range(n)}
    AsA = {(j, k): A[j].adjoint() @ A[k] for j in range(n) for k in range(n)}
    first = second = True
    r1 = r2 = 0.0
    for s in range(d):
        for t in range(d):
            target = eye if s == t else Mat.zeros(nu, nu, eye.backend)
            c1 = _combine([(AA[key][s, t], YY[key]) for key in YY], nu, eye.backend) - target
            c2 = _combine([(AsA[key][s, t], YsY[key]) for key in YsY], nu, eye.backend) - target
            r1, r2 = max(r1, _residual(c1)), max(r2, _residual(c2))
            first = first and _is_zero(c1)
            second = second and _is_zero(c2)
    return {"orthonormal": ortho, "sum_AAstar": first, "sum_AstarA": second,
            "all": ortho and first and second,
            "residuals": {"orthonormal": worst, "sum_AAstar": r1, "sum_AstarA": r2}}


def _combine(pairs, nu, backend):
    total = Mat.zeros(nu, nu, backend)
    for c, M in pairs:
        if (complex(c) != 0) if backend == FLOAT else bool(c):
            total = total + M.scale(c)
    return total


def extract_y_blocks(U: Mat, A_list, nu: int) -> list:
    """Solve U = sum A_k (x) Y_k exactly for linearly independent A_k."""
    A = list(A_list)
    d, n = A[0].rows, len(A)
    if U.shape != (d * nu, d * nu):
        raise ShapeError("U has the wrong size")
    Y = [[ExScalar(0)] * (nu * nu) for _ in A]
    dd = d * d
    for a in range(nu):
        for b in range(nu):
            block = [U[i * nu + a, j * nu + b] for i in range(d) for j in range(d)]
            cols = [list(x.entries) for x in A] + [[-v for v in block]]
            M = Mat._exact(dd, n + 1, [cols[c][r] for r in range(dd) for c in range(n + 1)])
            _, basis = rank_nullspace(M)
            sol = next((v for v in basis if v[n]), None)
            if sol is None:
                raise PreconditionFailed("U is not of the form sum A_k (x) Y_k")
            inv = sol[n].inverse()
            for k in range(n):
                Y[k][a * nu + b] = sol[k] * inv
    return [Mat._exact(nu, nu, y) for y in Y]


def normalized_generators(K: KrausSet) -> list:
    """A_k / sqrt(N) so that sum A^*A = I; exact when sqrt(N) lies in the field."""
    s = sqrt_rational(as_scalar(K.norm_sq).rational())
    inv = s.inverse()
    return [a.scale(inv) for a in K.generators]


def arveson_ohno_premises() -> dict:
    """Matrix-element tables of the non-factorizability argument, on A_k/2.

    Returns each table with its expected values and a pass flag.
    """
    K = build_family(FamilySpec("arveson_ohno"))
    A = [a.scale(mpq(1, 2)) for a in K.generators]
    Ah = [a.adjoint() for a in A]
    e = lambda i: i - 1  # one-based basis labels
    out = {}
    # <e3, A_j^* A_k e2> vanishes unless (j, k) = (4, 2)
    table = {(j + 1, k + 1): (Ah[j] @ A[k])[e(3), e(2)] for j in range(4) for k in range(4)}
    out["e3_AstarA_e2"] = {
        "values": table,
        "pass": all((v != 0) == ((jk) == (4, 2)) for jk, v in table.items()),
    }
    off = all(not (Ah[j] @ A[k])[m, m] for j in range(4) for k in range(4) if j != k for m in range(3))
    out["diagonal_offdiag_vanish"] = {"pass": off}
    expect = {
        "e2_AAstar_e2": (2, False, {1: 0, 2: mpq(1, 2), 3: mpq(1, 2), 4: 0}),
        "e3_AAstar_e3": (3, False, {1: 0, 2: 0, 3: mpq(3, 4), 4: mpq(1, 4)}),
        "e3_AstarA_e3": (3, True, {1: 0, 2: mpq(1, 2), 3: 0, 4: mpq(1, 2)}),
    }
    for name, (m, star_first, vals) in expect.items():
        got = {}
        for j in range(4):
            P = Ah[j] @ A[j] if star_first else A[j] @ Ah[j]
            got[j + 1] = P[e(m), e(m)]
        out[name] = {"values": got, "expected": vals, "pass": all(got[j] == vals[j] for j in vals)}
    out["exceptional_value"] = table[(4, 2)]
    out["independent_generators"] = independence(K.generators).independent
    out["all"] = all(v["pass"] for v in out.values() if isinstance(v, dict))
    return out
