"""Linear independence of operator products, polynomial determinants and band widths.

For Phi(rho) = (1/N) sum A_k^* rho A_k:

* extreme among unital CP maps  <=> {A_m^* A_n} linearly independent
* extreme among trace-preserving CP maps <=> {A_m A_n^*} linearly independent
* extreme among unital trace-preserving maps <=> {A_j^* A_k (+) A_k A_j^*} independent
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .channels import FamilySpec, KrausSet, build_family
from .errors import ExplicitTooLarge, PreconditionFailed
from .field import ExScalar, mpq, rational_text
from .linalg import EXACT, FLOAT, MAX_POLY_DET, POLY, Mat, det_bareiss, gram, rank_nullspace, stack_rows
from .poly import T, TPoly
from .roots import RootReport, find_roots

KINDS = ("AstarA", "AAstar", "LandauStreater")
_ALIASES = {"LS": "LandauStreater", "ls": "LandauStreater", "astara": "AstarA", "aastar": "AAstar"}


def canonical_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown product set {kind!r}")
    return kind


@dataclass
class IndependenceVerdict:
    """Exact independence result with a dependence certificate when one exists.

    ``witness`` lists coefficients c_i (first nonzero equal to 1) with
    sum c_i M_i = 0, in the order of the input set; ``labels`` names each
    element, e.g. (m, n) pairs for product sets.
    """

    set_kind: str
    independent: bool
    rank: int
    expected: int
    witness: list | None = None
    labels: list | None = None
    witness_verified: bool = False

    def to_json(self) -> dict:
        out = {
            "set_kind": self.set_kind,
            "independent": self.independent,
            "rank": self.rank,
            "expected": self.expected,
        }
        if self.witness is not None:
            out["witness"] = [
                {"label": list(lab) if isinstance(lab, tuple) else lab, "coefficient": c.to_json()}
                for lab, c in zip(self.labels, self.witness)
                if c
            ]
            out["witness_verified"] = self.witness_verified
        return out


@dataclass
class BandProfile:
    beta: int
    mu: int


def product_set(K: KrausSet, kind: str):
    """Products in lexicographic (m, n) order, with one-based labels.

    Returns
    -------
    mats : list of Mat
    labels : list of (m, n)
    """
    kind = canonical_kind(kind)
    gens = K.generators
    adj = [a.adjoint() for a in gens]
    mats, labels = [], []
    for m, am in enumerate(gens):
        for n, an in enumerate(gens):
            if kind == "AstarA":
                mats.append(adj[m] @ an)
            elif kind == "AAstar":
                mats.append(am @ adj[n])
            else:
                mats.append((adj[m] @ an).direct_sum(an @ adj[m]))
            labels.append((m + 1, n + 1))
    return mats, labels


def combination(mats, coeffs) -> Mat:
    total = None
    for m, c in zip(mats, coeffs):
        if not c:
            continue
        term = m.scale(c)
        total = term if total is None else total + term
    if total is None:
        return Mat.zeros(mats[0].rows, mats[0].cols)
    return total


def independence(mats, set_kind: str = "custom", labels=None) -> IndependenceVerdict:
    """Exact linear independence via the rank of the Gram matrix.

    A nullspace vector u of G (G_jk = tr(M_j M_k^*)) gives the dependence
    sum conj(u_k) M_k = 0, which is re-verified before returning.
    """
    mats = list(mats)
    if any(m.backend != EXACT for m in mats):
        raise TypeError("independence needs exact matrices")
    labels = list(labels) if labels is not None else list(range(1, len(mats) + 1))
    G = gram(mats)
    r, basis = rank_nullspace(G)
    v = IndependenceVerdict(set_kind, r == len(mats), r, len(mats), labels=labels)
    if basis:
        c = [x.conj() for x in basis[0]]
        first = next(x for x in c if x)
        if first != 1:
            inv = first.inverse()
            c = [x * inv for x in c]
        if not combination(mats, c).is_zero():
            raise AssertionError("dependence witness failed exact verification")
        v.witness = c
        v.witness_verified = True
    return v


def set_independence(K: KrausSet, kind: str) -> IndependenceVerdict:
    kind = canonical_kind(kind)
    mats, labels = product_set(K, kind)
    return independence(mats, kind, labels)


def extremality_verdict(K: KrausSet) -> dict:
    """UCP, CPT and UCPT extremality from the three independence tests."""
    if K.backend != EXACT:
        raise TypeError("extremality_verdict needs an exact channel")
    ucp = set_independence(K, "AstarA")
    cpt = set_independence(K, "AAstar")
    ls = set_independence(K, "LandauStreater")
    consistent = (not (ucp.independent or cpt.independent)) or ls.independent
    if not consistent:
        raise AssertionError("UCP or CPT extremality without UCPT extremality")
    return {
        "ucp_extreme": ucp.independent,
        "cpt_extreme": cpt.independent,
        "ucpt_extreme_LS": ls.independent,
        "consistent": consistent,
        "verdicts": {"AstarA": ucp, "AAstar": cpt, "LandauStreater": ls},
    }


def _symbolic_family(spec: FamilySpec) -> KrausSet:
    sym = FamilySpec(spec.name, spec.d, T, spec.alpha, spec.beta, spec.V_list)
    K = build_family(sym)
    if K.backend != POLY:
        raise PreconditionFailed(f"family {spec.name} does not depend on t")
    return K


def _check_size(K: KrausSet, kind: str):
    n = len(K.generators) ** 2
    if n > MAX_POLY_DET:
        raise ExplicitTooLarge(f"{n}x{n} polynomial determinant exceeds the {MAX_POLY_DET}x{MAX_POLY_DET} limit")


def gram_det_poly(spec: FamilySpec, kind: str = "AstarA", interval=(-1, 1)) -> RootReport:
    """det of the Gram matrix of a product set as a polynomial in t, with roots."""
    kind = canonical_kind(kind)
    K = _symbolic_family(spec)
    _check_size(K, kind)
    mats, _ = product_set(K, kind)
    D = det_bareiss(gram(mats))
    return find_roots(D, interval, degree_bound=2 * K.d * (K.d + 1))


def vec_det_poly(spec: FamilySpec, kind: str = "AstarA", interval=(-1, 1)) -> RootReport:
    """det of the square matrix whose rows are vec of the products, with roots."""
    kind = canonical_kind(kind)
    if kind == "LandauStreater":
        raise ValueError("the vectorized determinant needs a square set (AstarA or AAstar)")
    K = _symbolic_family(spec)
    _check_size(K, kind)
    mats, _ = product_set(K, kind)
    F = stack_rows(mats)
    if F.rows != F.cols:
        raise PreconditionFailed(f"{F.rows} products of {F.cols} entries: not a square system")
    D = det_bareiss(F)
    return find_roots(D, interval, degree_bound=K.d * (K.d + 1))


def _nonzero(x, tol=1e-12):
    if isinstance(x, complex):
        return abs(x) > tol
    return bool(x)


def band_width(M: Mat) -> BandProfile:
    """Band width beta = max |j-k| and cyclic band width mu over nonzero entries.

    mu is the least value with M = sum_{|k| <= mu} D_k S^k (D_k diagonal), i.e.
    the largest cyclic offset min((l-j) mod d, (j-l) mod d) of a nonzero entry.
    """
    if not M.is_square:
        raise ValueError("band width needs a square matrix")
    d = M.rows
    beta = mu = 0
    for j in range(d):
        for l in range(d):
            if _nonzero(M[j, l]):
                beta = max(beta, abs(j - l))
                o = (l - j) % d
                mu = max(mu, min(o, d - o))
    return BandProfile(beta, mu)


def rotation_blocks(n_blocks: int, c=mpq(3, 5), s=mpq(4, 5)) -> Mat:
    """Direct sum of 2x2 rotations [[c, -s], [s, c]] (band width 1)."""
    n = 2 * n_blocks
    ent = [ExScalar(0)] * (n * n)
    for b in range(n_blocks):
        i = 2 * b
        ent[i * n + i] = ExScalar(c)
        ent[i * n + i + 1] = ExScalar(-s)
        ent[(i + 1) * n + i] = ExScalar(s)
        ent[(i + 1) * n + i + 1] = ExScalar(c)
    return Mat._exact(n, n, ent)


DEFAULT_T_SAMPLES = (mpq(0), mpq(1, 3), mpq(-1, 2), mpq(2, 7), mpq(-5, 6))


def check_banded_dependence(V_list, d: int, t_samples=DEFAULT_T_SAMPLES) -> dict:
    """Dependence of {A_m^* A_n} for narrowly banded V_m, with a dimension certificate.

    Requires beta(V_m) < (d-1)/4.  Each A_m^* A_n then has cyclic band width
    mu < (d-1)/2, so all d^2 products lie in the d(2 mu + 1)-dimensional space
    of matrices with that cyclic band, which is smaller than d^2.
    """
    V_list = list(V_list)
    if len(V_list) == 1:
        V_list = V_list * d
    for idx, V in enumerate(V_list, 1):
        b = band_width(V).beta
        if 4 * b >= d - 1:
            raise PreconditionFailed(f"beta(V_{idx}) = {b} is not below (d-1)/4 = {(d - 1) / 4}")
    spec = FamilySpec("general_partial_isometry", d, None, V_list=V_list)
    samples = []
    mu_max = 0
    for t in t_samples:
        spec.t = ExScalar(t)
        K = build_family(spec)
        mats, _ = product_set(K, "AstarA")
        mu_max = max(mu_max, max(band_width(m).mu for m in mats))
        v = independence(mats, "AstarA")
        samples.append({"t": rational_text(t), "rank": v.rank, "dependent": not v.independent,
                        "witness_verified": v.witness_verified})
    span_dim = d * (2 * mu_max + 1)
    return {
        "d": d,
        "samples": samples,
        "dependent_at_all_samples": all(s["dependent"] for s in samples),
        "mu_max": mu_max,
        "mu_certificate": 2 * mu_max < d - 1,
        "band_space_dimension": span_dim,
        "dimension_certificate": span_dim < d * d,
    }
