"""Explicit convex decompositions of non-extreme members of the alpha, beta family."""

from __future__ import annotations

from .channels import FamilySpec, KrausSet, apply_channel, build_family, from_generators, matrix_units
from .extremality import set_independence
from .field import ExScalar, mpq, sqrt_rational
from .linalg import Mat


def alpha_one_unitaries() -> list:
    """Four permutation-type unitaries whose average conjugation equals the alpha = 1 channel."""
    return [
        Mat.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        Mat.from_rows([[0, -1, 0], [1, 0, 0], [0, 0, 1]]),
        Mat.from_rows([[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
        Mat.from_rows([[1, 0, 0], [0, 0, 1], [0, -1, 0]]),
    ]


def _same_channel(K1: KrausSet, K2: KrausSet) -> bool:
    return all(apply_channel(K1, e) == apply_channel(K2, e) for e in matrix_units(K1.d))


def check_alpha_one() -> dict:
    """The alpha = 1, beta = 0 channel as (1/4) sum U_k^* rho U_k."""
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=1, beta=0))
    mix = from_generators(alpha_one_unitaries(), ExScalar(4), "unitary_mixture")
    unitary = all(u @ u.adjoint() == Mat.identity(3) for u in mix.generators)
    return {"unitaries": unitary, "same_channel": _same_channel(K, mix)}


def x_operators(alpha=None, beta=None) -> list:
    """X_j = (1/sqrt2) sum_k w_jk A_k with W = (1/2) J - I, at alpha = beta = 1/sqrt2 by default."""
    r = sqrt_rational(mpq(1, 2))
    alpha = r if alpha is None else alpha
    beta = r if beta is None else beta
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=alpha, beta=beta))
    A = K.generators
    out = []
    for j in range(4):
        total = Mat.zeros(3)
        for k in range(4):
            w = mpq(1, 2) - (1 if j == k else 0)
            total = total + A[k].scale(w)
        out.append(total.scale(r))
    return out


def check_x_decomposition() -> dict:
    """Phi = (1/4) X2~^* rho X2~ + (3/4) Psi with X2~ = 2 X_2 unitary and Psi of Choi rank 3.

    Psi(rho) = (4/3) sum_{j=1,3,4} X_j^* rho X_j; its products {X_j^* X_k} and
    {X_j X_k^*} over j, k in {1, 3, 4} are checked for independence.
    """
    r = sqrt_rational(mpq(1, 2))
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=r, beta=r))
    X = x_operators()
    sum_form = from_generators(X, ExScalar(1), "x_sum")
    x2 = X[1].scale(2)
    rest = from_generators([X[0], X[2], X[3]], mpq(3, 4), "psi")
    ucp = set_independence(rest, "AstarA")
    cpt = set_independence(rest, "AAstar")
    mixture = all(
        apply_channel(K, e) == (x2.adjoint() @ e @ x2).scale(mpq(1, 4)) + apply_channel(rest, e).scale(mpq(3, 4))
        for e in matrix_units(3)
    )
    return {
        "sum_form": _same_channel(K, sum_form),
        "x2_scaled_unitary": x2 @ x2.adjoint() == Mat.identity(3),
        "others_not_unitary": all((X[j].scale(2) @ X[j].scale(2).adjoint()) != Mat.identity(3) for j in (0, 2, 3)),
        "rest_AstarA_independent": ucp.independent,
        "rest_AAstar_independent": cpt.independent,
        "convex_mixture": mixture,
    }
