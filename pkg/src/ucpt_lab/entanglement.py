"""Entropies and entanglement-of-formation upper bounds from Kraus ensembles.

Logarithms are base 2 throughout, so a maximally entangled qubit pair has
entropy 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausSet
from .errors import BadDistribution
from .field import ExScalar, as_scalar
from .linalg import EXACT, FLOAT, hermitian_eig, rank_nullspace

SIMPLEX_TOL = 1e-12


def entropy(spectrum) -> float:
    """Shannon/von Neumann entropy in bits of a probability vector.

    Entries down to -1e-15 are clamped to zero; 0 log 0 = 0.
    """
    p = np.asarray(list(spectrum), dtype=float)
    if p.size == 0 or np.any(p < -1e-15) or abs(p.sum() - 1.0) > SIMPLEX_TOL:
        raise BadDistribution(f"not a probability vector: {p.tolist()}")
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def binary_entropy(x: float) -> float:
    return entropy([x, 1.0 - x])


@dataclass
class EnsembleMember:
    weight: object
    state_vector: np.ndarray
    reduced_spectrum: list
    entropy: float

    def to_json(self) -> dict:
        w = self.weight.to_json() if isinstance(self.weight, ExScalar) else float(self.weight)
        return {"weight": w, "reduced_spectrum": [float(x) for x in self.reduced_spectrum],
                "entropy": self.entropy}


def _exact_rank2_spectrum(R):
    """Eigenvalues of a unit-trace Hermitian matrix of rank <= 2 from Tr R^2."""
    p2 = float((R @ R).trace().real)
    disc = max(2.0 * p2 - 1.0, 0.0)
    s = math.sqrt(disc)
    return [(1.0 + s) / 2, (1.0 - s) / 2]


def _reduced_spectrum(A, norm2):
    """Spectrum of M M^* with M = A / ||A||, the first marginal of the Kraus vector."""
    if A.backend == EXACT:
        R = (A @ A.adjoint()).scale(as_scalar(norm2).inverse())
        r, _ = rank_nullspace(R)
        if r <= 1:
            return [1.0]
        if r == 2:
            return _exact_rank2_spectrum(R)
        w, _ = hermitian_eig(R)
        return [max(float(x), 0.0) for x in w]
    R = A.to_numpy()
    R = R @ R.conj().T / float(norm2)
    from .linalg import Mat
    w, _ = hermitian_eig(Mat.from_numpy(R))
    return [max(float(x), 0.0) for x in w]


def eof_upper_bound(K: KrausSet):
    """Weighted reduced entropy of the Kraus-vector decomposition of the Choi state.

    Member k has weight ||A_k||^2 / (N d) and state vec(A_k)/||A_k|| (up to
    complex conjugation, which leaves the reduced spectrum unchanged).

    Returns
    -------
    bound : float
    ensemble : list of EnsembleMember
    orthogonal : bool
        Whether the Kraus vectors are pairwise orthogonal, so that the
        ensemble is the Choi eigen-decomposition.
    """
    d = K.d
    gens = K.generators
    members = []
    exact = K.backend == EXACT
    for A in gens:
        n2 = (A.adjoint() @ A).trace()
        if exact:
            if not n2:
                continue
            weight = n2 / (as_scalar(K.norm_sq) * d)
            wf = float(weight)
        else:
            n2 = complex(n2).real
            if n2 <= 0:
                continue
            weight = n2 / (complex(K.norm_sq).real * d)
            wf = weight
        spec = _reduced_spectrum(A, n2)
        total = sum(spec)
        spec = [x / total for x in spec]
        vec = np.conj(A.to_numpy().ravel()) / math.sqrt(float(n2) if exact else n2)
        members.append(EnsembleMember(weight, vec, spec, entropy(spec)))
    bound = sum(float(m.weight) * m.entropy for m in members)
    orth = True
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            ip = (gens[i].adjoint() @ gens[j]).trace()
            orth = orth and ((not ip) if exact else abs(complex(ip)) < 1e-12)
    return bound, members, orth


def alpha_beta_closed_form(a2: float) -> float:
    """((1+|a|^2)/3) h(1/(1+|a|^2)) + ((1+|b|^2)/3) h(1/(1+|b|^2)) with |b|^2 = 1 - |a|^2."""
    b2 = 1.0 - a2
    return (1 + a2) / 3 * binary_entropy(1 / (1 + a2)) + (1 + b2) / 3 * binary_entropy(1 / (1 + b2))
