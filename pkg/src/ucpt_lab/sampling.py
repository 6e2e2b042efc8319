"""Randomized genericity experiments for partial-isometry channels.

Every trial draws its own generator from a Philox stream spawned from the
experiment seed, so results do not depend on the order or the process in
which trials run.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import FamilySpec, KrausSet, build_family
from .errors import BadParameters, PreconditionFailed
from .extremality import independence, product_set
from .field import ExScalar, as_scalar, mpq, rational_text
from .linalg import FLOAT, Mat, float_rank

MODES = ("haar_float", "haar_per_m", "partition", "rational_projection", "diagonal")
THREADS_ENV = "UCPT_LAB_THREADS"


@dataclass
class ExperimentConfig:
    """One sampling experiment.

    mode
        haar_float: one Haar unitary shared by all V_m;
        haar_per_m: d independent Haar unitaries;
        partition: one Haar unitary per block of ``partition`` (block sizes);
        rational_projection: V = 2 z z^T / |z|^2 - I for a random integer z
        with entries up to ``max_entry`` in size (a wide range keeps draws off
        the measure-zero sets where dependence occurs);
        diagonal: V_m diagonal with random signs.
    """

    d: int
    t: object = 0
    trials: int = 100
    seed: int = 0
    mode: str = "haar_float"
    tolerance: float = 1e-9
    partition: list | None = None
    max_entry: int = 10**6

    def __post_init__(self):
        if self.mode not in MODES:
            raise BadParameters(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not isinstance(self.d, int) or self.d < 3:
            raise BadParameters("d must be an integer >= 3")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise BadParameters("trials must be a positive integer")
        if self.partition is not None and sum(self.partition) != self.d:
            raise BadParameters("partition block sizes must sum to d")

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        if not isinstance(obj, dict) or "d" not in obj:
            raise BadParameters("experiment config must be an object with at least 'd'")
        known = {k: obj[k] for k in ("d", "t", "trials", "seed", "mode", "tolerance", "partition", "max_entry")
                 if k in obj}
        return cls(**known)

    def to_json(self) -> dict:
        out = asdict(self)
        t = self.t
        out["t"] = t if isinstance(t, (str, float)) else rational_text(as_scalar(t).rational())
        return out


def trial_rng(seed: int, trials: int, index: int) -> np.random.Generator:
    child = np.random.SeedSequence(seed).spawn(trials)[index]
    return np.random.Generator(np.random.Philox(child))


def haar_unitary(n: int, rng: np.random.Generator) -> Mat:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian matrix."""
    if n < 1:
        raise BadParameters("n must be positive")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return Mat.from_numpy(q * ph)


def projection_unitary(z) -> Mat:
    """V = 2 z z^T / |z|^2 - I for an integer vector z, with rational entries."""
    z = [int(v) for v in z]
    n = sum(v * v for v in z)
    k = len(z)
    return Mat._exact(k, k, [ExScalar(mpq(2 * z[i] * z[j], n) - (1 if i == j else 0))
                             for i in range(k) for j in range(k)])


def rational_unit_projection_family(d: int, z, t, check: bool = True) -> KrausSet:
    """Exact partial-isometry channel with all V_m = 2 x x^T - I, x = z / |z|.

    Requires z without zero entries and some z_j^2 (d-1) != |z|^2, which
    excludes the key family; ``check=False`` skips the test.
    """
    z = [int(v) for v in z]
    if len(z) != d - 1:
        raise PreconditionFailed(f"z must have length {d - 1}")
    if check and any(v == 0 for v in z):
        raise PreconditionFailed("z must have no zero entry")
    n = sum(v * v for v in z)
    if check and all(v * v * (d - 1) == n for v in z):
        raise PreconditionFailed("all |x_j| equal (d-1)^(-1/2): this is the key family")
    spec = FamilySpec("general_partial_isometry", d, as_scalar(t), V_list=[projection_unitary(z)])
    return build_family(spec)


def _float_rank(K: KrausSet, tol: float = 1e-9) -> tuple[int, int]:
    """Singular-value rank of the matrix whose rows are vec(A_m^* A_n)."""
    A = [a.to_numpy() for a in K.generators]
    F = np.array([(a.conj().T @ b).ravel() for a in A for b in A])
    return float_rank(Mat.from_numpy(F), tol, hermitian_psd=False), len(F)


def _draw_v(cfg: ExperimentConfig, rng):
    d = cfg.d
    if cfg.mode == "haar_float":
        return [haar_unitary(d - 1, rng)] * d
    if cfg.mode == "haar_per_m":
        return [haar_unitary(d - 1, rng) for _ in range(d)]
    if cfg.mode == "partition":
        blocks = cfg.partition or [d - d // 2, d // 2]
        out = []
        for size in blocks:
            out.extend([haar_unitary(d - 1, rng)] * size)
        return out
    if cfg.mode == "diagonal":
        out = []
        for _ in range(d):
            signs = rng.choice([-1, 1], size=d - 1)
            out.append(Mat.diag([ExScalar(int(s)) for s in signs]))
        return out
    # rational_projection: resample until the preconditions hold
    while True:
        z = rng.integers(1, cfg.max_entry + 1, size=d - 1) * rng.choice([-1, 1], size=d - 1)
        n = int(np.sum(z * z))
        if any(int(v) ** 2 * (d - 1) != n for v in z):
            return [projection_unitary(z)] * d, [int(v) for v in z]


def run_trial(cfg: ExperimentConfig, index: int) -> dict:
    rng = trial_rng(cfg.seed, cfg.trials, index)
    drawn = _draw_v(cfg, rng)
    z = None
    if cfg.mode == "rational_projection":
        drawn, z = drawn
    exact_inputs = all(v.backend != FLOAT for v in drawn)
    t = cfg.t
    if exact_inputs:
        t = as_scalar(t)
    else:
        t = float(as_scalar(t)) if not isinstance(t, float) else t
    K = build_family(FamilySpec("general_partial_isometry", cfg.d, t, V_list=drawn))
    out = {"index": index}
    if z is not None:
        out["z"] = z
    if K.backend == FLOAT:
        r, n = _float_rank(K, cfg.tolerance)
        out.update(rank=r, independent=r == n, exact=False)
    else:
        mats, _ = product_set(K, "AstarA")
        v = independence(mats, "AstarA")
        out.update(rank=v.rank, independent=v.independent, exact=True)
        # float verdict on the same exact input, reported if it disagrees
        r, n = _float_rank(K.to_float(), cfg.tolerance)
        if (r == n) != v.independent:
            out["tolerance_incident"] = {"float_rank": r}
    return out


def _workers(requested: int | None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    if requested:
        return max(1, int(requested))
    return 1


def genericity_experiment(cfg: ExperimentConfig, workers: int | None = None) -> dict:
    """Fraction of sampled channels whose {A_m^* A_n} is linearly independent.

    Float trials use the singular-value rank at relative tolerance
    ``cfg.tolerance``; exact trials use exact elimination and cross-check the
    float verdict.  Results are ordered by trial index.
    """
    n = _workers(workers)
    if n > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(max_workers=n) as ex:
            results = list(ex.map(run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        results = [run_trial(cfg, i) for i in range(cfg.trials)]
    independent = sum(r["independent"] for r in results)
    return {
        "config": cfg.to_json(),
        "independent_fraction": independent / cfg.trials,
        "trials": cfg.trials,
        "failures": [r for r in results if not r["independent"]],
        "tolerance_incidents": [r for r in results if "tolerance_incident" in r],
        "ranks": [r["rank"] for r in results],
    }
