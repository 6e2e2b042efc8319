"""Command-line entry point: analyze, sweep, verify and sample.

Exit codes: 0 success, 1 verification failure, 2 input or usage error.
Reports are UTF-8 JSON on stdout, or in the file named by ``--out``.
Exact scalars are always serialized as strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .channels import FamilySpec, build_family, choi
from .errors import UcptError
from .extremality import (KINDS, canonical_kind, combination, extremality_verdict, gram_det_poly, product_set,
                          set_independence, vec_det_poly)
from .field import ExScalar, as_scalar, parse_scalar
from .linalg import EXACT, Mat, float_rank
from .sampling import THREADS_ENV, ExperimentConfig, genericity_experiment
from .verify import CHECKS, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_SWEEP_D = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_json_arg(text: str):
    """Parse a JSON argument given inline, as a file path, or as @path."""
    if text.startswith("@"):
        text = text[1:]
        if not os.path.exists(text):
            raise UsageError(f"no such file: {text}")
    if os.path.exists(text) and not text.lstrip().startswith("{"):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from exc


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _workers(requested: int | None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    if requested:
        return max(1, requested)
    return os.cpu_count() or 1


# ---- analyze ----------------------------------------------------------------

def analyze(spec_obj: dict, set_kind: str | None = None, use_float: bool = False) -> dict:
    spec = FamilySpec.from_json(spec_obj)
    K = build_family(spec)
    if use_float or K.backend != EXACT:
        return _analyze_float(spec, K.to_float(), set_kind)
    kinds = [canonical_kind(set_kind)] if set_kind else list(KINDS)
    report = {"spec": spec.to_json(), "mode": "exact", "generators": len(K)}
    if set_kind is None:
        ev = extremality_verdict(K)
        report["verdicts"] = {k: v.to_json() for k, v in ev["verdicts"].items()}
        report["extremality"] = {k: ev[k] for k in ("ucp_extreme", "cpt_extreme", "ucpt_extreme_LS", "consistent")}
    else:
        report["verdicts"] = {k: set_independence(K, k).to_json() for k in kinds}
    report["choi_rank"] = choi(K)[1]
    return report


def _analyze_float(spec, K, set_kind):
    kinds = [canonical_kind(set_kind)] if set_kind else list(KINDS)
    verdicts = {}
    for k in kinds:
        mats, _ = product_set(K, k)
        F = np.array([m.to_numpy().ravel() for m in mats])
        r = float_rank(Mat.from_numpy(F), hermitian_psd=False)
        verdicts[k] = {"set_kind": k, "independent": r == len(mats), "rank": r, "expected": len(mats)}
    report = {"spec": spec.to_json(), "mode": "float", "generators": len(K), "verdicts": verdicts,
              "choi_rank": choi(K)[1]}
    if set_kind is None:
        report["extremality"] = {
            "ucp_extreme": verdicts["AstarA"]["independent"],
            "cpt_extreme": verdicts["AAstar"]["independent"],
            "ucpt_extreme_LS": verdicts["LandauStreater"]["independent"],
        }
    return report


def recheck_analysis(report: dict) -> bool:
    """Re-parse an exact analyze report and re-verify every witness exactly."""
    spec = FamilySpec.from_json(report["spec"])
    K = build_family(spec)
    for kind, v in report["verdicts"].items():
        fresh = set_independence(K, kind)
        if fresh.independent != v["independent"] or fresh.rank != v["rank"]:
            return False
        if "witness" in v:
            mats, labels = product_set(K, kind)
            coeff = {tuple(w["label"]): ExScalar.from_json(w["coefficient"]) for w in v["witness"]}
            c = [coeff.get(lab, ExScalar(0)) for lab in labels]
            if not any(c) or not combination(mats, c).is_zero():
                return False
    return True


# ---- sweep ------------------------------------------------------------------

def _sweep_job(args):
    spec_obj, kind, route, interval = args
    spec = FamilySpec.from_json(spec_obj)
    fn = gram_det_poly if route == "gram" else vec_det_poly
    return fn(spec, kind, interval).to_json()


def _root_set(rep: dict) -> set:
    return set(map(str, rep["roots_in_interval"])) | {r for r, _ in rep["exact_roots"]}


def sweep(spec_obj: dict, kinds=None, interval=(-1, 1), workers: int = 1) -> dict:
    spec_obj = dict(spec_obj)
    spec_obj["t"] = "t"
    spec = FamilySpec.from_json(spec_obj)
    d = spec.d if spec.d is not None else build_family(FamilySpec(spec.name, spec.d, 0, spec.alpha, spec.beta,
                                                                  spec.V_list)).d
    if d > MAX_SWEEP_D:
        raise UsageError(f"polynomial sweeps are limited to d <= {MAX_SWEEP_D}, got d = {d}")
    kinds = [canonical_kind(k) for k in (kinds or ["AstarA", "AAstar"])]
    jobs = [(spec_obj, k, route, interval) for k in kinds for route in ("gram", "vec")]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(j) for j in jobs]
    out = {"spec": spec.to_json(), "interval": [str(interval[0]), str(interval[1])], "sets": {}}
    for i, k in enumerate(kinds):
        g, v = results[2 * i], results[2 * i + 1]
        out["sets"][k] = {
            "gram": g,
            "vec": v,
            "identically_zero": g["identically_zero"] and v["identically_zero"],
            "root_sets_agree": g["identically_zero"] == v["identically_zero"] and _root_set(g) == _root_set(v),
        }
    return out


# ---- commands ---------------------------------------------------------------

def _parse_interval(vals):
    try:
        lo, hi = (as_scalar(parse_scalar(v)).rational() for v in vals)
    except (UcptError, ValueError, TypeError) as exc:
        raise UsageError(f"bad interval: {exc}") from exc
    if not lo < hi:
        raise UsageError("interval needs lo < hi")
    return lo, hi


def cmd_analyze(ns) -> int:
    report = analyze(load_json_arg(ns.spec), ns.set, ns.float)
    _emit(report, ns.out)
    return EXIT_OK


def cmd_sweep(ns) -> int:
    interval = _parse_interval(ns.interval) if ns.interval else (-1, 1)
    report = sweep(load_json_arg(ns.spec), ns.set, interval, _workers(ns.parallel))
    _emit(report, ns.out)
    return EXIT_OK


def cmd_verify(ns) -> int:
    names = list(CHECKS) if ns.all or not ns.check else ns.check
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    result = run_suite(names)
    _emit(result.to_json(), ns.out)
    for name, c in result.checks.items():
        print(f"{'PASS' if c.passed else 'FAIL'} {name} ({c.runtime:.2f} s)", file=sys.stderr)
    return EXIT_OK if result.overall else EXIT_FAIL


def cmd_sample(ns) -> int:
    cfg = ExperimentConfig.from_json(load_json_arg(ns.config))
    report = genericity_experiment(cfg, _workers(ns.parallel))
    _emit(report, ns.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ucpt-lab", description="Exact extremality and factorizability checks for UCPT maps.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="independence and extremality verdicts for one channel")
    a.add_argument("spec", help="family spec JSON (inline, path or @path)")
    a.add_argument("--set", choices=["AstarA", "AAstar", "LS"])
    mode = a.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact arithmetic (default)")
    mode.add_argument("--float", action="store_true", help="floating-point rank at tolerance 1e-9")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="determinants in t and their roots")
    s.add_argument("spec", help="family spec JSON; t is made symbolic")
    s.add_argument("--set", action="append", choices=["AstarA", "AAstar"])
    s.add_argument("--roots", action="store_true", help="report roots (always on)")
    s.add_argument("--interval", nargs=2, metavar=("LO", "HI"))
    s.add_argument("--parallel", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run registered reproduction checks")
    v.add_argument("--all", action="store_true")
    v.add_argument("--check", action="append")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("sample", help="randomized genericity experiment")
    m.add_argument("config", help="experiment config JSON")
    m.add_argument("--parallel", type=int)
    m.add_argument("--out")
    m.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        return ns.func(ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UcptError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
