"""End-to-end reproduction criteria, one test per criterion with its time budget.

Each test prints a PASS/FAIL line.  Run directly with ``python tests/test_acceptance.py``
for the summary alone.
"""

import sys

import pytest

from ucpt_lab.verify import run_check

CRITERIA = [
    (1, "omega_spectra", 30, "Omega spectra d=3..8 and d=3 determinants"),
    (2, "key_family_roots", 300, "key family determinant roots, both routes"),
    (3, "key_family_fixed_t", 120, "key family fixed-t independence and special-t relations"),
    (4, "odd_family", 60, "odd family independence, d=3 dependence at -1/2 only"),
    (5, "even_family", 120, "even family determinant identically zero"),
    (6, "asymmetric_roots", 120, "asymmetric family root lists and mixed verdicts"),
    (7, "alpha_beta_family", 60, "alpha-beta family extremality and decompositions"),
    (8, "eof_bounds", 1, "entanglement-of-formation bounds"),
    (9, "factorizations", 60, "exact factorizations"),
    (10, "arveson_ohno_premises", 5, "Arveson-Ohno matrix-element tables"),
    (11, "d4_conditions", 5, "d=4 factorizability condition checker"),
    (12, "band_width", 60, "band-width dependence certificate"),
    (13, "sampling", 120, "sampled genericity fractions"),
    (14, "degree_bounds", None, "determinant degree bounds"),
]


def _line(num, name, limit, desc, res):
    within = limit is None or res.runtime < limit
    ok = res.passed and within
    budget = f" / {limit} s" if limit else ""
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {name}: {desc} ({res.runtime:.2f} s{budget})"


@pytest.mark.parametrize("num,name,limit,desc", CRITERIA, ids=[c[1] for c in CRITERIA])
def test_criterion(num, name, limit, desc, capsys):
    res = run_check(name)
    ok, line = _line(num, name, limit, desc, res)
    with capsys.disabled():
        print("\n" + line)
    assert res.passed, res.details
    assert limit is None or res.runtime < limit


if __name__ == "__main__":
    failed = 0
    for num, name, limit, desc in CRITERIA:
        ok, line = _line(num, name, limit, desc, run_check(name))
        failed += not ok
        print(line, flush=True)
    sys.exit(1 if failed else 0)
