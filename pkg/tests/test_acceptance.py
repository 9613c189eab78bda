"""The nine acceptance criteria, one test each.  Every test prints a single
PASS/FAIL line to the terminal (also visible without -s)."""

import json
import os
import subprocess
import sys
import time

import pytest

from oggcheck.arith import divisors, is_squarefree, prime_factors
from oggcheck.cusps import (cuspidal_group, full_cuspidal_invariants, hd_divisors,
                            unit_divisor_lattice)
from oggcheck.eisenstein import eis_divisors, fd_basis_index, l_functional
from oggcheck.hecke import duality_gram_check, eisenstein_ideal, hecke_algebra
from oggcheck.linalg import charpoly, mat_mul
from oggcheck.modsym import build_manin_space, hecke_matrix, integral_cuspform_basis, poly_sqrt
from oggcheck.qexp import fd_closed_form, fd_series, working_precision
from oracles import elliptic_an

LEVELS = [N for N in range(2, 61) if is_squarefree(N)]
PMAX = 100
BATCH_LIMIT_SECONDS = 600


def bad_primes(N):
    return {2, 3} | set(prime_factors(N))


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        return ok
    return emit


def _run_cold(code):
    env = dict(os.environ)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env=env, check=True)
    return out.stdout


@pytest.fixture(scope="module")
def batch_reports():
    """Cold-cache batch over every square-free N <= 60 and p <= 100, p prime to 6N."""
    code = (
        "import json, time\n"
        "from oggcheck.verify import batch\n"
        "t = time.perf_counter()\n"
        f"reps = batch(range(2, 61), {PMAX})\n"
        "el = time.perf_counter() - t\n"
        "print(json.dumps({'elapsed': el, 'reports': [r.to_dict() for r in reps],"
        " 'passed': [r.passed for r in reps]}))\n"
    )
    data = json.loads(_run_cold(code))
    return data


def test_criterion_1_level_11_prime_5(report):
    code = (
        "import json, time\n"
        "t = time.perf_counter()\n"
        "from oggcheck.verify import verify_ogg\n"
        "from oggcheck.cusps import full_cuspidal_invariants\n"
        "r = verify_ogg(11, 5)\n"
        "inv = full_cuspidal_invariants(11).invariant_factors\n"
        "print(json.dumps({'r': r.to_dict(), 'inv': inv, 'el': time.perf_counter() - t}))\n"
    )
    d = json.loads(_run_cold(code))
    r = d["r"]
    vals = (r["ord_p_C"], r["ord_p_TI"], r["ord_p_X"], r["torsion_bound"])
    ok = vals == (1, 1, 1, 1) and d["inv"] == [55] and d["el"] < 1.0
    report(1, ok, f"ords={vals} invariants={d['inv']} time={d['el']:.3f}s")
    assert ok


def test_criterion_2_three_way_equality(report, batch_reports):
    reps = batch_reports["reports"]
    bad = [(r["level"], r["prime"]) for r in reps
           if r.get("error") or not (r["ord_p_C"] == r["ord_p_TI"] == r["ord_p_X"])]
    el = batch_reports["elapsed"]
    ok = not bad and len(reps) > 0 and el < BATCH_LIMIT_SECONDS
    report(2, ok, f"{len(reps)} pairs, {len(bad)} mismatches, batch time {el:.1f}s")
    assert ok, bad[:10]


def test_criterion_3_ideal_generation(report, batch_reports):
    reps = batch_reports["reports"]
    bad = [(r["level"], r["prime"]) for r in reps
           if r["qmax"] != 50 or not (r["J_equals_Itilde_ok"] and r["memberships_ok"])]
    ok = not bad
    report(3, ok, f"{len(reps)} pairs, {len(bad)} failures (Qmax = 50)")
    assert ok, bad[:10]


def test_criterion_4_explicit_basis_identities(report):
    bad = []
    for N in LEVELS:
        ds = eis_divisors(N)
        # l_d reads a_d, so the series must reach the largest divisor
        P = max(working_precision(N), max(ds))
        for s, D in zip(ds, hd_divisors(N)):
            f = fd_series(N, s, P)
            if f != fd_closed_form(N, s, P):
                bad.append((N, s, "dlog"))
            for d in ds:
                if l_functional(d, f) != (-12 * N * d if d == s else 0):
                    bad.append((N, s, d, "l_d"))
            if sum(D) != 0:
                bad.append((N, s, "degree"))
            if D[divisors(N).index(N)] != f[0]:
                bad.append((N, s, "ord_inf"))
    ok = not bad
    report(4, ok, f"{len(LEVELS)} levels, {len(bad)} failures")
    assert ok, bad[:10]


def test_criterion_5_index_supports(report):
    bad = []
    for N in LEVELS:
        allowed = bad_primes(N)
        if not set(fd_basis_index(N)) <= allowed:
            bad.append((N, "fd_basis_index"))
        first, second = unit_divisor_lattice(N)
        idx = first.index_in(second)
        if not set(prime_factors(idx)) <= allowed:
            bad.append((N, "unit lattice"))
        if not set(duality_gram_check(N)) <= allowed:
            bad.append((N, "gram"))
        tors = eisenstein_ideal(N).quotient.torsion
        if any(p not in allowed for t in tors for p in prime_factors(t)):
            bad.append((N, "T/I torsion"))
    ok = not bad
    report(5, ok, f"{len(LEVELS)} levels, {len(bad)} failures")
    assert ok, bad


def test_criterion_6_presentation(report, batch_reports):
    bad_rank = [N for N in LEVELS
                if eisenstein_ideal(N).quotient_rank != 2 ** len(prime_factors(N)) - 1]
    reps = batch_reports["reports"]
    bad = [(r["level"], r["prime"]) for r in reps if not r["presentation_ok"]]
    ok = not bad and not bad_rank
    report(6, ok, f"rank failures {bad_rank}, presentation failures {len(bad)}/{len(reps)}")
    assert ok


def test_criterion_7_structural_sanity(report):
    not_square, not_commuting = [], []
    for N in LEVELS:
        ms = build_manin_space(N)
        mats = [hecke_matrix(ms, n) for n in range(1, 21)]
        for n, A in enumerate(mats, 1):
            try:
                poly_sqrt(charpoly(A))
            except ArithmeticError:
                not_square.append((N, n))
        for i, A in enumerate(mats):
            for B in mats[i + 1:]:
                if mat_mul(A, B) != mat_mul(B, A):
                    not_commuting.append(N)
        alg = hecke_algebra(N, "full")
        if not alg.is_commutative():
            not_commuting.append(N)
    oracle = elliptic_an((0, -1, 1, 0, 0), 11, 10)
    (f,) = integral_cuspform_basis(11, 10)
    match = list(f.coeffs) == oracle
    ok = not not_square and not not_commuting and match
    report(7, ok, f"non-square {not_square[:3]}, non-commuting {not_commuting[:3]}, "
                  f"N=11 oracle match {match}")
    assert ok


def test_criterion_8_cyclicity(report, batch_reports):
    reps = batch_reports["reports"]
    bad = [(r["level"], r["prime"]) for r in reps if not r["cyclicity_ok"]]
    ok = not bad
    report(8, ok, f"{len(reps)} pairs, {len(bad)} non-cyclic")
    assert ok, bad[:10]


def test_criterion_9_torsion_bound(report, batch_reports):
    reps = batch_reports["reports"]
    violations = [(r["level"], r["prime"]) for r in reps if r["ord_p_C"] > r["torsion_bound"]]
    not_tight = [(r["level"], r["prime"]) for r in reps if not r["bound_tight"]]
    ok = not violations
    report(9, ok, f"{len(violations)} bound violations (hard); "
                  f"{len(not_tight)} pairs not tight (soft) {not_tight[:5]}")
    assert ok, violations
