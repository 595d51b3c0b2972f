"""Acceptance suite: one test per criterion, each reporting a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the "acceptance criteria" section of the terminal summary.
"""

import json
import random
import subprocess
import sys
import time
from itertools import product

import pytest

from affreach.affine import AffineSystem, Domain, apply_word, check_witness, compose_word
from affreach.cli import EXIT_RESOURCE
from affreach.errors import ResourceExceeded
from affreach.monotone import (
    EMPTY,
    NEGATIVE,
    ExtremumMode,
    Value,
    increase_predicate,
    mod_extremum,
    mod_extremum_valid,
    valid_increase_predicate,
)
from affreach.oracle import (
    KnapsackInstance,
    Profile,
    bfs_oracle,
    knapsack_dp,
    knapsack_to_system,
    random_system,
    reachable_values,
)
from affreach.regex import (
    EMPTY as EMPTY_SET,
    ModAutomaton,
    automaton_to_regex,
    concat,
    eliminate_empty,
    enumerate_language,
    to_dnf,
    union,
)
from affreach.solver import decide_n, decide_z
from support import (
    brute_predicate,
    first_star_split,
    literal_word,
    random_positive_system,
    random_reduced,
    report,
    words,
)

N = Domain.NATURALS
INF = float("inf")
SEEDS = 500
VALUE_BOUND, DEPTH_BOUND = 10**6, 40
PROFILE = Profile(kind="mixed", max_maps=3, max_a=3, max_b=4, max_xy=10)


def _oracle_run(domain):
    rows = []
    decide_time = oracle_time = 0.0
    for seed in range(SEEDS):
        sys_ = random_system(seed, PROFILE, domain=domain)
        t = time.perf_counter()
        verdict = decide_z(sys_) if domain is Domain.INTEGERS else decide_n(sys_)
        decide_time += time.perf_counter() - t
        t = time.perf_counter()
        found = bfs_oracle(sys_, VALUE_BOUND, DEPTH_BOUND).found
        oracle_time += time.perf_counter() - t
        rows.append((seed, sys_, verdict, found))
    return rows, decide_time, oracle_time


@pytest.fixture(scope="module")
def z_run():
    return _oracle_run(Domain.INTEGERS)


@pytest.fixture(scope="module")
def n_run():
    return _oracle_run(N)


def test_criterion_1_oracle_agreement_z(z_run):
    rows, dt, ot = z_run
    missed = [seed for seed, _, v, found in rows if found and not v.reachable]
    n_found = sum(found for *_, found in rows)
    total = dt + ot
    ok = not missed and total < 60
    report(
        1,
        ok,
        f"{n_found}/{SEEDS} BFS-reachable all decided Reachable; missed={missed[:10]} "
        f"runtime {total:.1f}s (decide {dt:.1f}s, oracle {ot:.1f}s) < 60s",
    )
    assert ok


def test_criterion_2_certificate_soundness(z_run):
    rows, _, _ = z_run
    reachable = [(seed, s, v) for seed, s, v, _ in rows if v.reachable]
    bad = [seed for seed, s, v in reachable if v.witness is None or not check_witness(s, v.witness)]
    ok = not bad
    report(2, ok, f"{len(reachable) - len(bad)}/{len(reachable)} witnesses pass check_witness; bad={bad[:10]}")
    assert ok


def test_criterion_3_oracle_agreement_n(n_run):
    rows, dt, ot = n_run
    missed = [seed for seed, _, v, found in rows if found and not v.reachable]
    bad_witness = [
        seed for seed, s, v, _ in rows if v.reachable and (v.witness is None or not check_witness(s, v.witness))
    ]
    inconsistent = [
        seed
        for seed, s, v, _ in rows
        if v.reachable and not decide_z(s.with_maps(s.maps, domain=Domain.INTEGERS)).reachable
    ]
    n_found = sum(found for *_, found in rows)
    n_reach = sum(v.reachable for _, _, v, _ in rows)
    ok = not (missed or bad_witness or inconsistent)
    report(
        3,
        ok,
        f"{n_found}/{SEEDS} BFS-reachable all decided Reachable (missed={missed[:10]}); "
        f"{n_reach} N-reachable all Z-reachable (violations={inconsistent[:10]}); "
        f"bad witnesses={bad_witness[:10]}; runtime {dt + ot:.1f}s",
    )
    assert ok


def test_criterion_4_knapsack_exhaustive():
    started = time.perf_counter()
    wrong, count = [], 0
    for w1, w2 in product(range(1, 10), repeat=2):
        for c in range(1, 51):
            inst = KnapsackInstance((w1, w2), c)
            count += 1
            if decide_z(knapsack_to_system(inst), witness=False).reachable != knapsack_dp(inst):
                wrong.append((w1, w2, c))
    elapsed = time.perf_counter() - started
    ok = count == 4050 and not wrong and elapsed < 120
    report(4, ok, f"{count - len(wrong)}/{count} instances agree with DP; wrong={wrong[:10]}; {elapsed:.1f}s < 120s")
    assert ok


def test_criterion_5_regex_language_preservation():
    rng = random.Random(2024)
    bad, max_len = [], 6
    for n in range(200):
        m = rng.randint(1, 4)
        n_sym = rng.randint(1, 3)
        sys_ = AffineSystem(
            [(rng.randint(-3, 3), rng.randint(-4, 4)) for _ in range(n_sym)],
            rng.randint(-10, 10),
            rng.randint(-10, 10),
        )
        n_sym = len(sys_.maps)
        # the automaton of a random system, over a random modulus m <= 4
        residues = [(f.a, f.b) for f in sys_.maps]
        delta = tuple(tuple((a * r + b) % m for a, b in residues) for r in range(m))
        aut = ModAutomaton(m, delta, sys_.x % m, sys_.y % m)
        expected = {w for w in words(n_sym, max_len) if aut.accepts(w)}
        r = automaton_to_regex(aut)
        e = eliminate_empty(r)
        langs = {"regex": enumerate_language(r, max_len), "eliminated": enumerate_language(e, max_len)}
        if e == EMPTY_SET:
            langs["dnf"] = set()
        else:
            langs["dnf"] = enumerate_language(union(*(concat(*c) for c in to_dnf(e))), max_len)
        if any(lang != expected for lang in langs.values()):
            bad.append(n)
    ok = not bad
    report(5, ok, f"{200 - len(bad)}/200 automata: automaton, regex, eliminated regex and DNF agree up to length {max_len}; bad={bad[:10]}")
    assert ok


def _identity_rhs(sys_, z, e, valid):
    """Right-hand side of the star identity for the first star of ``e``."""
    ell, alpha, beta = first_star_split(e)
    ell_maps = [sys_.map(i) for i in literal_word(ell)]
    if valid:
        _, orbit = apply_word(sys_, literal_word(ell), z)
        if min(orbit) < 0:
            return False
        pred = valid_increase_predicate
    else:
        pred = increase_predicate
    return pred(z, concat(ell, beta), sys_) or pred(compose_word(ell_maps)(z), alpha, sys_)


def test_criterion_6_increase_identities():
    rng = random.Random(6)
    mismatches, checks, star_free, starred = [], 0, 0, 0
    for n in range(300):
        sys_ = random_positive_system(rng)
        e = random_reduced(rng, len(sys_.maps), max_nodes=8)
        split = first_star_split(e)
        if split is None:
            star_free += 1
        else:
            starred += 1
        for z in range(-5, 6):
            for valid in (False, True):
                if valid and z < 0:
                    continue
                lhs = valid_increase_predicate(z, e, sys_) if valid else increase_predicate(z, e, sys_)
                checks += 1
                if split is not None:
                    rhs = _identity_rhs(sys_, z, e, valid)
                else:
                    # star-free: exhaustive enumeration of the finite language
                    rhs = brute_predicate(sys_, e, z, ExtremumMode.SUP, valid, max_len=8)
                if lhs != rhs:
                    mismatches.append((n, z, valid, str(e)))
                # any increasing word found by bounded enumeration must be seen
                if split is not None and not lhs and brute_predicate(sys_, e, z, ExtremumMode.SUP, valid, max_len=6):
                    mismatches.append((n, z, valid, str(e), "unsound"))
    ok = not mismatches
    report(
        6,
        ok,
        f"{checks} (expression, z) checks over 300 expressions ({starred} starred, {star_free} star-free); "
        f"mismatches={mismatches[:5]}",
    )
    assert ok


def test_criterion_7_mod_extremum_certification():
    rng = random.Random(7)
    bad, finite = [], 0
    for n in range(100):
        maps = {(rng.randint(1, 3), rng.randint(-3, 3)) for _ in range(rng.randint(1, 2))}
        k = rng.choice([k for k in range(-4, 5) if k])
        sys_ = AffineSystem(sorted(maps), rng.randint(-6, 6), rng.randint(-6, 6))
        res = mod_extremum(sys_, k)
        if res.kind != "value" or res.value in (INF, -INF):
            continue
        finite += 1
        congruent = {v for v in reachable_values(sys_, 10**4, 12) if (v - sys_.y) % k == 0}
        if res.value not in congruent or max(congruent) != res.value:
            bad.append(n)
    ok = not bad and finite > 0
    report(7, ok, f"{finite - len(bad)}/{finite} finite Value(v) attained exactly by BFS with nothing larger (100 instances); bad={bad}")
    assert ok


def test_criterion_8_worked_instances():
    cases = []

    def case(name, got, want):
        cases.append((name, got == want, got, want))

    v = decide_z(AffineSystem([(2, 1), (1, -3)], 0, 6))
    case("0->6 under {2z+1, z-3}", (v.reachable, v.witness), (True, ((1, 4), (2, 3))))
    case("0->2 under {2z+1, z-3}", decide_z(AffineSystem([(2, 1), (1, -3)], 0, 2)).reachable, False)
    v = decide_z(AffineSystem([(-2, 0), (1, -3)], 1, 100))
    case("1->100 under {-2z, z-3}", (v.reachable, v.witness), (True, ((2, 17), (1, 1))))
    v = decide_z(AffineSystem([(0, 5), (2, 0)], 1, 20))
    case("1->20 under {5, 2z}", (v.reachable, v.witness), (True, ((1, 1), (2, 2))))
    v = decide_n(AffineSystem([(1, -2)], 5, 1, N))
    case("5->1 under {z-2} over N", (v.reachable, v.witness), (True, ((1, 2),)))
    case("4->1 under {z-2} over N", decide_n(AffineSystem([(1, -2)], 4, 1, N)).reachable, False)
    sys_ = AffineSystem([(-1, 6), (2, 0)], 1, 10, N)
    v = decide_n(sys_)
    case("1->10 under {-z+6, 2z} over N", v.reachable and check_witness(sys_, v.witness), True)
    case("0->4 under {3z-2} over N", decide_n(AffineSystem([(3, -2)], 0, 4, N)).reachable, False)
    case("Empty: {2z+1} k=3 0->2", mod_extremum(AffineSystem([(2, 1)], 0, 2), 3), EMPTY)
    case("Value(inf): {2z+1} k=3 0->6", mod_extremum(AffineSystem([(2, 1)], 0, 6), 3), Value(INF))
    case("Negative: {-2z} k=5 1->3", mod_extremum(AffineSystem([(-2, 0)], 1, 3), 5), NEGATIVE)
    case("valid Value(inf): {2z+1} k=3 0->6", mod_extremum_valid(AffineSystem([(2, 1)], 0, 6), 3), Value(INF))
    case("valid Value(0): {3z-2} k=2 0->0", mod_extremum_valid(AffineSystem([(3, -2)], 0, 0), 2), Value(0))
    case("valid Value(inf): {2z} k=7 3->5", mod_extremum_valid(AffineSystem([(2, 0)], 3, 5), 7), Value(INF))
    failed = [(name, got, want) for name, good, got, want in cases if not good]
    ok = not failed
    report(8, ok, f"{len(cases) - len(failed)}/{len(cases)} worked instances reproduce; failed={failed}")
    assert ok


ADVERSARIAL = AffineSystem([(5, 2), (11, 5), (7, 1), (1, 12)], 1, 1000011)


def test_criterion_9_resource_honesty(tmp_path):
    problems, lines = [], []
    for cap in (10**2, 10**3, 10**4, 10**5, 10**6):
        t = time.perf_counter()
        try:
            verdict = decide_z(ADVERSARIAL, max_nodes=cap)
        except ResourceExceeded as exc:
            elapsed = time.perf_counter() - t
            lines.append(f"cap {cap}: resource-exceeded, built peak {exc.peak}, {elapsed:.2f}s")
            if exc.peak is None or exc.peak > 2 * cap:
                problems.append(f"cap {cap}: peak {exc.peak} above 2x cap")
            continue
        elapsed = time.perf_counter() - t
        lines.append(f"cap {cap}: decided {verdict.reachable}, {elapsed:.2f}s")
        if verdict.reachable and not check_witness(ADVERSARIAL, verdict.witness):
            problems.append(f"cap {cap}: witness fails")
        if not verdict.reachable and bfs_oracle(ADVERSARIAL, VALUE_BOUND * 10, DEPTH_BOUND).found:
            problems.append(f"cap {cap}: Unreachable contradicted by BFS")

    # the CLI must terminate on its own with the resource status
    inst = tmp_path / "adversarial.json"
    inst.write_text(
        json.dumps(
            {
                "domain": "Z",
                "x": str(ADVERSARIAL.x),
                "y": str(ADVERSARIAL.y),
                "functions": [[str(f.a), str(f.b)] for f in ADVERSARIAL.maps],
            }
        )
    )
    try:
        proc = subprocess.run(
            [sys.executable, "-m", "affreach", "decide", str(inst), "--max-regex-nodes", "100000"],
            capture_output=True,
            text=True,
            timeout=120,
        )
        rec = json.loads(proc.stdout)
        lines.append(f"cli exit {proc.returncode}, reachable={rec['reachable']!r}")
        if proc.returncode == EXIT_RESOURCE:
            if rec["reachable"] != "resource-exceeded" or rec["stats"]["regex_nodes"] > 2 * 100000:
                problems.append("cli record inconsistent with resource status")
        elif proc.returncode != 0:
            problems.append(f"cli exit {proc.returncode}")
    except subprocess.TimeoutExpired:
        problems.append("cli hung past 120s")
    ok = not problems
    report(9, ok, "; ".join(lines + problems))
    assert ok
