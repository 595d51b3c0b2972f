"""Quick generator-backed cross-checks behind ``affreach selftest``.

Each suite yields a record ``{"suite", "passed", "checked", "failures"}``;
failures list the seeds that disagreed so they can be replayed.
"""

from __future__ import annotations

import random
import time
from itertools import product

from .affine import Domain, check_witness
from .oracle import KnapsackInstance, bfs_oracle, knapsack_dp, knapsack_to_system, random_system
from .regex import (
    EmptySet,
    automaton_to_regex,
    build_mod_automaton,
    eliminate_empty,
    enumerate_language,
    concat,
    to_dnf,
    union,
)
from .solver import decide

VALUE_BOUND = 10**6
DEPTH_BOUND = 40


def _record(name, checked, failures, started):
    return {
        "suite": name,
        "passed": not failures,
        "checked": checked,
        "failures": failures[:20],
        "elapsed_ms": round((time.perf_counter() - started) * 1000, 3),
    }


def oracle_suite(seeds, domain):
    started = time.perf_counter()
    failures = []
    for seed in range(seeds):
        sys = random_system(seed, "mixed", domain=domain)
        verdict = decide(sys)
        found = bfs_oracle(sys, VALUE_BOUND, DEPTH_BOUND).found
        if (found and not verdict.reachable) or (
            verdict.witness is not None and not check_witness(sys, verdict.witness)
        ):
            failures.append(seed)
    name = "oracle-Z" if domain is Domain.INTEGERS else "oracle-N"
    return _record(name, seeds, failures, started)


def knapsack_suite(max_capacity=30):
    started = time.perf_counter()
    failures, checked = [], 0
    for w1, w2, c in product(range(1, 10), range(1, 10), range(max_capacity + 1)):
        inst = KnapsackInstance((w1, w2), c)
        if decide(knapsack_to_system(inst), witness=False).reachable != knapsack_dp(inst):
            failures.append([w1, w2, c])
        checked += 1
    return _record("knapsack", checked, failures, started)


def regex_suite(seeds, max_len=5):
    started = time.perf_counter()
    failures = []
    for seed in range(seeds):
        rng = random.Random(seed)
        sys = random_system(seed, "mixed")
        aut = build_mod_automaton(sys, rng.randint(1, 4))
        words = set()
        for n in range(max_len + 1):
            words.update(product(range(1, len(sys.maps) + 1), repeat=n))
        expected = {w for w in words if aut.accepts(w)}
        r = automaton_to_regex(aut)
        e = eliminate_empty(r)
        langs = [enumerate_language(r, max_len), enumerate_language(e, max_len)]
        if not isinstance(e, EmptySet):
            langs.append(enumerate_language(union(*(concat(*c) for c in to_dnf(e))), max_len))
        if any(lang != expected for lang in langs):
            failures.append(seed)
    return _record("regex", seeds, failures, started)


def run_all(seeds=100):
    yield oracle_suite(seeds, Domain.INTEGERS)
    yield oracle_suite(seeds, Domain.NATURALS)
    yield knapsack_suite()
    yield regex_suite(seeds)


__all__ = ["run_all", "oracle_suite", "knapsack_suite", "regex_suite"]
