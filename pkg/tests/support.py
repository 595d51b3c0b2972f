"""Shared generators and brute-force oracles for the test modules."""

import random
from itertools import product

from affreach.affine import AffineSystem, Domain, apply_word, is_valid_orbit
from affreach.monotone import ExtremumMode, factors_of
from affreach.regex import EPSILON, Literal, Star, concat, enumerate_language, star


# one "criterion N: PASS|FAIL detail" line per acceptance criterion run
ACCEPTANCE = []


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def words(n_symbols, max_len):
    for n in range(max_len + 1):
        yield from product(range(1, n_symbols + 1), repeat=n)


def random_positive_system(rng, n_maps=None, max_a=3, max_b=4):
    n = n_maps or rng.randint(1, 3)
    maps = {(rng.randint(1, max_a), rng.randint(-max_b, max_b)) for _ in range(n)}
    return AffineSystem(sorted(maps), 0, 0)


def random_reduced(rng, n_maps, max_nodes=8):
    """Random union-free, ∅-free expression with at most ``max_nodes`` nodes."""

    def gen(budget, root=False):
        # returns an expression using at most ``budget`` nodes
        if budget <= 2 or (not root and rng.random() < 0.3):
            return Literal(rng.randint(1, n_maps))
        if rng.random() < 0.4:
            body = gen(budget - 1)
            return star(body)
        parts = []
        left = budget - 1
        for _ in range(rng.randint(2, 3)):
            if left <= 0:
                break
            p = gen(rng.randint(1, left))
            parts.append(p)
            left -= p.size
        return concat(*parts) if parts else Literal(1)

    while True:
        e = gen(max_nodes, root=True)
        if e.size <= max_nodes:
            return e


def first_star_split(e):
    """(ell, alpha, beta) for the first star factor, or None if star-free."""
    fs = factors_of(e)
    for j, f in enumerate(fs):
        if isinstance(f, Star):
            return concat(*fs[:j]), f.body, concat(*fs[j + 1 :])
    return None


def literal_word(e):
    return tuple(f.index for f in factors_of(e))


def brute_predicate(sys, e, z, mode=ExtremumMode.SUP, valid=False, max_len=8):
    """Does some word of L(e) with length <= max_len move z strictly in the
    mode's direction (keeping the orbit nonnegative if ``valid``)?"""
    for w in enumerate_language(e, max_len):
        v, _ = apply_word(sys, w, z)
        if mode.value * (v - z) > 0 and (not valid or is_valid_orbit(sys, w, z)):
            return True
    return False


def negated(sys):
    return AffineSystem([(f.a, -f.b) for f in sys.maps], -sys.x, -sys.y, sys.domain)


__all__ = [
    "ACCEPTANCE",
    "report",
    "EPSILON",
    "Domain",
    "brute_predicate",
    "first_star_split",
    "literal_word",
    "negated",
    "random",
    "random_positive_system",
    "random_reduced",
    "words",
]
