"""Independent ground truth: bounded search, knapsack DP and instance generators.

None of this shares code with the decision procedures beyond the affine
arithmetic, so it can be used to cross-check them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

import numpy as np

from .affine import AffineSystem, Domain, rle_from_word
from .errors import PreconditionError, ResourceExceeded

DEFAULT_MAX_CAPACITY = 10**7
DENSE_LIMIT = 10**7


@dataclass(frozen=True)
class OracleAnswer:
    """A shortest path to the target, or None when none was found in bounds."""

    path: tuple | None

    @property
    def found(self) -> bool:
        return self.path is not None

    @property
    def rle(self):
        return rle_from_word(self.path) if self.path is not None else None


NOT_FOUND = OracleAnswer(None)


def bfs_oracle(sys: AffineSystem, value_bound: int, depth_bound: int) -> OracleAnswer:
    """Breadth-first search from ``sys.x`` over values with |v| <= value_bound,
    at most ``depth_bound`` applications deep.  Over the naturals negative
    values are pruned when generated."""
    x, y = sys.x, sys.y
    if x == y:
        return OracleAnswer(())
    if abs(x) > value_bound or abs(y) > value_bound:
        return NOT_FOUND
    if _fits_dense(sys, value_bound):
        return _bfs_dense(sys, value_bound, depth_bound)
    return _bfs_sparse(sys, value_bound, depth_bound)


def _fits_dense(sys, value_bound):
    amax = max((abs(f.a) for f in sys.maps), default=0)
    bmax = max((abs(f.b) for f in sys.maps), default=0)
    return value_bound <= DENSE_LIMIT and amax * value_bound + bmax < 2**62


def _bfs_sparse(sys, value_bound, depth_bound):
    x, y = sys.x, sys.y
    lo = 0 if sys.domain is Domain.NATURALS else -value_bound
    maps = list(enumerate(sys.maps, 1))
    parent = {x: None}
    frontier = [x]
    for _ in range(depth_bound):
        nxt = []
        for z in frontier:
            for i, f in maps:
                v = f.a * z + f.b
                if lo <= v <= value_bound and v not in parent:
                    parent[v] = (z, i)
                    if v == y:
                        return OracleAnswer(_path(parent, y))
                    nxt.append(v)
        if not nxt:
            break
        frontier = nxt
    return NOT_FOUND


def _bfs_dense(sys, value_bound, depth_bound):
    """Layered BFS over a dense array of the value range (vectorized)."""
    x, y = sys.x, sys.y
    lo = 0 if sys.domain is Domain.NATURALS else -value_bound
    size = value_bound - lo + 1
    visited = np.zeros(size, dtype=bool)
    parent_value = np.zeros(size, dtype=np.int64)
    parent_map = np.zeros(size, dtype=np.int16)
    visited[x - lo] = True
    frontier = np.array([x], dtype=np.int64)
    for _ in range(depth_bound):
        layer = []
        for i, f in enumerate(sys.maps, 1):
            v = f.a * frontier + f.b
            keep = (v >= lo) & (v <= value_bound)
            v, src = v[keep], frontier[keep]
            keep = ~visited[v - lo]
            v, src = v[keep], src[keep]
            v, first = np.unique(v, return_index=True)
            src = src[first]
            visited[v - lo] = True
            parent_value[v - lo] = src
            parent_map[v - lo] = i
            layer.append(v)
        if visited[y - lo]:
            word = []
            v = y
            while v != x:
                word.append(int(parent_map[v - lo]))
                v = int(parent_value[v - lo])
            word.reverse()
            return OracleAnswer(tuple(word))
        frontier = np.concatenate(layer) if layer else frontier[:0]
        if frontier.size == 0:
            break
    return NOT_FOUND


def _path(parent, y):
    word = []
    v = y
    while parent[v] is not None:
        v, i = parent[v]
        word.append(i)
    word.reverse()
    return tuple(word)


def reachable_values(sys: AffineSystem, value_bound: int, depth_bound: int) -> set:
    """Every value reachable within the bounds, including ``sys.x`` itself."""
    natural = sys.domain is Domain.NATURALS
    lo = 0 if natural else -value_bound
    seen = {sys.x}
    frontier = [sys.x]
    for _ in range(depth_bound):
        nxt = []
        for z in frontier:
            for f in sys.maps:
                v = f.a * z + f.b
                if lo <= v <= value_bound and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


# ------------------------------------------------------------------ knapsack


@dataclass(frozen=True)
class KnapsackInstance:
    weights: tuple
    capacity: int

    def __post_init__(self):
        if not self.weights or any(w < 1 for w in self.weights):
            raise PreconditionError("weights must be a nonempty list of positive integers")
        if self.capacity < 0:
            raise PreconditionError("capacity must be nonnegative")


def knapsack_to_system(inst: KnapsackInstance, domain=Domain.INTEGERS) -> AffineSystem:
    return AffineSystem([(1, w) for w in inst.weights], 0, inst.capacity, domain)


def knapsack_dp(inst: KnapsackInstance, max_capacity=DEFAULT_MAX_CAPACITY) -> bool:
    """Is the capacity a nonnegative integer combination of the weights?"""
    c = inst.capacity
    if c > max_capacity:
        raise ResourceExceeded("knapsack capacity", max_capacity, c)
    reach = bytearray(c + 1)
    reach[0] = 1
    for v in range(1, c + 1):
        for w in inst.weights:
            if w <= v and reach[v - w]:
                reach[v] = 1
                break
    return bool(reach[c])


# ---------------------------------------------------------------- generators


@dataclass(frozen=True)
class Profile:
    """Bounds for random instances.

    ``kind`` selects which kind of map is guaranteed to appear:
    ``mixed`` (no guarantee), ``all-expanding``, ``with-shift``,
    ``with-involution``, ``two-involutions``, ``with-constant`` or
    ``n-negative-a``.
    """

    kind: str = "mixed"
    max_maps: int = 3
    max_a: int = 3
    max_b: int = 4
    max_xy: int = 10
    domain: Domain = Domain.INTEGERS


KINDS = (
    "mixed",
    "all-expanding",
    "with-shift",
    "with-involution",
    "two-involutions",
    "with-constant",
    "n-negative-a",
)


def _expanding_a(rng, max_a):
    return rng.choice([a for a in range(-max_a, max_a + 1) if abs(a) > 1])


def random_system(seed, profile: Profile | str = "mixed", **overrides) -> AffineSystem:
    """Deterministic random instance for ``seed``."""
    if isinstance(profile, str):
        profile = Profile(kind=profile)
    if overrides:
        profile = replace(profile, **overrides)
    if profile.kind not in KINDS:
        raise PreconditionError(f"unknown profile kind {profile.kind!r}")
    if profile.kind == "all-expanding" and profile.max_a < 2:
        raise PreconditionError("all-expanding needs max_a >= 2")
    rng = random.Random(seed)
    kind, ma, mb = profile.kind, profile.max_a, profile.max_b
    n = rng.randint(1, profile.max_maps)
    domain = profile.domain
    if kind == "n-negative-a":
        domain = Domain.NATURALS

    def any_map():
        return (rng.randint(-ma, ma), rng.randint(-mb, mb))

    maps = []
    if kind == "all-expanding":
        maps = [(_expanding_a(rng, ma), rng.randint(-mb, mb)) for _ in range(n)]
    elif kind == "with-shift":
        maps = [(1, rng.choice([b for b in range(-mb, mb + 1) if b]))]
        maps += [any_map() for _ in range(n - 1)]
    elif kind == "with-involution":
        maps = [(-1, rng.randint(-mb, mb))]
        maps += [(_expanding_a(rng, ma), rng.randint(-mb, mb)) for _ in range(n - 1)]
    elif kind == "two-involutions":
        b1, b2 = rng.sample(range(-mb, mb + 1), 2)
        maps = [(-1, b1), (-1, b2)]
        maps += [any_map() for _ in range(max(0, n - 2))]
    elif kind == "with-constant":
        maps = [(0, rng.randint(-mb, mb))] + [any_map() for _ in range(n - 1)]
    elif kind == "n-negative-a":
        maps = [(-rng.randint(1, ma), rng.randint(0, mb))]
        maps += [any_map() for _ in range(n - 1)]
    else:
        maps = [any_map() for _ in range(n)]
    rng.shuffle(maps)

    if domain is Domain.NATURALS:
        x, y = rng.randint(0, profile.max_xy), rng.randint(0, profile.max_xy)
    else:
        x = rng.randint(-profile.max_xy, profile.max_xy)
        y = rng.randint(-profile.max_xy, profile.max_xy)
    return AffineSystem(maps, x, y, domain)
