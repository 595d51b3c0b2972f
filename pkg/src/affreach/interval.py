"""Reachability by graph search when every map expands absolute value.

Outside a bounded interval every expanding map (|a| > 1) strictly increases
|z|, so every preimage of ``y`` lies inside the interval and a search over
the finite graph of that interval decides reachability.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .affine import AffineSystem, Domain, rle_from_word
from .errors import PreconditionError, ResourceExceeded
from .verdict import Verdict

DEFAULT_MAX_VERTICES = 10**7


@dataclass
class IntervalGraph:
    """Sparse graph on the integers of ``interval``, explored from one source.

    Only vertices reached from the source are materialized.  Every edge
    ``z -> f_i(z)`` has both endpoints inside the interval.
    """

    interval: tuple
    adjacency: dict = field(default_factory=dict)

    def __contains__(self, z):
        lo, hi = self.interval
        return lo <= z <= hi


def z_interval(sys: AffineSystem, involution_index=None):
    """Interval holding every preimage of ``sys.y`` over the integers.

    Without an involution this is [-R, R] with R = max(1 + max|b|, |y|).
    With one map z -> -z + c the involution preserves the distance to c/2,
    and every expanding map strictly increases that distance once it exceeds
    3|c|/2 + max|b|, so preimages satisfy |2z - c| <= max(3|c| + 2 max|b|,
    |2y - c|).  The returned interval is the hull of that set and
    [min(-R, -R + c), max(R, R + c)].
    """
    q = 1 + max((abs(f.b) for f in sys.maps), default=0)
    r = max(q, abs(sys.y))
    if involution_index is None:
        return -r, r
    c = sys.map(involution_index).b
    lo, hi = min(-r, -r + c), max(r, r + c)
    expanding_b = max(
        (abs(f.b) for i, f in enumerate(sys.maps, 1) if i != involution_index), default=0
    )
    bound2 = max(3 * abs(c) + 2 * expanding_b, abs(2 * sys.y - c))
    # |2z - c| <= bound2  <=>  (c - bound2)/2 <= z <= (c + bound2)/2
    lo = min(lo, -((bound2 - c) // 2))
    hi = max(hi, (c + bound2) // 2)
    return lo, hi


def n_interval(sys: AffineSystem):
    q = 1 + max((abs(f.b) for f in sys.maps), default=0)
    return 0, max(q, sys.y)


def search_interval(sys, lo, hi, max_vertices=DEFAULT_MAX_VERTICES):
    """Breadth-first search from ``sys.x`` inside [lo, hi].

    Returns ``(graph, path)`` where ``path`` is the word of a shortest path
    to ``sys.y`` or None.
    """
    graph = IntervalGraph((lo, hi))
    x, y = sys.x, sys.y
    if not lo <= x <= hi:
        return graph, None
    parent = {x: None}
    queue = deque([x])
    while queue:
        z = queue.popleft()
        edges = []
        for i, f in enumerate(sys.maps, 1):
            v = f(z)
            if lo <= v <= hi:
                edges.append((v, i))
                if v not in parent:
                    parent[v] = (z, i)
                    if len(parent) > max_vertices:
                        raise ResourceExceeded("interval graph vertices", max_vertices)
                    queue.append(v)
        graph.adjacency[z] = edges
        if y in parent:
            break
    if y not in parent:
        return graph, None
    word = []
    v = y
    while parent[v] is not None:
        v, i = parent[v]
        word.append(i)
    word.reverse()
    return graph, tuple(word)


def _verdict(sys, lo, hi, label, max_vertices):
    summary = f"x={sys.x} y={sys.y} I=[{lo},{hi}]"
    if sys.x == sys.y:
        return Verdict(True, (), ((label, summary),))
    _, path = search_interval(sys, lo, hi, max_vertices)
    if path is None:
        return Verdict(False, None, ((label, summary),))
    return Verdict(True, rle_from_word(path), ((label, summary),))


def decide_expanding_z(
    sys: AffineSystem, involution_index=None, max_vertices=DEFAULT_MAX_VERTICES
) -> Verdict:
    if sys.domain is not Domain.INTEGERS:
        raise PreconditionError("decide_expanding_z needs the integer domain")
    for i, f in enumerate(sys.maps, 1):
        if i == involution_index:
            if f.a != -1:
                raise PreconditionError(f"map {i} is not of the form -z+b")
        elif abs(f.a) <= 1:
            raise PreconditionError(f"map {i} = {f} is not expanding")
    lo, hi = z_interval(sys, involution_index)
    label = "Z:expanding" if involution_index is None else "Z:involution"
    return _verdict(sys, lo, hi, label, max_vertices)


def decide_expanding_n(sys: AffineSystem, max_vertices=DEFAULT_MAX_VERTICES) -> Verdict:
    if sys.domain is not Domain.NATURALS:
        raise PreconditionError("decide_expanding_n needs the natural domain")
    for i, f in enumerate(sys.maps, 1):
        if not (abs(f.a) > 1 or (f.a == 1 and f.b > 0)):
            raise PreconditionError(f"map {i} = {f} is neither expanding nor a positive shift")
    lo, hi = n_interval(sys)
    return _verdict(sys, lo, hi, "N:expanding", max_vertices)
