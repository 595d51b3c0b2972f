import pytest
from hypothesis import given
from hypothesis import strategies as st

from affreach.affine import AffineSystem, Domain, check_witness
from affreach.errors import PreconditionError, ResourceExceeded
from affreach.interval import (
    decide_expanding_n,
    decide_expanding_z,
    n_interval,
    search_interval,
    z_interval,
)
from affreach.oracle import bfs_oracle, random_system

N = Domain.NATURALS


def test_expanding_z_examples():
    v = decide_expanding_z(AffineSystem([(2, 0), (3, 1)], 1, 13))
    assert v.reachable and v.witness == ((2, 2),)
    assert not decide_expanding_z(AffineSystem([(2, 0), (3, 1)], 1, 5)).reachable
    assert z_interval(AffineSystem([(2, 0), (3, 1)], 1, 5)) == (-5, 5)
    v = decide_expanding_z(AffineSystem([(-1, 4)], 1, 3), involution_index=1)
    assert v.reachable and v.witness == ((1, 1),)
    assert v.trace[0][0] == "Z:involution"


def test_expanding_n_examples():
    v = decide_expanding_n(AffineSystem([(2, 0), (1, 3)], 1, 11, N))
    assert v.reachable and check_witness(AffineSystem([(2, 0), (1, 3)], 1, 11, N), v.witness)
    assert not decide_expanding_n(AffineSystem([(2, 1)], 0, 6, N)).reachable
    assert n_interval(AffineSystem([(2, 1)], 0, 6, N)) == (0, 6)
    v = decide_expanding_n(AffineSystem([(3, 0)], 0, 0, N))
    assert v.reachable and v.witness == ()


def test_preconditions():
    with pytest.raises(PreconditionError):
        decide_expanding_z(AffineSystem([(1, 2)], 0, 1))
    with pytest.raises(PreconditionError):
        decide_expanding_z(AffineSystem([(2, 2)], 0, 1), involution_index=1)
    with pytest.raises(PreconditionError):
        decide_expanding_z(AffineSystem([(2, 2)], 0, 1, N))
    with pytest.raises(PreconditionError):
        decide_expanding_n(AffineSystem([(1, -2)], 4, 0, N))


def test_involution_interval_covers_long_detours():
    # the orbit leaves [min(-R,-R+c), max(R,R+c)] = [-6, 11] at x itself
    sys = AffineSystem([(-1, 5), (-2, -5)], -7, -4)
    lo, hi = z_interval(sys, 1)
    assert lo <= -7 and hi >= 9
    assert decide_expanding_z(sys, 1).reachable

    sys = AffineSystem([(-1, 4), (2, -1), (-2, -4)], 10, 0)
    v = decide_expanding_z(sys, 1)
    assert v.reachable and check_witness(sys, v.witness)


def test_graph_edges_stay_inside():
    sys = AffineSystem([(2, 1), (-3, 2)], 0, 7)
    lo, hi = z_interval(sys)
    graph, _ = search_interval(sys, lo, hi)
    for z, edges in graph.adjacency.items():
        assert z in graph
        for v, i in edges:
            assert lo <= v <= hi and sys.map(i)(z) == v


def test_vertex_cap():
    sys = AffineSystem([(2, 1), (3, -1)], 0, 10**6)
    with pytest.raises(ResourceExceeded):
        decide_expanding_z(sys, max_vertices=10)


@given(st.integers(0, 10**6))
def test_z_complete_against_bfs(seed):
    sys = random_system(seed, "all-expanding")
    v = decide_expanding_z(sys)
    if bfs_oracle(sys, 10**5, 30).found:
        assert v.reachable
    if v.reachable:
        assert check_witness(sys, v.witness)


@given(st.integers(0, 10**6))
def test_involution_complete_against_bfs(seed):
    sys = random_system(seed, "with-involution")
    inv = next(i for i, f in enumerate(sys.maps, 1) if f.a == -1)
    v = decide_expanding_z(sys, inv)
    if bfs_oracle(sys, 10**5, 30).found:
        assert v.reachable
    if v.reachable:
        assert check_witness(sys, v.witness)


@given(st.integers(0, 10**6))
def test_n_complete_against_bfs(seed):
    sys = random_system(seed, "all-expanding", domain=N)
    sys = sys.with_maps([f for f in sys.maps if f.a > 1] or [(2, 0)])
    v = decide_expanding_n(sys)
    if bfs_oracle(sys, 10**5, 30).found:
        assert v.reachable
    if v.reachable:
        assert check_witness(sys, v.witness)
