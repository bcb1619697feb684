import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omex import (BipartiteGraph, LimitExceeded, OfflineParams,
                  complete_graph, construct_verified_offline_graph,
                  hall_check, max_matching, random_offline_graph, series_base,
                  series_bound)
from omex.limits import Limits
from omex.online import counterexample_graph

from conftest import small_graphs


# --- max_matching -----------------------------------------------------------

def test_complete_graph_saturates():
    g = complete_graph(2, 4)
    assert len(max_matching(g, [0, 1, 2, 3])) == 4


def test_empty_subset_empty_matching():
    assert max_matching(complete_graph(2, 4), []) == []


def test_counterexample_pair_is_matchable():
    # by hand: 0 takes right 0, then 1 augments 0 over to right 1
    assert max_matching(counterexample_graph(), [0, 1]) == [(0, 1), (1, 0)]


def test_max_matching_rejects_duplicates():
    with pytest.raises(ValueError, match="repeats"):
        max_matching(complete_graph(1, 2), [0, 0])


def test_max_matching_deterministic():
    g = BipartiteGraph(2, 3, 3, ((0, 1), (0,), (0, 2), (1,)))
    assert max_matching(g, [0, 1, 2, 3]) == max_matching(g, [0, 1, 2, 3])


# --- hall_check -------------------------------------------------------------

def test_complete_graph_passes_every_bound():
    g = complete_graph(2, 4)
    for s in range(1, 5):
        assert hall_check(g, s) is None


def test_isolated_vertex_is_smallest_witness():
    g = BipartiteGraph(2, 1, 1, ((0,), (0,), (), (0,)))
    assert hall_check(g, 1) == [2]


def test_counterexample_passes_2_fails_3():
    cx = counterexample_graph()
    assert hall_check(cx, 2) is None
    assert hall_check(cx, 3) == [0, 1, 2]
    assert hall_check(cx, 3, mode="matching") == [0, 1, 2]


def test_hall_bad_mode_rejected():
    with pytest.raises(ValueError, match="mode"):
        hall_check(counterexample_graph(), 2, mode="fast")


def test_hall_s_max_beyond_index_space_rejected():
    with pytest.raises(ValueError, match="s_max"):
        hall_check(counterexample_graph(), 5)


def test_exhaustive_guard_respects_limit():
    g = complete_graph(5, 2)  # 32 left vertices
    with pytest.raises(LimitExceeded):
        hall_check(g, 1, limits=Limits(hall_left_size=16))
    assert hall_check(g, 1, mode="matching", limits=Limits(hall_left_size=16)) is None


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=4, max_right=4, max_degree=3))
def test_exhaustive_and_matching_modes_agree(g):
    for s in range(1, g.left_size + 1):
        assert hall_check(g, s) == hall_check(g, s, mode="matching")


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=3, max_right=4, max_degree=3),
       st.integers(min_value=1, max_value=8))
def test_hall_pass_is_downward_closed(g, s):
    s = min(s, 2 ** g.n)
    if hall_check(g, s) is None:
        for smaller in range(1, s):
            assert hall_check(g, smaller) is None


def test_sharded_hall_matches_sequential():
    g = BipartiteGraph(2, 2, 2, ((0,), (0,), (1,), (0, 1)))
    for s in (1, 2, 3, 4):
        assert hall_check(g, s, jobs=3) == hall_check(g, s)


# --- series bound -----------------------------------------------------------

def test_series_bound_exact_small_case():
    assert series_bound(2, 1, 2) == Fraction(9, 64)
    assert series_base(2, 1, 2) == Fraction(1, 8)


def test_series_base_n4():
    assert series_base(4, 1, 2) == Fraction(1, 2 ** 55)
    total = series_bound(4, 1, 2)
    assert Fraction(1, 2 ** 55) < total < Fraction(1, 2 ** 54)


def test_series_bound_monotone_in_n():
    values = [series_bound(n, 1, 2) for n in range(2, 6)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_series_bound_rejects_small_n():
    with pytest.raises(ValueError):
        series_bound(1, 1, 2)
    with pytest.raises(ValueError):
        series_base(1, 1, 1)


# --- random construction ----------------------------------------------------

def test_same_seed_same_graph():
    p = OfflineParams(2, 1, 2)
    assert random_offline_graph(p, 42) == random_offline_graph(p, 42)
    assert random_offline_graph(p, 42) != random_offline_graph(p, 43)


def test_generated_shape_n2k1c2():
    g = random_offline_graph(OfflineParams(2, 1, 2), 5)
    assert g.right_size == 8
    assert g.left_size == 4
    assert all(g.degree_of(v) == 4 for v in range(4))


def test_generation_limit_guard():
    with pytest.raises(LimitExceeded):
        random_offline_graph(OfflineParams(4, 1, 2), 1, limits=Limits(gen_edges=10))


def test_params_validation():
    with pytest.raises(ValueError):
        OfflineParams(2, 3, 2)
    with pytest.raises(ValueError):
        OfflineParams(2, 0, 2)
    with pytest.raises(ValueError):
        OfflineParams(2, 1, 0)


def test_hall_failure_frequency_within_union_bound():
    p = OfflineParams(2, 1, 2)
    trials = 200
    failures = sum(
        1 for seed in range(trials)
        if hall_check(random_offline_graph(p, seed), 2) is not None)
    bound = float(series_bound(2, 1, 2))
    sigma = math.sqrt(bound * (1 - bound) / trials)
    assert failures / trials <= bound + 3 * sigma


def test_construct_verified_small():
    g, attempts = construct_verified_offline_graph(OfflineParams(2, 1, 2), 7)
    assert attempts >= 1
    assert hall_check(g, 2) is None


def test_construct_verified_n3k2():
    g, attempts = construct_verified_offline_graph(OfflineParams(3, 2, 2), 7)
    assert hall_check(g, 4) is None
    assert g.right_size == 4 * 9


def test_construct_zero_attempts_rejected():
    with pytest.raises(ValueError):
        construct_verified_offline_graph(OfflineParams(2, 1, 2), 7, max_attempts=0)
