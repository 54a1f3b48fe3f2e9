import itertools
import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import graphs
from extremal_ga.errors import DomainError
from extremal_ga.generators import complete_split, gen_random, make_named
from extremal_ga.graph import Graph, new_graph, permute
from extremal_ga.invariants import (INF, all_pairs_distances, augmentation_size, average_distance,
                                    degree_sequence, diameter, irregularity, repair_strong, scc_components,
                                    scc_count)
from extremal_ga.oracle import enumerate_graphs


def floyd_warshall(g):
    n = g.n
    d = [[0 if u == v else (1 if g.has_arc(u, v) else math.inf) for v in range(n)] for u in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def naive_average(g):
    d = floyd_warshall(g)
    pairs = [(u, v) for u in range(g.n) for v in range(g.n) if u != v]
    if not pairs:
        return 0
    if any(d[u][v] == math.inf for u, v in pairs):
        return math.inf
    return Fraction(sum(d[u][v] for u, v in pairs), len(pairs))


def naive_irregularity(g):
    deg = [sum(g.adjacency[u]) for u in range(g.n)]
    return sum(abs(deg[u] - deg[v]) for u, v in g.arcs())


def test_degree_sequence_examples():
    assert degree_sequence(Graph.from_arcs(2, [(0, 1), (1, 0)])) == [(1, 1), (1, 1)]
    assert [d for d, _ in degree_sequence(make_named("star", 5))] == [4, 1, 1, 1, 1]
    assert degree_sequence(new_graph(4, True)) == [(0, 0)] * 4


@given(graphs(max_n=8))
def test_degree_sum_law(g):
    seq = degree_sequence(g)
    total = sum(o for o, _ in seq)
    assert total == (g.size if g.directed else 2 * g.size)
    assert total == sum(i for _, i in seq)


def test_distance_examples():
    c5 = make_named("cycle", 5, directed=True)
    d = all_pairs_distances(c5)
    assert d[0][4] == 4 and d[4][0] == 1
    k4 = make_named("complete", 4, directed=True)
    assert all(all_pairs_distances(k4)[u][v] == 1 for u in range(4) for v in range(4) if u != v)
    two = new_graph(2, True)
    assert all_pairs_distances(two)[0][1] == INF and all_pairs_distances(two)[1][0] == INF


def test_diameter_examples():
    for n in range(2, 12):
        assert diameter(make_named("cycle", n, directed=True)) == n - 1
        assert diameter(make_named("complete", n, directed=True)) == 1
        assert diameter(make_named("complete", n)) == 1
    assert diameter(new_graph(1, True)) == 0
    assert diameter(make_named("path", 4, directed=True)) == INF
    # hamiltonian path plus back arcs only: strongly connected and diameter n-1
    g = Graph.from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (3, 1), (2, 0)])
    assert scc_count(g) == 1 and diameter(g) == 4


def test_average_distance_examples():
    for n in range(2, 12):
        assert average_distance(make_named("cycle", n, directed=True)) == Fraction(n, 2)
        assert average_distance(make_named("complete", n)) == 1
    assert average_distance(make_named("cycle", 4, directed=True)) == 2
    assert isinstance(average_distance(make_named("cycle", 5, directed=True)), Fraction)
    assert average_distance(new_graph(3, True)) == INF


def test_irregularity_examples():
    for n in range(3, 9):
        assert irregularity(make_named("cycle", n)) == 0
        assert irregularity(make_named("complete", n)) == 0
    assert irregularity(make_named("star", 5)) == 12
    assert irregularity(complete_split(2, 4)) == 24
    with pytest.raises(DomainError):
        irregularity(make_named("cycle", 3, directed=True))


def test_scc_examples():
    assert scc_count(make_named("cycle", 5, directed=True)) == 1
    assert scc_count(new_graph(3, True)) == 3
    assert scc_count(make_named("path", 3, directed=True)) == 3
    assert scc_count(Graph.from_arcs(5, [(0, 1), (3, 4)], directed=False)) == 3
    g = Graph.from_arcs(5, [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2), (1, 2)])
    assert scc_components(g) == [frozenset({0, 1}), frozenset({2, 3, 4})]


@given(graphs(max_n=8))
def test_scc_against_networkx(g):
    G = nx.DiGraph() if g.directed else nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.arcs())
    parts = nx.strongly_connected_components(G) if g.directed else nx.connected_components(G)
    assert sorted(map(frozenset, parts), key=min) == scc_components(g)


def test_distances_match_floyd_warshall_exhaustive():
    for directed, cap in ((True, 4), (False, 5)):
        for n in range(1, cap + 1):
            for g in enumerate_graphs(n, directed):
                for h in (g, permute(g, tuple(reversed(range(n))))):
                    assert all_pairs_distances(h) == floyd_warshall(h)
                    assert average_distance(h) == naive_average(h)
                    finite = [x for row in floyd_warshall(h) for x in row]
                    assert diameter(h) == max(finite)
                    if not directed:
                        assert irregularity(h) == naive_irregularity(h)


@given(graphs(max_n=8))
def test_diameter_bounds(g):
    d = diameter(g)
    if d != INF:
        assert d <= g.n - 1
        assert average_distance(g) <= d


def test_irregularity_upper_bound_exhaustive():
    for n in range(1, 8):
        for g in enumerate_graphs(n, False):
            assert 27 * irregularity(g) <= 4 * n ** 3


def test_invariants_permutation_invariant():
    rng = random.Random(99)
    for _ in range(1000):
        n = rng.randint(1, 9)
        directed = rng.random() < 0.6
        g = gen_random(n, directed, 1, rng, p=rng.choice([0.2, 0.4, 0.6]))[0]
        p = list(range(n))
        rng.shuffle(p)
        h = permute(g, p)
        assert diameter(h) == diameter(g)
        assert average_distance(h) == average_distance(g)
        assert scc_count(h) == scc_count(g)
        assert sorted(degree_sequence(h)) == sorted(degree_sequence(g))
        assert augmentation_size(h) == augmentation_size(g)
        if not directed:
            assert irregularity(h) == irregularity(g)


# -- repair -----------------------------------------------------------------

def test_repair_examples():
    c5 = make_named("cycle", 5, directed=True)
    assert repair_strong(c5) == c5
    path = make_named("path", 5, directed=True)
    r = repair_strong(path)
    assert set(r.arcs()) - set(path.arcs()) == {(4, 0)}
    assert diameter(r) == 4
    empty = new_graph(3, True)
    r = repair_strong(empty)
    assert r.size == 3 and scc_count(r) == 1
    assert degree_sequence(r) == [(1, 1)] * 3
    assert repair_strong(new_graph(1, True)) == new_graph(1, True)
    with pytest.raises(DomainError):
        repair_strong(make_named("path", 3))


def test_repair_two_crossing_arcs():
    # sources {0}, {1}; sinks {2}, {3}: two added arcs must merge everything
    g = Graph.from_arcs(4, [(0, 3), (1, 2)])
    r = repair_strong(g)
    assert r.size == g.size + 2 and scc_count(r) == 1


def _brute_force_min_augmentation(g):
    absent = [(u, v) for u in range(g.n) for v in range(g.n) if u != v and not g.has_arc(u, v)]
    for k in range(len(absent) + 1):
        for extra in itertools.combinations(absent, k):
            h = Graph.from_arcs(g.n, g.arcs() + list(extra))
            if scc_count(h) == 1:
                return k
    raise AssertionError("unreachable")


def test_repair_minimality_exhaustive():
    # minimum over all arc additions, per isomorphism class, n <= 4
    for n in range(1, 5):
        for g in enumerate_graphs(n, True):
            assert augmentation_size(g) == _brute_force_min_augmentation(g), g


def test_repair_count_all_labeled_small():
    for n in range(1, 5):
        slots = [(u, v) for u in range(n) for v in range(n) if u != v]
        for mask in range(1 << len(slots)):
            g = Graph.from_arcs(n, [s for k, s in enumerate(slots) if mask >> k & 1])
            for mode in ("chain", "max-diameter"):
                r = repair_strong(g, mode)
                assert scc_count(r) == 1
                assert set(g.arcs()) <= set(r.arcs())
                assert r.size - g.size == augmentation_size(g)


@settings(max_examples=300)
@given(graphs(min_n=2, max_n=14, directed=True))
def test_repair_property_random(g):
    r = repair_strong(g)
    assert scc_count(r) == 1
    assert set(g.arcs()) <= set(r.arcs())
    assert r.size - g.size == augmentation_size(g)
    assert repair_strong(g) == r


def test_max_diameter_repair_never_worse():
    rng = random.Random(3)
    for g in gen_random(7, True, 200, rng, p=0.15):
        assert diameter(repair_strong(g, "max-diameter")) >= diameter(repair_strong(g))
