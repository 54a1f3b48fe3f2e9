import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graph_and_perm, graphs
from extremal_ga.errors import DomainError, FormatError, ParameterError, SelectionError
from extremal_ga.generators import gen_random, make_named
from extremal_ga.graph import Encoding, Graph, Scheme, are_isomorphic_small, encode, new_graph, permute
from extremal_ga.objective import parse_objective
from extremal_ga.operators import (Selection, align, crossover_align_greedy, crossover_align_kpoint,
                                   crossover_kpoint, elimination_ranking, match_count, select)


class FixedDraw(random.Random):
    """A stream whose ``random()`` returns a fixed value."""

    def __init__(self, value):
        super().__init__(0)
        self.value = value

    def random(self):
        return self.value


# -- selection ---------------------------------------------------------------

def test_roulette_shift_example(rng):
    picks = select(Selection("roulette"), [1, 0, 0], 500, rng)
    assert set(picks) == {0}


def test_roulette_negative_fitness_shift(rng):
    picks = select(Selection("roulette"), [-3, -1, -1], 3000, rng)
    c = Counter(picks)
    assert c[0] == 0 and abs(c[1] - 1500) < 150


def test_sus_example():
    assert select(Selection("sus"), [3, 1], 2, FixedDraw(0.25)) == [0, 0]
    assert select(Selection("sus"), [3, 1], 2, FixedDraw(0.75)) == [0, 1]
    # pointer offset is uniform on [0, 2): outcomes split at 1
    outcomes = Counter(tuple(select(Selection("sus"), [3, 1], 2, random.Random(s))) for s in range(4000))
    assert set(outcomes) == {(0, 0), (0, 1)}
    assert abs(outcomes[(0, 0)] / 4000 - 0.5) < 0.04


def test_sus_low_variance(rng):
    fits = [5, 3, 2]
    for _ in range(50):
        c = Counter(select(Selection("sus"), fits, 10, rng))
        assert c[0] == 5 and c[1] == 3 and c[2] == 2


def test_tournament_examples(rng):
    fits = [1, 7, 3, 7, 2]
    assert set(select(Selection("tournament", 5), fits, 50, rng)) == {1}
    assert set(select(Selection("tournament", 99), fits, 50, rng)) == {1}
    c = Counter(select(Selection("tournament", 1), fits, 5000, rng))
    assert all(abs(c[i] - 1000) < 150 for i in range(5))


def test_elimination_ranking(rng):
    fits = [4, 9, 1, 7, 3, 8, 2]
    ranking = elimination_ranking(fits, rng)
    assert sorted(ranking) == list(range(7))
    assert ranking[0] == 1
    assert select(Selection("elimination"), fits, 1, rng) == [1]
    picks = select(Selection("elimination"), fits, 10, rng)
    assert len(picks) == 10 and picks[0] == 1


def test_selection_infinite_fitness(rng):
    fits = [-math.inf, 2, -math.inf, 1]
    for kind in ("roulette", "sus", "tournament", "elimination"):
        picks = select(Selection(kind, 3), fits, 40, rng)
        assert all(fits[i] != -math.inf for i in picks), kind
    with pytest.raises(SelectionError):
        select(Selection("sus"), [-math.inf, -math.inf], 2, rng)
    with pytest.raises(ParameterError):
        select(Selection("sus"), [1, 2], 0, rng)


def test_all_equal_is_uniform(rng):
    c = Counter(select(Selection("roulette"), [0, 0, 0, 0], 4000, rng))
    assert all(abs(c[i] - 1000) < 150 for i in range(4))


@settings(max_examples=100)
@given(st.lists(st.one_of(st.integers(-50, 50), st.just(-math.inf)), min_size=1, max_size=12),
       st.integers(1, 30), st.sampled_from(["roulette", "sus", "tournament:3", "elimination"]),
       st.integers(0, 2 ** 32))
def test_selection_properties(fits, quota, method, seed):
    if all(f == -math.inf for f in fits):
        return
    picks = select(Selection.parse(method), fits, quota, random.Random(seed))
    assert len(picks) == quota
    assert all(0 <= i < len(fits) and fits[i] != -math.inf for i in picks)


def test_selection_parse():
    assert Selection.parse("tournament:4") == Selection("tournament", 4)
    assert str(Selection.parse("tournament:4")) == "tournament:4"
    assert Selection.parse("rw").kind == "roulette"
    with pytest.raises(ParameterError):
        Selection.parse("best")
    with pytest.raises(ParameterError):
        Selection("tournament", 0)


# -- alignment ---------------------------------------------------------------

def test_align_examples():
    c5 = make_named("cycle", 5, directed=True)
    b, score = align(c5, c5)
    assert b == c5 and score == 25
    a = Graph.from_arcs(3, [(0, 1), (1, 2)])
    b = Graph.from_arcs(3, [(2, 1), (1, 0)])
    out, score = align(a, b)
    assert score == 9 and out == a
    with pytest.raises(DomainError):
        align(c5, make_named("cycle", 4, directed=True))
    with pytest.raises(DomainError):
        align(make_named("cycle", 5), c5)


@settings(max_examples=200)
@given(st.data())
def test_align_properties(data):
    a = data.draw(graphs(min_n=2, max_n=8))
    b = data.draw(graphs(min_n=a.n, max_n=a.n, directed=a.directed))
    out, score = align(a, b)
    assert are_isomorphic_small(out, b)
    assert score == match_count(a, out) >= match_count(a, b)
    assert match_count(a, a) == a.n * a.n


@given(graph_and_perm(min_n=2, max_n=8))
def test_align_self_permutation_never_decreases(gp):
    g, p = gp
    h = permute(g, p)
    out, score = align(g, h)
    assert score >= match_count(g, h)
    assert out.size == g.size


def test_align_is_local_optimum(rng):
    from extremal_ga.graph import permute as perm
    for a, b in zip(gen_random(7, True, 30, rng), gen_random(7, True, 30, rng)):
        out, score = align(a, b)
        for i in range(7):
            for j in range(i + 1, 7):
                p = list(range(7))
                p[i], p[j] = j, i
                assert match_count(a, perm(out, p)) <= score


# -- crossover ---------------------------------------------------------------

def _enc(bits):
    n = 3  # 6 directed slots
    return Encoding(tuple(bits), n, True, Scheme.RAW, tuple(range(n)))


def test_kpoint_examples(rng):
    z, o = _enc([0] * 6), _enc([1] * 6)
    c1, c2 = crossover_kpoint(z, o, 1, rng, cuts=[3])
    assert c1.bits == (0, 0, 0, 1, 1, 1) and c2.bits == (1, 1, 1, 0, 0, 0)
    c1, c2 = crossover_kpoint(z, o, 2, rng, cuts=[2, 4])
    assert c1.bits == (0, 0, 1, 1, 0, 0) and c2.bits == (1, 1, 0, 0, 1, 1)
    e = _enc([1, 0, 1, 1, 0, 0])
    assert crossover_kpoint(e, e, 3, rng) == (e, e)


def test_kpoint_errors(rng):
    z = _enc([0] * 6)
    with pytest.raises(ParameterError):
        crossover_kpoint(z, z, 6, rng)
    with pytest.raises(ParameterError):
        crossover_kpoint(z, z, 0, rng)
    with pytest.raises(FormatError):
        crossover_kpoint(z, encode(new_graph(4, True)), 1, rng)
    with pytest.raises(ParameterError):
        crossover_kpoint(z, z, 2, rng, cuts=[3, 3])


@settings(max_examples=200)
@given(st.integers(2, 40), st.integers(0, 2 ** 32), st.data())
def test_kpoint_reconstruction(length, seed, data):
    k = data.draw(st.integers(1, length - 1))
    a = tuple(data.draw(st.lists(st.integers(0, 1), min_size=length, max_size=length)))
    b = tuple(data.draw(st.lists(st.integers(0, 1), min_size=length, max_size=length)))
    ea = Encoding(a, 1, True, Scheme.RAW, (0,))
    eb = Encoding(b, 1, True, Scheme.RAW, (0,))
    c1, c2 = crossover_kpoint(ea, eb, k, random.Random(seed))
    assert len(c1.bits) == len(c2.bits) == length
    # at every position the children hold the two parent bits, one each
    for x, y, p, q in zip(c1.bits, c2.bits, a, b):
        assert {x, y} == {p, q} or (x == y == p == q)
    switches = sum(1 for i in range(1, length) if (c1.bits[i] == a[i]) != (c1.bits[i - 1] == a[i - 1])
                   and a[i] != b[i] and a[i - 1] != b[i - 1])
    assert switches <= k


def test_align_kpoint_examples(rng):
    c5 = make_named("cycle", 5, directed=True)
    for scheme in Scheme:
        a, b = crossover_align_kpoint(c5, c5, 2, rng, scheme)
        assert are_isomorphic_small(a, c5) and are_isomorphic_small(b, c5)
    shuffled = permute(c5, [3, 0, 4, 1, 2])
    for _ in range(20):
        if align(c5, shuffled)[1] == 25:
            a, b = crossover_align_kpoint(c5, shuffled, 2, rng)
            assert a == c5 and b == c5


@settings(max_examples=100)
@given(st.data(), st.sampled_from(list(Scheme)), st.booleans(), st.integers(0, 2 ** 32))
def test_align_kpoint_children_valid(data, scheme, aligned, seed):
    a = data.draw(graphs(min_n=2, max_n=8))
    b = data.draw(graphs(min_n=a.n, max_n=a.n, directed=a.directed))
    c1, c2 = crossover_align_kpoint(a, b, 2, random.Random(seed), scheme, aligned=aligned)
    for c in (c1, c2):
        assert c.n == a.n and c.directed == a.directed
        # immutability checks run in the constructor; the sum of sizes is preserved
    assert c1.size + c2.size == a.size + (align(a, b)[0] if aligned else b).size


def test_align_greedy_examples():
    spec = parse_objective("size(G)")
    c5 = make_named("cycle", 5, directed=True)
    assert crossover_align_greedy(c5, c5, spec) == c5
    k5 = make_named("complete", 5, directed=True)
    assert crossover_align_greedy(k5, new_graph(5, True), spec) == k5
    assert crossover_align_greedy(new_graph(5, True), k5, spec) == k5
    eq3 = parse_objective("(1 / scc(G)) * diameter(repair(G))")
    rng = random.Random(3)
    for a, b in zip(gen_random(6, True, 20, rng, p=0.3), gen_random(6, True, 20, rng, p=0.3)):
        child = crossover_align_greedy(a, b, eq3)
        assert child.n == 6 and child.directed
