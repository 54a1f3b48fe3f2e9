import itertools
import random
from fractions import Fraction

import pytest

from extremal_ga.errors import CapabilityError
from extremal_ga.generators import complete_split, make_named
from extremal_ga.graph import Graph, are_isomorphic_small, permute
from extremal_ga.invariants import diameter, irregularity, scc_count
from extremal_ga.objective import parse_objective, template
from extremal_ga.oracle import (brute_force_optimum, canonical_code, canonical_form, class_count,
                                enumerate_graphs, has_backward_hamiltonian_path, irregularity_splits,
                                known_optimum)

DIRECTED_COUNTS = [1, 1, 3, 16, 218]
UNDIRECTED_COUNTS = [1, 1, 2, 4, 11, 34, 156, 1044]


def _labeled(n, directed):
    slots = [(u, v) for u in range(n) for v in range(n) if u != v and (directed or u < v)]
    for mask in range(1 << len(slots)):
        yield Graph.from_arcs(n, [s for k, s in enumerate(slots) if mask >> k & 1], directed=directed)


def _naive_classes(n, directed):
    # canonical key: lexicographically smallest row-major matrix over all relabelings
    keys = set()
    for g in _labeled(n, directed):
        best = None
        for p in itertools.permutations(range(n)):
            inv = [0] * n
            for i, v in enumerate(p):
                inv[v] = i
            key = tuple(int(g.has_arc(inv[a], inv[b])) for a in range(n) for b in range(n))
            if best is None or key < best:
                best = key
        keys.add(best)
    return len(keys)


def test_class_count_examples():
    assert len(list(enumerate_graphs(1, True))) == 1
    assert len(list(enumerate_graphs(3, True))) == 16
    assert len(list(enumerate_graphs(4, False))) == 11


@pytest.mark.parametrize("n", range(1, 5))
def test_directed_counts(n):
    assert class_count(n, True) == DIRECTED_COUNTS[n]


@pytest.mark.parametrize("n", range(1, 8))
def test_undirected_counts(n):
    assert class_count(n, False) == UNDIRECTED_COUNTS[n]


def test_counts_against_naive_canonical_filter():
    for n in range(1, 4):
        assert _naive_classes(n, True) == class_count(n, True)
    for n in range(1, 6):
        assert _naive_classes(n, False) == class_count(n, False)


def test_representatives_pairwise_nonisomorphic():
    for n, directed in ((4, True), (5, False)):
        reps = list(enumerate_graphs(n, directed))
        codes = {canonical_code(g) for g in reps}
        assert len(codes) == len(reps)
        assert all(canonical_form(g) == g for g in reps)
        for a, b in itertools.combinations(reps[:40], 2):
            assert not are_isomorphic_small(a, b)


def test_canonical_form_invariant_under_relabeling():
    rng = random.Random(5)
    for g in list(enumerate_graphs(4, True))[::7] + list(enumerate_graphs(6, False))[::9]:
        p = list(range(g.n))
        rng.shuffle(p)
        assert canonical_code(permute(g, p)) == canonical_code(g)


def test_caps():
    with pytest.raises(CapabilityError):
        list(enumerate_graphs(5, True))
    with pytest.raises(CapabilityError):
        class_count(8, False)
    with pytest.raises(CapabilityError):
        brute_force_optimum(parse_objective("size(G)"), 5, True)


def test_diameter_maximizers_n4():
    spec, _ = template("diameter")
    value, arg = brute_force_optimum(spec, 4, True)
    assert value == 3 and arg
    for g in arg:
        assert scc_count(g) == 1 and diameter(g) == 3
        assert has_backward_hamiltonian_path(g)


def test_backward_path_characterizes_diameter():
    # strongly connected digraphs of diameter n-1 are exactly those with such a path
    for n in range(2, 5):
        for g in enumerate_graphs(n, True):
            if scc_count(g) == 1:
                assert (diameter(g) == n - 1) == has_backward_hamiltonian_path(g)


def test_mu_unique_c4():
    spec, _ = template("avg-distance")
    value, arg = brute_force_optimum(spec, 4, True)
    assert value == 2
    assert len(arg) == 1 and are_isomorphic_small(arg[0], make_named("cycle", 4, directed=True))


def test_irregularity_n5_maximizers():
    spec, _ = template("irregularity")
    value, arg = brute_force_optimum(spec, 5, False)
    assert value == 12
    assert any(are_isomorphic_small(g, complete_split(1, 4)) for g in arg)
    # KS_{2,3} ties with the star
    assert len(arg) == 2 and any(are_isomorphic_small(g, complete_split(2, 3)) for g in arg)


def test_known_optimum_examples():
    assert known_optimum("diameter", 10).value == 9
    assert known_optimum("diameter_directed", 10).value == 9
    assert known_optimum("avg-distance", 10).value == 5
    assert known_optimum("avg-distance", 7).value == Fraction(7, 2)
    with pytest.raises(KeyError):
        known_optimum("girth", 5)
    with pytest.raises(ValueError):
        known_optimum("diameter", 2)


def test_known_optimum_matches_brute_force():
    for n in range(3, 5):
        for problem in ("diameter", "avg-distance"):
            spec, directed = template(problem)
            value, arg = brute_force_optimum(spec, n, directed)
            rec = known_optimum(problem, n)
            assert value == rec.value
            assert any(are_isomorphic_small(g, rec.extremal) for g in arg)
    spec, _ = template("irregularity")
    for n in range(3, 8):
        value, arg = brute_force_optimum(spec, n, False)
        rec = known_optimum("irregularity", n)
        assert value == rec.value, n
        assert all(irregularity(g) == value for g in rec.extremal_set)
        for g in arg:
            assert any(are_isomorphic_small(g, h) for h in rec.extremal_set), n
        assert len(arg) == len(rec.extremal_set)


def test_irregularity_family_maximum():
    # the record is the best complete split graph; check against a direct scan of the family
    for n in range(3, 21):
        direct = max(irregularity(complete_split(k, n - k)) for k in range(n + 1))
        assert known_optimum("irregularity", n).value == direct
        for k, l in irregularity_splits(n):
            assert irregularity(complete_split(k, l)) == direct
    assert known_optimum("irregularity", 10).value == 126
    assert irregularity(complete_split(4, 6)) == 120
    assert irregularity_splits(10) == [(3, 7)]
    assert irregularity_splits(5) == [(1, 4), (2, 3)]
