"""Exhaustive enumeration at small order and closed-form optima.

Isomorphism classes are enumerated by vertex augmentation: every graph of
order n arises from a representative of order n-1 plus one new vertex, so
only those extensions are canonicalized.  The canonical form of a graph is
its lexicographically smallest adjacency bit string over all vertex
permutations (row-major off-diagonal cells when directed, row-major upper
triangle when undirected); the minimum over all n! relabelings is taken in
one vectorized pass.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import CapabilityError
from .generators import complete_split, make_named
from .graph import Graph
from .invariants import irregularity
from .objective import ObjectiveSpec, evaluate

MAX_DIRECTED = 4
MAX_UNDIRECTED = 7


def _check_cap(n, directed):
    cap = MAX_DIRECTED if directed else MAX_UNDIRECTED
    if not 1 <= n <= cap:
        raise CapabilityError(f"exhaustive enumeration supports n <= {cap} for "
                              f"{'directed' if directed else 'undirected'} graphs")


@lru_cache(maxsize=None)
def _layout(n, directed):
    if directed:
        slots = [(u, v) for u in range(n) for v in range(n) if u != v]
    else:
        slots = [(u, v) for u in range(n) for v in range(u + 1, n)]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    us = np.array([u for u, _ in slots], dtype=np.int64)
    vs = np.array([v for _, v in slots], dtype=np.int64)
    # position (u, v) of the relabeled graph reads original cell (inv[u], inv[v])
    inv = np.argsort(perms, axis=1)
    src_u = inv[:, us]
    src_v = inv[:, vs]
    weights = np.array([1 << (len(slots) - 1 - k) for k in range(len(slots))], dtype=np.int64)
    return slots, src_u, src_v, weights


def canonical_code(g: Graph) -> int:
    """Smallest bit-string code over all relabelings (first cell is the most significant bit)."""
    slots, src_u, src_v, weights = _layout(g.n, g.directed)
    if not slots:
        return 0
    adj = np.array(g.adjacency, dtype=np.int64)
    codes = adj[src_u, src_v] @ weights
    return int(codes.min())


def graph_from_code(code: int, n: int, directed: bool) -> Graph:
    slots = _layout(n, directed)[0]
    L = len(slots)
    arcs = [s for k, s in enumerate(slots) if code >> (L - 1 - k) & 1]
    return Graph.from_arcs(n, arcs, directed)


def canonical_form(g: Graph) -> Graph:
    return graph_from_code(canonical_code(g), g.n, g.directed)


@lru_cache(maxsize=None)
def _class_codes(n: int, directed: bool) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    codes = set()
    prev = _class_codes(n - 1, directed)
    new = n - 1
    for code in prev:
        base = graph_from_code(code, n - 1, directed)
        rows = list(base.rows) + [0]
        if directed:
            for out_mask in range(1 << new):
                for in_mask in range(1 << new):
                    r = [row | ((in_mask >> u & 1) << new) for u, row in enumerate(rows[:-1])] + [out_mask]
                    codes.add(canonical_code(Graph(n, True, tuple(r))))
        else:
            for mask in range(1 << new):
                r = [row | ((mask >> u & 1) << new) for u, row in enumerate(rows[:-1])] + [mask]
                codes.add(canonical_code(Graph(n, False, tuple(r))))
    return tuple(sorted(codes))


def enumerate_graphs(n: int, directed: bool) -> Iterator[Graph]:
    """One canonical representative per isomorphism class, in increasing code order."""
    _check_cap(n, directed)
    for code in _class_codes(n, directed):
        yield graph_from_code(code, n, directed)


def class_count(n: int, directed: bool) -> int:
    _check_cap(n, directed)
    return len(_class_codes(n, directed))


def brute_force_optimum(spec: ObjectiveSpec, n: int, directed: bool) -> tuple[object, list[Graph]]:
    """Exact maximum of ``spec`` and every class representative attaining it."""
    best, arg = None, []
    for g in enumerate_graphs(n, directed):
        v = evaluate(spec, g).value
        if best is None or v > best:
            best, arg = v, [g]
        elif v == best:
            arg.append(g)
    return best, arg


@dataclass(frozen=True)
class OptimumRecord:
    problem: str
    n: int
    value: object
    description: str
    extremal: Graph
    extremal_set: tuple = ()

    def __post_init__(self):
        if not self.extremal_set:
            object.__setattr__(self, "extremal_set", (self.extremal,))


PROBLEMS = ("diameter", "avg-distance", "irregularity")

_ALIASES = {
    "diameter_directed": "diameter",
    "avg_distance_directed": "avg-distance",
    "avg_distance": "avg-distance",
    "irregularity_undirected": "irregularity",
}


def irregularity_splits(n: int) -> list[tuple[int, int]]:
    """Clique/independent-set orders (k, n-k) of the most irregular complete split graphs.

    ``irr(KS_{k,n-k}) = k (n-k) (n-1-k)``.  Several k can tie (n = 5 gives
    KS_{1,4} and KS_{2,3}).
    """
    scores = {k: k * (n - k) * (n - 1 - k) for k in range(n + 1)}
    top = max(scores.values())
    return [(k, n - k) for k in range(n + 1) if scores[k] == top]


def known_optimum(problem: str, n: int) -> OptimumRecord:
    problem = _ALIASES.get(problem, problem)
    if problem not in PROBLEMS:
        raise KeyError(f"unknown problem {problem!r}; choose from {PROBLEMS}")
    if n < 3:
        raise ValueError("known optima are tabulated for n >= 3")
    if problem == "diameter":
        return OptimumRecord(problem, n, n - 1,
                             "strongly connected digraphs with a hamiltonian path and no forward arc",
                             make_named("cycle", n, directed=True))
    if problem == "avg-distance":
        value = Fraction(n, 2)
        return OptimumRecord(problem, n, value.numerator if value.denominator == 1 else value,
                             "the directed cycle C_n only", make_named("cycle", n, directed=True))
    splits = irregularity_splits(n)
    g = complete_split(*splits[0])
    names = " or ".join(f"KS_{{{k},{l}}}" for k, l in splits)
    return OptimumRecord(problem, n, irregularity(g), f"complete split graphs {names}", g,
                         tuple(complete_split(k, l) for k, l in splits))


def has_backward_hamiltonian_path(g: Graph) -> bool:
    """True if some ordering v0..v(n-1) has all arcs v(i)->v(i+1) and no arc v(i)->v(j) with j > i+1."""
    n = g.n
    for order in itertools.permutations(range(n)):
        pos = {v: i for i, v in enumerate(order)}
        if not all(g.has_arc(order[i], order[i + 1]) for i in range(n - 1)):
            continue
        if all(pos[v] <= pos[u] + 1 for u, v in g.arcs()):
            return True
    return False
