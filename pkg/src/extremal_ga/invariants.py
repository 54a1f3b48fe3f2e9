"""Graph invariants and minimum strong-connectivity augmentation.

Distances are computed by breadth-first search on bit masks, so a whole
BFS layer is expanded with a handful of integer ORs.  Undirected graphs go
through the same code paths because their rows are symmetric.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import DomainError
from .graph import Graph, bit_count, iter_bits

INF = math.inf

MAX_REPAIR_ORDERINGS = 120


def degree_sequence(g: Graph) -> list[tuple[int, int]]:
    """Per-vertex ``(out_degree, in_degree)``; both equal the degree when undirected."""
    return [(bit_count(r), bit_count(c)) for r, c in zip(g.rows, g.columns)]


def _bfs(rows, source):
    """Return (eccentricity, sum of distances, reached mask) from ``source``."""
    visited = frontier = 1 << source
    depth = total = 0
    while True:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= rows[low.bit_length() - 1]
            frontier ^= low
        nxt &= ~visited
        if not nxt:
            return depth, total, visited
        depth += 1
        total += depth * nxt.bit_count()
        visited |= nxt
        frontier = nxt


def all_pairs_distances(g: Graph) -> list[list[float]]:
    n = g.n
    dist = [[INF] * n for _ in range(n)]
    for s in range(n):
        row = dist[s]
        row[s] = 0
        visited = frontier = 1 << s
        depth = 0
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.rows[v]
            nxt &= ~visited
            depth += 1
            for v in iter_bits(nxt):
                row[v] = depth
            visited |= nxt
            frontier = nxt
    return dist


def diameter(g: Graph):
    """Largest distance over ordered pairs; ``INF`` when some pair is unreachable."""
    full = (1 << g.n) - 1
    best = 0
    for s in range(g.n):
        ecc, _, reached = _bfs(g.rows, s)
        if reached != full:
            return INF
        if ecc > best:
            best = ecc
    return best


def average_distance(g: Graph):
    """Exact mean distance over ordered pairs ``u != v`` as a Fraction, or ``INF``."""
    n = g.n
    if n == 1:
        return Fraction(0)
    full = (1 << n) - 1
    total = 0
    for s in range(n):
        _, t, reached = _bfs(g.rows, s)
        if reached != full:
            return INF
        total += t
    return Fraction(total, n * (n - 1))


def irregularity(g: Graph) -> int:
    if g.directed:
        raise DomainError("irregularity is defined for undirected graphs only")
    deg = [bit_count(r) for r in g.rows]
    return sum(abs(deg[u] - deg[v]) for u, v in g.arcs())


def _reach_masks(rows, n):
    return [_bfs(rows, s)[2] for s in range(n)]


def scc_components(g: Graph) -> list[frozenset[int]]:
    """Strongly connected (or connected, when undirected) components.

    Components are listed by their smallest vertex.
    """
    n = g.n
    fwd = _reach_masks(g.rows, n)
    bwd = fwd if not g.directed else _reach_masks(g.columns, n)
    seen = 0
    comps = []
    for v in range(n):
        if seen >> v & 1:
            continue
        mask = fwd[v] & bwd[v]
        seen |= mask
        comps.append(frozenset(iter_bits(mask)))
    return comps


def scc_count(g: Graph) -> int:
    return len(scc_components(g))


def _condensation(g: Graph):
    comps = scc_components(g)
    comp_of = [0] * g.n
    for i, c in enumerate(comps):
        for v in c:
            comp_of[v] = i
    k = len(comps)
    succ = [set() for _ in range(k)]
    pred = [set() for _ in range(k)]
    for u, row in enumerate(g.rows):
        cu = comp_of[u]
        for v in iter_bits(row):
            cv = comp_of[v]
            if cu != cv:
                succ[cu].add(cv)
                pred[cv].add(cu)
    return comps, succ, pred


def _match_sources(sources, succ, sink_set):
    """Greedy source-to-sink pairing with global visit marks."""
    visited = set()
    matched_src, matched_snk = [], []
    for s in sources:
        found = None
        stack = [s]
        while stack and found is None:
            x = stack.pop()
            if x in visited:
                continue
            visited.add(x)
            if x in sink_set:
                found = x
                break
            stack.extend(sorted(succ[x], reverse=True))
        if found is not None:
            matched_src.append(s)
            matched_snk.append(found)
    return matched_src, matched_snk


def _augmentation(succ, pred, k, source_order=None):
    """Condensation arcs (from_comp, to_comp) making the DAG strongly connected."""
    if k == 1:
        return []
    isolated = [c for c in range(k) if not succ[c] and not pred[c]]
    srcs = [c for c in range(k) if not pred[c] and succ[c]]
    snks = [c for c in range(k) if not succ[c] and pred[c]]
    flipped = len(srcs) > len(snks)
    if flipped:
        succ, pred = pred, succ
        srcs, snks = snks, srcs
    if source_order is not None:
        srcs = [srcs[i] for i in source_order]
    arcs = []
    if not srcs:
        ring = isolated
        arcs = [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
    else:
        msrc, msnk = _match_sources(srcs, succ, set(snks))
        p = len(msrc)
        v = msrc + [c for c in srcs if c not in msrc]
        w = msnk + [c for c in snks if c not in msnk]
        s, t = len(v), len(w)
        arcs.extend((w[i], v[i + 1]) for i in range(p - 1))
        arcs.extend((w[i], v[i]) for i in range(p, s))
        chain = w[s:] + isolated
        prev = w[p - 1]
        for c in chain:
            arcs.append((prev, c))
            prev = c
        arcs.append((prev, v[0]))
        assert len(arcs) == t + len(isolated)
    if flipped:
        arcs = [(b, a) for a, b in arcs]
    return arcs


def augmentation_size(g: Graph) -> int:
    """Minimum number of arcs whose addition makes ``g`` strongly connected."""
    comps, succ, pred = _condensation(g)
    k = len(comps)
    if k == 1:
        return 0
    sources = sum(1 for c in range(k) if not pred[c])
    sinks = sum(1 for c in range(k) if not succ[c])
    return max(sources, sinks)


def repair_strong(g: Graph, mode: str = "chain") -> Graph:
    """Add a minimum set of arcs so that ``g`` becomes strongly connected.

    ``mode="chain"`` is deterministic and cheap.  ``mode="max-diameter"``
    tries several source orderings (all of them when there are at most five
    sources) and keeps the augmentation with the largest diameter.
    """
    if not g.directed:
        raise DomainError("strong-connectivity repair needs a directed graph")
    comps, succ, pred = _condensation(g)
    k = len(comps)
    if k == 1:
        return g
    reps = [min(c) for c in comps]

    def build(order):
        rows = list(g.rows)
        for a, b in _augmentation(succ, pred, k, order):
            rows[reps[a]] |= 1 << reps[b]
        return Graph(g.n, True, tuple(rows))

    if mode == "chain":
        return build(None)
    if mode != "max-diameter":
        raise ValueError(f"unknown repair mode {mode!r}")
    n_src = sum(1 for c in range(k) if not pred[c] and succ[c])
    n_snk = sum(1 for c in range(k) if not succ[c] and pred[c])
    m = min(n_src, n_snk)
    best, best_d = None, -1
    for order in itertools.islice(itertools.permutations(range(m)), MAX_REPAIR_ORDERINGS):
        cand = build(order)
        d = diameter(cand)
        if d > best_d:
            best, best_d = cand, d
    return best
