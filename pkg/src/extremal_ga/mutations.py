"""The eight local graph mutations and mutation chaining.

Every scheme keeps the graph simple.  When a scheme has no applicable
site the input graph is returned unchanged and the ``applied`` flag is
False; a mutation never aborts a generation.

Undirected graphs use the same schemes on edges, except reversal which
is a no-op there.
"""

from __future__ import annotations

import enum
import random
from typing import Mapping, Sequence

from .graph import Graph, iter_bits


class MutationScheme(enum.Enum):
    ADD_EDGE = "add-edge"
    REMOVE_EDGE = "remove-edge"
    REVERSE_EDGE = "reverse-edge"
    ROTATE_EDGE = "rotate-edge"
    MOVE_EDGE = "move-edge"
    SHORTCUT = "shortcut"
    DETOUR = "detour"
    TWO_OPT = "two-opt"


def _arcs(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, row in enumerate(g.rows) for v in iter_bits(row)]


def _edges(g: Graph) -> list[tuple[int, int]]:
    """Arcs when directed, edges (u < v) when undirected."""
    return g.arcs()


def _absent(g: Graph) -> list[tuple[int, int]]:
    n = g.n
    out = []
    for u in range(n):
        row = g.rows[u]
        for v in range(u + 1 if not g.directed else 0, n):
            if v != u and not row >> v & 1:
                out.append((u, v))
    return out


def _edit(g: Graph, remove=(), add=()) -> Graph:
    rows = list(g.rows)
    for u, v in remove:
        rows[u] &= ~(1 << v)
        if not g.directed:
            rows[v] &= ~(1 << u)
    for u, v in add:
        rows[u] |= 1 << v
        if not g.directed:
            rows[v] |= 1 << u
    return Graph(g.n, g.directed, tuple(rows))


def apply_two_opt(g: Graph, first: tuple[int, int], second: tuple[int, int]) -> Graph:
    """Replace arcs (a, b), (c, d) by (a, d), (c, b)."""
    (a, b), (c, d) = first, second
    return _edit(g, remove=[first, second], add=[(a, d), (c, b)])


def _two_opt_ok(g: Graph, first, second) -> bool:
    (a, b), (c, d) = first, second
    if len({a, b, c, d}) < 4:
        return False
    return not g.rows[a] >> d & 1 and not g.rows[c] >> b & 1


def _two_opt_site(g: Graph, rng: random.Random):
    edges = _edges(g)
    if len(edges) < 2:
        return None
    if not g.directed:
        # both reconnections of an unordered edge pair are candidates
        pairs_of = lambda e, f: [(e, f), (e, (f[1], f[0]))]
    else:
        pairs_of = lambda e, f: [(e, f)]
    # rejection sampling keeps the draw uniform over valid sites
    for _ in range(32):
        i, j = rng.sample(range(len(edges)), 2)
        if i > j:
            i, j = j, i
        cand = rng.choice(pairs_of(edges[i], edges[j]))
        if _two_opt_ok(g, *cand):
            return cand
    valid = [
        cand
        for i in range(len(edges))
        for j in range(i + 1, len(edges))
        for cand in pairs_of(edges[i], edges[j])
        if _two_opt_ok(g, *cand)
    ]
    return rng.choice(valid) if valid else None


def mutate(g: Graph, scheme: MutationScheme, rng: random.Random) -> tuple[Graph, bool]:
    """Apply one instance of ``scheme``; returns ``(graph, applied)``."""
    n, rows = g.n, g.rows
    full = (1 << n) - 1

    if scheme is MutationScheme.ADD_EDGE:
        absent = _absent(g)
        if not absent:
            return g, False
        return _edit(g, add=[rng.choice(absent)]), True

    if scheme is MutationScheme.REMOVE_EDGE:
        edges = _edges(g)
        if not edges:
            return g, False
        return _edit(g, remove=[rng.choice(edges)]), True

    if scheme is MutationScheme.REVERSE_EDGE:
        if not g.directed:
            return g, False
        cands = [(u, v) for u, v in _arcs(g) if not rows[v] >> u & 1]
        if not cands:
            return g, False
        u, v = rng.choice(cands)
        return _edit(g, remove=[(u, v)], add=[(v, u)]), True

    if scheme is MutationScheme.ROTATE_EDGE:
        cands = []
        for u, v in _arcs(g):
            heads = full & ~rows[u] & ~(1 << u) & ~(1 << v)
            if heads:
                cands.append((u, v, heads))
        if not cands:
            return g, False
        u, v, heads = rng.choice(cands)
        w = rng.choice(list(iter_bits(heads)))
        return _edit(g, remove=[(u, v)], add=[(u, w)]), True

    if scheme is MutationScheme.MOVE_EDGE:
        edges = _edges(g)
        if not edges:
            return g, False
        gone = rng.choice(edges)
        absent = _absent(g)
        if not absent:
            return g, False
        arc = rng.choice(absent)
        return _edit(g, remove=[gone], add=[arc]), True

    if scheme is MutationScheme.SHORTCUT:
        cands = []
        for w in range(n):
            preds = g.columns[w]
            succs = rows[w]
            for u in iter_bits(preds):
                targets = succs & ~rows[u] & ~(1 << u)
                for v in iter_bits(targets):
                    if g.directed or u < v:
                        cands.append((u, w, v))
        if not cands:
            return g, False
        u, w, v = rng.choice(cands)
        return _edit(g, remove=[(u, w), (w, v)], add=[(u, v)]), True

    if scheme is MutationScheme.DETOUR:
        cands = []
        for u, v in _edges(g):
            mids = full & ~rows[u] & ~g.columns[v] & ~(1 << u) & ~(1 << v)
            if mids:
                cands.append((u, v, mids))
        if not cands:
            return g, False
        u, v, mids = rng.choice(cands)
        w = rng.choice(list(iter_bits(mids)))
        return _edit(g, remove=[(u, v)], add=[(u, w), (w, v)]), True

    if scheme is MutationScheme.TWO_OPT:
        site = _two_opt_site(g, rng)
        if site is None:
            return g, False
        return apply_two_opt(g, *site), True

    raise ValueError(f"unknown mutation scheme {scheme!r}")


def mutate_chain(
    g: Graph,
    schemes: Mapping[MutationScheme, float] | Sequence[MutationScheme],
    length: int,
    rng: random.Random,
) -> Graph:
    """Apply ``length`` independently drawn schemes one after the other."""
    if length < 1:
        raise ValueError("chain length must be >= 1")
    if isinstance(schemes, Mapping):
        names = list(schemes)
        weights = [schemes[s] for s in names]
    else:
        names, weights = list(schemes), None
    for _ in range(length):
        scheme = rng.choices(names, weights=weights)[0]
        g, _ = mutate(g, scheme, rng)
    return g
