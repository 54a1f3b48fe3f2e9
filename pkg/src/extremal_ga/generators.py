"""Initial-population generators and the builtin catalog of named graphs."""

from __future__ import annotations

import math
import random
from typing import Sequence

from .errors import GenerationError, ParameterError, SizeError
from .graph import MAX_ORDER, Graph, encoding_length, new_graph

# Unlabeled graphs of order n counted by size (arcs or edges).  Computed
# with Burnside's lemma over the vertex permutations; tests recompute the
# rows and also check n <= 4 against exhaustive enumeration.
DIGRAPH_SIZE_COUNTS = {
    1: [1],
    2: [1, 1, 1],
    3: [1, 1, 4, 4, 4, 1, 1],
    4: [1, 1, 5, 13, 27, 38, 48, 38, 27, 13, 5, 1, 1],
    5: [1, 1, 5, 16, 61, 154, 379, 707, 1155, 1490, 1670, 1490, 1155, 707, 379, 154, 61, 16, 5, 1, 1],
    6: [1, 1, 5, 17, 76, 288, 1043, 3242, 8951, 21209, 43863, 78814, 124115, 171024, 207362,
        220922, 207362, 171024, 124115, 78814, 43863, 21209, 8951, 3242, 1043, 288, 76, 17, 5, 1, 1],
}
GRAPH_SIZE_COUNTS = {
    1: [1],
    2: [1, 1],
    3: [1, 1, 1, 1],
    4: [1, 1, 2, 3, 2, 1, 1],
    5: [1, 1, 2, 4, 6, 6, 6, 4, 2, 1, 1],
    6: [1, 1, 2, 5, 9, 15, 21, 24, 24, 21, 15, 9, 5, 2, 1, 1],
}

GENERATOR_SCHEMES = ("random", "degree-sequence", "size-block")


def _check_count(count):
    if count < 1:
        raise ParameterError("count must be >= 1")


def gen_random(n: int, directed: bool, count: int, rng: random.Random, p: float = 0.5) -> list[Graph]:
    """Each potential arc present independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"arc probability must be in [0, 1], got {p}")
    _check_count(count)
    out = []
    for _ in range(count):
        rows = [0] * n
        for u in range(n):
            for v in range(n if directed else u):
                if u != v and rng.random() < p:
                    rows[u] |= 1 << v
                    if not directed:
                        rows[v] |= 1 << u
        out.append(Graph(n, directed, tuple(rows)))
    return out


def realize_degree_sequence(seq: Sequence, directed: bool = True) -> Graph | None:
    """Build a graph with the given degrees, or return None if none exists.

    Directed sequences are ``(out, in)`` pairs and use the Kleitman-Wang
    greedy: the vertex with the largest remaining out-degree sends arcs to
    the vertices with the largest remaining in-degree, ties preferring a
    larger remaining out-degree, then the lower index.  Undirected
    sequences are plain degrees and use Havel-Hakimi.
    """
    n = len(seq)
    if n == 0 or n > MAX_ORDER:
        raise SizeError(f"sequence length must be in [1, {MAX_ORDER}]")
    rows = [0] * n
    if directed:
        out = [int(a) for a, _ in seq]
        inn = [int(b) for _, b in seq]
        if min(out + inn) < 0 or max(out + inn) > n - 1 or sum(out) != sum(inn):
            return None
        while True:
            active = [v for v in range(n) if out[v] > 0]
            if not active:
                break
            v = min(active, key=lambda x: (-out[x], -inn[x], x))
            k, out[v] = out[v], 0
            targets = sorted((w for w in range(n) if w != v and inn[w] > 0), key=lambda w: (-inn[w], -out[w], w))
            if len(targets) < k:
                return None
            for w in targets[:k]:
                rows[v] |= 1 << w
                inn[w] -= 1
        if any(inn):
            return None
        return Graph(n, True, tuple(rows))
    deg = [int(d) for d in seq]
    if min(deg) < 0 or max(deg) > n - 1 or sum(deg) % 2:
        return None
    while True:
        active = [v for v in range(n) if deg[v] > 0]
        if not active:
            break
        v = min(active, key=lambda x: (-deg[x], x))
        k, deg[v] = deg[v], 0
        targets = sorted((w for w in range(n) if w != v and deg[w] > 0), key=lambda w: (-deg[w], w))
        if len(targets) < k:
            return None
        for w in targets[:k]:
            rows[v] |= 1 << w
            rows[w] |= 1 << v
            deg[w] -= 1
    return Graph(n, False, tuple(rows))


def _random_degree_sequence(n, directed, rng):
    if directed:
        out = [rng.randint(0, n - 1) for _ in range(n)]
        inn = [rng.randint(0, n - 1) for _ in range(n)]
        while sum(out) != sum(inn):
            side = out if sum(out) > sum(inn) else inn
            i = rng.choice([v for v in range(n) if side[v] > 0])
            side[i] -= 1
        return list(zip(out, inn))
    deg = [rng.randint(0, n - 1) for _ in range(n)]
    if sum(deg) % 2:
        i = rng.choice([v for v in range(n) if deg[v] > 0])
        deg[i] -= 1
    return deg


def gen_degree_sequence(n: int, directed: bool, count: int, rng: random.Random) -> list[Graph]:
    """Random degree sequences mapped to graphs; unrealizable draws are dropped."""
    _check_count(count)
    out = []
    for _ in range(count):
        for _attempt in range(1000 * n):
            g = realize_degree_sequence(_random_degree_sequence(n, directed, rng), directed)
            if g is not None:
                out.append(g)
                break
        else:
            raise GenerationError(f"no realizable degree sequence after {1000 * n} attempts")
    return out


def size_distribution(n: int, directed: bool) -> list[float]:
    """Weight per size 0..max; tabulated for n <= 6, binomial beyond."""
    table = DIGRAPH_SIZE_COUNTS if directed else GRAPH_SIZE_COUNTS
    if n in table:
        return [float(c) for c in table[n]]
    slots = encoding_length(n, directed)
    return [float(math.comb(slots, m)) for m in range(slots + 1)]


def _largest_remainder(weights, total):
    s = sum(weights)
    quotas = [w * total / s for w in weights]
    alloc = [int(q) for q in quotas]
    rest = total - sum(alloc)
    order = sorted(range(len(weights)), key=lambda i: (-(quotas[i] - alloc[i]), i))
    for i in order[:rest]:
        alloc[i] += 1
    return alloc


def block_sizes(n: int, directed: bool, count: int, ensure_cover: bool, rng: random.Random) -> list[int]:
    """Number of graphs to draw for each size m."""
    weights = size_distribution(n, directed)
    k = len(weights)
    if count < k:
        alloc = [0] * k
        for m in rng.choices(range(k), weights=weights, k=count):
            alloc[m] += 1
        return alloc
    if ensure_cover:
        return [1 + a for a in _largest_remainder(weights, count - k)]
    return _largest_remainder(weights, count)


def graph_of_size(n: int, directed: bool, m: int, rng: random.Random) -> Graph:
    """Uniform labeled graph with exactly ``m`` arcs."""
    slots = [(u, v) for u in range(n) for v in range(n) if u != v] if directed else \
        [(u, v) for u in range(n) for v in range(u + 1, n)]
    rows = [0] * n
    for u, v in rng.sample(slots, m):
        rows[u] |= 1 << v
        if not directed:
            rows[v] |= 1 << u
    return Graph(n, directed, tuple(rows))


def gen_size_blocks(n: int, directed: bool, count: int, rng: random.Random, ensure_cover: bool = True) -> list[Graph]:
    _check_count(count)
    out = []
    for m, k in enumerate(block_sizes(n, directed, count, ensure_cover, rng)):
        out.extend(graph_of_size(n, directed, m, rng) for _ in range(k))
    return out


# -- catalog -----------------------------------------------------------------

FAMILIES = ("complete", "cycle", "path", "star", "empty", "complete_split", "random_tree", "random_tournament")

CATALOG_ORDER = {
    True: ("cycle", "path", "complete", "star", "empty", "complete_split", "random_tree", "random_tournament"),
    False: ("cycle", "path", "complete", "star", "empty", "complete_split", "random_tree"),
}


def _prufer_tree(n, rng):
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    code = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in code:
        degree[x] += 1
    edges = []
    for x in code:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return edges


def make_named(family: str, n: int, directed: bool = False, k: int | None = None,
               rng: random.Random | None = None) -> Graph:
    """Named graph of order ``n``.

    ``complete_split`` needs ``k`` (the clique order); the independent set
    gets the remaining ``n - k`` vertices.  Directed cycles and paths use
    forward arcs ``i -> i+1``; other directed families carry both arcs of
    each edge, except ``random_tree`` (random orientation per edge) and
    ``random_tournament``.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown graph family {family!r}")
    if family == "random_tournament" and not directed:
        raise ParameterError("tournaments are directed")
    if family in ("random_tree", "random_tournament") and rng is None:
        rng = random.Random(0)
    g = new_graph(n, directed)
    if family == "empty":
        return g
    if family in ("cycle", "path"):
        last = n if family == "cycle" else n - 1
        if family == "cycle" and n < 3 and not directed:
            raise ParameterError("undirected cycles need n >= 3")
        arcs = {(i, (i + 1) % n) for i in range(last)} if n > 1 else set()
        return Graph.from_arcs(n, arcs, directed)
    if family == "complete":
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    elif family == "star":
        edges = [(0, v) for v in range(1, n)]
    elif family == "complete_split":
        if k is None or not 0 <= k <= n:
            raise ParameterError(f"complete_split needs 0 <= k <= n, got k={k}, n={n}")
        edges = [(u, v) for u in range(k) for v in range(u + 1, n)]
    elif family == "random_tree":
        edges = _prufer_tree(n, rng)
        if directed:
            return Graph.from_arcs(n, [(u, v) if rng.random() < 0.5 else (v, u) for u, v in edges], True)
        return Graph.from_arcs(n, edges, False)
    else:
        arcs = [(u, v) if rng.random() < 0.5 else (v, u) for u in range(n) for v in range(u + 1, n)]
        return Graph.from_arcs(n, arcs, True)
    if directed:
        edges = edges + [(v, u) for u, v in edges]
    return Graph.from_arcs(n, edges, directed)


def complete_split(k: int, l: int) -> Graph:
    return make_named("complete_split", k + l, directed=False, k=k)


def catalog(n: int, directed: bool, count: int, rng: random.Random) -> list[Graph]:
    """``count`` catalog graphs taken round-robin over the applicable families.

    Families that do not exist at order ``n`` are skipped.  The clique
    order of complete split graphs advances by one on each pass, from 1.
    """
    families = [f for f in CATALOG_ORDER[directed] if not (f == "cycle" and n < 3 and not directed)]
    out = []
    rounds = 0
    while len(out) < count:
        for family in families:
            if len(out) == count:
                break
            k = 1 + rounds % max(1, n - 1) if family == "complete_split" else None
            out.append(make_named(family, n, directed, k=k, rng=rng))
        rounds += 1
    return out


def generate(scheme: str, n: int, directed: bool, count: int, rng: random.Random, **kwargs) -> list[Graph]:
    if scheme == "random":
        return gen_random(n, directed, count, rng, p=kwargs.get("p", 0.5))
    if scheme == "degree-sequence":
        return gen_degree_sequence(n, directed, count, rng)
    if scheme == "size-block":
        return gen_size_blocks(n, directed, count, rng, ensure_cover=kwargs.get("ensure_cover", True))
    raise ParameterError(f"unknown generator scheme {scheme!r}; choose from {GENERATOR_SCHEMES}")


def seed_population(n: int, directed: bool, count: int, scheme: str, catalog_fraction: float,
                    rng: random.Random, **kwargs) -> list[Graph]:
    """Catalog graphs first, then the remainder from the random ``scheme``."""
    if not 0.0 <= catalog_fraction <= 1.0:
        raise ParameterError("catalog_fraction must be in [0, 1]")
    _check_count(count)
    k = math.ceil(catalog_fraction * count - 1e-9)
    out = catalog(n, directed, k, rng) if k else []
    if count - k:
        out.extend(generate(scheme, n, directed, count - k, rng, **kwargs))
    return out
