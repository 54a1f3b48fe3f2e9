"""Immutable simple graphs over bit-packed adjacency rows.

A :class:`Graph` stores, for each vertex ``u``, an integer whose bit ``v``
is set when the arc ``u -> v`` exists.  Undirected graphs keep the rows
symmetric.  All edits return new values, so graphs can be shared freely
between parents and offspring in a population.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import (
    CapabilityError,
    FormatError,
    LoopError,
    PermutationError,
    SizeError,
    SubsetError,
    VertexError,
)

MAX_ORDER = 62
MAX_ISO_ORDER = 8


bit_count = int.bit_count


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    directed: bool
    rows: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ORDER:
            raise SizeError(f"order must be in [1, {MAX_ORDER}], got {self.n}")
        if len(self.rows) != self.n:
            raise SizeError("row count does not match order")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise VertexError(f"row {u} references a vertex >= n")
            if row >> u & 1:
                raise LoopError(f"loop at vertex {u}")
        if not self.directed:
            for u, row in enumerate(self.rows):
                for v in iter_bits(row):
                    if not self.rows[v] >> u & 1:
                        raise FormatError("undirected rows must be symmetric")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], directed: bool = True) -> Graph:
        rows = [0] * n
        for u, v in arcs:
            _check_pair(n, u, v)
            rows[u] |= 1 << v
            if not directed:
                rows[v] |= 1 << u
        return cls(n, directed, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], directed: bool = True) -> Graph:
        n = len(matrix)
        rows = []
        for u, line in enumerate(matrix):
            if len(line) != n:
                raise FormatError("adjacency matrix must be square")
            rows.append(sum(1 << v for v, x in enumerate(line) if x))
        return cls(n, directed, tuple(rows))

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """In-neighbour masks (the transpose of ``rows``)."""
        if not self.directed:
            return self.rows
        cols = [0] * self.n
        for u, row in enumerate(self.rows):
            for v in iter_bits(row):
                cols[v] |= 1 << u
        return tuple(cols)

    @cached_property
    def size(self) -> int:
        total = sum(bit_count(r) for r in self.rows)
        return total if self.directed else total // 2

    @property
    def adjacency(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(bool(r >> v & 1) for v in range(self.n)) for r in self.rows)

    def arcs(self) -> list[tuple[int, int]]:
        """Arcs ``(u, v)`` sorted lexicographically; undirected edges reported once with u < v."""
        out = []
        for u, row in enumerate(self.rows):
            for v in iter_bits(row):
                if self.directed or u < v:
                    out.append((u, v))
        return out

    def __repr__(self):
        kind = "digraph" if self.directed else "graph"
        return f"Graph({kind}, n={self.n}, arcs={self.arcs()})"


def _check_pair(n: int, u: int, v: int) -> None:
    if not (0 <= u < n and 0 <= v < n):
        raise VertexError(f"vertex out of range for order {n}: ({u}, {v})")
    if u == v:
        raise LoopError(f"loop at vertex {u}")


def new_graph(n: int, directed: bool) -> Graph:
    if not 1 <= n <= MAX_ORDER:
        raise SizeError(f"order must be in [1, {MAX_ORDER}], got {n}")
    return Graph(n, directed, (0,) * n)


def set_arc(g: Graph, u: int, v: int, present: bool = True) -> Graph:
    _check_pair(g.n, u, v)
    rows = list(g.rows)
    if present:
        rows[u] |= 1 << v
        if not g.directed:
            rows[v] |= 1 << u
    else:
        rows[u] &= ~(1 << v)
        if not g.directed:
            rows[v] &= ~(1 << u)
    return Graph(g.n, g.directed, tuple(rows))


def _check_permutation(p: Sequence[int], n: int) -> None:
    if len(p) != n or sorted(p) != list(range(n)):
        raise PermutationError(f"not a permutation of 0..{n - 1}: {tuple(p)}")


def permute(g: Graph, p: Sequence[int]) -> Graph:
    """Relabel ``g`` so that vertex ``u`` becomes ``p[u]``."""
    _check_permutation(p, g.n)
    rows = [0] * g.n
    for u, row in enumerate(g.rows):
        pu = p[u]
        acc = 0
        for v in iter_bits(row):
            acc |= 1 << p[v]
        rows[pu] = acc
    return Graph(g.n, g.directed, tuple(rows))


def induced_subgraph(g: Graph, subset: Sequence[int]) -> Graph:
    """Subgraph on ``subset``; vertex ``subset[i]`` becomes vertex ``i``."""
    if not subset:
        raise SubsetError("subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise SubsetError("subset contains duplicates")
    for s in subset:
        if not 0 <= s < g.n:
            raise SubsetError(f"vertex {s} not in graph of order {g.n}")
    rows = []
    for s in subset:
        row = g.rows[s]
        rows.append(sum(1 << i for i, t in enumerate(subset) if row >> t & 1))
    return Graph(len(subset), g.directed, tuple(rows))


class Scheme(enum.Enum):
    RAW = "raw"
    DEGREE_SORTED = "degree-sorted"


@dataclass(frozen=True)
class Encoding:
    bits: tuple[int, ...]
    n: int
    directed: bool
    scheme: Scheme
    vertex_order: tuple[int, ...]


def encoding_length(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def _slots(n: int, directed: bool) -> list[tuple[int, int]]:
    if directed:
        return [(u, v) for u in range(n) for v in range(n) if u != v]
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def degree_order(g: Graph) -> tuple[int, ...]:
    """Vertices by decreasing (out-degree, in-degree), ties by index."""
    outs = [bit_count(r) for r in g.rows]
    ins = [bit_count(c) for c in g.columns]
    return tuple(sorted(range(g.n), key=lambda v: (-outs[v], -ins[v], v)))


def encode(g: Graph, scheme: Scheme = Scheme.RAW, vertex_order: Sequence[int] | None = None) -> Encoding:
    """Flatten ``g``; position ``i`` of the layout holds vertex ``vertex_order[i]``.

    ``vertex_order`` overrides the scheme's own ordering, which lets two
    graphs be flattened under the same layout before crossover.
    """
    if vertex_order is None:
        vertex_order = degree_order(g) if scheme is Scheme.DEGREE_SORTED else tuple(range(g.n))
    order = tuple(vertex_order)
    _check_permutation(order, g.n)
    rows = g.rows
    bits = tuple(rows[order[i]] >> order[j] & 1 for i, j in _slots(g.n, g.directed))
    return Encoding(bits, g.n, g.directed, scheme, order)


def decode(e: Encoding) -> Graph:
    if len(e.bits) != encoding_length(e.n, e.directed):
        raise FormatError(
            f"expected {encoding_length(e.n, e.directed)} bits for n={e.n}, got {len(e.bits)}"
        )
    _check_permutation(e.vertex_order, e.n)
    order = e.vertex_order
    rows = [0] * e.n
    for bit, (i, j) in zip(e.bits, _slots(e.n, e.directed)):
        if bit:
            u, v = order[i], order[j]
            rows[u] |= 1 << v
            if not e.directed:
                rows[v] |= 1 << u
    return Graph(e.n, e.directed, tuple(rows))


def degree_pairs(g: Graph) -> list[tuple[int, int]]:
    return [(bit_count(r), bit_count(c)) for r, c in zip(g.rows, g.columns)]


def are_isomorphic_small(g: Graph, h: Graph) -> bool:
    """Exact isomorphism test by exhaustive (pruned) search over vertex bijections."""
    if g.n != h.n or g.directed != h.directed:
        return False
    if g.n > MAX_ISO_ORDER:
        raise CapabilityError(f"exact isomorphism limited to n <= {MAX_ISO_ORDER}")
    if g.size != h.size:
        return False
    dg, dh = degree_pairs(g), degree_pairs(h)
    if sorted(dg) != sorted(dh):
        return False
    n = g.n
    candidates = [[w for w in range(n) if dh[w] == dg[v]] for v in range(n)]
    image = [-1] * n

    def extend(v: int, used: int) -> bool:
        if v == n:
            return True
        for w in candidates[v]:
            if used >> w & 1:
                continue
            ok = True
            for u in range(v):
                iu = image[u]
                if g.rows[u] >> v & 1 != h.rows[iu] >> w & 1 or g.rows[v] >> u & 1 != h.rows[w] >> iu & 1:
                    ok = False
                    break
            if ok:
                image[v] = w
                if extend(v + 1, used | 1 << w):
                    return True
        return False

    return extend(0, 0)
