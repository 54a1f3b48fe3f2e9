"""Selection, alignment and crossover operators."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, FormatError, ParameterError, SelectionError
from .graph import Encoding, Graph, Scheme, bit_count, decode, degree_order, encode
from .objective import Fitness, ObjectiveSpec, evaluate


# -- selection ---------------------------------------------------------------

@dataclass(frozen=True)
class Selection:
    """A selection method: ``roulette``, ``sus``, ``tournament`` or ``elimination``."""

    kind: str
    k: int = 2

    def __post_init__(self):
        if self.kind not in SELECTION_KINDS:
            raise ParameterError(f"unknown selection {self.kind!r}; choose from {SELECTION_KINDS}")
        if self.kind == "tournament" and self.k < 1:
            raise ParameterError("tournament size must be >= 1")

    def __str__(self):
        return f"tournament:{self.k}" if self.kind == "tournament" else self.kind

    @classmethod
    def parse(cls, text: str) -> "Selection":
        name, _, arg = text.partition(":")
        name = {"rw": "roulette", "roulette-wheel": "roulette", "direct-elimination": "elimination",
                "stochastic-universal-sampling": "sus"}.get(name, name)
        return cls(name, int(arg)) if arg else cls(name)


SELECTION_KINDS = ("roulette", "sus", "tournament", "elimination")


def _values(fitnesses) -> list[float]:
    return [float(f.value) if isinstance(f, Fitness) else float(f) for f in fitnesses]


def _shifted_weights(values):
    finite = [(i, v) for i, v in enumerate(values) if v != -math.inf]
    # negative fitness is shifted up to zero; nonnegative fitness is used as is
    lo = min(0.0, min(v for _, v in finite))
    weights = [0.0] * len(values)
    for i, v in finite:
        weights[i] = v - lo
    if sum(weights) <= 0:
        for i, _ in finite:
            weights[i] = 1.0
    return weights


def _better(values, i, j):
    """Index of the fitter of two individuals; ties go to the lower index."""
    if values[i] > values[j] or (values[i] == values[j] and i < j):
        return i
    return j


def select(method: Selection, fitnesses: Sequence, quota: int, rng: random.Random) -> list[int]:
    """Return ``quota`` population indices (repetition allowed)."""
    if quota < 1:
        raise ParameterError("quota must be >= 1")
    values = _values(fitnesses)
    if not values or all(v == -math.inf for v in values):
        raise SelectionError("no individual has a finite fitness")
    kind = method.kind
    if kind == "roulette":
        return rng.choices(range(len(values)), weights=_shifted_weights(values), k=quota)
    if kind == "sus":
        weights = _shifted_weights(values)
        total = sum(weights)
        step = total / quota
        start = rng.random() * step
        picks, acc, i = [], weights[0], 0
        for j in range(quota):
            pointer = start + j * step
            while pointer >= acc and i < len(weights) - 1:
                i += 1
                acc += weights[i]
            picks.append(i)
        return picks
    if kind == "tournament":
        finite = [i for i, v in enumerate(values) if v != -math.inf]
        k = min(method.k, len(finite))
        picks = []
        for _ in range(quota):
            drawn = rng.sample(finite, k)
            best = drawn[0]
            for i in drawn[1:]:
                best = _better(values, best, i)
            picks.append(best)
        return picks
    ranking = [i for i in elimination_ranking(values, rng) if values[i] != -math.inf]
    return [ranking[j % len(ranking)] for j in range(quota)]


def elimination_ranking(values: Sequence[float], rng: random.Random) -> list[int]:
    """Rank individuals through a randomly seeded single-elimination bracket.

    Order: champion, runner-up, then losers of each earlier round from the
    semifinals backwards, each group sorted by fitness.  Byes go to the
    top of the random seeding.  Individuals with ``-inf`` fitness are ranked
    last when any finite individual exists.
    """
    idx = [i for i, v in enumerate(values) if v != -math.inf]
    dropped = [i for i, v in enumerate(values) if v == -math.inf]
    rng.shuffle(idx)
    size = 1
    while size < len(idx):
        size *= 2
    # standard seeding: seed s meets seed size-1-s in round one
    slots = _bracket_positions(size)
    bracket = [idx[s] if s < len(idx) else None for s in slots]
    losers_by_round = []
    while len(bracket) > 1:
        nxt, losers = [], []
        for a, b in zip(bracket[::2], bracket[1::2]):
            if a is None or b is None:
                nxt.append(a if b is None else b)
                continue
            w = _better(values, a, b)
            nxt.append(w)
            losers.append(b if w == a else a)
        losers_by_round.append(losers)
        bracket = nxt
    ranking = [bracket[0]]
    for losers in reversed(losers_by_round):
        ranking.extend(sorted(losers, key=lambda i: (-values[i], i)))
    return ranking + sorted(dropped)


def _bracket_positions(size):
    order = [0]
    while len(order) < size:
        m = 2 * len(order)
        order = [x for s in order for x in (s, m - 1 - s)]
    return order


# -- alignment ---------------------------------------------------------------

def _swap_bits(x, i, j):
    if (x >> i ^ x >> j) & 1:
        x ^= (1 << i) | (1 << j)
    return x


def match_count(a: Graph, b: Graph) -> int:
    """Equal adjacency cells over all n*n positions (diagonal included)."""
    full = (1 << a.n) - 1
    return sum(bit_count(~(ra ^ rb) & full) for ra, rb in zip(a.rows, b.rows))


def align(a: Graph, b: Graph) -> tuple[Graph, int]:
    """Permute ``b`` by row/column swaps to agree with ``a`` on as many cells as possible.

    Steepest ascent: each pass applies the single swap with the largest gain
    (lexicographically first on ties) until no swap improves the count.
    """
    if a.n != b.n or a.directed != b.directed:
        raise DomainError("alignment needs graphs of equal order and directedness")
    n = a.n
    full = (1 << n) - 1
    arows, acols = a.rows, a.columns
    rows, cols = list(b.rows), list(b.columns)
    score = match_count(a, b)
    pc = int.bit_count
    while True:
        best_gain, best = 0, None
        for i in range(n - 1):
            ri, ci, ai, aci = rows[i], cols[i], arows[i], acols[i]
            bi = 1 << i
            for j in range(i + 1, n):
                rj, cj, aj, acj = rows[j], cols[j], arows[j], acols[j]
                bj = 1 << j
                both = bi | bj
                other = full ^ both
                # rows i and j over all columns, with cells i and j exchanged
                sri = ri ^ both if (ri >> i ^ ri >> j) & 1 else ri
                srj = rj ^ both if (rj >> i ^ rj >> j) & 1 else rj
                # mismatches before minus mismatches after; columns i, j on the other rows
                gain = (pc(ai ^ ri) + pc(aj ^ rj) - pc(ai ^ srj) - pc(aj ^ sri)
                        + pc((aci ^ ci) & other) + pc((acj ^ cj) & other)
                        - pc((aci ^ cj) & other) - pc((acj ^ ci) & other))
                if gain > best_gain:
                    best_gain, best = gain, (i, j)
        if best is None:
            break
        i, j = best
        rows[i], rows[j] = rows[j], rows[i]
        rows = [_swap_bits(r, i, j) for r in rows]
        cols[i], cols[j] = cols[j], cols[i]
        cols = [_swap_bits(c, i, j) for c in cols]
        score += best_gain
    return Graph(n, b.directed, tuple(rows)), score


# -- crossover ---------------------------------------------------------------

def crossover_kpoint(e1: Encoding, e2: Encoding, k: int, rng: random.Random,
                     cuts: Sequence[int] | None = None) -> tuple[Encoding, Encoding]:
    """k-point crossover; ``cuts`` may fix the cut positions (each in 1..L-1)."""
    length = len(e1.bits)
    if len(e2.bits) != length or e1.n != e2.n or e1.directed != e2.directed:
        raise FormatError("parent encodings differ in length")
    if e1.scheme != e2.scheme:
        raise FormatError("parent encodings use different schemes")
    if not 1 <= k < length:
        raise ParameterError(f"need 1 <= k < {length}, got k={k}")
    if cuts is None:
        cuts = rng.sample(range(1, length), k)
    cuts = sorted(cuts)
    if len(set(cuts)) != k or cuts[0] < 1 or cuts[-1] > length - 1:
        raise ParameterError("cut positions must be k distinct values in 1..L-1")
    c1, c2 = [], []
    bounds = [0] + cuts + [length]
    for s in range(len(bounds) - 1):
        lo, hi = bounds[s], bounds[s + 1]
        x, y = (e1.bits, e2.bits) if s % 2 == 0 else (e2.bits, e1.bits)
        c1.extend(x[lo:hi])
        c2.extend(y[lo:hi])
    return (Encoding(tuple(c1), e1.n, e1.directed, e1.scheme, e1.vertex_order),
            Encoding(tuple(c2), e1.n, e1.directed, e1.scheme, e1.vertex_order))


def crossover_align_kpoint(g1: Graph, g2: Graph, k: int, rng: random.Random,
                           scheme: Scheme = Scheme.RAW, aligned: bool = True) -> tuple[Graph, Graph]:
    """k-point crossover after aligning ``g2`` onto ``g1``.

    Both parents are flattened under ``g1``'s vertex order.  With
    ``aligned=False`` this is plain k-point crossover on the encodings.
    """
    if g1.n != g2.n or g1.directed != g2.directed:
        raise DomainError("crossover needs graphs of equal order and directedness")
    b = align(g1, g2)[0] if aligned else g2
    order = degree_order(g1) if scheme is Scheme.DEGREE_SORTED else None
    e1 = encode(g1, scheme, order)
    e2 = encode(b, scheme, e1.vertex_order)
    if len(e1.bits) < 2:
        return g1, b
    c1, c2 = crossover_kpoint(e1, e2, min(k, len(e1.bits) - 1), rng)
    return decode(c1), decode(c2)


def crossover_align_greedy(g1: Graph, g2: Graph, spec: ObjectiveSpec) -> Graph:
    """Grow one child vertex by vertex, taking each vertex's arcs from the parent that scores better.

    At position t the candidates copy the arcs between t and vertices
    0..t-1 from ``g1`` or from ``g2`` aligned onto ``g1``; each is scored by
    ``spec`` on the induced subgraph of vertices 0..t.  Ties alternate
    between the parents, starting with ``g1``.
    """
    if g1.n != g2.n or g1.directed != g2.directed:
        raise DomainError("crossover needs graphs of equal order and directedness")
    b, _ = align(g1, g2)
    n = g1.n
    rows: list[int] = []
    ties = 0
    for t in range(n):
        low = (1 << t) - 1
        cands = []
        for parent in (g1, b):
            out_t = parent.rows[t] & low
            into_t = [parent.rows[u] >> t & 1 for u in range(t)]
            cand = [r | (into_t[u] << t) for u, r in enumerate(rows)] + [out_t]
            cands.append(cand)
        if cands[0] == cands[1]:
            rows = cands[0]
            continue
        s1 = _score(spec, cands[0], t + 1, g1.directed)
        s2 = _score(spec, cands[1], t + 1, g1.directed)
        if s1 > s2:
            rows = cands[0]
        elif s2 > s1:
            rows = cands[1]
        else:
            rows = cands[ties % 2]
            ties += 1
    return Graph(n, g1.directed, tuple(rows))


def _score(spec, rows, order, directed):
    return float(evaluate(spec, Graph(order, directed, tuple(rows))).value)
