"""Registry of named, deterministic graph transformations.

Objectives must be pure functions of the graph, so stochastic mutations
are registered behind a random stream seeded from a fixed derivation seed
and the graph itself.  Names joined with ``+`` denote left-to-right
composition, e.g. ``"add-edge+random-two-opt"``.
"""

from __future__ import annotations

import random
from typing import Callable, Iterable

from .graph import Graph
from .mutations import MutationScheme, _edit, mutate

Transformation = Callable[[Graph], Graph]

DERIVATION_SEED = 20130101

_REGISTRY: dict[str, Transformation] = {}


def register_transformation(name: str, fn: Transformation) -> None:
    if not name or "+" in name:
        raise ValueError(f"invalid transformation name {name!r}")
    _REGISTRY[name] = fn


def register_seeded(name: str, fn: Callable[[Graph, random.Random], Graph], seed: int = DERIVATION_SEED) -> None:
    """Register a stochastic transformation made deterministic per input graph."""

    def wrapped(g: Graph) -> Graph:
        rng = random.Random(f"{seed}:{name}:{int(g.directed)}:{g.n}:{g.rows}")
        return fn(g, rng)

    register_transformation(name, wrapped)


def register_composition(name: str, parts: Iterable[str]) -> None:
    parts = list(parts)
    for p in parts:
        get_transformation(p)
    register_transformation(name, lambda g: _compose(parts, g))


def _compose(parts, g):
    for p in parts:
        g = get_transformation(p)(g)
    return g


def get_transformation(name: str) -> Transformation:
    if "+" in name:
        parts = [p.strip() for p in name.split("+")]
        for p in parts:
            get_transformation(p)
        return lambda g: _compose(parts, g)
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown transformation {name!r}") from None


def transformation_names() -> list[str]:
    return sorted(_REGISTRY)


def add_first_edge(g: Graph) -> Graph:
    """Add the lexicographically first absent arc (edge); identity on complete graphs."""
    for u in range(g.n):
        for v in range(0 if g.directed else u + 1, g.n):
            if u != v and not g.rows[u] >> v & 1:
                return _edit(g, add=[(u, v)])
    return g


def remove_first_edge(g: Graph) -> Graph:
    arcs = g.arcs()
    return _edit(g, remove=[arcs[0]]) if arcs else g


register_transformation("identity", lambda g: g)
register_transformation("add-edge", add_first_edge)
register_transformation("remove-edge", remove_first_edge)
for _scheme in MutationScheme:
    register_seeded(f"random-{_scheme.value}", lambda g, rng, s=_scheme: mutate(g, s, rng)[0])
