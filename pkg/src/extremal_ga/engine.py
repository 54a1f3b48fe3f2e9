"""Generational genetic algorithm over graphs and repeated-run statistics.

Each generation: copy the elite, select parents, build offspring by
crossover (the rest are clones of selected parents), mutate offspring with
a small probability, then choose survivors from parents plus offspring.
The engine always maximizes.

Random streams: in the default ``derived`` mode every offspring draws from
its own stream, derived from (seed, generation, index), so results do not
depend on how evaluation is spread over workers.  ``single`` mode threads
one stream through the whole run.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .errors import ConfigError
from .generators import GENERATOR_SCHEMES, seed_population
from .graph import Graph, Scheme
from .mutations import MutationScheme, mutate_chain
from .objective import Fitness, ObjectiveSpec, evaluate
from .operators import Selection, crossover_align_greedy, crossover_align_kpoint, select

CROSSOVER_KINDS = ("kpoint", "align-kpoint", "align-greedy")

RUN_COLUMNS = ("run_id", "seed", "best_fitness", "success", "first_hit_generation", "wall_seconds")
BATCH_COLUMNS = ("n", "raw_success", "amortized_success", "mean_seconds", "mean_first_hit_generation")

_CACHE_LIMIT = 500_000


@dataclass(frozen=True)
class Crossover:
    kind: str = "align-kpoint"
    k: int = 2

    def __post_init__(self):
        if self.kind not in CROSSOVER_KINDS:
            raise ConfigError(f"unknown crossover {self.kind!r}")
        if self.k < 1:
            raise ConfigError("crossover needs k >= 1")

    def __str__(self):
        if self.kind == "align-greedy":
            return "align-greedy"
        prefix = "align-" if self.kind == "align-kpoint" else ""
        return f"{prefix}{self.k}point"

    @classmethod
    def parse(cls, text: str) -> "Crossover":
        t = text.lower().replace("_", "-")
        if t == "align-greedy":
            return cls("align-greedy")
        aligned = t.startswith("align-")
        body = t[6:] if aligned else t
        for suffix in ("points", "point"):
            if body.endswith(suffix):
                digits = body[: -len(suffix)].rstrip("-")
                if digits.isdigit():
                    return cls("align-kpoint" if aligned else "kpoint", int(digits))
        raise ConfigError(f"cannot parse crossover {text!r}; try 2point, align-2point or align-greedy")


def _default_weights():
    return {s: 1.0 for s in MutationScheme}


@dataclass(frozen=True)
class EngineConfig:
    n: int
    directed: bool = True
    population_size: int = 100
    generations: int = 20000
    parent_selection: Selection = Selection("sus")
    survivor_selection: Selection = Selection("sus")
    crossover: Crossover = Crossover()
    encoding: Scheme = Scheme.RAW
    crossover_rate: float = 0.9
    mutation_rate: float = 0.1
    mutation_chain: int = 1
    mutation_weights: dict = field(default_factory=_default_weights, hash=False)
    generator: str = "size-block"
    catalog_fraction: float = 0.1
    ensure_cover: bool = True
    random_p: float = 0.5
    elitism: int = 1
    seed: int = 0
    stop_on_target: Optional[object] = None
    stop_on_certificate: bool = False
    stream_mode: str = "derived"

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError("population_size must be >= 2")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        for name in ("crossover_rate", "mutation_rate", "catalog_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {v}")
        if self.mutation_chain < 1:
            raise ConfigError("mutation_chain must be >= 1")
        if not 0 <= self.elitism <= self.population_size:
            raise ConfigError("elitism must be between 0 and population_size")
        if self.generator not in GENERATOR_SCHEMES:
            raise ConfigError(f"unknown generator {self.generator!r}")
        if self.stream_mode not in ("derived", "single"):
            raise ConfigError("stream_mode must be 'derived' or 'single'")
        if not self.mutation_weights or any(w < 0 for w in self.mutation_weights.values()):
            raise ConfigError("mutation weights must be nonnegative and not empty")

    def with_(self, **changes) -> "EngineConfig":
        return replace(self, **changes)


@dataclass
class RunResult:
    best: Graph
    best_fitness: Fitness
    best_graphs: list
    population: list
    fitnesses: list
    first_hit_generation: int
    generations_run: int
    wall_seconds: float
    certificates: list
    history: list
    seed: int


@dataclass
class RunStats:
    runs: int
    raw_success: Optional[int]
    amortized_success: Optional[float]
    mean_seconds: float
    mean_first_hit_generation: Optional[float]
    mean_best_fitness: float

    def batch_row(self, n: int) -> dict:
        return {
            "n": n,
            "raw_success": "NA" if self.raw_success is None else self.raw_success,
            "amortized_success": "NA" if self.amortized_success is None else f"{self.amortized_success:.4f}",
            "mean_seconds": f"{self.mean_seconds:.3f}",
            "mean_first_hit_generation": "NA" if self.mean_first_hit_generation is None
            else f"{self.mean_first_hit_generation:.1f}",
        }


@dataclass
class BatchResult:
    stats: RunStats
    rows: list
    results: list


class _Streams:
    def __init__(self, seed, mode):
        self.seed = seed
        self.master = random.Random(seed) if mode == "single" else None

    def get(self, generation, index):
        if self.master is not None:
            return self.master
        return random.Random((self.seed * 1_000_003 + generation) * 1_000_003 + index)


def _eval_batch(spec, graphs):
    return [evaluate(spec, g) for g in graphs]


class _Evaluator:
    def __init__(self, spec, workers):
        self.spec = spec
        self.cache = {}
        self.pool = ProcessPoolExecutor(workers) if workers > 1 else None
        self.workers = workers

    def __call__(self, graphs):
        todo = [g for g in {g: None for g in graphs if g not in self.cache}]
        if todo:
            if self.pool is not None and len(todo) > 1:
                chunk = math.ceil(len(todo) / self.workers)
                parts = [todo[i:i + chunk] for i in range(0, len(todo), chunk)]
                values = [f for part in self.pool.map(_eval_batch, [self.spec] * len(parts), parts) for f in part]
            else:
                values = _eval_batch(self.spec, todo)
            if len(self.cache) > _CACHE_LIMIT:
                self.cache.clear()
            self.cache.update(zip(todo, values))
        return [self.cache[g] for g in graphs]

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def _rank(fitnesses):
    return sorted(range(len(fitnesses)), key=lambda i: (-float(fitnesses[i].value), i))


def _breed(config: EngineConfig, spec, a: Graph, b: Graph, rng) -> list[Graph]:
    cx = config.crossover
    if cx.kind == "align-greedy":
        return [crossover_align_greedy(a, b, spec), crossover_align_greedy(b, a, spec)]
    return list(crossover_align_kpoint(a, b, cx.k, rng, config.encoding, aligned=cx.kind == "align-kpoint"))


def run(config: EngineConfig, spec: ObjectiveSpec, workers: int = 1) -> RunResult:
    """One seeded GA run."""
    req = spec.required_directedness
    if req is not None and req != config.directed:
        raise ConfigError("objective needs " + ("directed" if req else "undirected") + " graphs")
    start = time.perf_counter()
    streams = _Streams(config.seed, config.stream_mode)
    evaluator = _Evaluator(spec, workers)
    size = config.population_size
    certificates: dict = {}

    def record(graphs, fits):
        if spec.mode == "extremal":
            return
        for g, f in zip(graphs, fits):
            if len(certificates) < 25 and g not in certificates and spec.is_certificate(f):
                certificates[g] = f

    try:
        pop = seed_population(config.n, config.directed, size, config.generator, config.catalog_fraction,
                              streams.get(0, 0), ensure_cover=config.ensure_cover, p=config.random_p)
        fit = evaluator(pop)
        record(pop, fit)
        best_i = _rank(fit)[0]
        best_g, best_f = pop[best_i], fit[best_i]
        first_hit = 0
        history = [best_f.value]
        target = config.stop_on_target
        gen = 0
        n_cross = min(size, math.ceil(config.crossover_rate * size - 1e-9))
        weights = config.mutation_weights
        def done():
            if target is not None and best_f.value >= target:
                return True
            return config.stop_on_certificate and bool(certificates)

        while gen < config.generations and not done():
            gen += 1
            parents = select(config.parent_selection, fit, size, streams.get(gen, 0))
            offspring = []
            pair = 0
            while len(offspring) < n_cross:
                a = pop[parents[(2 * pair) % size]]
                b = pop[parents[(2 * pair + 1) % size]]
                offspring.extend(_breed(config, spec, a, b, streams.get(gen, 1 + pair)))
                pair += 1
            del offspring[n_cross:]
            offspring.extend(pop[parents[(n_cross + c) % size]] for c in range(size - n_cross))
            for i, child in enumerate(offspring):
                rng = streams.get(gen, size + 1 + i)
                if rng.random() < config.mutation_rate:
                    offspring[i] = mutate_chain(child, weights, config.mutation_chain, rng)
            off_fit = evaluator(offspring)
            record(offspring, off_fit)
            pool = pop + offspring
            pool_fit = fit + off_fit
            ranked = _rank(pool_fit)
            keep = ranked[: config.elitism]
            if size - len(keep):
                keep = keep + select(config.survivor_selection, pool_fit, size - len(keep),
                                     streams.get(gen, 2 * size + 1))
            pop = [pool[i] for i in keep]
            fit = [pool_fit[i] for i in keep]
            top = ranked[0]
            if pool_fit[top].value > best_f.value:
                best_g, best_f = pool[top], pool_fit[top]
                first_hit = gen
            history.append(best_f.value)
    finally:
        evaluator.close()
    best_graphs = list({g: None for g, f in zip(pop, fit) if f.value == best_f.value})
    if not best_graphs:
        best_graphs = [best_g]
    return RunResult(
        best=best_g,
        best_fitness=best_f,
        best_graphs=best_graphs,
        population=pop,
        fitnesses=fit,
        first_hit_generation=first_hit,
        generations_run=gen,
        wall_seconds=time.perf_counter() - start,
        certificates=list(certificates.items()),
        history=history,
        seed=config.seed,
    )


def amortized_success(best, optimum) -> float:
    """Ratio of the best fitness to the optimum, clamped to [0, 1].

    For a nonpositive optimum the ratio is meaningless; there the score is
    1 on a hit and ``exp(best - optimum)`` otherwise.
    """
    best_f, opt_f = float(best), float(optimum)
    if opt_f > 0:
        return min(1.0, max(0.0, best_f / opt_f))
    if best == optimum:
        return 1.0
    return min(1.0, max(0.0, math.exp(best_f - opt_f)))


def _fmt_value(v) -> str:
    return str(v) if not isinstance(v, float) else repr(v)


def run_batch(config: EngineConfig, spec: ObjectiveSpec, runs: int, known_optimum=None,
              workers: int = 1, keep_results: bool = False) -> BatchResult:
    """Repeat ``run`` with seeds ``seed, seed+1, ...`` and aggregate."""
    if runs < 1:
        raise ConfigError("runs must be >= 1")
    rows, results = [], []
    hits, amort, secs, firsts, bests = 0, [], [], [], []
    for i in range(runs):
        res = run(config.with_(seed=config.seed + i), spec, workers=workers)
        best = res.best_fitness.value
        success = None
        if known_optimum is not None:
            success = best == known_optimum
            hits += success
            amort.append(amortized_success(best, known_optimum))
            if success:
                firsts.append(res.first_hit_generation)
        else:
            firsts.append(res.first_hit_generation)
        secs.append(res.wall_seconds)
        bests.append(float(best))
        rows.append({
            "run_id": i,
            "seed": res.seed,
            "best_fitness": _fmt_value(best),
            "success": "NA" if success is None else int(success),
            "first_hit_generation": res.first_hit_generation,
            "wall_seconds": f"{res.wall_seconds:.3f}",
        })
        if keep_results:
            results.append(res)
    stats = RunStats(
        runs=runs,
        raw_success=hits if known_optimum is not None else None,
        amortized_success=sum(amort) / runs if known_optimum is not None else None,
        mean_seconds=sum(secs) / runs,
        mean_first_hit_generation=sum(firsts) / len(firsts) if firsts else None,
        mean_best_fitness=sum(bests) / runs,
    )
    return BatchResult(stats, rows, results)


GENERATOR_VARIANTS = {
    "random": {"generator": "random", "catalog_fraction": 0.0},
    "degree-sequence": {"generator": "degree-sequence", "catalog_fraction": 0.0},
    "size-block": {"generator": "size-block", "catalog_fraction": 0.0},
    "catalog": {"generator": "size-block", "catalog_fraction": 0.1},
}

ABLATION_SELECTIONS = ("elimination", "roulette", "sus", "tournament")
ABLATION_CROSSOVERS = ("1point", "2point", "align-2point", "align-greedy")

ABLATION_COLUMNS = ("selection", "crossover", "generator", "runs", "raw_success", "amortized_success",
                    "mean_first_hit_generation")


def ablation_grid(config: EngineConfig, spec: ObjectiveSpec, runs: int, known_optimum,
                  selections: Sequence[str] = ABLATION_SELECTIONS,
                  crossovers: Sequence[str] = ABLATION_CROSSOVERS,
                  generators: Sequence[str] = tuple(GENERATOR_VARIANTS),
                  workers: int = 1) -> list[dict]:
    """Mean amortized success for every (selection, crossover, generator) cell.

    One selection method is used for both parents and survivors.  The
    ``catalog`` generator is the size-block generator seeded with catalog
    graphs.
    """
    cells = []
    for sel in selections:
        for cx in crossovers:
            for gen in generators:
                cfg = config.with_(parent_selection=Selection.parse(sel), survivor_selection=Selection.parse(sel),
                                   crossover=Crossover.parse(cx), **GENERATOR_VARIANTS[gen])
                stats = run_batch(cfg, spec, runs, known_optimum, workers=workers).stats
                cells.append({
                    "selection": sel,
                    "crossover": cx,
                    "generator": gen,
                    "runs": runs,
                    "raw_success": stats.raw_success,
                    "amortized_success": stats.amortized_success,
                    "mean_first_hit_generation": stats.mean_first_hit_generation,
                })
    return cells
