"""Command-line interface.

Exit status: 0 success, 1 usage or configuration error, 2 counterexample
found (``counterexample`` and ``check-transform``), 3 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import engine as eng
from .errors import ExtremalError
from .generators import complete_split, make_named
from .graph import Graph, are_isomorphic_small
from .io import encode_line, engine_config_from, read_config, to_dot, write_lines
from .objective import (TEMPLATES, ObjectiveSpec, counterexample_objective, parse_objective, template,
                        transform_monotonicity_objective, transform_preservation_objective)
from .oracle import brute_force_optimum, known_optimum
from .report import ensure_dir, plot_ablation, plot_convergence, plot_success, write_csv

EXIT_OK, EXIT_USAGE, EXIT_FOUND, EXIT_INTERNAL = 0, 1, 2, 3
OUT_DIR_ENV = "EXTREMAL_GA_OUT_DIR"
DEFAULT_OUT_DIR = "extremal_ga_out"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v} (~{float(v):.6g})"
    return str(v)


def _add_engine_args(p, generations=None):
    p.add_argument("--n", type=int, help="graph order")
    d = p.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_const", const=True, default=None)
    d.add_argument("--undirected", dest="directed", action="store_const", const=False)
    p.add_argument("--runs", type=int, default=None, help="independent seeded runs (default 1)")
    p.add_argument("--generations", type=int, default=generations)
    p.add_argument("--pop", type=int, dest="population_size", help="population size")
    p.add_argument("--seed", type=int)
    p.add_argument("--select", help="selection for parents and survivors: sus, roulette, tournament:K, elimination")
    p.add_argument("--crossover", help="2point, align-2point, align-greedy, ...")
    p.add_argument("--generator", help="random, degree-sequence or size-block")
    p.add_argument("--catalog-fraction", type=float)
    c = p.add_mutually_exclusive_group()
    c.add_argument("--ensure-cover", dest="ensure_cover", action="store_const", const=True, default=None)
    c.add_argument("--no-ensure-cover", dest="ensure_cover", action="store_const", const=False)
    p.add_argument("--mutation-rate", type=float)
    p.add_argument("--workers", type=int, default=None, help="processes for fitness evaluation")
    p.add_argument("--repair", choices=("chain", "max-diameter"), default=None, help="repair arc placement")
    p.add_argument("--config", help="INI run file; command-line flags override it")
    p.add_argument("--out-dir", help=f"output directory (default ${OUT_DIR_ENV} or ./{DEFAULT_OUT_DIR})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="extremal-ga", description="Genetic search for extremal graphs and counterexamples.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("maximize", help="search for graphs maximizing an objective")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--template", choices=sorted(TEMPLATES))
    src.add_argument("--objective", help='objective text, e.g. "diameter(repair(G)) / scc(G)"')
    p.add_argument("--no-stop", action="store_true", help="do not stop a template run at the known optimum")
    _add_engine_args(p)

    p = sub.add_parser("counterexample", help="look for G with f(G) > bound")
    p.add_argument("--objective", help="the function f")
    p.add_argument("--bound", type=_fraction)
    _add_engine_args(p, generations=2000)

    p = sub.add_parser("check-transform", help="look for graphs where a transformation misbehaves")
    p.add_argument("--transform")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--invariant", help="I; a certificate has I(T(G)) <= I(G)")
    g.add_argument("--preserve", nargs=2, metavar=("I1", "I2"),
                   help="a certificate has I1(G) <= I2(G) but I1(T(G)) > I2(T(G))")
    _add_engine_args(p, generations=2000)

    p = sub.add_parser("benchmark", help="reproduce the success-rate and operator-ablation tables")
    p.add_argument("--table", choices=("1", "2", "all"), default="1")
    p.add_argument("--sizes", default="5,10", help="orders for table 1")
    p.add_argument("--problems", default="diameter,avg-distance,irregularity")
    p.add_argument("--ablation-problem", default="avg-distance")
    p.add_argument("--ablation-n", type=int, default=10)
    p.add_argument("--ablation-runs", type=int, default=10)
    p.add_argument("--ablation-generations", type=int, default=1000)
    p.add_argument("--selections", default=",".join(eng.ABLATION_SELECTIONS))
    p.add_argument("--crossovers", default=",".join(eng.ABLATION_CROSSOVERS))
    p.add_argument("--generators", default=",".join(eng.GENERATOR_VARIANTS))
    p.add_argument("--no-stop", action="store_true", help="run every generation even after the optimum")
    _add_engine_args(p, generations=2000)

    p = sub.add_parser("oracle", help="exhaustive optimum for small orders")
    p.add_argument("--problem", required=True, help="a template name or objective text")
    p.add_argument("--n", type=int, required=True)
    d = p.add_mutually_exclusive_group()
    d.add_argument("--directed", dest="directed", action="store_const", const=True, default=None)
    d.add_argument("--undirected", dest="directed", action="store_const", const=False)
    p.add_argument("--repair", choices=("chain", "max-diameter"), default="chain")
    return parser


# -- shared plumbing ---------------------------------------------------------

_FLAG_TO_FIELD = {
    "n": "n", "directed": "directed", "generations": "generations", "population_size": "population_size",
    "seed": "seed", "generator": "generator", "catalog_fraction": "catalog_fraction",
    "ensure_cover": "ensure_cover", "mutation_rate": "mutation_rate",
}


class _Setup:
    """Merged view of a config file and command-line flags."""

    def __init__(self, args):
        self.args = args
        self.file = read_config(args.config) if getattr(args, "config", None) else {}
        self.objective = self.file.get("objective", {})
        run = self.file.get("run", {})
        self.runs = args.runs if args.runs is not None else int(run.get("runs", 1))
        self.workers = args.workers if args.workers is not None else int(run.get("workers", 1))
        self.known = Fraction(run["known_optimum"]) if "known_optimum" in run else None
        self.repair = args.repair or self.objective.get("repair", "chain")
        out = args.out_dir or self.file.get("output", {}).get("out_dir") or os.environ.get(OUT_DIR_ENV)
        self.out_dir = out or DEFAULT_OUT_DIR
        if self.runs < 1:
            raise UsageError("--runs must be >= 1")

    def engine(self, directed_hint=None, **extra) -> eng.EngineConfig:
        a = self.args
        values = dict(self.file.get("engine", {}))
        over = {}
        for flag, name in _FLAG_TO_FIELD.items():
            v = getattr(a, flag, None)
            if v is not None:
                over[name] = v
        if a.select:
            sel = eng.Selection.parse(a.select)
            over["parent_selection"] = over["survivor_selection"] = sel
        if a.crossover:
            over["crossover"] = eng.Crossover.parse(a.crossover)
        if "directed" not in over and "directed" not in values and directed_hint is not None:
            over["directed"] = directed_hint
        over.update(extra)
        if "n" not in over and "n" not in values:
            raise UsageError("--n is required")
        return engine_config_from(values, **over)


def _spec_from_text(text, mode_repair) -> ObjectiveSpec:
    return parse_objective(text, repair_mode=mode_repair)


def _emit_graphs(out_dir, stem, graphs):
    ensure_dir(out_dir)
    lines = [encode_line(g) for g in graphs]
    write_lines(os.path.join(out_dir, f"{stem}.txt"), lines)
    for i, g in enumerate(graphs):
        with open(os.path.join(out_dir, f"{stem}_{i}.dot"), "w", encoding="utf-8") as fh:
            fh.write(to_dot(g))
    return lines


def _batch(config, spec, runs, known, workers):
    return eng.run_batch(config, spec, runs, known_optimum=known, workers=workers, keep_results=True)


def _write_run_tables(out_dir, prefix, batch, config):
    ensure_dir(out_dir)
    write_csv(os.path.join(out_dir, f"{prefix}runs.csv"), eng.RUN_COLUMNS, batch.rows)
    write_csv(os.path.join(out_dir, f"{prefix}batch.csv"), eng.BATCH_COLUMNS, [batch.stats.batch_row(config.n)])


def _distinct(graphs):
    return list(dict.fromkeys(graphs))


# -- commands ----------------------------------------------------------------

def cmd_maximize(args) -> int:
    s = _Setup(args)
    tmpl = args.template or s.objective.get("template")
    text = args.objective or s.objective.get("objective")
    if tmpl and text:
        raise UsageError("give either a template or an objective, not both")
    if not tmpl and not text:
        raise UsageError("maximize needs --template or --objective")
    known = s.known
    if tmpl:
        spec, directed = template(tmpl)
        if s.repair != "chain":
            spec = parse_objective(spec.text, repair_mode=s.repair)
    else:
        spec = _spec_from_text(text, s.repair)
        directed = spec.required_directedness
        if directed is None:
            directed = True
    config = s.engine(directed_hint=directed)
    if tmpl and known is None and config.n >= 3 and config.directed == TEMPLATES[tmpl][1]:
        known = known_optimum(tmpl, config.n).value
    if known is not None and not args.no_stop and config.stop_on_target is None:
        config = config.with_(stop_on_target=known)
    batch = _batch(config, spec, s.runs, known, s.workers)
    results = batch.results
    best = max((r.best_fitness.value for r in results))
    graphs = _distinct(g for r in results if r.best_fitness.value == best for g in r.best_graphs)
    print(f"objective: {spec.text}")
    print(f"best fitness: {_fmt(best)}")
    if known is not None:
        print(f"known optimum: {_fmt(known)}  raw success: {batch.stats.raw_success}/{s.runs}  "
              f"amortized success: {batch.stats.amortized_success:.4f}")
    for line in _emit_graphs(s.out_dir, "best", graphs):
        print(line)
    _write_run_tables(s.out_dir, "", batch, config)
    plot_convergence([r.history for r in results], os.path.join(s.out_dir, "convergence.png"),
                     title=spec.text, optimum=known)
    return EXIT_OK


def _search_certificates(s, spec, label) -> int:
    config = s.engine(directed_hint=spec.required_directedness if spec.required_directedness is not None else True,
                      stop_on_certificate=True)
    batch = _batch(config, spec, s.runs, None, s.workers)
    certs = _distinct(g for r in batch.results for g, _ in r.certificates)
    fits = {g: f for r in batch.results for g, f in r.certificates}
    _write_run_tables(s.out_dir, "", batch, config)
    best = max(r.best_fitness.value for r in batch.results)
    print(f"objective: {spec.text}")
    print(f"best fitness: {_fmt(best)}")
    if not certs:
        print(f"no {label} found")
        return EXIT_OK
    print(f"{len(certs)} {label}(s) found")
    lines = _emit_graphs(s.out_dir, "certificates", certs)
    for g, line in zip(certs, lines):
        print(f"{line}  fitness {_fmt(fits[g].value)}")
    return EXIT_FOUND


def cmd_counterexample(args) -> int:
    s = _Setup(args)
    text = args.objective or s.objective.get("objective")
    bound = args.bound
    if bound is None and "bound" in s.objective:
        bound = Fraction(s.objective["bound"])
    if not text or bound is None:
        raise UsageError("counterexample needs --objective and --bound")
    spec = counterexample_objective(_spec_from_text(text, s.repair), bound)
    return _search_certificates(s, spec, "counterexample")


def cmd_check_transform(args) -> int:
    s = _Setup(args)
    transform = args.transform or s.objective.get("transform")
    invariant = args.invariant or s.objective.get("invariant")
    preserve = args.preserve or (s.objective["preserve"].split(";") if "preserve" in s.objective else None)
    if not transform:
        raise UsageError("check-transform needs --transform")
    if bool(invariant) == bool(preserve):
        raise UsageError("check-transform needs exactly one of --invariant or --preserve")
    if invariant:
        spec = transform_monotonicity_objective(transform, _spec_from_text(invariant, s.repair))
    else:
        a, b = (_spec_from_text(t.strip(), s.repair) for t in preserve)
        spec = transform_preservation_objective(transform, a, b)
    return _search_certificates(s, spec, "certificate")


def cmd_benchmark(args) -> int:
    s = _Setup(args)
    out = ensure_dir(s.out_dir)
    if args.table in ("1", "all"):
        sizes = [int(x) for x in args.sizes.split(",") if x.strip()]
        runs = args.runs if args.runs is not None else 20
        for problem in [p.strip() for p in args.problems.split(",") if p.strip()]:
            spec, directed = template(problem)
            rows, histories = [], []
            for n in sizes:
                known = known_optimum(problem, n).value
                config = s.engine(directed_hint=directed, n=n, directed=directed)
                if not args.no_stop:
                    config = config.with_(stop_on_target=known)
                batch = _batch(config, spec, runs, known, s.workers)
                write_csv(os.path.join(out, f"table1_{problem}_n{n}_runs.csv"), eng.RUN_COLUMNS, batch.rows)
                rows.append(batch.stats.batch_row(n))
                histories.extend(r.history for r in batch.results)
                print(f"{problem} n={n}: raw {batch.stats.raw_success}/{runs} "
                      f"amortized {batch.stats.amortized_success:.4f}")
            write_csv(os.path.join(out, f"table1_{problem}.csv"), eng.BATCH_COLUMNS, rows)
            plot_success(rows, os.path.join(out, f"table1_{problem}.png"), title=problem)
            plot_convergence(histories, os.path.join(out, f"table1_{problem}_convergence.png"), title=problem)
    if args.table in ("2", "all"):
        problem = args.ablation_problem
        spec, directed = template(problem)
        n = args.ablation_n
        known = known_optimum(problem, n).value
        config = s.engine(directed_hint=directed, n=n, directed=directed, generations=args.ablation_generations)
        if not args.no_stop:
            config = config.with_(stop_on_target=known)
        cells = eng.ablation_grid(config, spec, args.ablation_runs, known,
                                  selections=[x for x in args.selections.split(",") if x],
                                  crossovers=[x for x in args.crossovers.split(",") if x],
                                  generators=[x for x in args.generators.split(",") if x],
                                  workers=s.workers)
        rows = [dict(c, amortized_success=f"{c['amortized_success']:.4f}",
                     mean_first_hit_generation="NA" if c["mean_first_hit_generation"] is None
                     else f"{c['mean_first_hit_generation']:.1f}") for c in cells]
        write_csv(os.path.join(out, "table2.csv"), eng.ABLATION_COLUMNS, rows)
        plot_ablation(cells, os.path.join(out, "table2.png"))
        for r in rows:
            print(f"{r['selection']:>11} {r['crossover']:>12} {r['generator']:>15}  {r['amortized_success']}")
    return EXIT_OK


def describe(g: Graph) -> str:
    """Name ``g`` when it is a directed cycle or a complete split graph."""
    n = g.n
    if g.directed:
        if n >= 2 and are_isomorphic_small(g, make_named("cycle", n, directed=True)):
            return f"C_{n}"
        return ""
    for k in range(n + 1):
        if are_isomorphic_small(g, complete_split(k, n - k)):
            return f"KS_{{{k},{n - k}}}"
    return ""


def cmd_oracle(args) -> int:
    problem = args.problem
    if problem in TEMPLATES:
        spec, directed = template(problem)
        if args.repair != "chain":
            spec = parse_objective(spec.text, repair_mode=args.repair)
    else:
        spec = parse_objective(problem, repair_mode=args.repair)
        directed = spec.required_directedness
        if directed is None:
            directed = True
    if args.directed is not None and args.directed != directed and spec.required_directedness is not None:
        raise UsageError(f"{problem} needs {'directed' if directed else 'undirected'} graphs")
    if args.directed is not None:
        directed = args.directed
    value, reps = brute_force_optimum(spec, args.n, directed)
    print(f"optimum: {_fmt(value)}")
    if problem in TEMPLATES and args.n >= 3:
        rec = known_optimum(problem, args.n)
        print(f"known optimum: {_fmt(rec.value)} ({rec.description})")
    print(f"extremal graphs: {len(reps)}")
    for g in reps:
        name = describe(g) if args.n <= 8 else ""
        print(f"{encode_line(g)}  {name}".rstrip())
    return EXIT_OK


COMMANDS = {
    "maximize": cmd_maximize,
    "counterexample": cmd_counterexample,
    "check-transform": cmd_check_transform,
    "benchmark": cmd_benchmark,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ExtremalError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - reported, not raised
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
