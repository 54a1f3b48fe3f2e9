"""Objective expressions over graph invariants.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := number | func '(' args ')' | '(' expr ')' | '-' factor
    graph  := 'G' | 'repair' '(' graph ')' | 'transform' '(' string ',' graph ')'

Invariant functions (``order``, ``size``, ``diameter``, ``avg_distance``,
``irregularity``, ``scc``) take one graph argument.  ``abs``, ``min`` and
``max`` work on numbers.  Two guard functions complete the language:
``penalty(x)`` evaluates to ``x`` and marks the fitness infeasible whenever
``x`` is nonzero, and ``ifle(a, b, x, y)`` evaluates to ``x`` when
``a <= b`` and otherwise to ``y``, marking the fitness infeasible.

Arithmetic is exact (integers and Fractions).  An unbounded invariant
(diameter or average distance of a disconnected graph) collapses the whole
fitness into the penalty band ``-10**6 - k`` where ``k`` counts the
components of the offending graph.  Domain errors and division by zero
give ``-inf``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Union

from . import invariants as inv
from .errors import DomainError, ObjectiveSyntaxError
from .graph import Graph
from .transforms import get_transformation

PENALTY_BASE = 10**6

INVARIANTS = ("order", "size", "diameter", "avg_distance", "irregularity", "scc")
NUMERIC_ARITY = {"abs": (1, 1), "min": (2, None), "max": (2, None), "penalty": (1, 1), "ifle": (4, 4)}
GRAPH_FUNCS = ("repair", "transform")

MODES = ("extremal", "counterexample", "monotonicity")


# -- expression tree ---------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Invariant:
    name: str
    graph: "GraphNode"


@dataclass(frozen=True)
class GVar:
    pass


@dataclass(frozen=True)
class Repair:
    graph: "GraphNode"


@dataclass(frozen=True)
class Transform:
    name: str
    graph: "GraphNode"


Node = Union[Num, BinOp, Neg, Call, Invariant]
GraphNode = Union[GVar, Repair, Transform]


@dataclass(frozen=True)
class Fitness:
    value: object
    feasible: bool = True

    def __float__(self):
        return float(self.value)


INVALID = Fitness(-math.inf, False)


@dataclass(frozen=True)
class ObjectiveSpec:
    root: Node
    mode: str = "extremal"
    repair_mode: str = "chain"
    text: str = field(default="", compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown objective mode {self.mode!r}")
        if self.repair_mode not in ("chain", "max-diameter"):
            raise ValueError(f"unknown repair mode {self.repair_mode!r}")
        if not self.text:
            object.__setattr__(self, "text", to_text(self.root))

    def __add__(self, other: "ObjectiveSpec") -> "ObjectiveSpec":
        return replace(self, root=BinOp("+", self.root, other.root), text="")

    def is_certificate(self, fitness: Fitness) -> bool:
        """True when ``fitness`` refutes the statement encoded by this objective."""
        if not fitness.feasible:
            return False
        if self.mode == "counterexample":
            return fitness.value > 0
        if self.mode == "monotonicity":
            return fitness.value >= 0
        return False

    @property
    def required_directedness(self):
        """True if the objective needs digraphs, False if undirected, None if either."""
        names = _names(self.root)
        if "repair" in names:
            return True
        if "irregularity" in names:
            return False
        return None


def _names(node) -> set[str]:
    if isinstance(node, Num) or isinstance(node, GVar):
        return set()
    if isinstance(node, BinOp):
        return _names(node.left) | _names(node.right)
    if isinstance(node, Neg):
        return _names(node.arg)
    if isinstance(node, Call):
        out = {node.name}
        for a in node.args:
            out |= _names(a)
        return out
    if isinstance(node, Invariant):
        return {node.name} | _names(node.graph)
    if isinstance(node, Repair):
        return {"repair"} | _names(node.graph)
    if isinstance(node, Transform):
        return {"transform"} | _names(node.graph)
    raise TypeError(node)


# -- rendering ---------------------------------------------------------------

def _fmt_num(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"({x.numerator} / {x.denominator})"


def to_text(node) -> str:
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, GVar):
        return "G"
    if isinstance(node, Repair):
        return f"repair({to_text(node.graph)})"
    if isinstance(node, Transform):
        return f"transform('{node.name}', {to_text(node.graph)})"
    if isinstance(node, Invariant):
        return f"{node.name}({to_text(node.graph)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Neg):
        return f"-({to_text(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    raise TypeError(node)


# -- parser ------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<str>'[^']*'|\"[^\"]*\")|(?P<op>[-+*/(),]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = len(text) - len(text[pos:].lstrip())
            raise ObjectiveSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ObjectiveSyntaxError(f"expected {want!r}, got {got!r}", tok[2])
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ObjectiveSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        kind, value, pos = self.peek()
        if kind == "num":
            self.take()
            return Num(Fraction(value))
        if value == "-":
            self.take()
            return Neg(self.factor())
        if value == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        if kind == "name":
            return self.call()
        raise ObjectiveSyntaxError(f"unexpected {value or 'end of input'!r}", pos)

    def call(self):
        _, name, pos = self.take(kind="name")
        if name == "G" or name in GRAPH_FUNCS:
            raise ObjectiveSyntaxError(f"graph term {name!r} used where a number is expected", pos)
        if name not in INVARIANTS and name not in NUMERIC_ARITY:
            raise ObjectiveSyntaxError(f"unknown function {name!r}", pos)
        self.take("(")
        if name in INVARIANTS:
            g = self.graph()
            self.take(")")
            return Invariant(name, g)
        args = [self.expr()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.expr())
        self.take(")")
        lo, hi = NUMERIC_ARITY[name]
        if len(args) < lo or (hi is not None and len(args) > hi):
            raise ObjectiveSyntaxError(f"{name} takes {lo if hi == lo else f'at least {lo}'} argument(s), got {len(args)}", pos)
        return Call(name, tuple(args))

    def graph(self):
        _, name, pos = self.take(kind="name")
        if name == "G":
            return GVar()
        if name == "repair":
            self.take("(")
            g = self.graph()
            self.take(")")
            return Repair(g)
        if name == "transform":
            self.take("(")
            _, s, spos = self.take(kind="str")
            tname = s[1:-1]
            try:
                get_transformation(tname)
            except KeyError:
                raise ObjectiveSyntaxError(f"unknown transformation {tname!r}", spos) from None
            self.take(",")
            g = self.graph()
            self.take(")")
            return Transform(tname, g)
        raise ObjectiveSyntaxError(f"expected a graph term, got {name!r}", pos)


def parse_objective(text: str, mode: str = "extremal", repair_mode: str = "chain") -> ObjectiveSpec:
    return ObjectiveSpec(_Parser(text).parse(), mode=mode, repair_mode=repair_mode, text=text.strip())


def _as_spec(x) -> ObjectiveSpec:
    return x if isinstance(x, ObjectiveSpec) else parse_objective(x)


# -- evaluation --------------------------------------------------------------

class _Unbounded(Exception):
    def __init__(self, graph):
        self.graph = graph


class _Context:
    __slots__ = ("g", "repair_mode", "feasible", "graphs")

    def __init__(self, g, repair_mode):
        self.g = g
        self.repair_mode = repair_mode
        self.feasible = True
        self.graphs = {}


def _graph(node, ctx):
    if isinstance(node, GVar):
        return ctx.g
    cached = ctx.graphs.get(node)
    if cached is not None:
        return cached
    inner = _graph(node.graph, ctx)
    if isinstance(node, Repair):
        out = inv.repair_strong(inner, ctx.repair_mode)
    else:
        out = get_transformation(node.name)(inner)
    ctx.graphs[node] = out
    return out


def _invariant(name, g):
    if name == "order":
        return g.n
    if name == "size":
        return g.size
    if name == "scc":
        return inv.scc_count(g)
    if name == "irregularity":
        return inv.irregularity(g)
    if name == "diameter":
        value = inv.diameter(g)
    else:
        value = inv.average_distance(g)
    if value == inv.INF:
        raise _Unbounded(g)
    return value


def _eval(node, ctx):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Invariant):
        return _invariant(node.name, _graph(node.graph, ctx))
    if isinstance(node, BinOp):
        a = _eval(node.left, ctx)
        b = _eval(node.right, ctx)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return Fraction(a) / b
    if isinstance(node, Neg):
        return -_eval(node.arg, ctx)
    name = node.name
    if name == "ifle":
        a, b = _eval(node.args[0], ctx), _eval(node.args[1], ctx)
        if a <= b:
            return _eval(node.args[2], ctx)
        ctx.feasible = False
        return _eval(node.args[3], ctx)
    args = [_eval(a, ctx) for a in node.args]
    if name == "abs":
        return abs(args[0])
    if name == "min":
        return min(args)
    if name == "max":
        return max(args)
    if name == "penalty":
        if args[0] != 0:
            ctx.feasible = False
        return args[0]
    raise TypeError(name)


def _normalize(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def evaluate(spec: ObjectiveSpec, g: Graph) -> Fitness:
    ctx = _Context(g, spec.repair_mode)
    try:
        value = _eval(spec.root, ctx)
    except _Unbounded as exc:
        return Fitness(-PENALTY_BASE - inv.scc_count(exc.graph), False)
    except (DomainError, ZeroDivisionError):
        return INVALID
    return Fitness(_normalize(value), ctx.feasible)


# -- builders ----------------------------------------------------------------

def constraint_penalty(kind: str, lhs, rhs, weight=1) -> ObjectiveSpec:
    """Penalty term that is zero exactly when ``lhs == rhs`` (``eq``) or ``lhs <= rhs`` (``le``)."""
    lhs, rhs = _as_spec(lhs), _as_spec(rhs)
    diff = BinOp("-", lhs.root, rhs.root)
    if kind == "eq":
        term = Neg(Call("abs", (diff,)))
    elif kind == "le":
        term = Neg(Call("max", (Num(Fraction(0)), diff)))
    else:
        raise ValueError(f"constraint kind must be 'eq' or 'le', got {kind!r}")
    weight = Fraction(weight)
    if weight != 1:
        term = BinOp("*", Num(weight), term)
    return ObjectiveSpec(Call("penalty", (term,)), repair_mode=lhs.repair_mode)


def counterexample_objective(f, bound) -> ObjectiveSpec:
    """``f(G) - bound``; a feasible graph with positive value refutes ``f <= bound``."""
    f = _as_spec(f)
    root = BinOp("-", f.root, Num(Fraction(bound)))
    return ObjectiveSpec(root, mode="counterexample", repair_mode=f.repair_mode)


def _substitute(node, graph_node):
    """Replace every occurrence of ``G`` in ``node`` by ``graph_node``."""
    if isinstance(node, (Num,)):
        return node
    if isinstance(node, GVar):
        return graph_node
    if isinstance(node, BinOp):
        return BinOp(node.op, _substitute(node.left, graph_node), _substitute(node.right, graph_node))
    if isinstance(node, Neg):
        return Neg(_substitute(node.arg, graph_node))
    if isinstance(node, Call):
        return Call(node.name, tuple(_substitute(a, graph_node) for a in node.args))
    if isinstance(node, Invariant):
        return Invariant(node.name, _substitute(node.graph, graph_node))
    if isinstance(node, Repair):
        return Repair(_substitute(node.graph, graph_node))
    if isinstance(node, Transform):
        return Transform(node.name, _substitute(node.graph, graph_node))
    raise TypeError(node)


def _check_transform(name):
    get_transformation(name)
    return Transform(name, GVar())


def transform_monotonicity_objective(transform: str, invariant) -> ObjectiveSpec:
    """``I(G) - I(T(G))``; a feasible graph with value >= 0 shows T does not strictly increase I."""
    t = _check_transform(transform)
    spec = _as_spec(invariant)
    root = BinOp("-", spec.root, _substitute(spec.root, t))
    return ObjectiveSpec(root, mode="monotonicity", repair_mode=spec.repair_mode)


def transform_preservation_objective(transform: str, first, second) -> ObjectiveSpec:
    """Search for G with I1(G) <= I2(G) but I1(T(G)) > I2(T(G)).

    Graphs violating the premise score the ratio of the two gaps and are
    flagged infeasible, so they never count as counterexamples.
    """
    t = _check_transform(transform)
    a, b = _as_spec(first), _as_spec(second)
    before = BinOp("-", a.root, b.root)
    after = BinOp("-", _substitute(a.root, t), _substitute(b.root, t))
    root = Call("ifle", (a.root, b.root, after, BinOp("/", after, before)))
    return ObjectiveSpec(root, mode="counterexample", repair_mode=a.repair_mode)


TEMPLATES = {
    "diameter": ("(1 / scc(G)) * diameter(repair(G))", True),
    "avg-distance": ("(1 / scc(G)) * avg_distance(repair(G))", True),
    "irregularity": ("irregularity(G)", False),
}


def template(name: str) -> tuple[ObjectiveSpec, bool]:
    """Shipped objective for one of the benchmark problems and its directedness."""
    try:
        text, directed = TEMPLATES[name]
    except KeyError:
        raise KeyError(f"unknown template {name!r}; choose from {sorted(TEMPLATES)}") from None
    return parse_objective(text), directed
