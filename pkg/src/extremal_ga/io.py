"""graph6 / digraph6 serialization, DOT export and run configuration files."""

from __future__ import annotations

import configparser
from dataclasses import fields
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .engine import Crossover, EngineConfig
from .errors import ConfigError, DomainError, FormatError
from .graph import MAX_ORDER, Graph, Scheme
from .mutations import MutationScheme
from .operators import Selection


def _pack(bits: Sequence[int]) -> str:
    out = []
    for k in range(0, len(bits), 6):
        chunk = list(bits[k:k + 6])
        chunk += [0] * (6 - len(chunk))
        value = 0
        for b in chunk:
            value = value << 1 | b
        out.append(chr(value + 63))
    return "".join(out)


def _unpack(body: str, count: int) -> list[int]:
    if len(body) != -(-count // 6):
        raise FormatError(f"expected {-(-count // 6)} data bytes, got {len(body)}")
    bits = []
    for ch in body:
        value = ord(ch) - 63
        if not 0 <= value < 64:
            raise FormatError(f"byte {ch!r} outside the printable range")
        bits.extend(value >> (5 - i) & 1 for i in range(6))
    if any(bits[count:]):
        raise FormatError("nonzero padding bits")
    return bits[:count]


def _header(n: int) -> str:
    if not 0 <= n <= MAX_ORDER:
        raise FormatError(f"order {n} needs the multi-byte size field, which is not supported")
    return chr(n + 63)


def _read_header(s: str) -> tuple[int, str]:
    if not s:
        raise FormatError("empty string")
    n = ord(s[0]) - 63
    if not 0 <= n <= MAX_ORDER:
        raise FormatError(f"unsupported size byte {s[0]!r}")
    return n, s[1:]


def encode_graph6(g: Graph) -> str:
    if g.directed:
        raise DomainError("graph6 holds undirected graphs; use digraph6")
    bits = [g.rows[i] >> j & 1 for j in range(1, g.n) for i in range(j)]
    return _header(g.n) + _pack(bits)


def decode_graph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>graph6<<"):
        s = s[10:]
    if s.startswith("&"):
        raise FormatError("digraph6 string passed to the graph6 decoder")
    n, body = _read_header(s)
    slots = [(i, j) for j in range(1, n) for i in range(j)]
    bits = _unpack(body, len(slots))
    return Graph.from_arcs(n, [e for e, b in zip(slots, bits) if b], directed=False)


def encode_digraph6(g: Graph) -> str:
    if not g.directed:
        raise DomainError("digraph6 holds directed graphs; use graph6")
    bits = [g.rows[i] >> j & 1 for i in range(g.n) for j in range(g.n)]
    return "&" + _header(g.n) + _pack(bits)


def decode_digraph6(s: str) -> Graph:
    s = s.strip()
    if s.startswith(">>digraph6<<"):
        s = s[12:]
    if not s.startswith("&"):
        raise FormatError("digraph6 strings start with '&'")
    n, body = _read_header(s[1:])
    bits = _unpack(body, n * n)
    if any(bits[i * n + i] for i in range(n)):
        raise FormatError("digraph6 string has a loop")
    return Graph.from_arcs(n, [(k // n, k % n) for k, b in enumerate(bits) if b], directed=True)


def encode_line(g: Graph) -> str:
    return encode_digraph6(g) if g.directed else encode_graph6(g)


def decode_line(s: str) -> Graph:
    s = s.strip()
    return decode_digraph6(s) if s.startswith("&") or s.startswith(">>digraph6") else decode_graph6(s)


def to_dot(g: Graph, labels: Mapping[int, str] | Sequence[str] | None = None, name: str = "G") -> str:
    kind, sep = ("digraph", "->") if g.directed else ("graph", "--")
    lines = [f"{kind} {name} {{"]
    for v in range(g.n):
        if labels is not None:
            label = str(labels[v]).replace('"', '\\"')
            lines.append(f'  {v} [label="{label}"];')
        else:
            lines.append(f"  {v};")
    for u, v in g.arcs():
        lines.append(f"  {u} {sep} {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- configuration files -----------------------------------------------------

ENGINE_KEYS = tuple(f.name for f in fields(EngineConfig))
OBJECTIVE_KEYS = ("template", "objective", "mode", "bound", "repair", "transform", "invariant", "preserve")
RUN_KEYS = ("runs", "workers", "known_optimum")
OUTPUT_KEYS = ("out_dir",)
SECTIONS = {"engine": ENGINE_KEYS, "objective": OBJECTIVE_KEYS, "run": RUN_KEYS, "output": OUTPUT_KEYS}

_BOOL = {"1": True, "yes": True, "true": True, "on": True, "0": False, "no": False, "false": False, "off": False}


def _to_bool(key, text):
    try:
        return _BOOL[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"{key}: expected a boolean, got {text!r}") from None


def parse_mutation_weights(text: str) -> dict:
    """``"add-edge:2, shortcut:1"`` -> weight mapping; unnamed schemes get weight 0."""
    weights = {s: 0.0 for s in MutationScheme}
    for part in text.split(","):
        if not part.strip():
            continue
        name, _, w = part.partition(":")
        try:
            weights[MutationScheme(name.strip())] = float(w) if w.strip() else 1.0
        except ValueError:
            raise ConfigError(f"bad mutation weight entry {part.strip()!r}") from None
    return weights


def engine_value(key: str, text: str):
    """Convert one textual EngineConfig value."""
    text = text.strip()
    try:
        if key in ("n", "population_size", "generations", "mutation_chain", "elitism", "seed"):
            return int(text)
        if key in ("crossover_rate", "mutation_rate", "catalog_fraction", "random_p"):
            return float(text)
        if key in ("directed", "ensure_cover", "stop_on_certificate"):
            return _to_bool(key, text)
        if key in ("parent_selection", "survivor_selection"):
            return Selection.parse(text)
        if key == "crossover":
            return Crossover.parse(text)
        if key == "encoding":
            return Scheme(text.replace("_", "-"))
        if key == "mutation_weights":
            return parse_mutation_weights(text)
        if key == "stop_on_target":
            return None if text.lower() in ("", "none") else Fraction(text)
        if key in ("generator", "stream_mode"):
            return text
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    raise ConfigError(f"unknown engine key {key!r}")


def read_config(path: str) -> dict[str, dict[str, str]]:
    """Read an INI-style run file; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    out = {}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"{path}: unknown section [{section}]")
        known = SECTIONS[section]
        values = {}
        for key, value in parser.items(section):
            k = key.replace("-", "_")
            if k not in known:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            values[k] = value
        out[section] = values
    return out


def engine_config_from(values: Mapping[str, str], base: EngineConfig | None = None, **overrides) -> EngineConfig:
    converted = {k: engine_value(k, v) for k, v in values.items()}
    converted.update(overrides)
    if base is not None:
        return base.with_(**converted)
    if "n" not in converted:
        raise ConfigError("engine configuration needs n")
    return EngineConfig(**converted)


def write_lines(path: str, lines: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
