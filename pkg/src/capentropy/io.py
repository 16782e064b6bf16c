"""Text formats for structures and capacities.

Structure file::

    # comments start with '#'
    set_system 3          # kind and ground-set size
    players a b c         # optional player names (default 1..n)
    -                     # one member per line, "-" is the empty set
    a
    ab
    abc

    lattice
    elements g d e f b c a   # optional: fixes element order
    g d                      # one cover pair "lower upper" per line
    ...

A file (or command-line argument) may also be a single shorthand:
``boolean:n``, ``bicap:n`` or ``multi:l1,l2,...``.

Capacity file: one ``label value`` pair per line; values may be decimals or
fractions like ``1/3``. A line ``game`` relaxes the capacity checks.
"""

from __future__ import annotations

import os
from fractions import Fraction

from .canonical import ProductLattice, bicapacity_lattice, multichoice_lattice
from .capacity import Capacity
from .order import BoundedLattice, OrderError, Poset
from .setsystem import SetSystem, parse_subset

__all__ = [
    "ParseError",
    "parse_shorthand",
    "parse_structure",
    "load_structure",
    "format_structure",
    "parse_capacity",
    "load_capacity",
    "format_capacity",
    "format_value",
]


class ParseError(ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def parse_shorthand(spec: str):
    kind, sep, arg = spec.strip().partition(":")
    if not sep:
        raise ParseError(f"not a shorthand: {spec!r}")
    try:
        if kind == "boolean":
            return SetSystem.power_set(int(arg))
        if kind == "bicap":
            return bicapacity_lattice(int(arg))
        if kind == "multi":
            return multichoice_lattice([int(t) for t in arg.split(",")])
    except ValueError as err:
        raise ParseError(f"bad shorthand {spec!r}: {err}") from None
    raise ParseError(f"unknown shorthand kind {kind!r} (use boolean:n, bicap:n, multi:l1,l2,...)")


def parse_structure(text: str):
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty structure file")
    no, head = lines[0]
    words = head.split()
    if ":" in words[0] and len(lines) == 1:
        try:
            return parse_shorthand(words[0])
        except ParseError as err:
            raise ParseError(str(err), no) from None
    if words[0] == "set_system":
        return _parse_set_system(words, lines[1:], no)
    if words[0] == "lattice":
        return _parse_lattice(lines[1:])
    raise ParseError(f"unknown structure kind {words[0]!r}", no)


def _parse_set_system(words, body, head_no):
    if len(words) != 2:
        raise ParseError("expected 'set_system <n>'", head_no)
    try:
        n = int(words[1])
    except ValueError:
        raise ParseError(f"bad ground-set size {words[1]!r}", head_no) from None
    players = None
    if body and body[0][1].split()[0] == "players":
        no, line = body[0]
        players = line.split()[1:]
        body = body[1:]
        if len(players) != n:
            raise ParseError(f"{len(players)} player names for n={n}", no)
    names = players or [str(k + 1) for k in range(n)]
    masks = []
    for no, line in body:
        try:
            masks.append(parse_subset(line, names))
        except ValueError as err:
            raise ParseError(str(err), no) from None
    try:
        return SetSystem(n, masks, players)
    except ValueError as err:
        raise ParseError(str(err)) from None


def _parse_lattice(body):
    labels: list[str] = []
    seen: dict[str, int] = {}

    def idx(name):
        if name not in seen:
            seen[name] = len(labels)
            labels.append(name)
        return seen[name]

    pairs = []
    for no, line in body:
        words = line.split()
        if words[0] == "elements":
            for w in words[1:]:
                idx(w)
            continue
        if len(words) != 2:
            raise ParseError(f"expected a cover pair 'lower upper', got {line!r}", no)
        pairs.append((idx(words[0]), idx(words[1])))
    if not labels:
        raise ParseError("lattice has no elements")
    try:
        p = Poset.from_covers(len(labels), pairs, labels)
        return BoundedLattice.from_poset(p)
    except OrderError as err:
        raise ParseError(f"not a lattice: {err}") from None


def load_structure(arg: str):
    """Parse ``arg`` as a shorthand, or read it as a structure file."""
    if not os.path.exists(arg) and ":" in arg:
        return parse_shorthand(arg)
    with open(arg, encoding="utf-8") as fh:
        return parse_structure(fh.read())


def format_structure(structure) -> str:
    if isinstance(structure, SetSystem):
        out = [f"set_system {structure.n}"]
        if structure.players != tuple(str(k + 1) for k in range(structure.n)):
            out.append("players " + " ".join(structure.players))
        out.extend(structure.labels)
        return "\n".join(out) + "\n"
    if isinstance(structure, ProductLattice) and structure.kind == "bicap":
        return f"bicap:{structure.n}\n"
    if isinstance(structure, ProductLattice) and structure.kind == "multi":
        return "multi:" + ",".join(map(str, structure.levels)) + "\n"
    if isinstance(structure, Poset):
        out = ["lattice", "elements " + " ".join(structure.labels)]
        out.extend(f"{structure.labels[a]} {structure.labels[b]}" for a, b in structure.hasse)
        return "\n".join(out) + "\n"
    raise TypeError(f"cannot format {type(structure).__name__}")


def _parse_value(token: str, exact: bool):
    try:
        val = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad value {token!r}") from None
    return val if exact else float(val)


def parse_capacity(text: str, structure, exact: bool = False) -> Capacity:
    values: dict[str, object] = {}
    game = False
    for no, line in _lines(text):
        words = line.split()
        if words == ["game"]:
            game = True
            continue
        if len(words) != 2:
            raise ParseError(f"expected 'label value', got {line!r}", no)
        label, token = words
        try:
            structure.index(label)
        except (KeyError, ValueError):
            raise ParseError(f"unknown element {label!r}", no) from None
        if label in values:
            raise ParseError(f"duplicate value for {label!r}", no)
        try:
            values[label] = _parse_value(token, exact)
        except ValueError as err:
            raise ParseError(str(err), no) from None
    return Capacity.from_mapping(structure, values, game=game)


def load_capacity(path: str, structure, exact: bool = False) -> Capacity:
    with open(path, encoding="utf-8") as fh:
        return parse_capacity(fh.read(), structure, exact)


def format_value(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def format_capacity(v: Capacity) -> str:
    out = ["game"] if v.game else []
    out.extend(f"{s} {format_value(x)}" for s, x in zip(v.structure.labels, v.values))
    return "\n".join(out) + "\n"
