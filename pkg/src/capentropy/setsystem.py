"""Set systems over a finite ground set, stored as bitmasks.

Player ``k`` (0-based) is bit ``1 << k`` and is printed as ``k + 1``.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .order import BoundedLattice, NotALatticeError, Poset, is_vee_minimal_regular

__all__ = [
    "MAX_PLAYERS",
    "SetSystem",
    "format_subset",
    "parse_subset",
    "containment_poset",
    "is_regular",
    "is_convex_geometry",
    "is_antimatroid",
    "dualize",
    "from_lattice",
    "to_lattice",
]

MAX_PLAYERS = 24


def _default_players(n):
    return tuple(str(k + 1) for k in range(n))


def format_subset(mask: int, players: Sequence[str]) -> str:
    """Canonical text of a subset: ``"-"`` for ∅, concatenated labels when
    every label is one character, else ``{a,b,c}``."""
    if mask == 0:
        return "-"
    names = [players[k] for k in range(len(players)) if mask >> k & 1]
    if all(len(p) == 1 for p in players):
        return "".join(names)
    return "{" + ",".join(names) + "}"


def parse_subset(text: str, players: Sequence[str]) -> int:
    text = text.strip()
    if text in ("-", "{}", "∅"):
        return 0
    pos = {p: k for k, p in enumerate(players)}
    if text.startswith("{") and text.endswith("}"):
        names = [t.strip() for t in text[1:-1].split(",") if t.strip()]
    elif all(len(p) == 1 for p in players):
        names = list(text)
    else:
        raise ValueError(f"cannot parse subset {text!r}: use the braced form {{a,b}}")
    mask = 0
    for name in names:
        if name not in pos:
            raise ValueError(f"unknown player {name!r} in subset {text!r}")
        bit = 1 << pos[name]
        if mask & bit:
            raise ValueError(f"player {name!r} repeated in subset {text!r}")
        mask |= bit
    return mask


class SetSystem:
    """A family of subsets of ``{1..n}`` containing ∅ and N.

    The family is kept duplicate-free and sorted by (cardinality, mask),
    so index 0 is ∅ and the last index is N.
    """

    def __init__(self, n: int, family: Iterable[int], players: Sequence[str] | None = None):
        if not 1 <= n <= MAX_PLAYERS:
            raise ValueError(f"ground set size must be in 1..{MAX_PLAYERS}, got {n}")
        full = (1 << n) - 1
        masks = sorted({int(a) for a in family}, key=lambda a: (a.bit_count(), a))
        for a in masks:
            if a < 0 or a > full:
                raise ValueError(f"mask {a} is not a subset of a {n}-player ground set")
        if not masks or masks[0] != 0:
            raise ValueError("set system must contain the empty set")
        if masks[-1] != full:
            raise ValueError("set system must contain the full ground set")
        self.n = n
        self.family = tuple(masks)
        self.players = tuple(players) if players is not None else _default_players(n)
        if len(self.players) != n or len(set(self.players)) != n:
            raise ValueError("need n distinct player labels")

    @classmethod
    def power_set(cls, n: int, players=None) -> "SetSystem":
        return cls(n, range(1 << n), players)

    @classmethod
    def from_labels(cls, n: int, labels: Iterable[str], players=None) -> "SetSystem":
        players = tuple(players) if players is not None else _default_players(n)
        return cls(n, (parse_subset(s, players) for s in labels), players)

    def __len__(self):
        return len(self.family)

    def __eq__(self, other):
        return (isinstance(other, SetSystem) and self.n == other.n
                and self.family == other.family and self.players == other.players)

    def __hash__(self):
        return hash((self.n, self.family, self.players))

    def __repr__(self):
        return f"SetSystem(n={self.n}, family=[{', '.join(self.labels)}])"

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.family) - 1

    @cached_property
    def is_power_set(self) -> bool:
        return len(self.family) == 1 << self.n

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(format_subset(a, self.players) for a in self.family)

    @cached_property
    def _position(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.family)}

    def position(self, mask: int) -> int:
        return self._position[mask]

    def __contains__(self, mask) -> bool:
        return mask in self._position

    def index(self, label: str) -> int:
        mask = parse_subset(label, self.players)
        try:
            return self._position[mask]
        except KeyError:
            raise KeyError(f"subset {label!r} is not in the family") from None

    @cached_property
    def mask_array(self) -> np.ndarray:
        arr = np.array(self.family, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def sizes(self) -> np.ndarray:
        arr = np.array([a.bit_count() for a in self.family], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def poset(self) -> Poset:
        return containment_poset(self)

    @cached_property
    def cover_array(self) -> np.ndarray:
        if self.is_power_set:
            # single-bit additions; positions via the inverse permutation
            masks = self.mask_array
            pos = np.empty(len(masks), dtype=np.int64)
            pos[masks] = np.arange(len(masks))
            pairs = []
            for k in range(self.n):
                lo = masks[(masks >> k & 1) == 0]
                pairs.append(np.stack([pos[lo], pos[lo | (1 << k)]], axis=1))
            arr = np.concatenate(pairs)
            arr = arr[np.lexsort((arr[:, 1], arr[:, 0]))]
        else:
            arr = self.poset.cover_array
        arr.setflags(write=False)
        return arr

    # the chain-counting machinery lives on Poset; reuse it through the containment order
    @property
    def upper_covers(self):
        return self.poset.upper_covers

    @property
    def lower_covers(self):
        return self.poset.lower_covers

    @property
    def hasse(self):
        return self.poset.hasse

    @property
    def chains_below(self):
        return self.poset.chains_below

    @property
    def chains_above(self):
        return self.poset.chains_above

    @property
    def chain_length_range(self):
        return self.poset.chain_length_range

    @property
    def linear_extension(self):
        return np.arange(len(self.family))


def containment_poset(s: SetSystem) -> Poset:
    """The family ordered by inclusion."""
    masks = s.mask_array
    leq = (masks[:, None] & masks[None, :]) == masks[:, None]
    covers = None
    if s.is_power_set:
        covers = [tuple(map(int, c)) for c in s.cover_array]
    return Poset(leq, s.labels, check=False, covers=covers)


def is_regular(s: SetSystem) -> bool:
    """Every maximal chain of (S, ⊆) has n + 1 members."""
    lo, hi = s.chain_length_range
    ok = lo == hi == s.n
    if ok:
        fam = s.family
        assert all((fam[a] ^ fam[b]).bit_count() == 1 for a, b in s.cover_array)
    return ok


def is_convex_geometry(s: SetSystem) -> bool:
    fam = s._position
    masks = s.family
    # closed under intersection
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if a & b not in fam:
                return False
    # one-point augmentation
    for a in masks:
        if a == s.full:
            continue
        if not any(a | 1 << k in fam for k in range(s.n) if not a >> k & 1):
            return False
    return True


def dualize(s: SetSystem) -> SetSystem:
    """Complement every member."""
    return SetSystem(s.n, (s.full ^ a for a in s.family), s.players)


def is_antimatroid(s: SetSystem) -> bool:
    return is_convex_geometry(dualize(s))


def to_lattice(s: SetSystem) -> BoundedLattice:
    """The containment order as a lattice; raises NotALatticeError otherwise."""
    return BoundedLattice.from_poset(s.poset, check=True)


def from_lattice(l: BoundedLattice) -> SetSystem:
    """(J(L), η(L)): the lattice re-encoded over its join-irreducibles."""
    joins = l.join_irreducibles
    if not joins:
        raise ValueError("a one-element lattice has no join-irreducibles")
    if len(joins) > MAX_PLAYERS:
        raise ValueError(f"|J(L)| = {len(joins)} exceeds {MAX_PLAYERS} players")
    masks = l.eta_masks
    if len(set(masks)) != len(masks):
        raise NotALatticeError("two elements share an η-image; input is not a lattice")
    s = SetSystem(len(joins), masks, [l.labels[j] for j in joins])
    if is_vee_minimal_regular(l):
        assert is_regular(s)
    return s

