"""Finite posets and bounded lattices.

Elements are dense indices ``0..m-1``; labels are carried for I/O only.
The order is stored as an ``m x m`` boolean table ``leq`` with
``leq[x, y]`` meaning ``x <= y``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "OrderError",
    "NotALatticeError",
    "ChainBudgetExceeded",
    "HasseDiagram",
    "Poset",
    "BoundedLattice",
    "DEFAULT_CHAIN_BUDGET",
    "build_hasse",
    "iter_maximal_chains",
    "enumerate_maximal_chains",
    "count_maximal_chains",
    "join_irreducibles",
    "meet_irreducibles",
    "eta",
    "eta_dual",
    "is_vee_minimal_regular",
    "is_wedge_minimal_regular",
    "jordan_dedekind_holds",
    "is_distributive",
]

DEFAULT_CHAIN_BUDGET = 10**7


class OrderError(ValueError):
    """The relation is not a partial order (or lacks a required bound)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotALatticeError(OrderError):
    pass


class ChainBudgetExceeded(RuntimeError):
    """Raised when chain enumeration passes its budget."""

    def __init__(self, budget, count):
        super().__init__(f"maximal chain budget {budget} exceeded after {count} chains")
        self.budget = budget
        self.count = count


@dataclass(frozen=True)
class HasseDiagram:
    covers: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.covers)

    def __iter__(self):
        return iter(self.covers)


def _strict_two_step(strict: np.ndarray) -> np.ndarray:
    # float32 matmul is exact here: counts never exceed m < 2**24
    f = strict.astype(np.float32)
    return (f @ f) > 0


def _check_partial_order(leq: np.ndarray) -> None:
    m = leq.shape[0]
    diag = np.diagonal(leq)
    if not diag.all():
        x = int(np.flatnonzero(~diag)[0])
        raise OrderError(f"not reflexive: element {x} is not <= itself", (x, x))
    sym = leq & leq.T & ~np.eye(m, dtype=bool)
    if sym.any():
        x, y = (int(t) for t in np.argwhere(sym)[0])
        raise OrderError(f"not antisymmetric: {x} <= {y} and {y} <= {x}", (x, y))
    missing = _strict_two_step(leq) & ~leq
    if missing.any():
        x, z = (int(t) for t in np.argwhere(missing)[0])
        y = int(np.flatnonzero(leq[x] & leq[:, z])[0])
        raise OrderError(f"not transitive: {x} <= {y} <= {z} but not {x} <= {z}", (x, z))


def _transitive_closure(m: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    leq = np.eye(m, dtype=bool)
    for a, b in pairs:
        leq[a, b] = True
    for k in range(m):
        leq |= np.outer(leq[:, k], leq[k, :])
    return leq


class Poset:
    """A finite partially ordered set.

    Parameters
    ----------
    leq : array-like of shape (m, m)
        Boolean order table, ``leq[x, y]`` iff ``x <= y``.
    labels : sequence of str, optional
        Display labels; defaults to the indices.
    check : bool
        Verify reflexivity, antisymmetry and transitivity.
    """

    def __init__(self, leq, labels: Sequence[str] | None = None, *, check: bool = True,
                 covers: Sequence[tuple[int, int]] | None = None):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise OrderError(f"order table must be square, got shape {leq.shape}")
        if check:
            _check_partial_order(leq)
        leq.setflags(write=False)
        self.leq = leq
        m = leq.shape[0]
        if labels is None:
            labels = [str(i) for i in range(m)]
        if len(labels) != m:
            raise ValueError(f"{len(labels)} labels for {m} elements")
        self.labels = tuple(str(s) for s in labels)
        if covers is not None:
            self.__dict__["hasse"] = HasseDiagram(tuple(sorted((int(a), int(b)) for a, b in covers)))

    @classmethod
    def from_covers(cls, m: int, covers: Iterable[tuple[int, int]], labels=None):
        """Build from cover (or any generating) pairs; the order is their reflexive-transitive closure."""
        covers = list(covers)
        leq = _transitive_closure(m, covers)
        return cls(leq, labels)

    def __len__(self):
        return self.leq.shape[0]

    def __repr__(self):
        return f"{type(self).__name__}(m={len(self)})"

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element label {label!r}") from None

    @cached_property
    def hasse(self) -> HasseDiagram:
        strict = self.leq & ~np.eye(len(self), dtype=bool)
        cov = strict & ~_strict_two_step(strict)
        return HasseDiagram(tuple((int(a), int(b)) for a, b in np.argwhere(cov)))

    @cached_property
    def cover_array(self) -> np.ndarray:
        arr = np.array(self.hasse.covers, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        up = [[] for _ in range(len(self))]
        for a, b in self.hasse.covers:
            up[a].append(b)
        return tuple(tuple(sorted(u)) for u in up)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        down = [[] for _ in range(len(self))]
        for a, b in self.hasse.covers:
            down[b].append(a)
        return tuple(tuple(sorted(d)) for d in down)

    @cached_property
    def linear_extension(self) -> np.ndarray:
        # the strict down-set grows along the order, so sorting by its size is topological
        order = np.argsort(self.leq.sum(axis=0), kind="stable")
        order.setflags(write=False)
        return order

    @cached_property
    def bottom(self) -> int:
        cand = np.flatnonzero(self.leq.all(axis=1))
        if len(cand) != 1:
            raise OrderError("poset has no least element")
        return int(cand[0])

    @cached_property
    def top(self) -> int:
        cand = np.flatnonzero(self.leq.all(axis=0))
        if len(cand) != 1:
            raise OrderError("poset has no greatest element")
        return int(cand[0])

    def dual(self) -> "Poset":
        return Poset(self.leq.T, self.labels, check=False)

    @cached_property
    def chains_below(self) -> tuple[int, ...]:
        """Number of saturated chains from the bottom to each element."""
        count = [0] * len(self)
        count[self.bottom] = 1
        lower = self.lower_covers
        for x in self.linear_extension:
            x = int(x)
            if x != self.bottom:
                count[x] = sum(count[a] for a in lower[x])
        return tuple(count)

    @cached_property
    def chains_above(self) -> tuple[int, ...]:
        """Number of saturated chains from each element to the top."""
        count = [0] * len(self)
        count[self.top] = 1
        upper = self.upper_covers
        for x in self.linear_extension[::-1]:
            x = int(x)
            if x != self.top:
                count[x] = sum(count[b] for b in upper[x])
        return tuple(count)

    @cached_property
    def chain_length_range(self) -> tuple[int, int]:
        """Shortest and longest maximal chain length (number of cover steps)."""
        lo = [0] * len(self)
        hi = [0] * len(self)
        lower = self.lower_covers
        for x in self.linear_extension:
            x = int(x)
            if lower[x]:
                lo[x] = 1 + min(lo[a] for a in lower[x])
                hi[x] = 1 + max(hi[a] for a in lower[x])
        return lo[self.top], hi[self.top]


def build_hasse(p) -> HasseDiagram:
    """Cover pairs of a poset (the transitive reduction of its order).

    ``p`` may be a :class:`Poset` or a raw boolean order table, which is
    validated first.
    """
    if not isinstance(p, Poset):
        p = Poset(p)
    return p.hasse


class BoundedLattice(Poset):
    """A finite lattice with join and meet tables.

    With ``check=True`` the order is validated and the full join/meet tables
    are computed eagerly, failing on the first pair without a unique least
    upper (or greatest lower) bound. With ``check=False`` the tables are
    built on first use.
    """

    def __init__(self, leq, labels=None, *, check: bool = True, covers=None):
        super().__init__(leq, labels, check=check, covers=covers)
        self.bottom, self.top  # noqa: B018 - raises if unbounded
        if check:
            self.join_table
            self.meet_table

    @classmethod
    def from_poset(cls, p: Poset, check: bool = True) -> "BoundedLattice":
        lat = cls(p.leq, p.labels, check=False)
        if "hasse" in p.__dict__:
            lat.__dict__["hasse"] = p.hasse
        if check:
            lat.join_table
            lat.meet_table
        return lat

    @staticmethod
    def _bound_table(up: np.ndarray, kind: str) -> np.ndarray:
        # up[x] = set of elements above x (for joins); least element of the
        # common upper bounds is the one whose own up-set equals the whole set
        m = up.shape[0]
        size = up.sum(axis=1)
        table = np.empty((m, m), dtype=np.int64)
        for x in range(m):
            common = up[x][None, :] & up
            n_common = common.sum(axis=1)
            scores = np.where(common, size[None, :], -1)
            z = scores.argmax(axis=1)
            bad = (n_common == 0) | (size[z] != n_common)
            if bad.any():
                y = int(np.flatnonzero(bad)[0])
                raise NotALatticeError(
                    f"elements {x} and {y} have no unique {kind}", (x, y))
            table[x] = z
        table.setflags(write=False)
        return table

    @cached_property
    def join_table(self) -> np.ndarray:
        return self._bound_table(self.leq, "least upper bound")

    @cached_property
    def meet_table(self) -> np.ndarray:
        return self._bound_table(self.leq.T, "greatest lower bound")

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def dual(self) -> "BoundedLattice":
        return BoundedLattice(self.leq.T, self.labels, check=False)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        return tuple(x for x, low in enumerate(self.lower_covers) if len(low) == 1)

    @cached_property
    def meet_irreducibles(self) -> tuple[int, ...]:
        return tuple(x for x, up in enumerate(self.upper_covers) if len(up) == 1)

    @cached_property
    def eta_masks(self) -> tuple[int, ...]:
        """η(a) for every element, as a bitmask over ``join_irreducibles`` positions."""
        cols = self.leq[list(self.join_irreducibles), :]
        weights = [1 << k for k in range(len(self.join_irreducibles))]
        return tuple(sum(w for w, hit in zip(weights, cols[:, a]) if hit) for a in range(len(self)))

    @cached_property
    def eta_dual_masks(self) -> tuple[int, ...]:
        """η^d(a) for every element, as a bitmask over ``meet_irreducibles`` positions."""
        rows = self.leq[:, list(self.meet_irreducibles)]
        weights = [1 << k for k in range(len(self.meet_irreducibles))]
        return tuple(sum(w for w, hit in zip(weights, rows[a]) if hit) for a in range(len(self)))


def iter_maximal_chains(p: Poset, budget: int | None = DEFAULT_CHAIN_BUDGET) -> Iterator[tuple[int, ...]]:
    """Yield maximal chains bottom-to-top, lexicographically by element index."""
    upper = p.upper_covers
    top = p.top
    path = [p.bottom]
    stack = [iter(upper[p.bottom])]
    count = 0
    if p.bottom == top:
        yield (top,)
        return
    while stack:
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            path.pop()
            continue
        path.append(nxt)
        if nxt == top:
            count += 1
            if budget is not None and count > budget:
                raise ChainBudgetExceeded(budget, count - 1)
            yield tuple(path)
            path.pop()
        else:
            stack.append(iter(upper[nxt]))


def enumerate_maximal_chains(p: Poset, budget: int | None = DEFAULT_CHAIN_BUDGET) -> list[tuple[int, ...]]:
    return list(iter_maximal_chains(p, budget))


def count_maximal_chains(p: Poset) -> int:
    return p.chains_below[p.top]


def join_irreducibles(l: BoundedLattice) -> frozenset[int]:
    """J(L): elements with exactly one lower cover."""
    return frozenset(l.join_irreducibles)


def meet_irreducibles(l: BoundedLattice) -> frozenset[int]:
    """M(L): elements with exactly one upper cover."""
    return frozenset(l.meet_irreducibles)


def eta(l: BoundedLattice, a: int) -> frozenset[int]:
    """Join-irreducibles below ``a``."""
    return frozenset(j for j in l.join_irreducibles if l.leq[j, a])


def eta_dual(l: BoundedLattice, a: int) -> frozenset[int]:
    """Meet-irreducibles above ``a``."""
    return frozenset(x for x in l.meet_irreducibles if l.leq[a, x])


def _covers_grade_by(l: BoundedLattice, masks: Sequence[int], reverse: bool) -> bool:
    for a, b in l.hasse:
        diff = masks[a] ^ masks[b]
        lo, hi = (masks[b], masks[a]) if reverse else (masks[a], masks[b])
        if (lo & ~hi) or diff.bit_count() != 1:
            return False
    return True


def is_vee_minimal_regular(l: BoundedLattice) -> bool:
    """Every maximal chain has exactly |J(L)| cover steps."""
    lo, hi = l.chain_length_range
    ok = lo == hi == len(l.join_irreducibles)
    if ok:
        # each cover step adds a single join-irreducible
        assert _covers_grade_by(l, l.eta_masks, reverse=False)
    return ok


def is_wedge_minimal_regular(l: BoundedLattice) -> bool:
    """Every maximal chain has exactly |M(L)| cover steps."""
    lo, hi = l.chain_length_range
    ok = lo == hi == len(l.meet_irreducibles)
    if ok:
        assert _covers_grade_by(l, l.eta_dual_masks, reverse=True)
    return ok


def jordan_dedekind_holds(p: Poset) -> bool:
    """All maximal chains of every segment [a, b] share one length."""
    m = len(p)
    lower = p.lower_covers
    order = [int(x) for x in p.linear_extension]
    for a in range(m):
        lo = {a: 0}
        hi = {a: 0}
        above = p.leq[a]
        for x in order:
            if x == a or not above[x]:
                continue
            preds = [y for y in lower[x] if y in lo]
            lo[x] = 1 + min(lo[y] for y in preds)
            hi[x] = 1 + max(hi[y] for y in preds)
            if lo[x] != hi[x]:
                return False
    return True


def is_distributive(l: BoundedLattice) -> bool:
    """Check a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c) for all triples."""
    join, meet = l.join_table, l.meet_table
    for a in range(len(l)):
        ma = meet[a]
        if not np.array_equal(ma[join], join[ma[:, None], ma[None, :]]):
            return False
    assert is_vee_minimal_regular(l) and is_wedge_minimal_regular(l)
    return True
