"""Boolean lattices, bi-capacity lattices Q(N) and multichoice product lattices.

All three are products of chains. An element is stored by its level
profile ``(a_1, ..., a_n)`` with ``0 <= a_i <= levels[i]``; its index is
the mixed-radix number with player 0 as the least significant digit.

For Q(N) a player's level is 0 when it sits in the negative part B, 1 when
neutral and 2 when in the positive part A, so (A, B) ⊑ (A', B') is exactly
the product order and ⊥ = (∅, N), ⊤ = (N, ∅).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .capacity import Capacity, CapacityError
from .measures import _h, shapley_lattice
from .order import BoundedLattice
from .setsystem import format_subset

__all__ = [
    "ProductLattice",
    "MAX_PRODUCT_SIZE",
    "boolean_lattice",
    "bicapacity_lattice",
    "multichoice_lattice",
    "boolean_chain_count",
    "bicapacity_chain_count",
    "multichoice_chain_count",
    "gamma_bicap",
    "bicap_step_chain_count",
    "xi_coefficient",
    "multichoice_step_chain_count",
    "bicapacity_normalize",
    "BiShapley",
    "bicapacity_shapley",
    "bicapacity_shapley_generic",
    "bicapacity_entropy",
    "MultichoiceShapley",
    "multichoice_shapley",
    "multichoice_shapley_generic",
    "multichoice_entropy",
    "bicap_as_multichoice_check",
]

MAX_PRODUCT_SIZE = 4096


class ProductLattice(BoundedLattice):
    """A finite product of chains ``{0..l_1} x ... x {0..l_n}``."""

    def __init__(self, levels: Sequence[int], labels=None, kind: str = "multi"):
        levels = tuple(int(l) for l in levels)
        if not levels or any(l < 1 for l in levels):
            raise ValueError(f"levels must be positive integers, got {levels}")
        size = math.prod(l + 1 for l in levels)
        if size > MAX_PRODUCT_SIZE:
            raise ValueError(f"product lattice would have {size} > {MAX_PRODUCT_SIZE} elements")
        radix = [1]
        for l in levels[:-1]:
            radix.append(radix[-1] * (l + 1))
        profiles = np.array(
            [p[::-1] for p in itertools.product(*(range(l + 1) for l in reversed(levels)))],
            dtype=np.int64)
        leq = (profiles[:, None, :] <= profiles[None, :, :]).all(axis=2)
        covers = [(x, x + radix[i]) for x in range(size)
                  for i in range(len(levels)) if profiles[x, i] < levels[i]]
        if labels is None:
            labels = [",".join(map(str, p)) for p in profiles]
        super().__init__(leq, labels, check=False, covers=covers)
        profiles.setflags(write=False)
        self.levels = levels
        self.profiles = profiles
        self.radix = tuple(radix)
        self.kind = kind

    @property
    def n(self) -> int:
        return len(self.levels)

    def index_of(self, profile: Sequence[int]) -> int:
        if len(profile) != self.n or any(not 0 <= a <= l for a, l in zip(profile, self.levels)):
            raise ValueError(f"profile {tuple(profile)} outside {self.levels}")
        return sum(int(a) * r for a, r in zip(profile, self.radix))

    def profile(self, x: int) -> tuple[int, ...]:
        return tuple(int(a) for a in self.profiles[x])

    def step_of(self, a: int, b: int) -> tuple[int, int]:
        """(player, new level) for the cover step a -> b."""
        d = self.profiles[b] - self.profiles[a]
        (i,) = np.flatnonzero(d)
        return int(i), int(self.profiles[b, i])

    # Q(N) helpers
    def pair(self, x: int) -> tuple[int, int]:
        """(A, B) bitmasks of a Q(N) element."""
        p = self.profiles[x]
        pos = sum(1 << i for i, a in enumerate(p) if a == 2)
        neg = sum(1 << i for i, a in enumerate(p) if a == 0)
        return pos, neg

    def index_of_pair(self, pos: int, neg: int) -> int:
        if pos & neg:
            raise ValueError("positive and negative parts must be disjoint")
        return self.index_of([2 if pos >> i & 1 else 0 if neg >> i & 1 else 1 for i in range(self.n)])


def _players(n):
    return tuple(str(k + 1) for k in range(n))


def boolean_lattice(n: int) -> ProductLattice:
    """2^N as an abstract lattice; element index equals the subset bitmask."""
    if not 1 <= n <= 12:
        raise ValueError("boolean_lattice supports 1 <= n <= 12")
    players = _players(n)
    labels = [format_subset(m, players) for m in range(1 << n)]
    return ProductLattice((1,) * n, labels, kind="boolean")


def bicapacity_lattice(n: int) -> ProductLattice:
    """Q(N) = {(A, B) : A ∩ B = ∅} ordered by A ⊆ A', B ⊇ B'. Labels read ``A|B``."""
    if not 1 <= n <= 6:
        raise ValueError("bicapacity_lattice supports 1 <= n <= 6")
    players = _players(n)
    probe = ProductLattice((2,) * n)
    labels = []
    for x in range(len(probe)):
        pos, neg = probe.pair(x)
        labels.append(f"{format_subset(pos, players)}|{format_subset(neg, players)}")
    return ProductLattice((2,) * n, labels, kind="bicap")


def multichoice_lattice(levels: Sequence[int]) -> ProductLattice:
    """L_1 x ... x L_n with L_i = {0, ..., levels[i]}; labels are comma-joined profiles."""
    return ProductLattice(levels, kind="multi")


# -- chain counts and coefficients -----------------------------------------

def boolean_chain_count(n: int) -> int:
    return math.factorial(n)


def bicapacity_chain_count(n: int) -> int:
    return math.factorial(2 * n) // 2**n


def multichoice_chain_count(levels: Sequence[int]) -> int:
    return math.factorial(sum(levels)) // math.prod(math.factorial(l) for l in levels)


def _check_bicap_domain(n, k, l):
    if n < 1 or k < 0 or l < 0 or k + l > n - 1:
        raise ValueError(f"need k, l >= 0 and k + l <= n - 1, got n={n}, k={k}, l={l}")


def bicap_step_chain_count(n: int, k: int, l: int) -> int:
    """Chains of Q(N) through (A, B) and (A ∪ i, B) with |A| = k, |B| = l."""
    _check_bicap_domain(n, k, l)
    f = math.factorial
    return (f(n + k - l) // 2**k) * (f(n - k + l - 1) // 2**l)


def gamma_bicap(n: int, k: int, l: int) -> Fraction:
    """(n - k + l - 1)! (n + k - l)! 2^(n - k - l) / (2n)!"""
    _check_bicap_domain(n, k, l)
    f = math.factorial
    return Fraction(f(n - k + l - 1) * f(n + k - l) * 2 ** (n - k - l), f(2 * n))


def _check_profile(levels, a, i):
    if len(a) != len(levels) or any(not 0 <= x <= l for x, l in zip(a, levels)):
        raise ValueError(f"profile {tuple(a)} outside levels {tuple(levels)}")
    if not 0 <= i < len(levels) or a[i] < 1:
        raise ValueError(f"player {i} must be at level >= 1 in {tuple(a)}")


def multichoice_step_chain_count(levels: Sequence[int], a: Sequence[int], i: int) -> int:
    """Chains through (a with a_i - 1) and a."""
    _check_profile(levels, a, i)
    f = math.factorial
    below = f(sum(a) - 1) * a[i] // math.prod(f(x) for x in a)
    above = f(sum(l - x for l, x in zip(levels, a))) // math.prod(f(l - x) for l, x in zip(levels, a))
    return below * above


def xi_coefficient(levels: Sequence[int], a: Sequence[int], i: int) -> Fraction:
    """Π C(l_k, a_k) / C(Σ l, Σ a) · a_i / Σ a, with ``i`` 0-based."""
    _check_profile(levels, a, i)
    num = math.prod(math.comb(l, x) for l, x in zip(levels, a))
    return Fraction(num, math.comb(sum(levels), sum(a))) * Fraction(a[i], sum(a))


# -- bi-capacities ---------------------------------------------------------

def _values_for(lattice, values):
    if isinstance(values, Mapping):
        out = [None] * len(lattice)
        for label, val in values.items():
            out[lattice.index(label)] = val
        if any(v is None for v in out):
            raise CapacityError("bi-capacity needs a value on every element")
        return out
    return list(values)


def bicapacity_normalize(lattice: ProductLattice, values) -> Capacity:
    """v' = v / 2 + 1/2 for a bi-capacity with v(∅,N) = -1, v(∅,∅) = 0, v(N,∅) = 1."""
    if getattr(lattice, "kind", None) != "bicap":
        raise CapacityError("bicapacity_normalize needs a Q(N) lattice")
    vals = _values_for(lattice, values)
    neutral = lattice.index_of([1] * lattice.n)
    if vals[lattice.bottom] != -1 or vals[neutral] != 0 or vals[lattice.top] != 1:
        raise CapacityError("bi-capacity must satisfy v(∅,N) = -1, v(∅,∅) = 0, v(N,∅) = 1")
    half = Fraction(1, 2) if any(isinstance(x, Fraction) for x in vals) else 0.5
    return Capacity(lattice, [x * half + half for x in vals])


def _require_kind(v: Capacity, kind):
    s = v.structure
    if getattr(s, "kind", None) != kind:
        raise CapacityError(f"capacity must live on a {kind} lattice")
    return s


@dataclass(frozen=True)
class BiShapley:
    plus: np.ndarray
    minus: np.ndarray

    @property
    def phi(self) -> np.ndarray:
        return self.plus + self.minus


def _bicap_steps(n):
    """Yield (i, A, B) with A ⊆ N∖i, B ⊆ N∖(A ∪ i)."""
    for i in range(n):
        others = [k for k in range(n) if k != i]
        for roles in itertools.product((0, 1, 2), repeat=n - 1):
            pos = sum(1 << k for k, r in zip(others, roles) if r == 1)
            neg = sum(1 << k for k, r in zip(others, roles) if r == 2)
            yield i, pos, neg


def bicapacity_shapley(v: Capacity, exact: bool | None = None) -> BiShapley:
    """Closed-form φ⁺ and φ⁻ through the γ^n_{k,l} coefficients."""
    q = _require_kind(v, "bicap")
    n = q.n
    exact = v.exact if exact is None else exact
    zero = Fraction(0) if exact else 0.0
    plus, minus = [zero] * n, [zero] * n
    val = v.values
    for i, A, B in _bicap_steps(n):
        g = gamma_bicap(n, A.bit_count(), B.bit_count())
        g = g if exact else float(g)
        bit = 1 << i
        plus[i] += g * (val[q.index_of_pair(A | bit, B)] - val[q.index_of_pair(A, B)])
        minus[i] += g * (val[q.index_of_pair(B, A)] - val[q.index_of_pair(B, A | bit)])
    dtype = object if exact else np.float64
    return BiShapley(np.array(plus, dtype=dtype), np.array(minus, dtype=dtype))


def bicapacity_entropy(v: Capacity) -> float:
    """Closed-form entropy of a normalized bi-capacity."""
    q = _require_kind(v, "bicap")
    n = q.n
    val = np.asarray(v.values, dtype=np.float64)
    total = 0.0
    for i, A, B in _bicap_steps(n):
        g = float(gamma_bicap(n, A.bit_count(), B.bit_count()))
        bit = 1 << i
        up = val[q.index_of_pair(A | bit, B)] - val[q.index_of_pair(A, B)]
        down = val[q.index_of_pair(B, A)] - val[q.index_of_pair(B, A | bit)]
        total += g * float(_h(np.array([up, down])).sum())
    return total


def bicapacity_shapley_generic(v: Capacity, exact: bool | None = None) -> BiShapley:
    """φ± read off the J(Q(N))-indexed lattice Shapley value."""
    q = _require_kind(v, "bicap")
    sv = shapley_lattice(v, exact=exact)
    n = q.n
    plus, minus = [None] * n, [None] * n
    for x, val in zip(sv.index, sv.phi):
        player, level = _single_axis(q, x)
        (plus if level == 2 else minus)[player] = val
    dtype = sv.phi.dtype
    return BiShapley(np.array(plus, dtype=dtype), np.array(minus, dtype=dtype))


def _single_axis(lat: ProductLattice, x: int) -> tuple[int, int]:
    # J of a product of chains: one player above level 0, all others at 0;
    # for Q(N) these are (∅, N∖i) at level 1 and ({i}, N∖i) at level 2
    p = lat.profiles[x]
    moved = np.flatnonzero(p)
    if len(moved) != 1:
        raise AssertionError(f"{lat.labels[x]} is not a single-axis profile")
    i = int(moved[0])
    return i, int(p[i])


# -- multichoice -----------------------------------------------------------

@dataclass(frozen=True)
class MultichoiceShapley:
    levels: tuple[int, ...]
    table: tuple[np.ndarray, ...]  # table[i][j - 1] = φ^j_i

    @property
    def phi(self) -> np.ndarray:
        """Overall contribution of each player, Σ_j φ^j_i."""
        vals = [sum(row) for row in self.table]
        return np.array(vals, dtype=self.table[0].dtype)

    def total(self):
        return sum(self.phi)


def _multichoice_steps(levels):
    """Yield (i, j, upper profile) for every cover step raising player i to level j."""
    for a in itertools.product(*(range(l + 1) for l in levels)):
        for i, ai in enumerate(a):
            if ai >= 1:
                yield i, ai, a


def multichoice_shapley(v: Capacity, exact: bool | None = None) -> MultichoiceShapley:
    """Closed-form φ^j_i = Σ_a ξ_i^(a,j) (v(a, j) − v(a, j−1))."""
    lat = _require_kind(v, "multi")
    exact = v.exact if exact is None else exact
    zero = Fraction(0) if exact else 0.0
    table = [[zero] * l for l in lat.levels]
    val = v.values
    for i, j, a in _multichoice_steps(lat.levels):
        xi = xi_coefficient(lat.levels, a, i)
        xi = xi if exact else float(xi)
        lower = list(a)
        lower[i] -= 1
        table[i][j - 1] += xi * (val[lat.index_of(a)] - val[lat.index_of(lower)])
    dtype = object if exact else np.float64
    return MultichoiceShapley(lat.levels, tuple(np.array(row, dtype=dtype) for row in table))


def multichoice_entropy(v: Capacity) -> float:
    """Closed-form Σ ξ h(v(a, j) − v(a, j−1))."""
    lat = _require_kind(v, "multi")
    val = np.asarray(v.values, dtype=np.float64)
    total = 0.0
    for i, j, a in _multichoice_steps(lat.levels):
        lower = list(a)
        lower[i] -= 1
        inc = val[lat.index_of(a)] - val[lat.index_of(lower)]
        total += float(xi_coefficient(lat.levels, a, i)) * float(_h(np.array([inc]))[0])
    return total


def multichoice_shapley_generic(v: Capacity, exact: bool | None = None) -> MultichoiceShapley:
    """φ^j_i read off the J(L)-indexed lattice Shapley value."""
    lat = _require_kind(v, "multi")
    sv = shapley_lattice(v, exact=exact)
    table = [[None] * l for l in lat.levels]
    for x, val in zip(sv.index, sv.phi):
        i, j = _single_axis(lat, x)
        table[i][j - 1] = val
    dtype = sv.phi.dtype
    return MultichoiceShapley(lat.levels, tuple(np.array(row, dtype=dtype) for row in table))


def bicap_as_multichoice_check(v: Capacity, tol: float = 1e-12) -> bool:
    """Compare Q(N) closed forms with the multichoice ones under l_i = 2.

    (A, B) maps to the profile with level 2 on A, 0 on B and 1 elsewhere, so
    (∅, ∅) becomes the all-ones middle profile fixed at 1/2.
    """
    q = _require_kind(v, "bicap")
    lat = multichoice_lattice((2,) * q.n)
    moved = [None] * len(lat)
    for x in range(len(q)):
        pos, neg = q.pair(x)
        prof = [2 if pos >> i & 1 else 0 if neg >> i & 1 else 1 for i in range(q.n)]
        moved[lat.index_of(prof)] = v.values[x]
    w = Capacity(lat, moved)
    bi = bicapacity_shapley(v, exact=False)
    mc = multichoice_shapley(w, exact=False)
    minus = np.array([row[0] for row in mc.table])
    plus = np.array([row[1] for row in mc.table])
    same_phi = np.allclose(bi.plus, plus, rtol=0, atol=tol) and np.allclose(bi.minus, minus, rtol=0, atol=tol)
    same_h = abs(bicapacity_entropy(v) - multichoice_entropy(w)) <= tol
    return bool(same_phi and same_h)

