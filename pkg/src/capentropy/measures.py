"""Shapley values and entropies of capacities.

Every chain-average quantity here is evaluated edge by edge: a cover step
``a -> b`` lies on ``below[a] * above[b]`` of the ``|C|`` maximal chains,
where ``below``/``above`` count saturated chains from the bottom and to the
top. Averaging over chains is therefore a weighted sum over cover edges
with exact integer weights, which avoids materialising the chain list.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .capacity import Capacity, CapacityError, chain_distribution
from .order import (
    DEFAULT_CHAIN_BUDGET,
    BoundedLattice,
    is_vee_minimal_regular,
    is_wedge_minimal_regular,
    iter_maximal_chains,
)
from .setsystem import SetSystem, is_regular

__all__ = [
    "StructureError",
    "ShapleyVector",
    "EntropyReport",
    "edge_weights",
    "shannon_entropy",
    "shannon_relative",
    "shapley_classical",
    "shapley_chain",
    "shapley_lattice",
    "shapley_lattice_dual",
    "shapley",
    "shapley_terms",
    "marichal_entropy_direct",
    "entropy",
    "entropy_terms",
    "relative_entropy",
    "classical_gamma",
]

DIST_TOL = 1e-9


class StructureError(ValueError):
    """The structure does not meet a measure's precondition."""


@dataclass(frozen=True)
class ShapleyVector:
    """Shapley values indexed by players or by irreducible elements."""

    labels: tuple[str, ...]
    phi: np.ndarray
    index: tuple[int, ...] = ()  # element indices (lattices) or player positions

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, label):
        return self.phi[self.labels.index(label)]

    def total(self):
        return sum(self.phi) if self.phi.dtype == object else float(np.sum(self.phi))

    def as_dict(self) -> dict[str, object]:
        return dict(zip(self.labels, self.phi))


@dataclass(frozen=True)
class EntropyReport:
    H: float
    chain_count: int
    per_chain: list[tuple[tuple[int, ...], float]] | None = field(default=None, repr=False)


# -- Shannon ---------------------------------------------------------------

def _h(x: np.ndarray) -> np.ndarray:
    x = np.maximum(np.asarray(x, dtype=np.float64), 0.0)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = -x[pos] * np.log2(x[pos])
    return out


def _h_rel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.maximum(np.asarray(x, dtype=np.float64), 0.0)
    y = np.maximum(np.asarray(y, dtype=np.float64), 0.0)
    out = np.zeros_like(x)
    pos = x > 0
    inf = pos & (y <= 0)
    ok = pos & ~inf
    out[ok] = x[ok] * np.log2(x[ok] / y[ok])
    out[inf] = np.inf
    return out


def _check_distribution(p, name="p") -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 1 or len(p) == 0:
        raise ValueError(f"{name} must be a non-empty vector")
    if (p < -1e-12).any() or abs(p.sum() - 1) > DIST_TOL:
        raise ValueError(f"{name} is not a probability vector: {p}")
    return p


def shannon_entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    return float(_h(_check_distribution(p)).sum())


def shannon_relative(p, q) -> float:
    """Σ p_i log2(p_i / q_i); ``inf`` when some q_i = 0 < p_i."""
    p = _check_distribution(p)
    q = _check_distribution(q, "q")
    if p.shape != q.shape:
        raise ValueError("distributions differ in length")
    return float(_h_rel(p, q).sum())


# -- edge weights ----------------------------------------------------------

_EDGE_COUNTS: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def _edge_counts(structure) -> tuple[list[int], int]:
    try:
        return _EDGE_COUNTS[structure]
    except KeyError:
        pass
    below, above = structure.chains_below, structure.chains_above
    counts = [below[a] * above[b] for a, b in structure.cover_array.tolist()]
    result = (counts, below[structure.top])
    _EDGE_COUNTS[structure] = result
    return result


def edge_weights(structure, exact: bool = False):
    """Fraction of maximal chains passing through each cover edge.

    Ordered as ``structure.cover_array``.
    """
    counts, total = _edge_counts(structure)
    if exact:
        return [Fraction(c, total) for c in counts]
    return np.array([c / total for c in counts], dtype=np.float64)


def _step_index(structure, kind: str) -> tuple[np.ndarray, tuple[str, ...], tuple[int, ...]]:
    """For every cover edge, the position of the player/irreducible it introduces."""
    covers = structure.cover_array
    if kind == "player":
        if not isinstance(structure, SetSystem):
            raise StructureError("player-indexed Shapley needs a set system")
        if not is_regular(structure):
            raise StructureError("set system is not regular")
        masks = structure.mask_array
        diff = masks[covers[:, 1]] ^ masks[covers[:, 0]]
        pos = np.array([int(d).bit_length() - 1 for d in diff], dtype=np.int64)
        return pos, structure.players, tuple(range(structure.n))
    if not isinstance(structure, BoundedLattice):
        raise StructureError("irreducible-indexed Shapley needs a lattice")
    if kind == "join":
        if not is_vee_minimal_regular(structure):
            raise StructureError("lattice is not ∨-minimal regular")
        masks, elems = structure.eta_masks, structure.join_irreducibles
        diff = [masks[b] ^ masks[a] for a, b in covers.tolist()]
    elif kind == "meet":
        if not is_wedge_minimal_regular(structure):
            raise StructureError("lattice is not ∧-minimal regular")
        masks, elems = structure.eta_dual_masks, structure.meet_irreducibles
        diff = [masks[a] ^ masks[b] for a, b in covers.tolist()]
    else:
        raise ValueError(f"unknown index kind {kind!r}")
    pos = np.array([d.bit_length() - 1 for d in diff], dtype=np.int64)
    return pos, tuple(structure.labels[x] for x in elems), tuple(elems)


def _edge_shapley(v: Capacity, kind: str, exact: bool | None) -> ShapleyVector:
    structure = v.structure
    pos, labels, index = _step_index(structure, kind)
    exact = v.exact if exact is None else exact
    covers = structure.cover_array
    delta = v.values[covers[:, 1]] - v.values[covers[:, 0]]
    if exact:
        phi = [Fraction(0)] * len(labels)
        for w, k, d in zip(edge_weights(structure, exact=True), pos, delta):
            phi[k] += w * Fraction(d)
        phi = np.array(phi, dtype=object)
    else:
        w = edge_weights(structure)
        phi = np.bincount(pos, weights=w * delta.astype(np.float64), minlength=len(labels))
    return ShapleyVector(labels, phi, index)


def shapley_chain(v: Capacity, exact: bool | None = None) -> ShapleyVector:
    """Chain-average Shapley value on a regular set system, indexed by player."""
    return _edge_shapley(v, "player", exact)


def shapley_lattice(v: Capacity, exact: bool | None = None) -> ShapleyVector:
    """Shapley value on a ∨-minimal regular lattice, indexed by J(L)."""
    return _edge_shapley(v, "join", exact)


def shapley_lattice_dual(v: Capacity, exact: bool | None = None) -> ShapleyVector:
    """Shapley value on a ∧-minimal regular lattice, indexed by M(L)."""
    return _edge_shapley(v, "meet", exact)


# -- classical (2^N) -------------------------------------------------------

def classical_gamma(n: int, k: int, exact: bool = False):
    """(n - k - 1)! k! / n!"""
    val = Fraction(math.factorial(n - k - 1) * math.factorial(k), math.factorial(n))
    return val if exact else float(val)


def _by_mask(v: Capacity) -> np.ndarray:
    s = v.structure
    if not (isinstance(s, SetSystem) and s.is_power_set):
        raise StructureError("classical formulas need the full power set 2^N")
    if s.n > 20:
        raise StructureError("classical formulas are limited to n <= 20")
    out = np.empty(1 << s.n, dtype=v.values.dtype)
    out[s.mask_array] = v.values
    return out


def _classical_sum(v: Capacity, term, exact: bool):
    s = v.structure
    n = s.n
    vals = _by_mask(v)
    masks = np.arange(1 << n)
    sizes = np.fromiter(map(int.bit_count, range(1 << n)), dtype=np.int64, count=1 << n)
    gamma = [classical_gamma(n, k, exact) for k in range(n)]
    out = []
    for i in range(n):
        bit = 1 << i
        a = masks[(masks & bit) == 0]
        inc = vals[a | bit] - vals[a]
        if exact:
            out.append(sum((gamma[k] * Fraction(d) for k, d in zip(sizes[a], inc)), Fraction(0)))
        else:
            g = np.array(gamma)[sizes[a]]
            out.append(float(np.sum(g * term(inc))))
    return out


def shapley_classical(v: Capacity, exact: bool | None = None) -> ShapleyVector:
    """Σ_{A ⊆ N∖i} γ_|A| (v(A ∪ i) − v(A)) on 2^N."""
    exact = v.exact if exact is None else exact
    phi = _classical_sum(v, lambda d: d.astype(np.float64), exact)
    s = v.structure
    return ShapleyVector(s.players, np.array(phi, dtype=object if exact else np.float64),
                         tuple(range(s.n)))


def marichal_entropy_direct(v: Capacity) -> float:
    """Σ_i Σ_{A ⊆ N∖i} γ_|A| h(v(A ∪ i) − v(A)) on 2^N."""
    return float(sum(_classical_sum(v, _h, exact=False)))


def shapley(v: Capacity, mode: str = "auto", exact: bool | None = None) -> ShapleyVector:
    """Dispatch on ``mode``: auto, classical, chain, lattice or dual.

    ``auto`` prefers classical on 2^N, chain on regular set systems and the
    J(L) form on lattices (falling back to M(L)).
    """
    s = v.structure
    if mode == "auto":
        if isinstance(s, SetSystem):
            mode = "classical" if s.is_power_set and s.n <= 20 else "chain"
        elif isinstance(s, BoundedLattice):
            mode = "lattice" if is_vee_minimal_regular(s) else "dual"
        else:
            raise StructureError(f"unsupported structure {type(s).__name__}")
    funcs = {"classical": shapley_classical, "chain": shapley_chain,
             "lattice": shapley_lattice, "dual": shapley_lattice_dual}
    if mode not in funcs:
        raise ValueError(f"unknown Shapley mode {mode!r}")
    return funcs[mode](v, exact=exact)


def shapley_terms(structure, kind: str = "auto") -> dict[str, list[tuple[Fraction, int, int]]]:
    """Exact symbolic Shapley: label -> [(coefficient, upper, lower), ...].

    φ_x(v) = Σ coefficient · (v(upper) − v(lower)).
    """
    if kind == "auto":
        if isinstance(structure, SetSystem):
            kind = "player"
        else:
            kind = "join" if is_vee_minimal_regular(structure) else "meet"
    pos, labels, _ = _step_index(structure, kind)
    terms: dict[str, list] = {s: [] for s in labels}
    for w, k, (a, b) in zip(edge_weights(structure, exact=True), pos, structure.cover_array.tolist()):
        terms[labels[k]].append((w, b, a))
    return terms


# -- chain-average entropy -------------------------------------------------

def _require_regular(structure):
    if isinstance(structure, SetSystem):
        if not is_regular(structure):
            raise StructureError("entropy needs a regular set system")
    elif isinstance(structure, BoundedLattice):
        if not (is_vee_minimal_regular(structure) or is_wedge_minimal_regular(structure)):
            raise StructureError("entropy needs a ∨- or ∧-minimal regular lattice")
    else:
        raise StructureError(f"unsupported structure {type(structure).__name__}")


def _increments(v: Capacity) -> np.ndarray:
    covers = v.structure.cover_array
    vals = np.asarray(v.values, dtype=np.float64)
    return vals[covers[:, 1]] - vals[covers[:, 0]]


def entropy(v: Capacity, per_chain: bool = False,
            budget: int | None = DEFAULT_CHAIN_BUDGET) -> EntropyReport:
    """Mean Shannon entropy of the chain distributions of ``v``."""
    structure = v.structure
    _require_regular(structure)
    counts, total = _edge_counts(structure)
    H = float(np.sum(edge_weights(structure) * _h(_increments(v))))
    breakdown = None
    if per_chain:
        breakdown = []
        for chain in iter_maximal_chains(_order_of(structure), budget):
            p = chain_distribution(v, chain).probs
            breakdown.append((chain, float(_h(p).sum())))
    return EntropyReport(H, total, breakdown)


def _order_of(structure):
    return structure.poset if isinstance(structure, SetSystem) else structure


def entropy_terms(structure) -> list[tuple[Fraction, int, int]]:
    """Exact symbolic entropy: H(v) = Σ coefficient · h(v(upper) − v(lower))."""
    _require_regular(structure)
    return [(w, b, a) for w, (a, b) in
            zip(edge_weights(structure, exact=True), structure.cover_array.tolist())]


def relative_entropy(v: Capacity, u: Capacity) -> float:
    """Mean relative entropy of v's chain distributions to u's (may be ``inf``)."""
    if len(u) != len(v):
        raise CapacityError("capacities live on different structures")
    _require_regular(v.structure)
    w = edge_weights(v.structure)
    terms = _h_rel(_increments(v), _increments(u))
    if np.isinf(terms[w > 0]).any():
        return math.inf
    return float(np.sum(w * terms))
