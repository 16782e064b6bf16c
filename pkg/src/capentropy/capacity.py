"""Games and capacities on set systems and lattices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .order import BoundedLattice, is_vee_minimal_regular, is_wedge_minimal_regular
from .setsystem import SetSystem, is_regular

__all__ = [
    "MONOTONE_TOL",
    "BLEND_TOL",
    "CapacityError",
    "Violation",
    "Capacity",
    "ChainDistribution",
    "validate",
    "grade",
    "additive_uniform",
    "cardinality_based",
    "chain_distribution",
    "blend_with_uniform",
    "blend",
]

MONOTONE_TOL = 1e-12
BLEND_TOL = 1e-9


class CapacityError(ValueError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation


@dataclass(frozen=True)
class Violation:
    kind: str  # "boundary", "range", "monotonicity", "missing"
    message: str
    elements: tuple[int, ...] = ()

    def __bool__(self):
        return False

    def __str__(self):
        return self.message


def _as_values(values, m: int) -> np.ndarray:
    vals = list(values)
    if len(vals) != m:
        raise CapacityError(f"expected {m} values, got {len(vals)}",
                            Violation("missing", f"expected {m} values, got {len(vals)}"))
    if any(isinstance(x, Fraction) for x in vals):
        arr = np.array([Fraction(x) for x in vals], dtype=object)
    else:
        arr = np.array(vals, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def _check(structure, values: np.ndarray, game: bool, tol: float) -> Violation | None:
    labels = structure.labels
    bot, top = structure.bottom, structure.top
    if values[bot] != 0:
        return Violation("boundary", f"v({labels[bot]}) = {values[bot]}, expected 0", (bot,))
    if game:
        return None
    if values[top] != 1:
        return Violation("boundary", f"v({labels[top]}) = {values[top]}, expected 1", (top,))
    for x, val in enumerate(values):
        if not 0 <= val <= 1:
            return Violation("range", f"v({labels[x]}) = {val} outside [0, 1]", (x,))
    covers = structure.cover_array
    if len(covers):
        lo, hi = covers[:, 0], covers[:, 1]
        drop = values[lo] - values[hi]
        bad = np.flatnonzero(drop > tol)
        if len(bad):
            a, b = (int(t) for t in covers[bad[0]])
            return Violation(
                "monotonicity",
                f"v({labels[a]}) = {values[a]} > v({labels[b]}) = {values[b]} although {labels[a]} < {labels[b]}",
                (a, b))
    return None


class Capacity:
    """Values on the elements of a set system or lattice.

    With ``game=True`` only ``v(bottom) = 0`` is enforced. Values given as
    :class:`fractions.Fraction` switch the capacity to exact rational mode.
    """

    def __init__(self, structure, values, *, game: bool = False, check: bool = True,
                 tol: float = MONOTONE_TOL):
        self.structure = structure
        self.values = _as_values(values, len(structure))
        self.game = game
        if check:
            bad = _check(structure, self.values, game, tol)
            if bad is not None:
                raise CapacityError(bad.message, bad)

    @classmethod
    def from_mapping(cls, structure, mapping: Mapping[str, object], **kw) -> "Capacity":
        values = [None] * len(structure)
        for label, val in mapping.items():
            values[structure.index(label)] = val
        missing = [structure.labels[i] for i, v in enumerate(values) if v is None]
        if missing:
            raise CapacityError(f"no value for {', '.join(missing)}",
                                Violation("missing", f"no value for {', '.join(missing)}"))
        return cls(structure, values, **kw)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __len__(self):
        return len(self.values)

    def __getitem__(self, label: str):
        return self.values[self.structure.index(label)]

    def __repr__(self):
        body = ", ".join(f"{s}: {v}" for s, v in zip(self.structure.labels, self.values))
        return f"{type(self).__name__}({{{body}}})"

    def as_dict(self) -> dict[str, object]:
        return dict(zip(self.structure.labels, self.values))

    def to_float(self) -> "Capacity":
        return Capacity(self.structure, self.values.astype(np.float64), game=self.game, check=False)

    def allclose(self, other: "Capacity", atol: float = 1e-12) -> bool:
        a = np.asarray(self.values, dtype=np.float64)
        b = np.asarray(other.values, dtype=np.float64)
        return bool(np.allclose(a, b, rtol=0, atol=atol))


def validate(c, values=None, *, game=None, tol: float = MONOTONE_TOL):
    """Return ``True`` if the capacity is valid, else a falsy :class:`Violation`.

    Accepts a :class:`Capacity` or ``(structure, values)``.
    """
    if isinstance(c, Capacity):
        structure, vals = c.structure, c.values
        game = c.game if game is None else game
    else:
        structure = c
        try:
            vals = _as_values(values, len(structure))
        except CapacityError as err:
            return err.violation
    bad = _check(structure, vals, bool(game), tol)
    return True if bad is None else bad


def grade(structure) -> np.ndarray:
    """|x| for every element: cardinality for set systems, |η(x)| for lattices."""
    if isinstance(structure, SetSystem):
        return structure.sizes
    if isinstance(structure, BoundedLattice):
        if is_vee_minimal_regular(structure):
            masks = structure.eta_masks
        elif is_wedge_minimal_regular(structure):
            full = len(structure.meet_irreducibles)
            return np.array([full - m.bit_count() for m in structure.eta_dual_masks])
        else:
            raise CapacityError("lattice is neither ∨- nor ∧-minimal regular; |x| is undefined")
        return np.array([m.bit_count() for m in masks])
    raise TypeError(f"unsupported structure {type(structure).__name__}")


def _rank(structure) -> int:
    if isinstance(structure, SetSystem):
        return structure.n
    return int(grade(structure)[structure.top])


def _graded_check(structure):
    if isinstance(structure, SetSystem):
        if not is_regular(structure):
            raise CapacityError("set system is not regular")
    elif isinstance(structure, BoundedLattice):
        grade(structure)
    else:
        raise TypeError(f"unsupported structure {type(structure).__name__}")


def additive_uniform(structure, exact: bool = False) -> Capacity:
    """v*(x) = |x| / n."""
    _graded_check(structure)
    g = grade(structure)
    n = _rank(structure)
    if exact:
        return Capacity(structure, [Fraction(int(k), n) for k in g])
    return Capacity(structure, g / n)


def cardinality_based(structure, levels: Sequence) -> Capacity:
    """v(x) = levels[|x|]."""
    _graded_check(structure)
    n = _rank(structure)
    if len(levels) != n + 1:
        raise CapacityError(f"need {n + 1} levels, got {len(levels)}")
    if levels[0] != 0 or levels[n] != 1:
        raise CapacityError("levels must start at 0 and end at 1")
    if any(b < a for a, b in zip(levels, levels[1:])):
        raise CapacityError("levels must be nondecreasing")
    g = grade(structure)
    return Capacity(structure, [levels[int(k)] for k in g])


@dataclass(frozen=True)
class ChainDistribution:
    chain: tuple[int, ...]
    probs: np.ndarray


def chain_distribution(v: Capacity, chain: Sequence[int]) -> ChainDistribution:
    """Increments of ``v`` along a maximal chain."""
    structure = v.structure
    chain = tuple(int(c) for c in chain)
    if not chain or chain[0] != structure.bottom or chain[-1] != structure.top:
        raise CapacityError("chain must run from bottom to top")
    upper = structure.upper_covers
    for a, b in zip(chain, chain[1:]):
        if b not in upper[a]:
            raise CapacityError(f"{structure.labels[a]} -> {structure.labels[b]} is not a cover step")
    vals = v.values[list(chain)]
    probs = vals[1:] - vals[:-1]
    return ChainDistribution(chain, probs)


def blend(v: Capacity, u: Capacity, lam) -> Capacity:
    """Pointwise ``lam * u + (1 - lam) * v``."""
    if u.structure is not v.structure and len(u) != len(v):
        raise CapacityError("capacities live on different structures")
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    # v + lam (u - v) keeps the bottom and top values exact in floating point
    vals = v.values + lam * (u.values - v.values)
    return Capacity(v.structure, vals, tol=BLEND_TOL)


def blend_with_uniform(v: Capacity, lam) -> Capacity:
    """``(1 - lam) * v + lam * v*``."""
    return blend(v, additive_uniform(v.structure, exact=v.exact and isinstance(lam, (int, Fraction))), lam)
