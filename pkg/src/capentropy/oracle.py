"""Brute-force oracles, random generators and the property harness.

The oracles deliberately share nothing with the primary code paths: chains
are found by recursion over strict upper bounds (no Hasse diagram), join
irreducibility is tested by the join quantifier itself, and Shapley values
and entropies are accumulated by literally walking every chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .capacity import Capacity, additive_uniform, blend, blend_with_uniform, cardinality_based, validate
from .measures import ShapleyVector
from .order import BoundedLattice
from .setsystem import SetSystem, dualize, is_antimatroid, is_convex_geometry, is_regular, to_lattice

__all__ = [
    "oracle_chains",
    "oracle_join_irreducibles",
    "oracle_meet_irreducibles",
    "oracle_shapley",
    "oracle_entropy",
    "oracle_relative_entropy",
    "oracle_marichal",
    "random_capacity",
    "random_zero_one_capacity",
    "random_convex_geometry",
    "CheckResult",
    "HarnessReport",
    "proposition_harness",
]

ORACLE_MAX_ELEMENTS = 64


# -- chains ----------------------------------------------------------------

def _strictly_below(structure):
    """``lt(x, y)`` for the structure's order, computed from raw data."""
    if isinstance(structure, SetSystem):
        fam = structure.family
        return lambda x, y: x != y and fam[x] & fam[y] == fam[x]
    leq = structure.leq
    return lambda x, y: x != y and bool(leq[x, y])


def _ends(structure):
    m = len(structure)
    lt = _strictly_below(structure)
    bottoms = [x for x in range(m) if all(lt(x, y) for y in range(m) if y != x)]
    tops = [x for x in range(m) if all(lt(y, x) for y in range(m) if y != x)]
    if len(bottoms) != 1 or len(tops) != 1:
        raise ValueError("structure must have a least and a greatest element")
    return bottoms[0], tops[0]


def oracle_chains(structure, max_elements: int = ORACLE_MAX_ELEMENTS) -> list[tuple[int, ...]]:
    """All maximal chains, found by recursion over strict upper bounds."""
    m = len(structure)
    if m > max_elements:
        raise ValueError(f"oracle limited to {max_elements} elements, got {m}")
    lt = _strictly_below(structure)
    bottom, top = _ends(structure)
    above = {x: [y for y in range(m) if lt(x, y)] for x in range(m)}

    def extend(chain):
        x = chain[-1]
        if x == top:
            yield tuple(chain)
            return
        for y in above[x]:
            # y covers x iff nothing sits strictly between them
            if any(lt(z, y) for z in above[x]):
                continue
            yield from extend(chain + [y])

    return list(extend([bottom]))


# -- irreducibles by definition -------------------------------------------

def _brute_join(leq, x, y):
    m = leq.shape[0]
    ub = [z for z in range(m) if leq[x, z] and leq[y, z]]
    least = [z for z in ub if all(leq[z, w] for w in ub)]
    if len(least) != 1:
        raise ValueError(f"no join for {x}, {y}")
    return least[0]


def oracle_join_irreducibles(lattice: BoundedLattice) -> frozenset[int]:
    """x ≠ ⊥ with x = a ∨ b implying x ∈ {a, b}."""
    leq = np.asarray(lattice.leq)
    m = leq.shape[0]
    bottom = next(x for x in range(m) if leq[x].all())
    out = set()
    for x in range(m):
        if x == bottom:
            continue
        if all(_brute_join(leq, a, b) != x or x in (a, b) for a in range(m) for b in range(m)):
            out.add(x)
    return frozenset(out)


def oracle_meet_irreducibles(lattice: BoundedLattice) -> frozenset[int]:
    return oracle_join_irreducibles(_Reversed(lattice))


class _Reversed:
    def __init__(self, lattice):
        self.leq = np.asarray(lattice.leq).T


# -- measures by chain walking --------------------------------------------

def _step_namer(structure, index: str):
    """Map a cover step (a, b) to the label of what it introduces."""
    if isinstance(structure, SetSystem):
        fam = structure.family
        names = structure.players

        def name(a, b):
            added = [k for k in range(structure.n) if (fam[b] >> k & 1) and not (fam[a] >> k & 1)]
            if len(added) != 1:
                raise ValueError("step adds more than one player; structure is not regular")
            return names[added[0]]
        return name, list(names)
    leq = np.asarray(structure.leq)
    if index == "join":
        irr = sorted(oracle_join_irreducibles(structure))
        new = lambda a, b: [x for x in irr if leq[x, b] and not leq[x, a]]  # noqa: E731
    else:
        irr = sorted(oracle_meet_irreducibles(structure))
        new = lambda a, b: [x for x in irr if leq[a, x] and not leq[b, x]]  # noqa: E731
    labels = structure.labels

    def name(a, b):
        got = new(a, b)
        if len(got) != 1:
            raise ValueError("step does not introduce exactly one irreducible")
        return labels[got[0]]
    return name, [labels[x] for x in irr]


def oracle_shapley(v: Capacity, index: str = "join", exact: bool = False) -> ShapleyVector:
    """Average increment at the step introducing each player/irreducible."""
    structure = v.structure
    chains = oracle_chains(structure, max_elements=max(ORACLE_MAX_ELEMENTS, len(structure)))
    name, order = _step_namer(structure, index)
    conv = Fraction if exact else float
    acc = {s: conv(0) for s in order}
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            acc[name(a, b)] += conv(v.values[b]) - conv(v.values[a])
    count = len(chains)
    phi = [acc[s] / count for s in order]
    return ShapleyVector(tuple(order), np.array(phi, dtype=object if exact else float))


def _shannon(p):
    return -sum(x * math.log2(x) for x in p if x > 0)


def _kl(p, q):
    total = 0.0
    for x, y in zip(p, q):
        if x > 0:
            if y <= 0:
                return math.inf
            total += x * math.log2(x / y)
    return total


def _chain_probs(v, chain):
    vals = [float(v.values[c]) for c in chain]
    return [max(b - a, 0.0) for a, b in zip(vals, vals[1:])]


def oracle_entropy(v: Capacity) -> float:
    chains = oracle_chains(v.structure, max_elements=max(ORACLE_MAX_ELEMENTS, len(v.structure)))
    return sum(_shannon(_chain_probs(v, c)) for c in chains) / len(chains)


def oracle_relative_entropy(v: Capacity, u: Capacity) -> float:
    chains = oracle_chains(v.structure, max_elements=max(ORACLE_MAX_ELEMENTS, len(v.structure)))
    return sum(_kl(_chain_probs(v, c), _chain_probs(u, c)) for c in chains) / len(chains)


def oracle_marichal(v: Capacity) -> float:
    """Average Shannon entropy over all n! player orderings of 2^N."""
    import itertools

    s = v.structure
    pos = {m: i for i, m in enumerate(s.family)}
    total, count = 0.0, 0
    for perm in itertools.permutations(range(s.n)):
        mask, chain = 0, [pos[0]]
        for k in perm:
            mask |= 1 << k
            chain.append(pos[mask])
        total += _shannon(_chain_probs(v, chain))
        count += 1
    return total / count


# -- generators ------------------------------------------------------------

def _order_table(structure) -> np.ndarray:
    if isinstance(structure, SetSystem):
        masks = np.array(structure.family, dtype=np.int64)
        return (masks[:, None] & masks[None, :]) == masks[:, None]
    return np.asarray(structure.leq)


def random_capacity(structure, seed=None) -> Capacity:
    """Uniform draws made monotone by taking the max over each down-set."""
    rng = np.random.default_rng(seed)
    leq = _order_table(structure)
    draws = rng.random(len(structure))
    draws[structure.bottom] = 0.0
    vals = np.where(leq, draws[:, None], -np.inf).max(axis=0)
    vals[structure.top] = 1.0
    return Capacity(structure, vals)


def random_zero_one_capacity(structure, seed=None) -> Capacity:
    """Indicator of the up-set generated by a few random non-bottom elements."""
    rng = np.random.default_rng(seed)
    leq = _order_table(structure)
    cand = [x for x in range(len(structure)) if x != structure.bottom]
    gens = rng.choice(cand, size=min(len(cand), int(rng.integers(1, 4))), replace=False)
    vals = leq[gens].any(axis=0).astype(float)
    return Capacity(structure, vals)


def random_convex_geometry(n: int, seed=None, max_sets: int | None = None) -> SetSystem:
    """Close a random family under ∩, then repair one-point augmentation greedily."""
    if not 1 <= n <= 8:
        raise ValueError("random_convex_geometry supports 1 <= n <= 8")
    rng = np.random.default_rng(seed)
    full = (1 << n) - 1
    max_sets = max_sets or 1 << n
    while True:
        seeds = rng.integers(0, full + 1, size=int(rng.integers(1, n + 2)))
        fam = {0, full, *map(int, seeds)}
        while True:
            changed = False
            for a in list(fam):
                for b in list(fam):
                    if a & b not in fam:
                        fam.add(a & b)
                        changed = True
            for a in sorted(fam):
                if a == full:
                    continue
                missing = [k for k in range(n) if not a >> k & 1]
                if not any(a | 1 << k in fam for k in missing):
                    fam.add(a | 1 << int(rng.choice(missing)))
                    changed = True
            if not changed:
                break
        if len(fam) <= max_sets:
            s = SetSystem(n, fam)
            assert is_convex_geometry(s)
            return s


# -- harness ---------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool = True
    trials: int = 0
    failures: int = 0
    max_error: float = 0.0
    detail: str = ""
    counterexample: str | None = None
    skipped: int = 0

    def fail(self, detail, structure=None, capacity=None):
        from .io import format_capacity, format_structure

        self.passed = False
        self.failures += 1
        if self.counterexample is None:
            self.detail = detail
            parts = []
            if structure is not None:
                parts.append(format_structure(structure))
            if capacity is not None:
                parts.append(format_capacity(capacity))
            self.counterexample = "\n".join(parts) or None

    def error(self, err: float, tol: float, what: str, structure=None, capacity=None):
        self.max_error = max(self.max_error, err)
        if not err <= tol:
            self.fail(f"{what}: error {err:.3e} > {tol:.0e}", structure, capacity)


@dataclass
class HarnessReport:
    seed: int
    trials: int
    checks: list[CheckResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [f"property harness: seed={self.seed} trials={self.trials}"]
        lines.extend(f"warning: {w}" for w in self.warnings)
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = f" skipped={c.skipped}" if c.skipped else ""
            lines.append(f"[{status}] {c.name}: trials={c.trials} failures={c.failures}"
                         f" max_error={c.max_error:.3e}{extra}")
            if not c.passed:
                lines.append(f"    {c.detail}")
                if c.counterexample:
                    lines.extend("    | " + s for s in c.counterexample.splitlines())
        lines.append("OK" if self.ok else "FAILED")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "ok": self.ok,
            "warnings": list(self.warnings),
            "checks": [c.__dict__.copy() for c in self.checks],
        }


def _regular_corpus(rng):
    """Small regular set systems and regular lattices used by the harness."""
    from .canonical import bicapacity_lattice, multichoice_lattice

    s2 = SetSystem.from_labels(3, ["-", "1", "3", "12", "23", "123"])
    s1 = SetSystem.from_labels(3, ["-", "1", "3", "12", "13", "23", "123"])
    l1 = SetSystem(3, [0, 1, 2, 4, 3, 6, 7], players="def")
    corpus = [SetSystem.power_set(n) for n in range(2, 6)]
    corpus += [s1, s2, l1, dualize(s1)]
    corpus += [random_convex_geometry(int(rng.integers(3, 6)), int(rng.integers(2**31))) for _ in range(3)]
    corpus += [bicapacity_lattice(2), multichoice_lattice((2, 3)), multichoice_lattice((1, 2, 1))]
    return corpus


def _grid_ok(values, increasing, slack=1e-12):
    d = np.diff(np.asarray(values))
    return bool((d > slack).all()) if increasing else bool((d < -slack).all())


def proposition_harness(seed: int = 0, trials: int = 200, max_n: int = 5) -> HarnessReport:
    """Randomised checks of the entropy properties and oracle agreement."""
    from .measures import (
        entropy,
        marichal_entropy_direct,
        relative_entropy,
        shapley,
        shapley_chain,
        shapley_classical,
        _order_of,
    )
    from .order import enumerate_maximal_chains, is_vee_minimal_regular, is_wedge_minimal_regular
    from .capacity import chain_distribution

    rng = np.random.default_rng(seed)
    report = HarnessReport(seed, trials)
    if trials <= 0:
        report.warnings.append("no trials requested; every check passes vacuously")
    corpus = _regular_corpus(rng)
    grid = np.linspace(0.0, 1.0, 100)

    def pick_structure():
        return corpus[int(rng.integers(len(corpus)))]

    def new_seed():
        return int(rng.integers(2**31))

    def n_of(s):
        if isinstance(s, SetSystem):
            return s.n
        return s.chain_length_range[0]

    duk = CheckResult("dukhovny: chain-average entropy = Marichal direct (1e-10)")
    sh = CheckResult("shapley_chain = shapley_classical on 2^N (1e-12)")
    norm = CheckResult("Shapley vectors sum to 1 (1e-12)")
    p1 = CheckResult("bounds: 0 <= H <= log2 n, H = 0 on {0,1} capacities, H = log2 n on v* (1e-12)")
    p2 = CheckResult("cardinality-based: H equals every chain's Shannon entropy (1e-12)")
    p3 = CheckResult("blend to v*: H(v_lambda) strictly increasing on a 100-point grid")
    p4 = CheckResult("relative entropy: H(v;u) >= 0 and H(v;u) = 0 iff v = u")
    p5 = CheckResult("blend to u: H(v^u_lambda; u) strictly decreasing on a 100-point grid")
    orc = CheckResult("oracle agreement: chain sets, Shapley, entropy (1e-12)")
    gen = CheckResult("generators: capacities validate, convex geometries classify")
    checks = [duk, sh, norm, p1, p2, p3, p4, p5, orc, gen]

    for _ in range(trials):
        n = int(rng.integers(2, max_n + 1))
        boolean = SetSystem.power_set(n)
        v = random_capacity(boolean, new_seed())
        duk.trials += 1
        duk.error(abs(entropy(v).H - marichal_entropy_direct(v)), 1e-10, "Dukhovny", boolean, v)
        sh.trials += 1
        sh.error(float(np.max(np.abs(shapley_chain(v).phi - shapley_classical(v).phi))), 1e-12,
                 "chain vs classical", boolean, v)

        s = pick_structure()
        v = random_capacity(s, new_seed())
        gen.trials += 1
        if validate(v) is not True:
            gen.fail("random capacity failed validation", s, v)
        norm.trials += 1
        norm.error(abs(shapley(v).total() - 1), 1e-12, "Shapley sum", s, v)

        # entropy bounds and their equality cases
        p1.trials += 1
        H = entropy(v).H
        logn = math.log2(n_of(s))
        if not -1e-12 <= H <= logn + 1e-12:
            p1.fail(f"H = {H} outside [0, {logn}]", s, v)
        z = random_zero_one_capacity(s, new_seed())
        p1.error(abs(entropy(z).H), 1e-12, "H on {0,1} capacity", s, z)
        star = additive_uniform(s)
        p1.error(abs(entropy(star).H - logn), 1e-12, "H on v*", s, star)

        # cardinality-based capacities: every chain sees the same distribution
        p2.trials += 1
        k = n_of(s)
        levels = np.concatenate([[0.0], np.sort(rng.random(k - 1)), [1.0]])
        c = cardinality_based(s, levels)
        Hc = entropy(c, per_chain=True)
        p2.error(max(abs(h - Hc.H) for _, h in Hc.per_chain), 1e-12, "per-chain entropy", s, c)

        # blending toward v* raises entropy
        if star.allclose(v):
            p3.skipped += 1
        else:
            p3.trials += 1
            hs = [entropy(blend_with_uniform(v, lam)).H for lam in grid]
            if not _grid_ok(hs, increasing=True):
                p3.fail("H(v_lambda) not strictly increasing", s, v)

        # relative entropy is a divergence
        p4.trials += 1
        u = random_capacity(s, new_seed())
        rel = relative_entropy(v, u)
        if rel < -1e-12:
            p4.fail(f"H(v;u) = {rel} < 0", s, v)
        if abs(relative_entropy(v, v)) > 1e-12:
            p4.fail("H(v;v) != 0", s, v)
        if not u.allclose(v) and not rel > 0:
            p4.fail("H(v;u) = 0 for v != u", s, v)
        # rebuild v from its chain increments
        rebuilt = np.full(len(s), np.nan)
        for chain in enumerate_maximal_chains(_order_of(s)):
            cum = np.concatenate([[0.0], np.cumsum(chain_distribution(v, chain).probs)])
            rebuilt[list(chain)] = cum
        p4.max_error = max(p4.max_error, float(np.max(np.abs(rebuilt - v.values))))
        if not np.allclose(rebuilt, v.values, atol=1e-12, rtol=0):
            p4.fail("capacity not recovered from chain increments", s, v)

        # blending toward u lowers H(.; u); u with strictly positive increments keeps every term finite
        u = blend(random_capacity(s, new_seed()), star, 0.5)
        if u.allclose(v):
            p5.skipped += 1
        else:
            p5.trials += 1
            rs = [relative_entropy(blend(v, u, lam), u) for lam in grid]
            if not _grid_ok(rs, increasing=False):
                p5.fail("H(v^u_lambda; u) not strictly decreasing", s, v)

        # oracles
        if len(s) <= ORACLE_MAX_ELEMENTS:
            orc.trials += 1
            order = _order_of(s)
            if set(oracle_chains(s)) != set(enumerate_maximal_chains(order)):
                orc.fail("chain sets differ", s)
            if isinstance(s, SetSystem):
                pairs = [(shapley_chain(v), oracle_shapley(v))]
            else:
                pairs = []
                from .measures import shapley_lattice, shapley_lattice_dual
                if is_vee_minimal_regular(s):
                    pairs.append((shapley_lattice(v), oracle_shapley(v, "join")))
                if is_wedge_minimal_regular(s):
                    pairs.append((shapley_lattice_dual(v), oracle_shapley(v, "meet")))
            for prim, ref in pairs:
                err = max(abs(prim[lab] - ref[lab]) for lab in ref.labels)
                orc.error(float(err), 1e-12, "Shapley vs oracle", s, v)
            orc.error(abs(entropy(v).H - oracle_entropy(v)), 1e-12, "entropy vs oracle", s, v)

        # generator soundness
        cg = random_convex_geometry(int(rng.integers(2, 8)), new_seed())
        if not (is_regular(cg) and is_antimatroid(dualize(cg))):
            gen.fail("generated convex geometry misclassified", cg)
        lat = to_lattice(cg)
        if len(lat.join_irreducibles) != cg.n:
            gen.fail("|J| != n for a generated convex geometry", cg)

    report.checks = checks
    return report
