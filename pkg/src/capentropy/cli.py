"""Command-line front end.

    capentropy classify --structure FILE|SHORTHAND
    capentropy shapley  --structure S --capacity FILE [--mode auto|classical|chain|lattice|dual]
    capentropy entropy  --structure S --capacity FILE [--relative FILE] [--per-chain]
    capentropy verify   [--seed N] [--trials N]

Exit codes: 0 success, 1 harness failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .canonical import (
    ProductLattice,
    bicapacity_shapley,
    multichoice_shapley,
)
from .capacity import CapacityError
from .io import ParseError, load_capacity, load_structure
from .measures import StructureError, entropy, relative_entropy, shapley
from .oracle import proposition_harness
from .order import (
    DEFAULT_CHAIN_BUDGET,
    ChainBudgetExceeded,
    NotALatticeError,
    OrderError,
    count_maximal_chains,
    is_distributive,
    is_vee_minimal_regular,
    is_wedge_minimal_regular,
    jordan_dedekind_holds,
)
from .setsystem import SetSystem, from_lattice, is_antimatroid, is_convex_geometry, is_regular, to_lattice

DIGITS = 12
CLASSIFY_LIMIT = 4096
LATTICE_CHECK_LIMIT = 1024


def fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return f"{float(x):.{DIGITS}f}"


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    x = float(x)
    return "inf" if x == float("inf") else x


def _yes(b) -> str:
    if b is None:
        return "n/a"
    return "yes" if b else "no"


def classify(structure) -> dict:
    if len(structure) > CLASSIFY_LIMIT:
        raise ValueError(f"classify is limited to {CLASSIFY_LIMIT} elements, got {len(structure)}")
    out: dict = {}
    lattice = None
    if isinstance(structure, SetSystem):
        out["kind"] = "set_system"
        out["n"] = structure.n
        out["regular"] = is_regular(structure)
        out["convex_geometry"] = is_convex_geometry(structure)
        out["antimatroid"] = is_antimatroid(structure)
        if len(structure) <= LATTICE_CHECK_LIMIT:
            try:
                lattice = to_lattice(structure)
            except NotALatticeError:
                lattice = None
            out["lattice"] = lattice is not None
        else:
            out["lattice"] = None
        out["jordan_dedekind"] = jordan_dedekind_holds(structure.poset)
    else:
        lattice = structure
        out["kind"] = "lattice"
        out["lattice"] = True
        s = from_lattice(lattice)
        # set-system verdicts refer to the (J(L), η(L)) representation
        out["regular"] = is_regular(s)
        out["convex_geometry"] = is_convex_geometry(s)
        out["antimatroid"] = is_antimatroid(s)
        out["jordan_dedekind"] = jordan_dedekind_holds(lattice)
    if lattice is not None and len(lattice) <= LATTICE_CHECK_LIMIT:
        out["vee_minimal_regular"] = is_vee_minimal_regular(lattice)
        out["wedge_minimal_regular"] = is_wedge_minimal_regular(lattice)
        out["distributive"] = is_distributive(lattice)
        out["J"] = [lattice.labels[x] for x in lattice.join_irreducibles]
        out["M"] = [lattice.labels[x] for x in lattice.meet_irreducibles]
    else:
        for key in ("vee_minimal_regular", "wedge_minimal_regular", "distributive", "J", "M"):
            out[key] = None
    out["elements"] = len(structure)
    out["chains"] = count_maximal_chains(structure.poset if isinstance(structure, SetSystem) else structure)
    return out


def _print_classify(info, stream):
    names = [
        ("regular", "regular"),
        ("vee_minimal_regular", "∨-minimal regular"),
        ("wedge_minimal_regular", "∧-minimal regular"),
        ("convex_geometry", "convex geometry"),
        ("antimatroid", "antimatroid"),
        ("distributive", "distributive"),
        ("jordan_dedekind", "Jordan-Dedekind"),
    ]
    print(f"kind: {info['kind']}; elements: {info['elements']}; lattice: {_yes(info['lattice'])}", file=stream)
    for key, label in names:
        print(f"{label}: {_yes(info[key])}", file=stream)
    if info["J"] is not None:
        print(f"|J|={len(info['J'])}: {' '.join(info['J'])}", file=stream)
        print(f"|M|={len(info['M'])}: {' '.join(info['M'])}", file=stream)
    else:
        print("|J|=n/a", file=stream)
        print("|M|=n/a", file=stream)
    print(f"|C|={info['chains']}", file=stream)


def cmd_classify(args, stream) -> int:
    structure = load_structure(args.structure)
    info = classify(structure)
    if args.json:
        json.dump(info, stream)
        print(file=stream)
    else:
        _print_classify(info, stream)
    return 0


def cmd_shapley(args, stream) -> int:
    structure = load_structure(args.structure)
    v = load_capacity(args.capacity, structure, exact=args.exact)
    sv = shapley(v, args.mode, exact=args.exact or None)
    out = {"mode": args.mode, "phi": {s: _jsonable(x) for s, x in sv.as_dict().items()},
           "sum": _jsonable(sv.total())}
    extra = []
    if isinstance(structure, ProductLattice) and args.mode in ("auto", "lattice"):
        if structure.kind == "bicap":
            bi = bicapacity_shapley(v, exact=args.exact or None)
            out["phi_plus"] = [_jsonable(x) for x in bi.plus]
            out["phi_minus"] = [_jsonable(x) for x in bi.minus]
            for i, (p, m) in enumerate(zip(bi.plus, bi.minus), 1):
                extra.append(f"player {i}: phi+ {fmt(p)}  phi- {fmt(m)}  phi {fmt(p + m)}")
        elif structure.kind == "multi":
            mc = multichoice_shapley(v, exact=args.exact or None)
            out["phi_levels"] = [[_jsonable(x) for x in row] for row in mc.table]
            for i, row in enumerate(mc.table, 1):
                levels = "  ".join(f"j={j}: {fmt(x)}" for j, x in enumerate(row, 1))
                extra.append(f"player {i}: {levels}  total {fmt(sum(row))}")
    if args.json:
        json.dump(out, stream)
        print(file=stream)
        return 0
    width = max(len(s) for s in sv.labels + ("sum",))
    for s, x in zip(sv.labels, sv.phi):
        print(f"{s:<{width}}  {fmt(x)}", file=stream)
    print(f"{'sum':<{width}}  {fmt(sv.total())}", file=stream)
    for line in extra:
        print(line, file=stream)
    return 0


def cmd_entropy(args, stream) -> int:
    structure = load_structure(args.structure)
    v = load_capacity(args.capacity, structure, exact=args.exact)
    report = entropy(v, per_chain=args.per_chain, budget=args.budget)
    out = {"H": report.H, "chains": report.chain_count}
    if args.relative:
        u = load_capacity(args.relative, structure, exact=args.exact)
        out["relative"] = _jsonable(relative_entropy(v, u))
    if report.per_chain is not None:
        out["per_chain"] = [{"chain": [structure.labels[c] for c in chain], "H": h}
                            for chain, h in report.per_chain]
    if args.json:
        json.dump(out, stream)
        print(file=stream)
        return 0
    print(f"H {fmt(report.H)}", file=stream)
    print(f"chains {report.chain_count}", file=stream)
    if args.relative:
        rel = out["relative"]
        print(f"relative {rel if rel == 'inf' else fmt(rel)}", file=stream)
    for item in out.get("per_chain", []):
        print(f"{' '.join(item['chain'])}  {fmt(item['H'])}", file=stream)
    return 0


def cmd_verify(args, stream) -> int:
    report = proposition_harness(seed=args.seed, trials=args.trials)
    if args.json:
        json.dump(report.to_dict(), stream)
        print(file=stream)
    else:
        print(report.to_text(), file=stream)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON summary object")
    common.add_argument("--exact", action="store_true", help="rational arithmetic for capacity values")
    common.add_argument("--budget", type=int, default=DEFAULT_CHAIN_BUDGET, help="maximal chain cap")

    parser = argparse.ArgumentParser(prog="capentropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="structural predicates")
    p.add_argument("--structure", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("shapley", parents=[common], help="Shapley value")
    p.add_argument("--structure", required=True)
    p.add_argument("--capacity", required=True)
    p.add_argument("--mode", default="auto", choices=["auto", "classical", "chain", "lattice", "dual"])
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("entropy", parents=[common], help="chain-average entropy")
    p.add_argument("--structure", required=True)
    p.add_argument("--capacity", required=True)
    p.add_argument("--relative", metavar="FILE", help="reference capacity u for H(v; u)")
    p.add_argument("--per-chain", action="store_true")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify", parents=[common], help="run the randomised property harness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, stream)
    except (ParseError, CapacityError, OrderError, StructureError, ChainBudgetExceeded,
            OSError, KeyError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
