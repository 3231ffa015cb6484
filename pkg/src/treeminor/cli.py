"""``treeminor`` command-line interface.

Exit codes: 0 success, 2 usage or input error, 3 a check disagreed or
failed, 4 brute-force budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from collections.abc import Sequence

from .catalysts import (
    catalyst_signed_total,
    class_sums_fast,
    default_budget,
    enumerate_catalysts,
)
from .errors import BudgetExceeded, TreeMinorError
from .forests import boundary_degree, enumerate_s_rooted, enumerate_s_star_rooted
from .identities import (
    DerangementNetwork,
    all_plane_trees,
    bead_bijection_witness,
    binomial_identity_sides,
    check_interlacing,
    cycle_notation,
    derangement_network_paths,
    derangements,
    example_plane_tree,
    mark_cycle,
    marked_dfs,
    signed_derangement_sum,
)
from .linalg import sign_of_images
from .minors import (
    cross_verify,
    minor_ck_corollary,
    minor_determinant,
    minor_richman,
    minor_theorem_a,
)
from .tree import Tree, derive_seed, from_prufer, random_tree, read_tree, rng_from_seed
from .verify import EXHAUSTIVE_CATALYST_BUDGET, exhaustive_sweep, random_trials

EXIT_OK, EXIT_USAGE, EXIT_DISAGREE, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _add_tree_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tree", metavar="FILE", help="tree file: n, then one 'u v' edge per line")
    src.add_argument("--prufer", metavar="LIST", type=_int_list, help="Prüfer sequence, e.g. 4,4")
    src.add_argument("--random", metavar="N", type=int, help="uniform random labeled tree on N vertices")
    p.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")


def _add_format(p: argparse.ArgumentParser, default: str = "json") -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default=default)


def _load_tree(args: argparse.Namespace) -> Tree:
    if args.tree is not None:
        return read_tree(args.tree)
    if args.prufer is not None:
        return from_prufer(args.prufer)
    if args.random < 1:
        raise UsageError("--random needs a positive vertex count")
    return random_tree(args.random, args.seed)


def _budget(args: argparse.Namespace) -> int:
    return default_budget() if args.budget is None else args.budget


def _emit(records: list[dict] | dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump(records, out, indent=2)
        out.write("\n")
        return
    rows = records if isinstance(records, list) else [records]
    if fmt == "csv":
        buf = io.StringIO()
        fields: list[str] = []
        for r in rows:
            fields.extend(k for k in r if k not in fields)
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        out.write(buf.getvalue())
        return
    for r in rows:
        out.write(" ".join(f"{k}={json.dumps(v) if isinstance(v, (list, dict)) else v}" for k, v in r.items()))
        out.write("\n")


# -- subcommands ----------------------------------------------------------------

_SINGLE = {
    "det": minor_determinant,
    "theorem-a": minor_theorem_a,
    "richman": minor_richman,
    "ck": minor_ck_corollary,
}


def cmd_compute(args: argparse.Namespace, out) -> int:
    t = _load_tree(args)
    subset = args.subset
    if args.method == "all":
        report = cross_verify(t, subset, _budget(args))
        _emit(report.to_json(), args.format, out)
        return EXIT_OK if report.agree else EXIT_DISAGREE
    if args.method == "catalyst":
        _, value = catalyst_signed_total(t, subset, _budget(args))
    else:
        value = _SINGLE[args.method](t, subset)
    record = {
        "n": t.n,
        "subset": sorted(subset),
        "method": args.method,
        "value": None if value is None else str(value),
    }
    _emit(record, args.format, out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out) -> int:
    if not (args.exhaustive or args.random):
        raise UsageError("choose --exhaustive and/or --random")
    if args.random and args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.n_max < 2:
        raise UsageError("--n-max must be at least 2")
    summaries = []
    if args.exhaustive:
        budget = EXHAUSTIVE_CATALYST_BUDGET if args.budget is None else args.budget
        summaries.append(exhaustive_sweep(args.n_max, budget))
    if args.random:
        summaries.append(random_trials(args.trials, args.n_max, args.seed, _budget(args), args.jobs))
    doc = summaries[0] if len(summaries) == 1 else summaries
    json.dump(doc, out, indent=2, sort_keys=True)
    out.write("\n")
    return EXIT_OK if all(s["failed"] == 0 for s in summaries) else EXIT_DISAGREE


def cmd_forests(args: argparse.Namespace, out) -> int:
    t = _load_tree(args)
    star = args.kind == "s-star"
    forests = (enumerate_s_star_rooted if star else enumerate_s_rooted)(t, args.subset)
    records = []
    for k, f in enumerate(forests):
        records.append(
            {
                "index": k,
                "kept_edges": [list(e) for e in f.kept_edges],
                "components": [sorted(c) for c in f.components],
                "class": "s-star-rooted" if star else "s-rooted",
                "floating": f.floating,
                "bdeg": boundary_degree(f, f.floating) if star else None,
            }
        )
    _emit(records, args.format, out)
    return EXIT_OK


def _catalyst_line(c) -> str:
    sigma = ",".join(f"{s}→{t}" for s, t in zip(c.members, c.images))
    f = ",".join(f"{s}→({u},{v})" for s, (u, v) in zip(c.members, c.arcs))
    return f"σ: {sigma} | f: {f} | {c.sign:+d}"


def cmd_catalysts(args: argparse.Namespace, out) -> int:
    t = _load_tree(args)
    budget = _budget(args)
    if args.classify:
        records = [
            {
                "arcs": [list(a) for a in tally.arrowflow.arcs],
                "class": tally.cls.value,
                "missing_forest_edges": [list(e) for e in tally.arrowflow.missing_forest.kept_edges],
                "catalysts": tally.count,
                "class_signed_sum": str(tally.signed),
            }
            for tally in class_sums_fast(t, args.subset, budget)
        ]
        _emit(records, "json" if args.format == "text" else args.format, out)
        return EXIT_OK
    stream = enumerate_catalysts(t, args.subset, budget)
    if args.format == "text":
        for c in stream:
            out.write(_catalyst_line(c) + "\n")
        return EXIT_OK
    records = [
        {
            "sigma": {str(s): y for s, y in zip(c.members, c.images)},
            "f": {str(s): list(a) for s, a in zip(c.members, c.arcs)},
            "sign": c.sign,
        }
        for c in stream
    ]
    _emit(records, args.format, out)
    return EXIT_OK


def _record(name: str, parameter: int, lhs, rhs) -> dict:
    return {"name": name, "parameter": parameter, "lhs": str(lhs), "rhs": str(rhs), "pass": lhs == rhs}


def _identity_records(check: str, n: int) -> list[dict]:
    if check == "derangements":
        return [_record(check, n, signed_derangement_sum(n), (-1) ** (n - 1) * (n - 1))]
    if check == "network":
        families = derangement_network_paths(n)
        perms = sorted(p for _, p in families)
        expected = list(derangements(n))
        signed = sum(sign_of_images(p, range(1, n + 1)) for p in perms)
        return [
            _record("network-acyclic", n, int(DerangementNetwork(n).is_acyclic()), 1),
            _record("network-families", n, len(families), len(expected)),
            _record("network-bijection", n, int(perms == expected), 1),
            _record("network-sign", n, signed, (-1) ** (n - 1) * (n - 1)),
        ]
    if check == "binomial":
        lhs, rhs = binomial_identity_sides(n)
        return [_record(check, n, lhs, rhs)]
    if check == "beads":
        size_r, size_l, size_rest = bead_bijection_witness(n)
        return [_record(check, n, size_l, size_r - size_rest)]
    if check == "dfs":
        trees = list(all_plane_trees(n))
        holding = sum(check_interlacing(pt, marked_dfs(pt)) for pt in trees)
        return [_record("dfs-interlacing", n, holding, len(trees))]
    if check == "dfs-example":
        pt = example_plane_tree()
        walk = marked_dfs(pt)
        cycle = cycle_notation(mark_cycle(walk), walk.marks()[0])
        return [
            {
                "name": "dfs-example-cycle",
                "parameter": len(pt.nodes) - 1,
                "lhs": " ".join(map(str, cycle)),
                "rhs": "3 8 4 7 9 1 6 2 5",
                "pass": cycle == (3, 8, 4, 7, 9, 1, 6, 2, 5),
            }
        ]
    raise UsageError(f"unknown check {check!r}")


_DEFAULT_RANGES = {
    "derangements": range(1, 10),
    "network": range(2, 8),
    "binomial": range(0, 31),
    "beads": range(2, 13),
    "dfs": range(7, 8),
    "dfs-example": range(9, 10),
}


def cmd_identities(args: argparse.Namespace, out) -> int:
    checks = list(_DEFAULT_RANGES) if args.check == "all" else [args.check]
    ok = True
    for check in checks:
        params = [args.n] if args.n is not None else list(_DEFAULT_RANGES[check])
        for n in params:
            for rec in _identity_records(check, n):
                ok &= rec["pass"]
                out.write(json.dumps(rec) + "\n")
    return EXIT_OK if ok else EXIT_DISAGREE


def cmd_bench(args: argparse.Namespace, out) -> int:
    t = _load_tree(args)
    subset = args.subset
    if subset is None:
        rng = rng_from_seed(derive_seed(args.seed, 1))
        m = min(t.n, 6)
        subset = sorted(int(x) + 1 for x in rng.choice(t.n, size=m, replace=False))
    routes = {
        "det": lambda: minor_determinant(t, subset),
        "theorem-a": lambda: minor_theorem_a(t, subset),
        "richman": lambda: minor_richman(t, subset),
        "catalyst": lambda: catalyst_signed_total(t, subset, _budget(args)),
    }
    seconds: dict[str, float | None] = {}
    for name, fn in routes.items():
        try:
            fn()  # warm caches and compiled code
            start = time.perf_counter()
            for _ in range(args.repeats):
                fn()
            seconds[name] = (time.perf_counter() - start) / args.repeats
        except BudgetExceeded:
            seconds[name] = None
    _emit({"n": t.n, "subset": sorted(subset), "repeats": args.repeats, "seconds": seconds}, "json", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treeminor", description="Principal minors of tree distance matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate det D[S] by one or all routes")
    _add_tree_source(p)
    p.add_argument("--subset", type=_int_list, required=True, help="vertex set S, comma separated, e.g. 1,3,4")
    p.add_argument(
        "--method",
        choices=("det", "theorem-a", "richman", "catalyst", "ck", "all"),
        default="all",
        help="evaluation route (default all, which also reports agreement)",
    )
    p.add_argument("--budget", type=_nonneg, help="catalyst budget (default: TREEMINOR_BUDGET or built-in)")
    _add_format(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="exhaustive and/or seeded random cross-checks")
    p.add_argument("--exhaustive", action="store_true", help="every labeled tree up to --n-max, every S")
    p.add_argument("--random", action="store_true", help="seeded random (tree, S) trials")
    p.add_argument("--n-max", type=int, default=7, help="largest tree size (default 7)")
    p.add_argument("--trials", type=int, default=100, help="random trials (default 100)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")
    p.add_argument("--budget", type=_nonneg, help="catalyst budget (default: TREEMINOR_BUDGET or built-in)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("forests", help="list S-rooted or (S,*)-rooted forests")
    _add_tree_source(p)
    p.add_argument("--subset", type=_int_list, required=True, help="vertex set S, comma separated, e.g. 1,3,4")
    p.add_argument("--kind", choices=("s-rooted", "s-star"), default="s-rooted", help="forest family (default s-rooted)")
    _add_format(p)
    p.set_defaults(func=cmd_forests)

    p = sub.add_parser("catalysts", help="dump catalysts or their arrowflow classes")
    _add_tree_source(p)
    p.add_argument("--subset", type=_int_list, required=True, help="vertex set S, comma separated, e.g. 1,3,4")
    p.add_argument("--classify", action="store_true", help="group into arrowflow classes with signed sums")
    p.add_argument("--budget", type=_nonneg, help="catalyst budget (default: TREEMINOR_BUDGET or built-in)")
    _add_format(p, default="text")
    p.set_defaults(func=cmd_catalysts)

    p = sub.add_parser("identities", help="run the auxiliary identity checks")
    p.add_argument("--check", choices=(*_DEFAULT_RANGES, "all"), default="all", help="which identity (default all)")
    p.add_argument("--n", type=int, help="single size to check instead of the default range")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("bench", help="time each evaluation route")
    _add_tree_source(p)
    p.add_argument("--subset", type=_int_list, help="vertex set S (default: seeded random subset of up to 6 vertices)")
    p.add_argument("--repeats", type=int, default=3, help="timing repeats, mean is reported (default 3)")
    p.add_argument("--budget", type=_nonneg, help="catalyst budget (default: TREEMINOR_BUDGET or built-in)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"treeminor: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (TreeMinorError, UsageError, ValueError, OSError) as exc:
        print(f"treeminor: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
