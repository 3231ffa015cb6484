"""Exhaustive and seeded-random cross-checks of the minor formulas.

Both drivers return plain JSON-ready dictionaries whose content depends
only on their arguments: random trial ``k`` draws everything from
``derive_seed(seed, k)``, so worker count and scheduling never leak into the
output.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor

from .minors import cross_verify, graham_pollak, minor_ck_corollary
from .tree import Tree, derive_seed, from_prufer, path_tree, random_tree, rng_from_seed, to_prufer

EXHAUSTIVE_CATALYST_BUDGET = 10**6


def all_labeled_trees(n: int) -> Iterator[Tree]:
    """All ``n^(n-2)`` labeled trees on ``[n]`` in Prüfer-lexicographic order."""
    if n == 1:
        yield Tree(1, ())
        return
    if n == 2:
        yield path_tree(2)
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield from_prufer(seq)


def check_case(t: Tree, s: tuple[int, ...], catalyst_budget: int) -> dict:
    """Cross-verify one ``(tree, S)``; extra closed forms join when they apply."""
    report = cross_verify(t, s, catalyst_budget)
    record = report.to_json()
    ok = report.agree
    if len(s) == t.n:
        gp = graham_pollak(t.n)
        record["value_graham_pollak"] = str(gp)
        ok = ok and gp == report.value_det
    if len(s) >= 3:
        ck = minor_ck_corollary(t, s)
        if ck is not None:
            record["value_ck"] = str(ck)
            ok = ok and ck == report.value_det
    record["pass"] = ok
    return record


def exhaustive_sweep(
    n_max: int,
    catalyst_budget: int = EXHAUSTIVE_CATALYST_BUDGET,
    on_case: Callable[[dict], None] | None = None,
) -> dict:
    """Every labeled tree with ``2 <= n <= n_max`` and every ``S`` with ``m >= 2``."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    cases = passed = with_catalyst = 0
    first_failure = None
    per_n = []
    for n in range(2, n_max + 1):
        n_cases = 0
        for t in all_labeled_trees(n):
            for m in range(2, n + 1):
                for s in itertools.combinations(range(1, n + 1), m):
                    record = check_case(t, s, catalyst_budget)
                    if on_case is not None:
                        on_case(record)
                    n_cases += 1
                    with_catalyst += record["value_catalyst"] is not None
                    if record["pass"]:
                        passed += 1
                    elif first_failure is None:
                        first_failure = {"prufer": to_prufer(t), **record}
        per_n.append({"n": n, "cases": n_cases})
        cases += n_cases
    return {
        "mode": "exhaustive",
        "n_max": n_max,
        "catalyst_budget": catalyst_budget,
        "cases": cases,
        "with_catalyst": with_catalyst,
        "passed": passed,
        "failed": cases - passed,
        "first_failure": first_failure,
        "per_n": per_n,
    }


def random_case(seed: int, trial: int, n_max: int) -> tuple[Tree, tuple[int, ...]]:
    """Tree and subset of trial ``trial``; a pure function of its arguments."""
    rng = rng_from_seed(derive_seed(seed, trial))
    n = int(rng.integers(2, n_max + 1))
    t = random_tree(n, int(rng.integers(0, 2**63)))
    m = int(rng.integers(2, n + 1))
    s = tuple(sorted(int(x) + 1 for x in rng.choice(n, size=m, replace=False)))
    return t, s


def _run_trial(args: tuple[int, int, int, int]) -> dict:
    seed, trial, n_max, budget = args
    t, s = random_case(seed, trial, n_max)
    record = check_case(t, s, budget)
    return {"trial": trial, "prufer": to_prufer(t), **record}


def random_trials(trials: int, n_max: int, seed: int, catalyst_budget: int, jobs: int = 1) -> dict:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    work = [(seed, k, n_max, catalyst_budget) for k in range(trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_trial, work, chunksize=max(1, trials // (4 * jobs))))
    else:
        records = [_run_trial(w) for w in work]
    failures = [r for r in records if not r["pass"]]
    return {
        "mode": "random",
        "seed": seed,
        "trials": trials,
        "n_max": n_max,
        "catalyst_budget": catalyst_budget,
        "passed": trials - len(failures),
        "failed": len(failures),
        "first_failure": failures[0] if failures else None,
        "records": records,
    }
