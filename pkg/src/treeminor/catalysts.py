"""S-catalysts, the arrowflows they induce, and the class structure on them.

An S-catalyst is a pair ``(sigma, f)``: ``sigma`` permutes ``S`` and ``f``
sends each ``s`` in ``S`` to one arc on the tree path from ``s`` to
``sigma(s)``, oriented along that path. The sum of ``sgn(sigma)`` over all
catalysts is ``det D[S]``. The multiset of the chosen arcs is the
*arrowflow* induced by the catalyst.
"""

from __future__ import annotations

import enum
import itertools
import math
import os
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .errors import (
    BudgetExceeded,
    ClassificationImpossible,
    NotQuotientable,
    NotZeroSum,
    WrongForestClass,
)
from .forests import Forest, ForestClass, classify_forest
from .linalg import permutation_sign
from .tree import Arc, Edge, Tree, normalize_subset

DEFAULT_BUDGET = 5 * 10**7
BUDGET_ENV = "TREEMINOR_BUDGET"
STAR = 0  # label of the contracted floating component in a quotient

_INT64_SAFE = 2**62


def default_budget() -> int:
    """Budget from ``TREEMINOR_BUDGET`` when set, else :data:`DEFAULT_BUDGET`."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    value = int(raw)
    if value < 0:
        raise ValueError(f"{BUDGET_ENV} must be non-negative")
    return value


@dataclass(frozen=True)
class Catalyst:
    """A catalyst stored position-wise over the sorted members of S.

    ``images[k]`` is ``sigma(members[k])`` and ``arcs[k]`` is
    ``f(members[k])``.
    """

    members: tuple[int, ...]
    images: tuple[int, ...]
    arcs: tuple[Arc, ...]

    @property
    def sigma(self) -> dict[int, int]:
        return dict(zip(self.members, self.images))

    @property
    def f(self) -> dict[int, Arc]:
        return dict(zip(self.members, self.arcs))

    @property
    def sign(self) -> int:
        return permutation_sign(self.sigma)

    def is_valid(self, t: Tree) -> bool:
        if sorted(self.images) != list(self.members):
            return False
        return all(
            arc in t.path_arcs(s, img)
            for s, img, arc in zip(self.members, self.images, self.arcs)
        )


class ArrowflowClass(enum.Enum):
    ZERO_SUM_PARALLEL = "zero-sum-parallel"
    ZERO_SUM_MISSING_PATH = "zero-sum-missing-path"
    UNITAL = "unital"
    COMPOSITE = "composite"

    @property
    def is_zero_sum(self) -> bool:
        return self in (ArrowflowClass.ZERO_SUM_PARALLEL, ArrowflowClass.ZERO_SUM_MISSING_PATH)


@dataclass(frozen=True)
class Arrowflow:
    """A multiset of oriented tree arcs, stored sorted."""

    tree: Tree
    arcs: tuple[Arc, ...]

    def __post_init__(self) -> None:
        arcs = tuple(sorted((int(u), int(v)) for u, v in self.arcs))
        index = self.tree.edge_index
        for u, v in arcs:
            if (u, v) not in index and (v, u) not in index:
                raise ValueError(f"arc ({u}, {v}) is not supported on the tree")
        object.__setattr__(self, "arcs", arcs)

    @cached_property
    def multiplicity(self) -> Counter:
        return Counter(self.arcs)

    @property
    def has_parallel(self) -> bool:
        return any(c > 1 for c in self.multiplicity.values())

    @cached_property
    def underlying_edges(self) -> frozenset[Edge]:
        return frozenset((min(u, v), max(u, v)) for u, v in self.arcs)

    @cached_property
    def missing_forest(self) -> Forest:
        used = self.underlying_edges
        return Forest(self.tree, tuple(e for e in self.tree.edges if e not in used))


def induced_arrowflow(t: Tree, c: Catalyst) -> Arrowflow:
    return Arrowflow(t, c.arcs)


def classify_arrowflow(a: Arrowflow, s: Iterable[int]) -> ArrowflowClass:
    """Tag ``a`` as zero-sum (two kinds), unital or composite, in that order."""
    members = normalize_subset(s, a.tree.n)
    if len(a.arcs) != len(members):
        raise ValueError(f"arrowflow has {len(a.arcs)} arcs, expected {len(members)}")
    if a.has_parallel:
        return ArrowflowClass.ZERO_SUM_PARALLEL
    forest = a.missing_forest
    if len({forest.component_of[x] for x in members}) < len(members):
        return ArrowflowClass.ZERO_SUM_MISSING_PATH
    kind = classify_forest(forest, members)
    if kind is ForestClass.S_ROOTED:
        return ArrowflowClass.UNITAL
    if kind is ForestClass.S_STAR_ROOTED:
        return ArrowflowClass.COMPOSITE
    raise ClassificationImpossible(f"no class fits arrowflow {a.arcs} for S={members}")


# -- brute-force enumeration ------------------------------------------------


def _python_permanent(rows: list[list[int]]) -> int:
    m = len(rows)
    if m == 0:
        return 1
    sums = [0] * m
    total = 0
    prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ prev
        col = diff.bit_length() - 1
        step = 1 if gray & diff else -1
        for i in range(m):
            sums[i] += step * rows[i][col]
        prev = gray
        total += (-1) ** (m - gray.bit_count()) * math.prod(sums)
    return total


def subfactorial(m: int) -> int:
    d = 1  # !0
    for k in range(1, m + 1):
        d = k * d + (-1) ** k
    return d


def catalyst_work_estimate(t: Tree, s: Iterable[int], budget: int | None = None) -> tuple[int, bool]:
    """Number of S-catalysts, i.e. the permanent of ``D[S]``.

    Returns ``(estimate, exact)``. When ``budget`` is given and the
    derangement count ``!m`` (a lower bound, since every off-diagonal entry
    is at least 1) already exceeds it, that bound is returned with
    ``exact=False`` instead of paying for the permanent.
    """
    members = normalize_subset(s, t.n)
    m = len(members)
    if budget is not None:
        floor = subfactorial(m)
        if floor > budget:
            return floor, False
    dist = t.distances
    rows = [[dist[a][b] for b in members] for a in members]
    bound = math.prod(sum(r) for r in rows) << m
    if m <= 30 and bound < _INT64_SAFE:
        return int(_kernels.permanent(np.array(rows, dtype=np.int64))), True
    return _python_permanent(rows), True


def check_budget(t: Tree, s: Iterable[int], budget: int | None) -> int:
    """Raise :class:`BudgetExceeded` unless the catalyst count fits ``budget``."""
    estimate, exact = catalyst_work_estimate(t, s, budget)
    if budget is not None and estimate > budget:
        raise BudgetExceeded(estimate, budget, exact)
    return estimate


def enumerate_catalysts(t: Tree, s: Iterable[int], budget: int | None = DEFAULT_BUDGET) -> Iterator[Catalyst]:
    """Every S-catalyst once: ``sigma`` in lexicographic one-line order, then
    arc choices in path order.

    The budget is checked before the first catalyst is produced.
    """
    members = normalize_subset(s, t.n)
    check_budget(t, members, budget)
    return _catalyst_stream(t, members)


def _catalyst_stream(t: Tree, members: tuple[int, ...]) -> Iterator[Catalyst]:
    for images in itertools.permutations(members):
        if any(a == b for a, b in zip(members, images)):
            continue
        legs = [t.path_arcs(a, b) for a, b in zip(members, images)]
        for arcs in itertools.product(*legs):
            yield Catalyst(members, images, arcs)


@lru_cache(maxsize=256)
def _leg_tables(t: Tree) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = t.n
    dist = np.zeros((n + 1, n + 1), dtype=np.int64)
    dist[1:] = np.array(t.distances[1:], dtype=np.int64)
    width = max(n - 1, 1)
    tails = np.zeros((n + 1, n + 1, width), dtype=np.int64)
    heads = np.zeros((n + 1, n + 1, width), dtype=np.int64)
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            for k, (a, b) in enumerate(t.path_arcs(u, v)):
                tails[u, v, k] = a
                heads[u, v, k] = b
    return dist, tails, heads


def catalyst_signed_total(t: Tree, s: Iterable[int], budget: int | None = DEFAULT_BUDGET) -> tuple[int, int]:
    """``(count, signed sum)`` over all S-catalysts, by compiled enumeration.

    The count must match the permanent computed up front; a mismatch means
    the enumeration is broken and raises ``RuntimeError``.
    """
    members = normalize_subset(s, t.n)
    expected = check_budget(t, members, budget)
    if expected >= _INT64_SAFE:
        count = signed = 0
        for c in _catalyst_stream(t, members):
            count += 1
            signed += c.sign
    else:
        dist, tails, heads = _leg_tables(t)
        count, signed = _kernels.catalyst_totals(dist, tails, heads, np.array(members, dtype=np.int64))
        count, signed = int(count), int(signed)
    if count != expected:
        raise RuntimeError(f"enumerated {count} catalysts, permanent says {expected}")
    return count, signed


# -- per-class sums -----------------------------------------------------------


def catalysts_inducing(t: Tree, s: Iterable[int], a: Arrowflow) -> Iterator[Catalyst]:
    """Catalysts whose arc multiset is exactly ``a``, by backtracking per sigma."""
    members = normalize_subset(s, t.n)
    if len(a.arcs) != len(members):
        return
    m = len(members)
    for images in itertools.permutations(members):
        if any(x == y for x, y in zip(members, images)):
            continue
        options = []
        for x, y in zip(members, images):
            legs = [arc for arc in t.path_arcs(x, y) if arc in a.multiplicity]
            if not legs:
                break
            options.append(legs)
        if len(options) < m:
            continue
        left = Counter(a.multiplicity)
        chosen: list[Arc] = []

        def fill(k: int) -> Iterator[tuple[Arc, ...]]:
            if k == m:
                yield tuple(chosen)
                return
            for arc in options[k]:
                if left[arc]:
                    left[arc] -= 1
                    chosen.append(arc)
                    yield from fill(k + 1)
                    chosen.pop()
                    left[arc] += 1

        for arcs in fill(0):
            yield Catalyst(members, images, arcs)


def class_signed_sum(t: Tree, s: Iterable[int], a: Arrowflow, budget: int | None = DEFAULT_BUDGET) -> int:
    members = normalize_subset(s, t.n)
    check_budget(t, members, budget)
    return sum(c.sign for c in catalysts_inducing(t, members, a))


@dataclass(frozen=True)
class ClassTally:
    arrowflow: Arrowflow
    cls: ArrowflowClass
    count: int
    signed: int


def class_sums(t: Tree, s: Iterable[int], budget: int | None = DEFAULT_BUDGET) -> list[ClassTally]:
    """Group every catalyst by induced arrowflow; sorted by arc tuple."""
    members = normalize_subset(s, t.n)
    check_budget(t, members, budget)
    counts: Counter = Counter()
    signed: Counter = Counter()
    for c in _catalyst_stream(t, members):
        key = tuple(sorted(c.arcs))
        counts[key] += 1
        signed[key] += c.sign
    return _tallies(t, members, counts, signed)


def _tallies(t: Tree, members: tuple[int, ...], counts: Counter, signed: Counter) -> list[ClassTally]:
    out = []
    for arcs in sorted(counts):
        a = Arrowflow(t, arcs)
        out.append(ClassTally(a, classify_arrowflow(a, members), counts[arcs], signed[arcs]))
    return out


def _grouped_flow_keys(t: Tree, members: tuple[int, ...], budget: int | None):
    """Compiled enumeration grouped by packed arrowflow key.

    Returns ``None`` when the packing does not fit in 63 bits, else
    ``(arcs, width, keys, counts, signed)`` with ``keys`` sorted.
    """
    total = check_budget(t, members, budget)
    arcs = t.arcs()
    width = max(1, len(arcs).bit_length())
    if width * len(members) > 62 or total >= _INT64_SAFE:
        return None
    dist, tails, heads = _leg_tables(t)
    code = np.full((t.n + 1, t.n + 1), -1, dtype=np.int64)
    for i, (u, v) in enumerate(arcs):
        code[u, v] = i
    keys = np.empty(total, dtype=np.int64)
    signs = np.empty(total, dtype=np.int64)
    filled = _kernels.catalyst_flow_keys(
        dist, tails, heads, code, np.array(members, dtype=np.int64), width, keys, signs
    )
    if filled != total:
        raise RuntimeError(f"enumerated {filled} catalysts, permanent says {total}")
    uniq, inverse = np.unique(keys, return_inverse=True)
    counts = np.bincount(inverse, minlength=len(uniq)).astype(np.int64)
    signed = np.bincount(inverse, weights=signs, minlength=len(uniq)).astype(np.int64)
    return arcs, width, uniq, counts, signed


def _unpack(arcs: tuple[Arc, ...], width: int, m: int, key: int) -> tuple[Arc, ...]:
    mask = (1 << width) - 1
    return tuple(sorted(arcs[(key >> (width * k)) & mask] for k in range(m)))


def class_sums_fast(t: Tree, s: Iterable[int], budget: int | None = DEFAULT_BUDGET) -> list[ClassTally]:
    """Same result as :func:`class_sums`, enumerating catalysts in compiled code.

    Each catalyst's arc multiset is packed into one integer (sorted arc
    indices, fixed bit width) so the grouping is a numpy reduction.
    Classification still goes through :func:`classify_arrowflow`.
    """
    members = normalize_subset(s, t.n)
    grouped = _grouped_flow_keys(t, members, budget)
    if grouped is None:
        return class_sums(t, members, budget)
    arcs, width, keys, count_arr, signed_arr = grouped
    counts: Counter = Counter()
    signed: Counter = Counter()
    for key, cnt, sg in zip(keys.tolist(), count_arr.tolist(), signed_arr.tolist()):
        flow = _unpack(arcs, width, len(members), key)
        counts[flow] = cnt
        signed[flow] = sg
    return _tallies(t, members, counts, signed)


_CLASS_BY_CODE = {
    0: ArrowflowClass.ZERO_SUM_PARALLEL,
    1: ArrowflowClass.ZERO_SUM_MISSING_PATH,
    2: ArrowflowClass.UNITAL,
    3: ArrowflowClass.COMPOSITE,
}


@dataclass(frozen=True)
class ClassTable:
    """Column-wise per-arrowflow tallies for bulk checks.

    Row ``r`` describes one arrowflow: its packed ``keys[r]``, number of
    catalysts ``counts[r]``, signed sum ``signed[r]``, class code
    ``classes[r]`` (see :meth:`cls`) and ``missing[r]``, the bitmask over
    ``tree.edges`` of edges the arrowflow does not use.
    """

    tree: Tree
    members: tuple[int, ...]
    arcs: tuple[Arc, ...]
    width: int
    keys: np.ndarray
    counts: np.ndarray
    signed: np.ndarray
    classes: np.ndarray
    missing: np.ndarray

    def __len__(self) -> int:
        return len(self.keys)

    def arrowflow(self, row: int) -> Arrowflow:
        return Arrowflow(self.tree, _unpack(self.arcs, self.width, len(self.members), int(self.keys[row])))

    def cls(self, row: int) -> ArrowflowClass:
        code = int(self.classes[row])
        if code not in _CLASS_BY_CODE:
            raise ClassificationImpossible(f"no class fits {self.arrowflow(row).arcs}")
        return _CLASS_BY_CODE[code]


def edge_mask(t: Tree, edges: Iterable[Edge]) -> int:
    index = t.edge_index
    return sum(1 << index[e] for e in edges)


def class_table(t: Tree, s: Iterable[int], budget: int | None = DEFAULT_BUDGET) -> ClassTable:
    """Every arrowflow induced by an S-catalyst, tallied and classified in
    compiled code."""
    members = normalize_subset(s, t.n)
    grouped = _grouped_flow_keys(t, members, budget)
    if grouped is None:
        raise ValueError("tree too large for packed arrowflow keys")
    arcs, width, keys, counts, signed = grouped
    index = t.edge_index
    arc_edge = np.array([index[(min(u, v), max(u, v))] for u, v in arcs], dtype=np.int64)
    edge_u = np.array([u for u, _ in t.edges], dtype=np.int64)
    edge_v = np.array([v for _, v in t.edges], dtype=np.int64)
    classes, missing = _kernels.classify_keys(
        keys, width, len(members), arc_edge, edge_u, edge_v, t.n, np.array(members, dtype=np.int64)
    )
    return ClassTable(t, members, arcs, width, keys, counts, signed, classes, missing)


# -- zero-sum involution ------------------------------------------------------


@lru_cache(maxsize=65536)
def _pair_rule(t: Tree, arcs: tuple[Arc, ...], members: tuple[int, ...]) -> tuple:
    a = Arrowflow(t, arcs)
    repeated = sorted(arc for arc, k in a.multiplicity.items() if k > 1)
    if repeated:
        return ("arc", repeated[0])
    comp = a.missing_forest.component_of
    for i, j in itertools.combinations(members, 2):
        if comp[i] == comp[j]:
            return ("pair", i, j)
    raise NotZeroSum(f"arrowflow {a.arcs} is not zero-sum")


def involution_pair(a: Arrowflow, c: Catalyst) -> tuple[int, int]:
    """The two S-vertices swapped by :func:`zero_sum_involution`.

    With parallel arcs: the two smallest vertices whose arc is the smallest
    repeated arc. Otherwise: the smallest pair ``i < j`` sharing a component
    of the missing forest. Swapping either kind of pair leaves the arrowflow
    and hence the choice unchanged.
    """
    return _pair_for(a.tree, a.arcs, c)


def _pair_for(t: Tree, arcs: tuple[Arc, ...], c: Catalyst) -> tuple[int, int]:
    rule = _pair_rule(t, arcs, c.members)
    if rule[0] == "pair":
        return rule[1], rule[2]
    i, j = [x for x, y in zip(c.members, c.arcs) if y == rule[1]][:2]
    return i, j


def zero_sum_involution(t: Tree, c: Catalyst) -> Catalyst:
    """Return ``(sigma o (i j), f o (i j))`` for the canonical pair ``(i, j)``."""
    i, j = _pair_for(t, tuple(sorted(c.arcs)), c)
    p, q = c.members.index(i), c.members.index(j)
    images, arcs = list(c.images), list(c.arcs)
    images[p], images[q] = images[q], images[p]
    arcs[p], arcs[q] = arcs[q], arcs[p]
    return Catalyst(c.members, tuple(images), tuple(arcs))


# -- quotients ----------------------------------------------------------------


@dataclass(frozen=True)
class QuotientFlow:
    """Contraction of every missing-forest component of a unital or
    composite arrowflow to a single vertex.

    Vertices of S keep their labels and the floating component (composite
    case) becomes :data:`STAR`. ``projection[v]`` is the image of tree vertex
    ``v`` (``projection[0]`` is unused and set to -1).
    """

    base: Arrowflow
    subset: tuple[int, ...]
    vertices: tuple[int, ...]
    arcs: tuple[Arc, ...]
    projection: tuple[int, ...]
    tree_edges: tuple[Edge, ...]

    def arc_map(self) -> dict[Arc, Arc]:
        psi = self.projection
        return {(u, v): (psi[u], psi[v]) for u, v in set(self.base.arcs)}

    @cached_property
    def relabeling(self) -> dict[int, int]:
        """Quotient vertex -> 1..q, with S first (in order) and STAR last."""
        order = list(self.subset) + ([STAR] if STAR in self.vertices else [])
        return {x: k for k, x in enumerate(order, 1)}

    def quotient_tree(self) -> Tree:
        r = self.relabeling
        return Tree(len(self.vertices), tuple((r[u], r[v]) for u, v in self.tree_edges))

    def relabeled_subset(self) -> tuple[int, ...]:
        return tuple(range(1, len(self.subset) + 1))

    def as_arrowflow(self) -> Arrowflow:
        r = self.relabeling
        return Arrowflow(self.quotient_tree(), tuple((r[u], r[v]) for u, v in self.arcs))

    def lift(self, c: Catalyst) -> Catalyst:
        """Push a catalyst inducing ``base`` to the relabeled quotient tree."""
        r, psi = self.relabeling, self.projection
        return Catalyst(
            self.relabeled_subset(),
            tuple(r[y] for y in c.images),
            tuple((r[psi[u]], r[psi[v]]) for u, v in c.arcs),
        )


def quotient_flow(a: Arrowflow, s: Iterable[int]) -> QuotientFlow:
    members = normalize_subset(s, a.tree.n)
    kind = classify_arrowflow(a, members)
    if kind.is_zero_sum:
        raise NotQuotientable(f"{kind.value} arrowflow has no quotient")
    forest = a.missing_forest
    owner = {forest.component_of[x]: x for x in members}
    psi = [-1] + [owner.get(forest.component_of[v], STAR) for v in range(1, a.tree.n + 1)]
    arcs = tuple(sorted((psi[u], psi[v]) for u, v in a.arcs))
    images = {}
    for u, v in set(a.arcs):
        img = (psi[u], psi[v])
        if img[0] == img[1] or images.setdefault(img, (u, v)) != (u, v):
            raise RuntimeError(f"arc map is not injective at {(u, v)}")
    edges = tuple(sorted((min(psi[u], psi[v]), max(psi[u], psi[v])) for u, v in a.underlying_edges))
    vertices = tuple(sorted(set(psi[1:])))
    for x in members:
        if psi[x] != x:
            raise RuntimeError("projection moves a vertex of S")
    return QuotientFlow(a, members, vertices, arcs, tuple(psi), edges)


# -- unital counting ----------------------------------------------------------


def unital_arrowflows(t: Tree, s: Iterable[int], f: Forest) -> Iterator[Arrowflow]:
    """Arrowflows on the edges outside ``f``: one edge doubled both ways,
    every other edge oriented one way."""
    members = normalize_subset(s, t.n)
    if classify_forest(f, members) is not ForestClass.S_ROOTED:
        raise WrongForestClass("forest is not S-rooted")
    kept = set(f.kept_edges)
    outside = [e for e in t.edges if e not in kept]
    for k, (u, v) in enumerate(outside):
        rest = outside[:k] + outside[k + 1 :]
        for flips in itertools.product((False, True), repeat=len(rest)):
            arcs = [(u, v), (v, u)]
            arcs += [(y, x) if flip else (x, y) for (x, y), flip in zip(rest, flips)]
            yield Arrowflow(t, tuple(arcs))


def unital_count_for_forest(t: Tree, s: Iterable[int], f: Forest) -> int:
    return sum(1 for _ in unital_arrowflows(t, s, f))
