"""Auxiliary combinatorics: marked DFS walks, derangement networks, beads.

Plane rooted directed trees use integer node labels with :data:`ROOT` (0)
standing for the distinguished root ``*``.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from graphlib import CycleError, TopologicalSorter

from .errors import BudgetExceeded
from .linalg import sign_of_images
from .tree import Tree

ROOT = 0
Token = tuple[int, bool]


# -- plane rooted directed trees ----------------------------------------------


@dataclass(frozen=True)
class PlaneTree:
    """A rooted tree with every parent edge oriented and children ordered.

    ``children[x]`` lists the children of ``x`` in plane order; the
    ascending ones (parent edge oriented child -> parent, listed in
    ``ascending``) must all precede the descending ones.
    """

    children: Mapping[int, tuple[int, ...]]
    ascending: frozenset[int]
    root: int = ROOT

    def __post_init__(self) -> None:
        kids = {x: tuple(c) for x, c in self.children.items()}
        seen = {self.root}
        stack = [self.root]
        while stack:
            x = stack.pop()
            for y in kids.get(x, ()):
                if y in seen:
                    raise ValueError(f"node {y} reached twice")
                seen.add(y)
                stack.append(y)
        if set(kids) - seen:
            raise ValueError("children listed for unreachable nodes")
        for x, order in kids.items():
            flags = [y in self.ascending for y in order]
            if flags != sorted(flags, reverse=True):
                raise ValueError(f"descending child before ascending child at {x}")
        if self.root in self.ascending or not self.ascending <= seen:
            raise ValueError("ascending set must hold non-root nodes only")
        object.__setattr__(self, "children", kids)
        object.__setattr__(self, "nodes", frozenset(seen))

    def kids(self, x: int) -> tuple[int, ...]:
        return self.children.get(x, ())

    @property
    def parent(self) -> dict[int, int]:
        return {y: x for x, ys in self.children.items() for y in ys}

    def arcs(self) -> frozenset[tuple[int, int]]:
        """The orientation: ``(child, parent)`` if ascending else ``(parent, child)``."""
        return frozenset((y, x) if y in self.ascending else (x, y) for y, x in self.parent.items())

    @classmethod
    def from_tree(cls, t: Tree, root: int, ascending: frozenset[int] | set[int]) -> PlaneTree:
        """Plane structure on ``t`` rooted at ``root`` with the canonical child
        order: ascending children by label, then descending children by label.
        ``root`` is relabeled :data:`ROOT`."""
        relabel = {root: ROOT} if root != ROOT else {}

        def lab(v: int) -> int:
            return relabel.get(v, v)

        children: dict[int, tuple[int, ...]] = {}
        stack = [(root, 0)]
        while stack:
            x, par = stack.pop()
            kids = [y for y in t.adjacency[x] if y != par]
            kids.sort(key=lambda y: (y not in ascending, y))
            if kids:
                children[lab(x)] = tuple(lab(y) for y in kids)
            stack.extend((y, x) for y in kids)
        return cls(children, frozenset(lab(v) for v in ascending))


@dataclass(frozen=True)
class MarkedWalk:
    """Tokens ``(node, marked)`` of a closed walk starting and ending at the root."""

    tokens: tuple[Token, ...]

    @property
    def steps(self) -> tuple[tuple[int, int], ...]:
        nodes = [x for x, _ in self.tokens]
        return tuple(zip(nodes, nodes[1:]))

    def marks(self) -> tuple[int, ...]:
        return tuple(x for x, marked in self.tokens if marked)

    def render(self) -> str:
        return " ".join(("*" if x == ROOT else f"({x})" if marked else str(x)) for x, marked in self.tokens)


def marked_dfs(pt: PlaneTree) -> MarkedWalk:
    """Depth-first walk marking each node between its ascending and
    descending children.

    A node ``x`` with ascending children ``y1..yk`` and descending children
    ``z1..zl`` expands to ``x W(y1) ... x W(yk) [x] W(z1) x ... W(zl) x``,
    where ``[x]`` is the marked copy (the root's copy stays unmarked).
    """
    out: list[Token] = []

    def walk(x: int) -> None:
        kids = pt.kids(x)
        asc = [y for y in kids if y in pt.ascending]
        des = [z for z in kids if z not in pt.ascending]
        for y in asc:
            out.append((x, False))
            walk(y)
        out.append((x, x != pt.root))
        for z in des:
            walk(z)
            out.append((x, False))

    walk(pt.root)
    return MarkedWalk(tuple(out))


def mark_cycle(w: MarkedWalk) -> dict[int, int]:
    """Each marked node sent to the next mark along the cyclic walk."""
    order = w.marks()
    return {x: order[(k + 1) % len(order)] for k, x in enumerate(order)}


def cycle_notation(perm: Mapping[int, int], start: int) -> tuple[int, ...]:
    out = [start]
    x = perm[start]
    while x != start:
        out.append(x)
        x = perm[x]
    return tuple(out)


def check_interlacing(pt: PlaneTree, w: MarkedWalk) -> bool:
    """Whether marks and arcs interlace along the cyclic walk.

    Returns false unless ``w`` is a closed walk along tree edges with each
    non-root node marked exactly once. Then, between every two cyclically
    consecutive marks, exactly one step must cross an arc in its own
    direction, every step before it moving up (child to parent) and every
    step after it moving down.
    """
    tokens = w.tokens
    if len(tokens) < 2 or tokens[0] != (pt.root, False) or tokens[-1] != (pt.root, False):
        return len(pt.nodes) == 1 and tokens == ((pt.root, False),)
    if sorted(w.marks()) != sorted(pt.nodes - {pt.root}):
        return False
    parent = pt.parent
    arcs = pt.arcs()
    steps = list(w.steps)
    for x, y in steps:
        if parent.get(x) != y and parent.get(y) != x:
            return False
    # tokens[:-1] is the cyclic walk; step k leaves position k
    cyc = len(steps)
    mark_pos = [k for k, (_, marked) in enumerate(tokens[:-1]) if marked]
    for a, b in zip(mark_pos, mark_pos[1:] + [mark_pos[0] + cyc]):
        between = [steps[k % cyc] for k in range(a, b)]
        hits = [k for k, st in enumerate(between) if st in arcs]
        if len(hits) != 1:
            return False
        h = hits[0]
        if not all(parent.get(x) == y for x, y in between[:h]):
            return False
        if not all(parent.get(y) == x for x, y in between[h + 1 :]):
            return False
    return True


def _forests(size: int, allow_asc: bool) -> Iterator[tuple[tuple[bool, tuple], ...]]:
    """Ordered child lists totalling ``size`` nodes, ascending ones first."""
    if size == 0:
        yield ()
        return
    for first in range(1, size + 1):
        for asc in ((True, False) if allow_asc else (False,)):
            for sub in _shapes(first):
                for rest in _forests(size - first, asc):
                    yield ((asc, sub),) + rest


@lru_cache(maxsize=None)
def _shapes(size: int) -> tuple[tuple, ...]:
    return tuple(_forests(size - 1, True))


def all_plane_trees(max_nodes: int) -> Iterator[PlaneTree]:
    """Every plane rooted directed tree with at most ``max_nodes`` nodes
    (root included), labelled in preorder with the root as :data:`ROOT`."""
    for size in range(1, max_nodes + 1):
        for shape in _shapes(size):
            children: dict[int, tuple[int, ...]] = {}
            ascending: set[int] = set()
            counter = itertools.count(1)

            def build(x: int, kids: tuple) -> None:
                labels = []
                for asc, sub in kids:
                    y = next(counter)
                    labels.append(y)
                    if asc:
                        ascending.add(y)
                    build(y, sub)
                if labels:
                    children[x] = tuple(labels)

            build(ROOT, shape)
            yield PlaneTree(children, frozenset(ascending))


def example_plane_tree() -> PlaneTree:
    """Nine vertices under the root: 1 and 2 descending from ``*``; 1 has
    ascending children 3, 4; 4 has ascending 8 and descending 7, 9; 2 has
    ascending 6 and descending 5."""
    return PlaneTree(
        {ROOT: (1, 2), 1: (3, 4), 4: (8, 7, 9), 2: (6, 5)},
        frozenset({3, 4, 8, 6}),
    )


# -- derangements ---------------------------------------------------------------

SIGNED_DERANGEMENT_MAX_N = 10


def derangements(n: int) -> Iterator[tuple[int, ...]]:
    """Fixed-point-free permutations of ``1..n`` in one-line notation, lexicographic."""
    for p in itertools.permutations(range(1, n + 1)):
        if all(p[i] != i + 1 for i in range(n)):
            yield p


def signed_derangement_sum(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    if n > SIGNED_DERANGEMENT_MAX_N:
        raise BudgetExceeded(math.factorial(n), math.factorial(SIGNED_DERANGEMENT_MAX_N))
    return sum(sign_of_images(p, range(1, n + 1)) for p in derangements(n))


Node = tuple


def source(i: int) -> Node:
    return ("source", i)


def sink(i: int) -> Node:
    return ("sink", i)


def step(i: int, j: int) -> Node:
    return ("step", i, j)


@dataclass(frozen=True)
class DerangementNetwork:
    """Sources and sinks ``1..n`` joined by an increasing chain of steps
    ``s(i, i+1)`` and a decreasing chain ``s(i+1, i)``."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("derangement network needs n >= 2")

    @property
    def sources(self) -> tuple[Node, ...]:
        return tuple(source(i) for i in range(1, self.n + 1))

    @property
    def sinks(self) -> tuple[Node, ...]:
        return tuple(sink(i) for i in range(1, self.n + 1))

    @property
    def nodes(self) -> tuple[Node, ...]:
        steps = [step(i, i + 1) for i in range(1, self.n)] + [step(i + 1, i) for i in range(1, self.n)]
        return self.sources + self.sinks + tuple(steps)

    def arcs(self) -> tuple[tuple[Node, Node], ...]:
        n = self.n
        out = []
        for i in range(1, n):
            out.append((source(i), step(i, i + 1)))
            out.append((source(i + 1), step(i + 1, i)))
            out.append((step(i + 1, i), sink(i)))
            out.append((step(i, i + 1), sink(i + 1)))
        for i in range(1, n - 1):
            out.append((step(i, i + 1), step(i + 1, i + 2)))
            out.append((step(i + 2, i + 1), step(i + 1, i)))
        return tuple(out)

    def successors(self) -> dict[Node, tuple[Node, ...]]:
        succ: dict[Node, list[Node]] = {v: [] for v in self.nodes}
        for u, v in self.arcs():
            succ[u].append(v)
        return {u: tuple(vs) for u, vs in succ.items()}

    def is_acyclic(self) -> bool:
        graph = {v: set() for v in self.nodes}
        for u, v in self.arcs():
            graph[v].add(u)
        try:
            tuple(TopologicalSorter(graph).static_order())
        except CycleError:
            return False
        return True


Path = tuple[Node, ...]


def network_paths(net: DerangementNetwork) -> dict[Node, tuple[Path, ...]]:
    """All paths from each source to any sink, by memoised depth-first search."""
    succ = net.successors()
    sinks = set(net.sinks)

    @lru_cache(maxsize=None)
    def suffixes(v: Node) -> tuple[Path, ...]:
        if v in sinks:
            return ((v,),)
        return tuple((v,) + rest for w in succ[v] for rest in suffixes(w))

    return {s: suffixes(s) for s in net.sources}


def derangement_network_paths(n: int) -> list[tuple[tuple[Path, ...], tuple[int, ...]]]:
    """Every family of network paths (one per source, distinct sinks) with
    its underlying permutation in one-line notation."""
    if not 2 <= n <= 7:
        raise ValueError("n must lie in 2..7")
    net = DerangementNetwork(n)
    paths = network_paths(net)
    out = []
    for family in itertools.product(*(paths[s] for s in net.sources)):
        ends = tuple(p[-1][1] for p in family)
        if len(set(ends)) == n:
            out.append((family, ends))
    return out


# -- beads ------------------------------------------------------------------------


def binomial_identity_sides(n: int) -> tuple[int, int]:
    """``sum_k C(n,k)(k-1)(n-k-1)`` and ``2^(n-2) n(n-1) - 2^n (n-1)``.

    ``2^(n-2)`` is a rational for ``n < 2``, but ``n(n-1)`` vanishes there,
    so both sides are always integers.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    lhs = sum(math.comb(n, k) * (k - 1) * (n - k - 1) for k in range(n + 1))
    rhs = Fraction(2) ** (n - 2) * n * (n - 1) - 2**n * (n - 1)
    if rhs.denominator != 1:
        raise ArithmeticError(f"right side is not integral at n={n}")
    return lhs, int(rhs)


def binomial_identity_check(n: int) -> bool:
    lhs, rhs = binomial_identity_sides(n)
    return lhs == rhs


Bead = tuple[tuple[bool, ...], int, int]  # colouring (True = black), black mark, white mark


def bead_set_r(n: int) -> list[Bead]:
    """Two-colour sequences of length ``n`` with one black and one white bead distinguished."""
    out = []
    for colours in itertools.product((True, False), repeat=n):
        blacks = [i for i, c in enumerate(colours) if c]
        whites = [i for i, c in enumerate(colours) if not c]
        out.extend((colours, b, w) for b in blacks for w in whites)
    return out


def in_set_l(bead: Bead) -> bool:
    """Neither distinguished bead is the left-most bead of its colour."""
    colours, b, w = bead
    return b != colours.index(True) and w != colours.index(False)


def bead_bijection_witness(n: int) -> tuple[int, int, int]:
    """``(#R, #L, #(R minus L))`` from explicit construction, checked against
    the closed forms."""
    if not 2 <= n <= 12:
        raise ValueError("n must lie in 2..12")
    r = bead_set_r(n)
    size_l = sum(1 for bead in r if in_set_l(bead))
    size_r, size_rest = len(r), len(r) - size_l
    if size_r != 2 ** (n - 2) * n * (n - 1):
        raise AssertionError(f"#R = {size_r} disagrees with its closed form")
    expected_l = sum(math.comb(n, k) * (k - 1) * (n - k - 1) for k in range(2, n - 1))
    if size_l != expected_l:
        raise AssertionError(f"#L = {size_l} disagrees with its closed form")
    if size_rest != (2**n - 2) * (n - 1):
        raise AssertionError(f"#(R-L) = {size_rest} disagrees with its closed form")
    return size_r, size_l, size_rest
