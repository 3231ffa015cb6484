"""Labeled trees on vertices 1..n, their distance matrices and Prüfer codes.

All public functions speak 1-based vertex labels. Randomness comes from
numpy's PCG64 generator seeded through ``numpy.random.SeedSequence``; see
:func:`derive_seed` for how per-trial seeds are split off a master seed.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InvalidSubset, NotATree, ValueOutOfRange, VertexOutOfRange

Edge = tuple[int, int]
Arc = tuple[int, int]
DistMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Tree:
    """A validated labeled tree ``([n], edges)``.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v`` and the edge
    list itself is sorted, so two trees compare equal iff they have the same
    edge set. Derived data (adjacency, distances, a rooting at vertex 1) is
    computed lazily and cached; instances are immutable.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise NotATree(f"vertex count must be a positive integer, got {self.n!r}")
        norm = []
        for pair in self.edges:
            u, v = (int(x) for x in pair)
            for x in (u, v):
                if not 1 <= x <= self.n:
                    raise VertexOutOfRange(f"vertex {x} not in 1..{self.n}")
            if u == v:
                raise NotATree(f"loop at vertex {u}")
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        if len(norm) != self.n - 1:
            raise NotATree(f"expected {self.n - 1} edges, got {len(norm)}")
        if len(set(norm)) != len(norm):
            raise NotATree("repeated edge")
        object.__setattr__(self, "edges", tuple(norm))
        if len(self._bfs_order) != self.n:
            raise NotATree("edge list is disconnected")

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor lists; index 0 is an unused empty tuple."""
        adj: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def _bfs_order(self) -> tuple[int, ...]:
        seen = [False] * (self.n + 1)
        seen[1] = True
        order = [1]
        queue = deque([1])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if not seen[y]:
                    seen[y] = True
                    order.append(y)
                    queue.append(y)
        return tuple(order)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        """Parent of each vertex when rooted at 1 (0 for the root and index 0)."""
        par = [0] * (self.n + 1)
        for x in self._bfs_order:
            for y in self.adjacency[x]:
                if y != par[x]:
                    par[y] = x
        return tuple(par)

    @cached_property
    def depth(self) -> tuple[int, ...]:
        dep = [0] * (self.n + 1)
        for x in self._bfs_order[1:]:
            dep[x] = dep[self.parent[x]] + 1
        return tuple(dep)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Bit ``y`` of entry ``x`` is set iff ``{x, y}`` is an edge."""
        return tuple(sum(1 << y for y in nbrs) for nbrs in self.adjacency)

    @cached_property
    def distances(self) -> DistMatrix:
        """Full distance table indexed ``[u][v]`` with 1-based labels (row 0 unused)."""
        rows: list[tuple[int, ...]] = [()]
        for s in range(1, self.n + 1):
            dist = [-1] * (self.n + 1)
            dist[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adjacency[x]:
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            dist[0] = 0
            rows.append(tuple(dist))
        return tuple(rows)

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def distance(self, u: int, v: int) -> int:
        return self.distances[u][v]

    def path(self, u: int, v: int) -> tuple[int, ...]:
        """Vertices of the unique path from ``u`` to ``v``, both ends included."""
        par, dep = self.parent, self.depth
        head, tail = [u], [v]
        a, b = u, v
        while dep[a] > dep[b]:
            a = par[a]
            head.append(a)
        while dep[b] > dep[a]:
            b = par[b]
            tail.append(b)
        while a != b:
            a, b = par[a], par[b]
            head.append(a)
            tail.append(b)
        tail.pop()
        return tuple(head + tail[::-1])

    @cached_property
    def _path_arc_memo(self) -> dict[tuple[int, int], tuple[Arc, ...]]:
        return {}

    def path_arcs(self, u: int, v: int) -> tuple[Arc, ...]:
        """Arcs of the path from ``u`` to ``v``, oriented from ``u`` towards ``v``."""
        memo = self._path_arc_memo
        arcs = memo.get((u, v))
        if arcs is None:
            p = self.path(u, v)
            arcs = memo[(u, v)] = tuple(zip(p, p[1:]))
        return arcs

    def arcs(self) -> tuple[Arc, ...]:
        """All oriented arcs supported on the tree, sorted."""
        return tuple(sorted([(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges]))


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Tree:
    return Tree(n, tuple(tuple(e) for e in edges))


def path_tree(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(1, n)))


def star_tree(n: int, center: int | None = None) -> Tree:
    """Star on ``n`` vertices; the center defaults to vertex ``n``."""
    c = n if center is None else center
    return Tree(n, tuple((c, x) for x in range(1, n + 1) if x != c))


def from_prufer(seq: Sequence[int]) -> Tree:
    """Decode a Prüfer sequence of length ``n - 2`` into a tree on ``[n]``."""
    n = len(seq) + 2
    degree = [1] * (n + 1)
    for x in seq:
        if not 1 <= x <= n:
            raise ValueOutOfRange(f"Prüfer entry {x} not in 1..{n}")
        degree[x] += 1
    leaves = [x for x in range(1, n + 1) if degree[x] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Tree(n, tuple(edges))


def to_prufer(t: Tree) -> list[int]:
    if t.n < 2:
        raise ValueError("Prüfer code needs at least 2 vertices")
    degree = [len(a) for a in t.adjacency]
    removed = [False] * (t.n + 1)
    leaves = [x for x in range(1, t.n + 1) if degree[x] == 1]
    heapq.heapify(leaves)
    seq = []
    for _ in range(t.n - 2):
        leaf = heapq.heappop(leaves)
        removed[leaf] = True
        (nbr,) = (y for y in t.adjacency[leaf] if not removed[y])
        seq.append(nbr)
        degree[nbr] -= 1
        if degree[nbr] == 1:
            heapq.heappush(leaves, nbr)
    return seq


def derive_seed(master: int, *keys: int) -> int:
    """Split a 64-bit seed off ``master`` for the sub-stream named by ``keys``.

    The result is the first 64-bit word of
    ``SeedSequence(master, spawn_key=keys)``, i.e. of the ``keys``-th spawned
    child. It depends only on ``(master, keys)``, never on execution order.
    """
    ss = np.random.SeedSequence(master, spawn_key=tuple(keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_tree(n: int, seed: int) -> Tree:
    """Uniform labeled tree: a PCG64 draw of a Prüfer sequence, decoded."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return Tree(1, ())
    rng = rng_from_seed(seed)
    seq = [int(x) for x in rng.integers(1, n + 1, size=n - 2)]
    return from_prufer(seq)


def random_tree_with_subtree(m: int, extra: int, seed: int) -> tuple[Tree, tuple[int, ...]]:
    """A random tree containing an ``m``-vertex set that induces a subtree.

    Builds a uniform tree on the ``m`` base vertices, grows ``extra`` pendant
    vertices one at a time (each attached to a uniformly chosen existing
    vertex), then relabels everything by a random permutation. Returns the
    tree and the sorted image of the base vertex set.
    """
    rng = rng_from_seed(seed)
    base = random_tree(m, int(rng.integers(0, 2**63)))
    edges = list(base.edges)
    for new in range(m + 1, m + extra + 1):
        edges.append((int(rng.integers(1, new)), new))
    total = m + extra
    relabel = [0] + [int(x) + 1 for x in rng.permutation(total)]
    tree = Tree(total, tuple((relabel[u], relabel[v]) for u, v in edges))
    return tree, tuple(sorted(relabel[x] for x in range(1, m + 1)))


def normalize_subset(s: Iterable[int], n: int) -> tuple[int, ...]:
    members = tuple(sorted(map(int, s)))
    if members and (members[0] < 1 or members[-1] > n):
        bad = members[0] if members[0] < 1 else members[-1]
        raise VertexOutOfRange(f"vertex {bad} not in 1..{n}")
    if any(a == b for a, b in zip(members, members[1:])):
        raise InvalidSubset(f"repeated vertex in {list(members)}")
    return members


def distance_matrix(t: Tree) -> DistMatrix:
    return tuple(row[1:] for row in t.distances[1:])


def principal_submatrix(d: DistMatrix, s: Iterable[int]) -> DistMatrix:
    idx = [x - 1 for x in normalize_subset(s, len(d))]
    return tuple(tuple(d[i][j] for j in idx) for i in idx)


def induces_subtree(t: Tree, s: Iterable[int]) -> bool:
    members = normalize_subset(s, t.n)
    inside = set(members)
    inner = [(u, v) for u, v in t.edges if u in inside and v in inside]
    if len(inner) != len(members) - 1:
        return False
    # m - 1 edges of an acyclic graph on m vertices: connected iff this holds,
    # but walk it anyway so the check does not lean on acyclicity.
    adj: dict[int, list[int]] = {x: [] for x in members}
    for u, v in inner:
        adj[u].append(v)
        adj[v].append(u)
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def parse_tree_text(text: str) -> Tree:
    """Parse ``n`` on the first line, then one ``u v`` edge per line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise NotATree(f"line {lineno}: expected integers, got {line!r}") from None
    if not rows or len(rows[0][1]) != 1:
        raise NotATree("first line must hold the vertex count")
    n = rows[0][1][0]
    edges = []
    for lineno, vals in rows[1:]:
        if len(vals) != 2:
            raise NotATree(f"line {lineno}: expected 'u v'")
        edges.append((vals[0], vals[1]))
    return Tree(n, tuple(edges))


def read_tree(path: str | Path) -> Tree:
    return parse_tree_text(Path(path).read_text())


def format_tree_text(t: Tree) -> str:
    return "\n".join([str(t.n)] + [f"{u} {v}" for u, v in t.edges]) + "\n"
