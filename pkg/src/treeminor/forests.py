"""S-rooted and (S,*)-rooted spanning forests of a tree.

A spanning forest of a tree is identified with the set of tree edges it
keeps. For a vertex subset ``S`` of size ``m``:

* it is *S-rooted* when it has ``m`` components, each holding exactly one
  vertex of ``S``;
* it is *(S,*)-rooted* when it has ``m + 1`` components, exactly one of which
  (the *floating* component) avoids ``S``, the others holding one vertex of
  ``S`` each.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import lru_cache

from .tree import Edge, Tree, normalize_subset


class ForestClass(enum.Enum):
    S_ROOTED = "s-rooted"
    S_STAR_ROOTED = "s-star-rooted"
    OTHER = "other"


class WeightShape(enum.Enum):
    """Polynomial in the floating boundary degree summed by :func:`composite_weight_sum`."""

    THEOREM_A = "theorem-a"  # (b - 1)(b - 4)
    RICHMAN = "richman"  # (b - 2)^2

    def __call__(self, b: int) -> int:
        if self is WeightShape.THEOREM_A:
            return (b - 1) * (b - 4)
        return (b - 2) ** 2


@dataclass(frozen=True)
class Forest:
    """Spanning forest of ``tree`` given by its kept edges.

    ``components`` lists the vertex sets of the connected components ordered
    by smallest vertex, so a component's index doubles as its id.
    ``floating`` is the index of the floating component when the forest was
    produced as an (S,*)-rooted forest, else ``None``.
    """

    tree: Tree
    kept_edges: tuple[Edge, ...]
    floating: int | None = None
    components: tuple[frozenset[int], ...] = field(init=False, compare=False, repr=False)
    component_of: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        kept = tuple(sorted((min(e), max(e)) for e in self.kept_edges))
        for e in kept:
            if e not in self.tree.edge_index:
                raise ValueError(f"{e} is not an edge of the tree")
        object.__setattr__(self, "kept_edges", kept)
        n = self.tree.n
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        for u, v in kept:
            adj[u].append(v)
            adj[v].append(u)
        label = [-1] * (n + 1)
        comps = []
        for start in range(1, n + 1):
            if label[start] >= 0:
                continue
            label[start] = len(comps)
            members = [start]
            stack = [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if label[y] < 0:
                        label[y] = len(comps)
                        members.append(y)
                        stack.append(y)
            comps.append(frozenset(members))
        object.__setattr__(self, "components", tuple(comps))
        object.__setattr__(self, "component_of", tuple(label))

    @property
    def num_components(self) -> int:
        return len(self.components)


def classify_forest(f: Forest, s: Iterable[int]) -> ForestClass:
    members = normalize_subset(s, f.tree.n)
    hits = [0] * f.num_components
    for x in members:
        hits[f.component_of[x]] += 1
    m = len(members)
    if any(h > 1 for h in hits):
        return ForestClass.OTHER
    if f.num_components == m:
        return ForestClass.S_ROOTED
    if f.num_components == m + 1 and hits.count(0) == 1:
        return ForestClass.S_STAR_ROOTED
    return ForestClass.OTHER


def floating_component(f: Forest, s: Iterable[int]) -> int | None:
    """Index of the floating component if ``f`` is (S,*)-rooted."""
    if classify_forest(f, s) is not ForestClass.S_STAR_ROOTED:
        return None
    members = set(normalize_subset(s, f.tree.n))
    return next(i for i, c in enumerate(f.components) if not c & members)


def boundary_degree(f: Forest, comp: int) -> int:
    """Number of vertices outside component ``comp`` adjacent to it in the tree."""
    inside = f.components[comp]
    boundary = set()
    for x in inside:
        boundary.update(y for y in f.tree.adjacency[x] if y not in inside)
    return len(boundary)


def _mask_boundary_degree(t: Tree, mask: int) -> int:
    nbrs = 0
    rest = mask
    masks = t.neighbor_masks
    while rest:
        low = rest & -rest
        nbrs |= masks[low.bit_length() - 1]
        rest ^= low
    return (nbrs & ~mask).bit_count()


@lru_cache(maxsize=4096)
def _search(t: Tree, members: tuple[int, ...], star: bool) -> tuple[tuple[tuple[int, ...], int], ...]:
    """All S-rooted (or (S,*)-rooted) forests as ``(cut_vertices, floating_mask)``.

    Walks the vertices children-first with the tree rooted at 1, deciding for
    each non-root vertex whether its parent edge is kept or cut. The running
    S-count of every open component prunes any branch where a component
    would hold two S vertices, or where a component closes without an S
    vertex and no floating slot is left. A cut vertex ``v`` stands for the
    cut edge ``{v, parent(v)}``; ``floating_mask`` is 0 for S-rooted forests.
    """
    par = t.parent
    root = 1
    order = t._bfs_order[:0:-1]
    in_s = set(members)
    count = [1 if v in in_s else 0 for v in range(t.n + 1)]
    comp = [1 << v for v in range(t.n + 1)]
    cut: list[int] = []
    out: list[tuple[tuple[int, ...], int]] = []
    last = len(order)

    def visit(i: int, floating: int) -> None:
        if i == last:
            c = count[root]
            if c == 1:
                if bool(floating) == star:
                    out.append((tuple(cut), floating))
            elif star and not floating:
                out.append((tuple(cut), comp[root]))
            return
        v = order[i]
        p = par[v]
        c = count[v]
        if count[p] + c <= 1:
            saved_c, saved_m = count[p], comp[p]
            count[p] = saved_c + c
            comp[p] = saved_m | comp[v]
            visit(i + 1, floating)
            count[p], comp[p] = saved_c, saved_m
        if c == 1:
            cut.append(v)
            visit(i + 1, floating)
            cut.pop()
        elif star and not floating:
            cut.append(v)
            visit(i + 1, comp[v])
            cut.pop()

    visit(0, 0)
    return tuple(out)


def _kept_edges(t: Tree, cut: tuple[int, ...]) -> tuple[Edge, ...]:
    par = t.parent
    removed = {(min(v, par[v]), max(v, par[v])) for v in cut}
    return tuple(e for e in t.edges if e not in removed)


def _materialize(t: Tree, members: tuple[int, ...], star: bool) -> list[Forest]:
    found = []
    for cut, floating_mask in _search(t, members, star):
        kept = _kept_edges(t, cut)
        idx = None
        if star:
            idx = (floating_mask & -floating_mask).bit_length() - 1
        found.append((tuple(t.edge_index[e] for e in kept), kept, idx))
    found.sort()
    forests = []
    for _, kept, low in found:
        f = Forest(t, kept)
        if low is not None:
            f = Forest(t, kept, floating=f.component_of[low])
        forests.append(f)
    return forests


def enumerate_s_rooted(t: Tree, s: Iterable[int]) -> list[Forest]:
    """All S-rooted spanning forests, ordered lexicographically by kept edges."""
    return _materialize(t, normalize_subset(s, t.n), star=False)


def enumerate_s_star_rooted(t: Tree, s: Iterable[int]) -> list[Forest]:
    """All (S,*)-rooted spanning forests with ``floating`` set, lexicographic order."""
    return _materialize(t, normalize_subset(s, t.n), star=True)


def floating_boundary_degrees(t: Tree, s: Iterable[int]) -> tuple[int, ...]:
    """Boundary degree of the floating component of every (S,*)-rooted forest."""
    members = normalize_subset(s, t.n)
    return _floating_bdegs(t, members)


@lru_cache(maxsize=4096)
def _floating_bdegs(t: Tree, members: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(_mask_boundary_degree(t, fm) for _, fm in _search(t, members, True))


def count_s_rooted_dp(t: Tree, s: Iterable[int]) -> int:
    """Number of S-rooted forests by a linear-time dynamic program.

    Rooting the tree at vertex 1, every vertex keeps two counts over the
    edge choices inside its subtree: its own component holds 0 or exactly 1
    vertex of S, all closed-off components holding exactly one.
    """
    members = set(normalize_subset(s, t.n))
    zero = [0] * (t.n + 1)
    one = [0] * (t.n + 1)
    for v in range(1, t.n + 1):
        if v in members:
            one[v] = 1
        else:
            zero[v] = 1
    par = t.parent
    for c in t._bfs_order[:0:-1]:
        p = par[c]
        z, o = zero[p], one[p]
        # cutting {c, p} closes c's component, which then needs its S vertex
        zero[p] = z * one[c] + z * zero[c]
        one[p] = o * one[c] + o * zero[c] + z * one[c]
    return one[1]


def composite_weight_sum(t: Tree, s: Iterable[int], shape: WeightShape) -> int:
    """Sum of ``shape(bdeg F_*)`` over all (S,*)-rooted forests ``F``."""
    return sum(shape(b) for b in floating_boundary_degrees(t, s))


EdgePair = tuple[int, int]  # (kept-edge bitmask over tree.edges, edge index)


@lru_cache(maxsize=256)
def _parent_edge_bits(t: Tree) -> tuple[int, ...]:
    par, index = t.parent, t.edge_index
    return (0,) + tuple(
        1 << index[(min(v, par[v]), max(v, par[v]))] if par[v] else 0 for v in range(1, t.n + 1)
    )


def _kept_mask(t: Tree, cut: tuple[int, ...]) -> int:
    bits = _parent_edge_bits(t)
    removed = 0
    for v in cut:
        removed |= bits[v]
    return ((1 << len(t.edges)) - 1) & ~removed


def s_rooted_edge_pairs(t: Tree, s: Iterable[int]) -> set[EdgePair]:
    """``{(F, e) : F S-rooted, e in F}``, forests as kept-edge bitmasks."""
    members = normalize_subset(s, t.n)
    pairs = set()
    for cut, _ in _search(t, members, False):
        kept = _kept_mask(t, cut)
        rest = kept
        while rest:
            low = rest & -rest
            pairs.add((kept, low.bit_length() - 1))
            rest ^= low
    return pairs


def star_boundary_pairs(t: Tree, s: Iterable[int]) -> set[EdgePair]:
    """``{(F, e) : F (S,*)-rooted, e a tree edge with exactly one end in F_*}``."""
    members = normalize_subset(s, t.n)
    pairs = set()
    for cut, floating in _search(t, members, True):
        kept = _kept_mask(t, cut)
        for e, (u, v) in enumerate(t.edges):
            if (floating >> u) & 1 != (floating >> v) & 1:
                pairs.add((kept, e))
    return pairs


def remove_edge(pair: EdgePair) -> EdgePair:
    kept, e = pair
    return kept & ~(1 << e), e


def add_edge(pair: EdgePair) -> EdgePair:
    kept, e = pair
    return kept | (1 << e), e


def mask_to_edges(t: Tree, kept: int) -> tuple[Edge, ...]:
    return tuple(e for i, e in enumerate(t.edges) if (kept >> i) & 1)
