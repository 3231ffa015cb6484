"""Four independent ways to evaluate a principal minor ``det D[S]``.

* ``minor_determinant``: Bareiss elimination on the submatrix.
* ``minor_theorem_a``: ``(-1)^(m-1) 2^(m-2) [(m-1) kappa - sum (b-1)(b-4)]``.
* ``minor_richman``: ``(-1)^(m-1) 2^(m-2) [(n-1) kappa - sum (b-2)^2]``.
* the catalyst route: signed count of all S-catalysts.

Here ``kappa`` is the number of S-rooted spanning forests and each sum runs
over the (S,*)-rooted forests, ``b`` being the boundary degree of the
floating component.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .catalysts import catalyst_signed_total, default_budget
from .errors import BudgetExceeded, SubsetTooSmall
from .forests import WeightShape, composite_weight_sum, count_s_rooted_dp
from .linalg import det_exact
from .tree import Tree, induces_subtree, normalize_subset


def _members(t: Tree, s: Iterable[int], least: int) -> tuple[int, ...]:
    members = normalize_subset(s, t.n)
    if len(members) < least:
        raise SubsetTooSmall(f"need at least {least} vertices, got {len(members)}")
    return members


def _prefactor(m: int) -> int:
    return (-1) ** (m - 1) * 2 ** (m - 2) if m >= 2 else 0


def minor_determinant(t: Tree, s: Iterable[int]) -> int:
    members = _members(t, s, 1)
    dist = t.distances
    return det_exact([[dist[a][b] for b in members] for a in members])


def _theorem_a(m: int, kappa: int, sum_a: int) -> int:
    return _prefactor(m) * ((m - 1) * kappa - sum_a)


def _richman(n: int, m: int, kappa: int, sum_richman: int) -> int:
    return _prefactor(m) * ((n - 1) * kappa - sum_richman)


def minor_theorem_a(t: Tree, s: Iterable[int]) -> int:
    members = _members(t, s, 2)
    kappa = count_s_rooted_dp(t, members)
    return _theorem_a(len(members), kappa, composite_weight_sum(t, members, WeightShape.THEOREM_A))


def minor_richman(t: Tree, s: Iterable[int]) -> int:
    members = _members(t, s, 2)
    kappa = count_s_rooted_dp(t, members)
    return _richman(t.n, len(members), kappa, composite_weight_sum(t, members, WeightShape.RICHMAN))


def minor_ck_corollary(t: Tree, s: Iterable[int]) -> int | None:
    """Closed form ``(-1)^(m-1) (m-1) 2^(m-2)`` when ``S`` (``m >= 3``)
    induces a subtree; ``None`` otherwise."""
    members = _members(t, s, 3)
    if not induces_subtree(t, members):
        return None
    m = len(members)
    return (m - 1) * _prefactor(m)


def graham_pollak(n: int) -> int:
    """``det D`` of any tree on ``n >= 2`` vertices."""
    return (-1) ** (n - 1) * (n - 1) * 2 ** (n - 2)


@dataclass(frozen=True)
class MinorReport:
    n: int
    subset: tuple[int, ...]
    value_det: int
    value_theorem_a: int
    value_richman: int
    value_catalyst: int | None
    kappa: int
    sum_a: int
    sum_richman: int

    @property
    def agree(self) -> bool:
        values = {self.value_det, self.value_theorem_a, self.value_richman}
        if self.value_catalyst is not None:
            values.add(self.value_catalyst)
        return len(values) == 1

    def to_json(self) -> dict:
        """JSON-ready dict; big integers become decimal strings."""

        def dec(x: int | None) -> str | None:
            return None if x is None else str(x)

        return {
            "n": self.n,
            "subset": list(self.subset),
            "value_det": dec(self.value_det),
            "value_theorem_a": dec(self.value_theorem_a),
            "value_richman": dec(self.value_richman),
            "value_catalyst": dec(self.value_catalyst),
            "kappa": dec(self.kappa),
            "sum_a": dec(self.sum_a),
            "sum_richman": dec(self.sum_richman),
            "agree": self.agree,
        }


def cross_verify(t: Tree, s: Iterable[int], catalyst_budget: int | None = None) -> MinorReport:
    """Evaluate every route; the catalyst route is skipped (``None``) when
    its catalyst count exceeds ``catalyst_budget`` (default: the configured
    budget)."""
    members = _members(t, s, 2)
    budget = default_budget() if catalyst_budget is None else catalyst_budget
    try:
        _, catalyst = catalyst_signed_total(t, members, budget)
    except BudgetExceeded:
        catalyst = None
    m = len(members)
    kappa = count_s_rooted_dp(t, members)
    sum_a = composite_weight_sum(t, members, WeightShape.THEOREM_A)
    sum_richman = composite_weight_sum(t, members, WeightShape.RICHMAN)
    return MinorReport(
        n=t.n,
        subset=members,
        value_det=minor_determinant(t, members),
        value_theorem_a=_theorem_a(m, kappa, sum_a),
        value_richman=_richman(t.n, m, kappa, sum_richman),
        value_catalyst=catalyst,
        kappa=kappa,
        sum_a=sum_a,
        sum_richman=sum_richman,
    )
