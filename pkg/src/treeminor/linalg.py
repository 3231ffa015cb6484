"""Exact integer determinants and permutation signs."""

from __future__ import annotations

from collections.abc import Mapping, Sequence


def det_exact(mat: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination.

    Every division in the elimination is exact, so the computation stays in
    Python integers throughout. Pivots are the first nonzero entry at or
    below the diagonal; a column with no such entry means the determinant
    is 0. The empty matrix has determinant 1.
    """
    a = [list(row) for row in mat]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, size):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
        prev = pivot
    return sign * a[-1][-1] if size else 1


def permutation_sign(perm: Mapping[int, int]) -> int:
    """Sign of a permutation given as a map ``x -> perm[x]``.

    Computed as ``(-1) ** (size - number_of_cycles)``.
    """
    seen = set()
    cycles = 0
    for start in perm:
        if start in seen:
            continue
        cycles += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = perm[x]
        if x != start:
            raise ValueError("not a permutation")
    if set(perm.values()) != set(perm):
        raise ValueError("not a permutation")
    return -1 if (len(perm) - cycles) % 2 else 1


def sign_of_images(images: Sequence[int], domain: Sequence[int] | None = None) -> int:
    """Sign of the permutation sending ``domain[i]`` to ``images[i]``.

    ``domain`` defaults to ``0..len(images)-1``.
    """
    if domain is None:
        domain = range(len(images))
    return permutation_sign(dict(zip(domain, images)))
