"""Compiled inner loops for the brute-force catalyst route.

Only fixed-width integer work lives here; callers guarantee the results fit
in int64 (catalyst counts are capped by the budget, permanents are checked
against an overflow bound before dispatch).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _next_permutation(p):
    k = p.shape[0] - 2
    while k >= 0 and p[k] >= p[k + 1]:
        k -= 1
    if k < 0:
        return False
    j = p.shape[0] - 1
    while p[j] <= p[k]:
        j -= 1
    p[k], p[j] = p[j], p[k]
    lo = k + 1
    hi = p.shape[0] - 1
    while lo < hi:
        p[lo], p[hi] = p[hi], p[lo]
        lo += 1
        hi -= 1
    return True


@njit(cache=True)
def _parity_sign(p, seen):
    m = p.shape[0]
    for i in range(m):
        seen[i] = False
    cycles = 0
    for i in range(m):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return 1 if (m - cycles) % 2 == 0 else -1


@njit(cache=True)
def permanent(a):
    """Ryser's formula with Gray-code subset order."""
    m = a.shape[0]
    if m == 0:
        return np.int64(1)
    rows = np.zeros(m, dtype=np.int64)
    total = np.int64(0)
    gray_prev = 0
    for k in range(1, 1 << m):
        gray = k ^ (k >> 1)
        diff = gray ^ gray_prev
        col = 0
        while (diff >> col) & 1 == 0:
            col += 1
        if gray & diff:
            for i in range(m):
                rows[i] += a[i, col]
        else:
            for i in range(m):
                rows[i] -= a[i, col]
        gray_prev = gray
        prod = np.int64(1)
        for i in range(m):
            prod *= rows[i]
        bits = 0
        g = gray
        while g:
            bits += g & 1
            g >>= 1
        if (m - bits) % 2 == 0:
            total += prod
        else:
            total -= prod
    return total


@njit(cache=True)
def catalyst_totals(dist, leg_tail, leg_head, members):
    """Count S-catalysts and sum their signs.

    ``members`` holds the vertices of S. For each permutation of S (in
    lexicographic one-line order) with no zero-length leg, every arc of
    every leg is first checked against the distance table: its tail must
    sit ``k`` steps from the leg's start and its head one step further, so
    the arc lies on the path and points along it. An odometer then visits
    every choice of one arc per leg, and a choice counts as a catalyst only
    if all of its arcs passed the check.
    """
    m = members.shape[0]
    width = leg_tail.shape[2]
    perm = np.arange(m)
    seen = np.zeros(m, dtype=np.bool_)
    idx = np.zeros(m, dtype=np.int64)
    lens = np.zeros(m, dtype=np.int64)
    ok = np.zeros((m, width), dtype=np.int64)
    # bad[i]: failing arcs chosen at positions < i
    bad = np.zeros(m + 1, dtype=np.int64)
    count = np.int64(0)
    signed = np.int64(0)
    last = m - 1
    while True:
        usable = True
        for i in range(m):
            lens[i] = dist[members[i], members[perm[i]]]
            if lens[i] == 0:
                usable = False
                break
        if usable:
            sgn = _parity_sign(perm, seen)
            for i in range(m):
                s = members[i]
                t = members[perm[i]]
                for k in range(lens[i]):
                    ok[i, k] = 1 if _arc_ok(dist, leg_tail, leg_head, s, t, k, lens[i]) else 0
                idx[i] = 0
            for i in range(last):
                bad[i + 1] = bad[i] + 1 - ok[i, 0]
            while True:
                if bad[last] == 0:
                    good = np.int64(0)
                    for k in range(lens[last]):
                        good += ok[last, k]
                    count += good
                    signed += sgn * good
                i = last - 1
                while i >= 0:
                    idx[i] += 1
                    if idx[i] < lens[i]:
                        break
                    idx[i] = 0
                    i -= 1
                if i < 0:
                    break
                for j in range(i, last):
                    bad[j + 1] = bad[j] + 1 - ok[j, idx[j]]
        if not _next_permutation(perm):
            break
    return count, signed


@njit(cache=True)
def _arc_ok(dist, leg_tail, leg_head, s, t, k, length):
    tail = leg_tail[s, t, k]
    head = leg_head[s, t, k]
    return (
        dist[tail, head] == 1
        and dist[s, tail] == k
        and dist[head, t] == length - k - 1
    )


@njit(cache=True)
def catalyst_flow_keys(dist, leg_tail, leg_head, code, members, width, keys, signs):
    """Write one packed arrowflow key and sign per catalyst; return how many.

    Visits catalysts in the same order as :func:`catalyst_totals`. The key
    packs the sorted arc codes of the catalyst, ``width`` bits each.
    """
    m = members.shape[0]
    perm = np.arange(m)
    seen = np.zeros(m, dtype=np.bool_)
    idx = np.zeros(m, dtype=np.int64)
    lens = np.zeros(m, dtype=np.int64)
    buf = np.zeros(m, dtype=np.int64)
    filled = 0
    while True:
        usable = True
        for i in range(m):
            lens[i] = dist[members[i], members[perm[i]]]
            if lens[i] == 0:
                usable = False
                break
        if usable:
            sgn = _parity_sign(perm, seen)
            for i in range(m):
                idx[i] = 0
            while True:
                valid = True
                for i in range(m):
                    s = members[i]
                    t = members[perm[i]]
                    if not _arc_ok(dist, leg_tail, leg_head, s, t, idx[i], lens[i]):
                        valid = False
                    buf[i] = code[leg_tail[s, t, idx[i]], leg_head[s, t, idx[i]]]
                if valid:
                    # insertion sort, m is small
                    for i in range(1, m):
                        x = buf[i]
                        j = i - 1
                        while j >= 0 and buf[j] > x:
                            buf[j + 1] = buf[j]
                            j -= 1
                        buf[j + 1] = x
                    key = np.int64(0)
                    for i in range(m):
                        key |= buf[i] << (width * i)
                    if filled < keys.shape[0]:
                        keys[filled] = key
                        signs[filled] = sgn
                    filled += 1
                i = m - 1
                while i >= 0:
                    idx[i] += 1
                    if idx[i] < lens[i]:
                        break
                    idx[i] = 0
                    i -= 1
                if i < 0:
                    break
        if not _next_permutation(perm):
            break
    return filled


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def classify_keys(keys, width, m, arc_edge, edge_u, edge_v, n, members):
    """Class code and missing-edge mask for each packed arrowflow key.

    Codes: 0 zero-sum (parallel arcs), 1 zero-sum (missing path between two
    members), 2 unital, 3 composite, -1 none of these. Bit ``e`` of the mask
    is set when tree edge ``e`` is absent from the arrowflow.
    """
    count = keys.shape[0]
    classes = np.empty(count, dtype=np.int64)
    missing = np.empty(count, dtype=np.int64)
    n_edges = edge_u.shape[0]
    full = (np.int64(1) << n_edges) - 1
    mask = (np.int64(1) << width) - 1
    parent = np.empty(n + 1, dtype=np.int64)
    roots = np.empty(m, dtype=np.int64)
    for r in range(count):
        key = keys[r]
        used = np.int64(0)
        parallel = False
        prev = -1
        for i in range(m):
            code = (key >> (width * i)) & mask
            if code == prev:
                parallel = True
            prev = code
            used |= np.int64(1) << arc_edge[code]
        gone = full & ~used
        missing[r] = gone
        if parallel:
            classes[r] = 0
            continue
        for v in range(n + 1):
            parent[v] = v
        kept = 0
        for e in range(n_edges):
            if (gone >> e) & 1:
                kept += 1
                a = _find(parent, edge_u[e])
                b = _find(parent, edge_v[e])
                if a != b:
                    parent[a] = b
        clash = False
        for i in range(m):
            roots[i] = _find(parent, members[i])
            for j in range(i):
                if roots[j] == roots[i]:
                    clash = True
        comps = n - kept
        if clash:
            classes[r] = 1
        elif comps == m:
            classes[r] = 2
        elif comps == m + 1:
            classes[r] = 3
        else:
            classes[r] = -1
    return classes, missing
