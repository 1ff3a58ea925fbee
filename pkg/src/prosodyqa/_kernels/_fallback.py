"""Pure-Python reference implementations of the speed kernels.

These define the exact semantics the compiled kernels must reproduce;
the test suite cross-checks both backends against each other.
"""

from __future__ import annotations

BACKEND = "python"


def _longest_match(a: str, b: str, alo: int, ahi: int, blo: int, bhi: int):
    """Longest common substring of a[alo:ahi] and b[blo:bhi].

    Returns (i, j, size).  Ties are broken by the smallest start in
    ``a``, then the smallest start in ``b`` (leftmost-longest rule).
    """
    besti, bestj, bestsize = alo, blo, 0
    # lengths of runs ending at the previous row, keyed by end column
    j2len: dict[int, int] = {}
    for i in range(alo, ahi):
        newj2len: dict[int, int] = {}
        ch = a[i]
        for j in range(blo, bhi):
            if b[j] == ch:
                k = j2len.get(j - 1, 0) + 1
                newj2len[j] = k
                if k > bestsize:
                    besti, bestj, bestsize = i - k + 1, j - k + 1, k
        j2len = newj2len
    return besti, bestj, bestsize


def gestalt_match_total(a: str, b: str) -> int:
    """Total characters matched by recursive longest-common-substring
    decomposition: take the leftmost-longest match, then recurse on the
    left and right flanks.  Returns the sum of match sizes.
    """
    total = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        alo, ahi, blo, bhi = stack.pop()
        if alo >= ahi or blo >= bhi:
            continue
        i, j, size = _longest_match(a, b, alo, ahi, blo, bhi)
        if size == 0:
            continue
        total += size
        stack.append((alo, i, blo, j))
        stack.append((i + size, ahi, j + size, bhi))
    return total


def signed_rank_tail_count(ranks2: list[int], m2: int) -> int:
    """Number of sign assignments whose positive-rank sum is <= m2/2.

    ``ranks2`` holds the doubled ranks (average ranks doubled so ties
    stay integral); ``m2`` is the doubled threshold.  Counting subsets
    of ``ranks2`` by sum is exactly the full sign-enumeration count:
    each subset is the set of positive differences of one assignment.
    """
    if m2 < 0:
        return 0
    total2 = sum(ranks2)
    cap = min(m2, total2)
    ways = [0] * (cap + 1)
    ways[0] = 1
    for r in ranks2:
        for s in range(cap, r - 1, -1):
            ways[s] += ways[s - r]
    n_small = sum(ways)
    if m2 >= total2:
        # subsets with sum beyond the cap were never tracked
        return 1 << len(ranks2)
    return n_small
