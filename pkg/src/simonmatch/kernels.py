"""Integer kernels behind the hot loops.

Three workhorses run millions of times in the exhaustive oracles and the
bounded solvers: next-occurrence tables, the greedy arch scan, and the
shortest-distinguishing-subsequence DP.  They are written as plain functions
over numpy int64 arrays and compiled with numba when it is importable.
Setting SIMONMATCH_NO_NUMBA=1 selects the uncompiled fallback path (same
functions, interpreted); ``benchmarks/bench_kernels.py`` compares the two.

Letters are integers 1..sigma, positions are 1-based, and ``n + 1`` encodes
"no next occurrence" inside the tables.
"""

import os

import numpy as np

# DP distances at or above this value mean "the two words have identical
# subsequence sets at every length".
NO_DISTINGUISHER = 1 << 40


def _next_table(letters, sigma):
    # Row i (0..n) answers: first position > i carrying each letter, n+1 if none.
    n = letters.shape[0]
    table = np.empty((n + 1, sigma), dtype=np.int64)
    for a in range(sigma):
        table[n, a] = n + 1
    for i in range(n - 1, -1, -1):
        for a in range(sigma):
            table[i, a] = table[i + 1, a]
        table[i, letters[i] - 1] = i + 1
    return table


def _arch_scan(letters, sigma):
    # Greedy factorisation; returns (arch count, 0-based index where the rest starts).
    full = (1 << sigma) - 1
    seen = 0
    count = 0
    rest_start = 0
    for i in range(letters.shape[0]):
        seen |= 1 << (letters[i] - 1)
        if seen == full:
            count += 1
            seen = 0
            rest_start = i + 1
    return count, rest_start


def _arch_ends(letters, sigma, out):
    # Fills `out` with the 1-based end position of each arch; returns the count.
    full = (1 << sigma) - 1
    seen = 0
    count = 0
    for i in range(letters.shape[0]):
        seen |= 1 << (letters[i] - 1)
        if seen == full:
            out[count] = i + 1
            count += 1
            seen = 0
    return count


def _distinguisher(u, v, sigma):
    # Length of the shortest word that is a subsequence of exactly one of u
    # and v, or NO_DISTINGUISHER if there is none.  dp[i, j] solves the
    # problem for the suffixes starting after positions i and j; appending a
    # letter a reduces to the suffixes after its first occurrences, because
    # a word a.w' embeds into a suffix iff w' embeds after the first a.
    n = u.shape[0]
    m = v.shape[0]
    nu = _next_table(u, sigma)
    nv = _next_table(v, sigma)
    dp = np.empty((n + 1, m + 1), dtype=np.int64)
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            best = NO_DISTINGUISHER
            for a in range(sigma):
                pu = nu[i, a]
                pv = nv[j, a]
                if pu <= n and pv <= m:
                    cand = dp[pu, pv] + 1
                elif pu <= n or pv <= m:
                    cand = 1
                else:
                    continue
                if cand < best:
                    best = cand
            dp[i, j] = best
    return dp[0, 0]


NUMBA_ENABLED = False
if os.environ.get("SIMONMATCH_NO_NUMBA", "") in ("", "0"):
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        _next_table = njit(cache=True)(_next_table)
        _arch_scan = njit(cache=True)(_arch_scan)
        _arch_ends = njit(cache=True)(_arch_ends)
        # compiled _distinguisher resolves the already-rebound _next_table
        _distinguisher = njit(cache=True)(_distinguisher)
        NUMBA_ENABLED = True

next_table = _next_table
arch_scan = _arch_scan
arch_ends = _arch_ends
distinguisher = _distinguisher
