"""Regenerate the literal MUB tables for d = 2, 4, 8.

Finds d binary symmetric n x n matrices (d = 2^n, starting from zero) whose
pairwise differences are invertible over GF(2). Basis A, vector b has
components i^(x.A.x + 2 b.x mod 4) / sqrt(d) with x.A.x evaluated over the
integers. Prints the exponent strings in the layout used by mubkit.mub and
checks they match the embedded copy.
"""

import itertools

import numpy as np

from mubkit.mub import _CHAR2_TABLES


def symmetric_matrices(n):
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for bits in itertools.product([0, 1], repeat=len(cells)):
        a = np.zeros((n, n), dtype=int)
        for (i, j), bit in zip(cells, bits):
            a[i, j] = a[j, i] = bit
        yield a


def gf2_rank(m):
    m = m.copy() % 2
    rank = 0
    for col in range(m.shape[1]):
        pivots = [i for i in range(rank, m.shape[0]) if m[i, col]]
        if not pivots:
            continue
        m[[rank, pivots[0]]] = m[[pivots[0], rank]]
        for i in range(m.shape[0]):
            if i != rank and m[i, col]:
                m[i] ^= m[rank]
        rank += 1
    return rank


def kerdock_set(n):
    mats = list(symmetric_matrices(n))

    def extend(chosen, start):
        if len(chosen) == 2**n:
            return chosen
        for k in range(start, len(mats)):
            if all(gf2_rank(mats[k] - c) == n for c in chosen):
                found = extend(chosen + [mats[k]], k + 1)
                if found:
                    return found
        return None

    return extend([mats[0]], 1)


def tables(n):
    d = 2**n
    xs = [np.array([(x >> k) & 1 for k in range(n)]) for x in range(d)]
    return tuple(
        tuple("".join(str(int(x @ a @ x + 2 * (xs[b] @ x)) % 4) for x in xs) for b in range(d))
        for a in kerdock_set(n)
    )


if __name__ == "__main__":
    for n in (1, 2, 3):
        t = tables(n)
        print(f"d={2**n}: matches embedded table: {t == _CHAR2_TABLES[2**n]}")
        for row in t:
            print("   ", row)
