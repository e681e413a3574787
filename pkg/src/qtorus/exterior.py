"""Exterior squares, permutation actions on bivectors, and the stabilizer test.

Permutations are tuples of 0-based images, ``sigma[i] = sigma(i)``.  The
permutation matrix P has ``P e_i = e_sigma(i)``, so that
``(wedge^2 P)(e_i ^ e_j) = e_sigma(i) ^ e_sigma(j)``.
"""

from __future__ import annotations

import itertools
from math import comb, lcm
from typing import Sequence

from . import abelian
from .qmatrix import QMatrix, RelationsMatrixM, pairs

Permutation = tuple[int, ...]

DEFAULT_PERM_CAP = 8


class CapExceeded(RuntimeError):
    """An enumeration would exceed its configured size cap."""


def pair_indexing(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def exterior_square(A: Sequence[Sequence[int]]) -> list[list[int]]:
    """Matrix of 2x2 minors, rows/columns indexed by lexicographic pairs."""
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("exterior_square needs a square matrix")
    ps = pairs(n)
    return [[A[i][k] * A[j][l] - A[i][l] * A[j][k] for (k, l) in ps] for (i, j) in ps]


def permutation_matrix(sigma: Permutation) -> list[list[int]]:
    n = len(sigma)
    P = abelian.zeros(n, n)
    for i, s in enumerate(sigma):
        P[s][i] = 1
    return P


def identity_perm(n: int) -> Permutation:
    return tuple(range(n))


def is_identity_perm(sigma: Permutation) -> bool:
    return all(i == s for i, s in enumerate(sigma))


def inverse_perm(sigma: Permutation) -> Permutation:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def compose_perm(a: Permutation, b: Permutation) -> Permutation:
    """``(a o b)(i) = a(b(i))``."""
    return tuple(a[b[i]] for i in range(len(b)))


def check_perm(sigma: Sequence[int], n: int | None = None) -> Permutation:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(len(sigma))) or (n is not None and len(sigma) != n):
        raise ValueError(f"not a permutation of {n if n is not None else len(sigma)} points: {sigma}")
    return sigma


def cycles(sigma: Permutation) -> list[tuple[int, ...]]:
    """Nontrivial cycles, each starting at its least element, ordered by that element."""
    seen = set()
    out = []
    for i in range(len(sigma)):
        if i in seen or sigma[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = sigma[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = sigma[j]
        out.append(tuple(cyc))
    return out


def from_cycles(n: int, cycs: Sequence[Sequence[int]], one_based: bool = True) -> Permutation:
    img = list(range(n))
    off = 1 if one_based else 0
    for c in cycs:
        c = [x - off for x in c]
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return check_perm(img, n)


def format_perm(sigma: Permutation) -> str:
    cs = cycles(sigma)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)


def stab_membership(A: Sequence[Sequence[int]], M: RelationsMatrixM) -> bool:
    """Does the unimodular A satisfy ``(wedge^2 A) M = M`` (torsion columns mod their orders)?"""
    n = len(A)
    N = comb(n, 2)
    if len(M.free_block) != N or len(M.torsion_block) != N:
        raise ValueError(f"relations matrix has {len(M.free_block)} rows, expected {N} for n={n}")
    if abelian.determinant(A) not in (1, -1):
        return False
    W = exterior_square(A)
    if N and M.free_block and M.free_block[0]:
        if abelian.matmul(W, M.free_block) != M.free_block:
            return False
    if N and M.orders:
        WT = abelian.matmul(W, M.torsion_block)
        for r in range(N):
            for m, d in enumerate(M.orders):
                if (WT[r][m] - M.torsion_block[r][m]) % d:
                    return False
    return True


def is_admissible(q: QMatrix, sigma: Permutation) -> bool:
    """``q_ij == q_sigma(i)sigma(j)`` for all i < j."""
    return all(q.upper[(i, j)] == q.entry(sigma[i], sigma[j]) for i, j in pairs(q.n))


def permutation_symmetries(q: QMatrix, cap: int = DEFAULT_PERM_CAP) -> list[Permutation]:
    """All admissible permutations, identity included, in lexicographic order."""
    if q.n > cap:
        raise CapExceeded(f"n = {q.n} exceeds the permutation enumeration cap {cap}")
    return [s for s in itertools.permutations(range(q.n)) if is_admissible(q, s)]


def _signed_action(sigma: Permutation) -> dict[tuple[int, int], tuple[int, int]]:
    # e_i ^ e_j -> sign * e_a ^ e_b on lexicographic pairs
    idx = pair_indexing(len(sigma))
    act = {}
    for (i, j), k in idx.items():
        a, b = sigma[i], sigma[j]
        act[(k, 1)] = (idx[(a, b)], 1) if a < b else (idx[(b, a)], -1)
        act[(k, -1)] = (act[(k, 1)][0], -act[(k, 1)][1])
    return act


def exterior_order(W: Sequence[Sequence[int]], n: int) -> int:
    """Multiplicative order of ``W`` found by iteration (capped at lcm(1..n)^2)."""
    N = len(W)
    cap = lcm(*range(1, n + 1)) ** 2 if n else 1
    I = abelian.identity(N)
    power = [list(r) for r in W]
    m = 1
    while power != I:
        m += 1
        if m > cap:
            raise CapExceeded(f"order of exterior square exceeds {cap}")
        power = abelian.matmul(power, W)
    return m


def orbit_data(sigma: Permutation, n: int | None = None) -> tuple[list[list[int]], int]:
    """Distinct nonzero orbit sums, and the number of <sigma>-orbits on the signed basis."""
    n = len(sigma) if n is None else n
    sigma = check_perm(sigma, n)
    W = exterior_square(permutation_matrix(sigma))
    N = len(W)
    m = exterior_order(W, n)
    sums = []
    for k in range(N):
        v = [int(r == k) for r in range(N)]
        acc = [0] * N
        for _ in range(m):
            v = abelian.matvec(W, v)
            acc = [a + b for a, b in zip(acc, v)]
        if any(acc) and acc not in sums:
            sums.append(acc)

    act = _signed_action(sigma)
    seen = set()
    count = 0
    for start in act:
        if start in seen:
            continue
        count += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = act[x]
    return sums, count


def fix_rank(sigma: Permutation, n: int | None = None) -> int:
    """Rank of the submodule of bivectors fixed by ``wedge^2 P``."""
    n = len(sigma) if n is None else n
    sigma = check_perm(sigma, n)
    W = exterior_square(permutation_matrix(sigma))
    N = len(W)
    if N == 0:
        return 0
    diff = [[W[i][j] - int(i == j) for j in range(N)] for i in range(N)]
    return N - abelian.integer_rank(diff)


def fixed_span_rank(sigma: Permutation, M: RelationsMatrixM) -> int:
    """Rank of ``Fix(wedge^2 P)`` intersected with the column span of M (free block)."""
    n = len(sigma)
    W = exterior_square(permutation_matrix(sigma))
    N = len(W)
    cols = abelian.transpose(M.free_block) if M.free_block and M.free_block[0] else []
    if not cols:
        return 0
    diff = [[W[i][j] - int(i == j) for j in range(N)] for i in range(N)]
    fixed = N - abelian.integer_rank(diff)
    span = abelian.integer_rank(cols)
    # dim(F cap S) = dim F + dim S - dim(F + S); F = ker(diff) as rows of a kernel basis
    sol = abelian.solve_over_Z(diff, [0] * N, N)
    kernel = sol[1] if sol else []
    together = abelian.integer_rank(kernel + cols) if kernel or cols else 0
    return fixed + span - together
