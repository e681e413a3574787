"""Exact linear algebra over the integers.

Matrices are plain lists of rows of Python ints, so there is no overflow
anywhere.  The main entry points are :func:`smith_normal_form`,
:func:`integer_rank`, :func:`solve_over_Z` and :func:`solve_nonnegative`;
the last one is a complete decision procedure for systems of linear
equations and congruences in nonnegative integer unknowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional, Sequence

IntMatrix = list[list[int]]


def zeros(rows: int, cols: int) -> IntMatrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def shape(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> tuple[int, int]:
    rows = len(A)
    if rows == 0:
        return 0, (cols or 0)
    return rows, len(A[0])


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    if len(A[0]) != inner:
        raise ValueError(f"shape mismatch: {len(A)}x{len(A[0])} @ {inner}x{cols}")
    Bt = list(zip(*B)) if B else [()] * cols
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(col) for col in zip(*A)]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ A @ V == D`` with U, V unimodular and D in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.V)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _diagonalize(A: Sequence[Sequence[int]], cols: int, track: bool):
    m = len(A)
    n = cols
    D = [list(row) for row in A]
    U = identity(m) if track else None
    V = identity(n) if track else None

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row dst += c * row src
        rd, rs = D[dst], D[src]
        for k in range(n):
            if rs[k]:
                rd[k] += c * rs[k]
        if track:
            ud, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ud[k] += c * us[k]

    def add_col(dst, src, c):
        for row in D:
            if row[src]:
                row[dst] += c * row[src]
        if track:
            for row in V:
                if row[src]:
                    row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # minimal-|.| pivot limits entry growth
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = D[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)

        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t + 1, m):
                    if D[i][t] and (best is None or abs(D[i][t]) < best[0]):
                        best = (abs(D[i][t]), i, "r")
                for j in range(t + 1, n):
                    if D[t][j] and (best is None or abs(D[t][j]) < best[0]):
                        best = (abs(D[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # divisibility d_t | every remaining entry
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            if track:
                U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def smith_normal_form(A: Sequence[Sequence[int]], cols: Optional[int] = None) -> SnfDecomposition:
    """Smith normal form with unimodular transforms.

    ``cols`` is only needed for matrices with zero rows.
    """
    m, n = shape(A, cols)
    U, D, V = _diagonalize(A, n, track=True)
    return SnfDecomposition(U=U, D=D, V=V)


def invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    m, n = shape(A)
    _, D, _ = _diagonalize(A, n, track=False)
    return [D[i][i] for i in range(min(m, n)) if D[i][i]]


def integer_rank(A: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(A))


def solve_over_Z(A: Sequence[Sequence[int]], b: Sequence[int],
                 cols: Optional[int] = None) -> Optional[tuple[list[int], list[list[int]]]]:
    """Solve ``A x = b`` over Z.

    Returns ``(particular, kernel_basis)`` or ``None`` when there is no
    integer solution.  The kernel basis is a Z-basis of ``ker A``.
    """
    m, n = shape(A, cols)
    if len(b) != m:
        raise ValueError(f"rhs has length {len(b)}, expected {m}")
    snf = smith_normal_form(A, n)
    c = matvec(snf.U, b)
    y = [0] * n
    r = snf.rank
    for i in range(m):
        d = snf.D[i][i] if i < min(m, n) else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    x = matvec(snf.V, y)
    kernel = [[snf.V[k][j] for k in range(n)] for j in range(r, n)]
    return x, kernel


def hermite_row_basis(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> list[list[int]]:
    """A Z-basis (row echelon, positive pivots) of the lattice spanned by ``rows``."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return []
    n = len(M[0]) if cols is None else cols
    basis = []
    col = 0
    while M and col < n:
        nz = [r for r in M if r[col]]
        rest = [r for r in M if not r[col]]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            nz = nxt
        if nz:
            piv = nz[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        M = [r for r in rest if any(r)]
        col += 1
    return basis


def lattice_kernel_with_moduli(A: Sequence[Sequence[int]], moduli: Sequence[int],
                               cols: int) -> list[list[int]]:
    """Z-basis of ``{x : row_i . x == 0 (mod moduli[i]), with 0 meaning over Z}``."""
    m = len(A)
    slack_rows = [i for i in range(m) if moduli[i]]
    ext = []
    for i, row in enumerate(A):
        extra = [moduli[i] if i == s else 0 for s in slack_rows]
        ext.append(list(row) + extra)
    total = cols + len(slack_rows)
    if m == 0:
        return identity(cols)
    _, kernel = solve_over_Z(ext, [0] * m, total)
    return hermite_row_basis([k[:cols] for k in kernel], cols)


@dataclass(frozen=True)
class DiophantineSystem:
    """``A nu = b`` row-wise, where a row with modulus d >= 1 is a congruence mod d."""

    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    moduli: tuple[int, ...] = field(default=())
    width: Optional[int] = None  # number of unknowns; needed when there are no rows

    def __post_init__(self):
        A = tuple(tuple(int(a) for a in row) for row in self.A)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        moduli = tuple(self.moduli) if self.moduli else (0,) * len(A)
        object.__setattr__(self, "moduli", moduli)
        if len(self.b) != len(A) or len(moduli) != len(A):
            raise ValueError("inconsistent system dimensions")
        if len({len(r) for r in A}) > 1:
            raise ValueError("ragged coefficient matrix")
        if A and self.width is not None and len(A[0]) != self.width:
            raise ValueError("width disagrees with the coefficient matrix")
        if any(d < 0 for d in moduli):
            raise ValueError("moduli must be >= 0")

    @property
    def unknowns(self) -> int:
        if self.width is not None:
            return self.width
        return len(self.A[0]) if self.A else 0

    def residual(self, nu: Sequence[int]) -> list[int]:
        out = []
        for row, bi, d in zip(self.A, self.b, self.moduli):
            r = sum(a * x for a, x in zip(row, nu)) - bi
            out.append(r % d if d else r)
        return out

    def is_solution(self, nu: Sequence[int]) -> bool:
        return all(x >= 0 for x in nu) and not any(self.residual(nu))


def minimal_solutions(A: Sequence[Sequence[int]], cols: int,
                      stop: Optional[Callable[[tuple[int, ...]], bool]] = None) -> list[tuple[int, ...]]:
    """Hilbert basis of ``{x in N^cols : A x = 0}`` by the Contejean-Devie algorithm.

    Candidates grow one unit at a time and only in directions ``e_j`` with
    ``<A x, A e_j> < 0``; candidates dominating a known solution are
    discarded.  If ``stop`` accepts a solution the search ends early and
    the partial basis (ending with that solution) is returned.
    """
    columns = [[row[j] for row in A] for j in range(cols)]

    def dot(u, v):
        return sum(a * b for a, b in zip(u, v))

    basis: list[tuple[int, ...]] = []
    frontier: dict[tuple[int, ...], list[int]] = {}
    for j in range(cols):
        e = tuple(int(k == j) for k in range(cols))
        frontier[e] = list(columns[j])
    while frontier:
        solved = sorted(p for p, ap in frontier.items() if not any(ap))
        for s in solved:
            basis.append(s)
            if stop is not None and stop(s):
                return basis
        nxt: dict[tuple[int, ...], list[int]] = {}
        for p in sorted(frontier):
            ap = frontier[p]
            if not any(ap):
                continue
            for j in range(cols):
                if dot(ap, columns[j]) >= 0:
                    continue
                c = p[:j] + (p[j] + 1,) + p[j + 1:]
                if c in nxt:
                    continue
                if any(all(ci >= mi for ci, mi in zip(c, m)) for m in basis):
                    continue
                nxt[c] = [a + b for a, b in zip(ap, columns[j])]
        frontier = nxt
    return basis


def solve_nonnegative(system: DiophantineSystem, nonzero: bool = False) -> Optional[list[int]]:
    """Decide whether the system has a solution in N^k and return one.

    A congruence row ``a.nu == b (mod d)`` is first reduced so that a and b
    have entries in ``[0, d)``; then ``a.nu - b`` is a multiple of d that is
    greater than -d, hence ``a.nu - d s = b`` with a single slack ``s >= 0``.
    The right-hand side is homogenized by an extra unknown ``t`` with
    coefficient ``-b``.  A solution of the original system is exactly the
    nu-part of a minimal homogeneous solution with ``t == 1``.  With
    ``nonzero=True`` the witness must be different from the zero vector.
    """
    k = system.unknowns
    # reduce congruence rows and drop repeats
    reduced = []
    for row, bi, d in zip(system.A, system.b, system.moduli):
        r = (tuple(a % d for a in row), bi % d, d) if d else (tuple(row), bi, 0)
        if r not in reduced and (any(r[0]) or r[1]):
            reduced.append(r)
    if any(not any(row) for row, _, _ in reduced):
        return None  # 0 = b != 0
    if reduced and not system.is_solution([0] * k):
        # cheap necessary condition: an integer solution must exist
        cong = [i for i, (_, _, d) in enumerate(reduced) if d]
        ext = [list(row) + [d if c == i else 0 for c in cong] for i, (row, _, d) in enumerate(reduced)]
        if solve_over_Z(ext, [bi for _, bi, _ in reduced], k + len(cong)) is None:
            return None
    rows = len(reduced)
    cong = [i for i, (_, _, d) in enumerate(reduced) if d]
    hom = []
    for i, (row, bi, d) in enumerate(reduced):
        hom.append(list(row) + [-d if c == i else 0 for c in cong] + [-bi])
    cols = k + len(cong) + 1
    t = cols - 1

    zero_ok = system.is_solution([0] * k)
    if nonzero and zero_ok:
        # any nonzero solution decomposes into Hilbert basis elements, at least one
        # of which has t == 0 and a nonzero nu-part
        def want(s):
            return s[t] == 0 and any(s[:k])
    else:
        def want(s):
            return s[t] == 1 and not (nonzero and not any(s[:k]))

    if rows == 0:
        if nonzero:
            return [int(j == 0) for j in range(k)] if k else None
        return [0] * k
    basis = minimal_solutions(hom, cols, stop=want)
    hits = [s for s in basis if want(s)]
    if not hits:
        return None
    return list(hits[0][:k])
