import itertools
import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtorus import abelian
from qtorus.abelian import DiophantineSystem, solve_nonnegative

from support import random_matrix


def determinantal_invariants(A):
    """Invariant factors from gcds of k x k minors (independent of the elimination code)."""
    m, n = len(A), len(A[0])
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, abelian.determinant([[A[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def check_snf(A):
    m, n = len(A), len(A[0])
    snf = abelian.smith_normal_form(A)
    assert abelian.matmul(abelian.matmul(snf.U, A), snf.V) == snf.D
    assert abs(abelian.determinant(snf.U)) == 1
    assert abs(abelian.determinant(snf.V)) == 1
    for i in range(m):
        for j in range(n):
            if i != j:
                assert snf.D[i][j] == 0
    diag = [d for d in snf.diagonal if d]
    assert all(d > 0 for d in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    assert diag == determinantal_invariants(A)


def test_snf_small_example():
    snf = abelian.smith_normal_form([[2, 4], [6, 8]])
    assert snf.diagonal == [2, 4]


@pytest.mark.parametrize("seed", range(40))
def test_snf_random(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 4))
    check_snf(A)


@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=4))
def test_snf_property(A):
    check_snf(A)


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_of_transpose(A):
    assert abelian.integer_rank(A) == abelian.integer_rank(abelian.transpose(A))


def test_zero_matrix_has_no_invariants():
    assert abelian.invariant_factors([[0, 0], [0, 0]]) == []
    assert abelian.integer_rank([[0, 0, 0]]) == 0


def test_solve_over_z_example():
    x, ker = abelian.solve_over_Z([[1, 1]], [3])
    assert x[0] + x[1] == 3
    assert len(ker) == 1 and ker[0][0] + ker[0][1] == 0


def test_solve_over_z_infeasible():
    assert abelian.solve_over_Z([[2, 4]], [3]) is None


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_over_z_planted(A, x0):
    b = abelian.matvec(A, x0)
    sol = abelian.solve_over_Z(A, b, 3)
    assert sol is not None
    x, ker = sol
    assert abelian.matvec(A, x) == b
    for k in ker:
        assert abelian.matvec(A, k) == [0] * len(A)
    # kernel basis has the right size and x0 - x lies in its span
    assert len(ker) == 3 - abelian.integer_rank(A)
    diff = [a - c for a, c in zip(x0, x)]
    if ker:
        assert abelian.solve_over_Z(abelian.transpose(ker), diff, len(ker)) is not None
    else:
        assert not any(diff)


def test_hermite_basis_spans_same_lattice():
    rows = [[2, 4, 6], [4, 8, 12], [1, 1, 1]]
    basis = abelian.hermite_row_basis(rows, 3)
    assert len(basis) == 2
    for r in rows:
        assert abelian.solve_over_Z(abelian.transpose(basis), r, len(basis)) is not None
    for r in basis:
        assert abelian.solve_over_Z(abelian.transpose(rows), r, len(rows)) is not None


def test_lattice_kernel_with_moduli():
    # x1 + x2 == 0 mod 3
    ker = abelian.lattice_kernel_with_moduli([[1, 1]], [3], 2)
    assert abelian.invariant_factors(ker) == [1, 3]
    for v in ker:
        assert (v[0] + v[1]) % 3 == 0


def box_solution(system, bound, nonzero=False):
    for nu in itertools.product(range(bound + 1), repeat=system.unknowns):
        if nonzero and not any(nu):
            continue
        if system.is_solution(nu):
            return list(nu)
    return None


def test_solve_nonnegative_examples():
    assert solve_nonnegative(DiophantineSystem(((1, -1),), (1,))) == [1, 0]
    assert solve_nonnegative(DiophantineSystem(((1, 1),), (-1,))) is None
    # 2 x == 1 has no solution over Z but does mod 3
    assert solve_nonnegative(DiophantineSystem(((2,),), (1,))) is None
    assert solve_nonnegative(DiophantineSystem(((2,),), (1,), (3,))) == [2]


def test_nonzero_solutions():
    homog = DiophantineSystem(((1, -1),), (0,))
    assert solve_nonnegative(homog) == [0, 0]
    nz = solve_nonnegative(homog, nonzero=True)
    assert nz is not None and any(nz) and homog.is_solution(nz)
    assert solve_nonnegative(DiophantineSystem(((1, 1),), (0,)), nonzero=True) is None


@pytest.mark.parametrize("seed", range(60))
def test_solve_nonnegative_vs_box(seed):
    rng = random.Random(1000 + seed)
    k = rng.randint(1, 4)
    rows = rng.randint(1, 2)
    A = random_matrix(rng, rows, k, -3, 3)
    moduli = [rng.choice([0, 0, 2, 3]) for _ in range(rows)]
    if rng.random() < 0.5:
        planted = [rng.randint(0, 3) for _ in range(k)]
        b = abelian.matvec(A, planted)
    else:
        b = [rng.randint(-4, 4) for _ in range(rows)]
    system = DiophantineSystem(A, b, moduli)
    for nonzero in (False, True):
        brute = box_solution(system, 6, nonzero)
        got = solve_nonnegative(system, nonzero=nonzero)
        if got is not None:
            assert system.is_solution(got) and (not nonzero or any(got))
        if brute is not None:
            assert got is not None
