import itertools
import random

import pytest

from qtorus import abelian
from qtorus.autdecide import (
    HYPOTHESES_VIOLATED,
    INCONCLUSIVE,
    NON_RIGID,
    RIGID,
    build_theorem2_counterexample,
    commuting_witness_from_permutation,
    dim_one_rigidity,
    dimension_one_certificate,
    e_module_is_zero,
    in_lambda_i,
    lambda_i_witness,
    rank_threshold,
    theorem1_decide,
    theorem2_decide,
)
from qtorus.bicharacter import independent, lambda_of, quaternion_example
from qtorus.builders import ac_rectification, commutative, cyclic_symmetric, generic
from qtorus.exterior import (
    fixed_span_rank,
    from_cycles,
    identity_perm,
    is_identity_perm,
    permutation_matrix,
    permutation_symmetries,
    stab_membership,
)
from qtorus.qmatrix import LambdaGroup, QMatrix, has_equal_rows, lambda_invariants, make_qmatrix, relations_matrix
from qtorus.skewalg import verify_automorphism_pair

from support import random_full_rank_q, random_q


def all_witnesses_verify(q, report):
    for w in report.witnesses:
        assert w.verified is True
        assert verify_automorphism_pair(q, w.forward, w.inverse)


def test_lambda_i_examples():
    q = commutative(3)
    assert all(lambda_i_witness(q, i, nonzero=False) == (0, 0, 0) for i in range(3))
    # row 1 of the rectification example is all-identity: only nu = 0 solves its system
    q = ac_rectification()
    assert all(lambda_i_witness(q, i) is None for i in range(3))
    assert lambda_i_witness(q, 0, nonzero=False) == (0, 0, 0)
    assert lambda_i_witness(q, 1, nonzero=False) is None
    # rows 1 and 2 equal: e_2 lies in Lambda_1
    q = make_qmatrix(3, LambdaGroup(1), {(0, 2): (1,), (1, 2): (1,)})
    assert in_lambda_i(q, 0, (0, 1, 0))


def test_e_module_examples():
    assert e_module_is_zero(quaternion_example()) == (True, None)
    assert e_module_is_zero(ac_rectification())[0]
    zero, wit = e_module_is_zero(commutative(3))
    assert not zero and wit[0] == 0 and any(wit[1])


def plant_equal_rows(rng, n):
    q = random_q(rng, n, rng.randint(1, 2), rng.choice([(), (3,)]))
    a, b = sorted(rng.sample(range(n), 2))
    upper = dict(q.upper)
    # row b := row a, which forces q_ab = q_aa = 1
    for r in range(n):
        if r in (a, b):
            continue
        val = q.entry(a, r)
        if b < r:
            upper[(b, r)] = val
        else:
            upper[(r, b)] = val.inverse()
    upper[(a, b)] = q.group.identity
    return QMatrix(n, q.group, upper)


def test_equal_rows_force_nonzero_e():
    rng = random.Random(36)
    for _ in range(50):
        q = plant_equal_rows(rng, rng.randint(3, 5))
        assert has_equal_rows(q) is not None
        zero, wit = e_module_is_zero(q)
        assert not zero
        i, nu = wit
        assert in_lambda_i(q, i, nu)


def test_theorem1_examples():
    rep = theorem1_decide(ac_rectification())
    assert rep.verdict == HYPOTHESES_VIOLATED
    assert [w.forward.kind for w in rep.witnesses] == ["translation"]
    all_witnesses_verify(ac_rectification(), rep)

    q = cyclic_symmetric(3)
    rep = theorem1_decide(q)
    assert rep.verdict == NON_RIGID and rep.route == "theorem-1 case 1"
    assert rep.witnesses[0].forward.sigma == from_cycles(3, [[1, 2, 3]])
    all_witnesses_verify(q, rep)

    assert theorem1_decide(generic(3)).verdict == RIGID
    with pytest.raises(ValueError):
        theorem1_decide(make_qmatrix(2, LambdaGroup(1), {(0, 1): (1,)}))


def test_theorem1_case2():
    # single identity entry q_12 = 1; q_13 = q_24, q_14 = q_23 and q_34 of order 2
    # let pi1 = (1 2), pi2 = (3 4) act
    q = make_qmatrix(4, LambdaGroup(2, (2,)), {(0, 2): (1, 0, 0), (0, 3): (0, 1, 0), (1, 2): (0, 1, 0),
                                               (1, 3): (1, 0, 0), (2, 3): (0, 0, 1)})
    assert q.identity_entries() == [(0, 1)]
    rep = theorem1_decide(q)
    assert rep.route == "theorem-1 case 2"
    assert rep.verdict == NON_RIGID
    all_witnesses_verify(q, rep)
    # breaking the symmetry makes it rigid
    q2 = make_qmatrix(4, LambdaGroup(5), {(0, 2): (1, 0, 0, 0, 0), (0, 3): (0, 1, 0, 0, 0),
                                          (1, 2): (0, 0, 0, 1, 0), (1, 3): (0, 0, 0, 0, 1),
                                          (2, 3): (0, 0, 1, 0, 0)})
    rep2 = theorem1_decide(q2)
    assert rep2.route == "theorem-1 case 2" and rep2.verdict == RIGID


@pytest.mark.parametrize("seed", range(30))
def test_theorem1_consistency(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 5)
    q = random_q(rng, n, rng.randint(1, 3), identity_p=0.1, spread=1)
    rep = theorem1_decide(q)
    all_witnesses_verify(q, rep)
    if rep.verdict == RIGID and rep.route == "theorem-1 case 1":
        assert permutation_symmetries(q) == [identity_perm(n)]
        M = relations_matrix(q)
        for sigma in itertools.permutations(range(n)):
            if not is_identity_perm(sigma):
                assert not stab_membership(permutation_matrix(sigma), M)
    if rep.verdict == NON_RIGID:
        assert rep.witnesses


def test_theorem2_examples():
    assert theorem2_decide(generic(3)).verdict == RIGID
    assert theorem2_decide(quaternion_example()).verdict == INCONCLUSIVE
    tors = make_qmatrix(3, LambdaGroup(2, (2,)), {(0, 1): (0, 0, 1), (0, 2): (1, 0, 0), (1, 2): (0, 1, 0)})
    rep = theorem2_decide(tors)
    assert rep.verdict == INCONCLUSIVE and "torsion" in str(rep.log)


@pytest.mark.parametrize("n", [3, 4])
def test_theorem2_consistency(n):
    rng = random.Random(n)
    c = rank_threshold(n)
    for _ in range(8):
        q = random_full_rank_q(rng, n, rng.randint(c, n * (n - 1) // 2))
        assert lambda_invariants(q).rank >= c
        rep = theorem2_decide(q)
        assert rep.verdict == RIGID
        assert theorem1_decide(q).verdict in (RIGID, HYPOTHESES_VIOLATED)
        M = relations_matrix(q)
        span = abelian.integer_rank(M.free_block)
        for sigma in itertools.permutations(range(n)):
            if not is_identity_perm(sigma):
                assert fixed_span_rank(sigma, M) < span


@pytest.mark.parametrize("n", [3, 4, 5])
def test_counterexample_builder(n):
    for r in range(1, rank_threshold(n)):
        q, phi = build_theorem2_counterexample(n, r)
        assert lambda_invariants(q) == (r, True)
        assert all(q.entry(0, j).is_identity() for j in range(n))
        assert verify_automorphism_pair(q, phi, phi.inverse())
    with pytest.raises(ValueError):
        build_theorem2_counterexample(3, 2)


def test_commuting_witness_examples():
    g, d = commuting_witness_from_permutation(cyclic_symmetric(3), from_cycles(3, [[1, 2, 3]]))
    assert g == (1, 1, 0) and d == (0, 0, 1)
    # q_12 of order 2 with q_13 = q_23 makes (1 2) admissible
    q = make_qmatrix(3, LambdaGroup(1, (2,)), {(0, 1): (0, 1), (0, 2): (1, 0), (1, 2): (1, 0)})
    g, d = commuting_witness_from_permutation(q, from_cycles(3, [[1, 2]]))
    assert (g, d) == ((2, 0, 0), (0, 1, 0))
    with pytest.raises(ValueError):
        commuting_witness_from_permutation(q, identity_perm(3))
    with pytest.raises(ValueError):
        commuting_witness_from_permutation(generic(3), from_cycles(3, [[1, 2]]))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_commuting_witness_property(n):
    q = commutative(n)
    for sigma in permutation_symmetries(q):
        if is_identity_perm(sigma):
            continue
        g, d = commuting_witness_from_permutation(q, sigma)
        assert independent(g, d) and lambda_of(q, g, d).is_identity()
    q = cyclic_symmetric(n)
    for sigma in permutation_symmetries(q):
        if not is_identity_perm(sigma):
            g, d = commuting_witness_from_permutation(q, sigma)
            assert independent(g, d) and lambda_of(q, g, d).is_identity()


def test_dim_one_examples():
    rep = dim_one_rigidity(quaternion_example(), bound=4)
    assert rep.verdict == RIGID and rep.route == "dimension-one (certified)"
    plane = make_qmatrix(2, LambdaGroup(1), {(0, 1): (1,)})
    assert dim_one_rigidity(plane).route == "dimension-one (certified)"
    rep = dim_one_rigidity(commutative(3))
    assert rep.verdict == NON_RIGID
    all_witnesses_verify(commutative(3), rep)
    rep = dim_one_rigidity(ac_rectification())
    assert rep.verdict == INCONCLUSIVE


def test_certificate_needs_enough_forms():
    # one form, pencil det 4 x^4, yet X1 and X3 commute
    q = make_qmatrix(4, LambdaGroup(1), {(0, 1): (1,), (2, 3): (2,)})
    ok, info = dimension_one_certificate(q)
    assert not ok and "forms" in info["reason"]
    assert dim_one_rigidity(q, bound=1).verdict == INCONCLUSIVE


@pytest.mark.parametrize("seed", range(10))
def test_every_witness_verifies(seed):
    rng = random.Random(500 + seed)
    n = rng.randint(3, 4)
    q = random_q(rng, n, rng.randint(0, 2), rng.choice([(), (2,)]), identity_p=0.5, spread=1)
    for rep in (theorem1_decide(q), dim_one_rigidity(q, bound=1)):
        all_witnesses_verify(q, rep)
