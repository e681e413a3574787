import random

import pytest

from qtorus.autdecide import build_theorem2_counterexample, in_lambda_i, lambda_i_witness
from qtorus.bicharacter import lambda_of, quaternion_example
from qtorus.builders import commutative, generic
from qtorus.exterior import from_cycles
from qtorus.qmatrix import QMatrix, pairs
from qtorus.skewalg import (
    AutomorphismSpec,
    SkewAlgebra,
    check_automorphism_pair,
    compose,
    monomial_commutator,
    normal_product_scalar,
    straighten,
    verify_automorphism_pair,
    verify_derivation,
    verify_endomorphism,
    word_of,
)

from support import random_q


def unit_vec(n, i):
    return tuple(int(k == i) for k in range(n))


def test_straightening_scalar_examples():
    q = generic(3)
    for i, j in pairs(3):
        assert normal_product_scalar(q, unit_vec(3, i), unit_vec(3, j)).is_identity()
        assert normal_product_scalar(q, unit_vec(3, j), unit_vec(3, i)) == q.entry(j, i)
    assert normal_product_scalar(q, (2, 1, 0), (0, 0, 0)).is_identity()
    assert normal_product_scalar(q, (0, 0, 0), (1, 3, 1)).is_identity()


def test_defining_relations_and_unit():
    q = random_q(random.Random(5), 4, 2, (3,))
    alg = SkewAlgebra(q)
    X = alg.gens()
    for i, j in pairs(4):
        assert (X[i] * X[j] - X[j] * X[i] * q.upper[(i, j)]).is_zero()
    f = X[0] * X[2] + X[3] * X[1] * 2
    assert f * alg.one() == f and alg.one() * f == f


def test_two_term_expansion():
    q = generic(3)
    alg = SkewAlgebra(q)
    X = alg.gens()
    assert (X[0] + X[1]) * X[2] == alg.monomial((1, 0, 1)) + alg.monomial((0, 1, 1))
    # X3 X1 = q31 X1 X3 and X3 X2 = q32 X2 X3
    expect = alg.monomial((1, 0, 1), alg.scalar(q.entry(2, 0))) + alg.monomial((0, 1, 1), alg.scalar(q.entry(2, 1)))
    assert X[2] * (X[0] + X[1]) == expect


@pytest.mark.parametrize("seed", range(10))
def test_straighten_agrees_with_closed_form(seed):
    rng = random.Random(seed)
    q = random_q(rng, 4, 2, (5,))
    for _ in range(10):
        word = [(rng.randrange(4), rng.choice([1, -1])) for _ in range(rng.randint(0, 8))]
        scalar, exps = straighten(q, word)
        acc, cur = q.group.identity, (0, 0, 0, 0)
        for i, a in word:
            step = tuple(a * int(k == i) for k in range(4))
            acc = acc * normal_product_scalar(q, cur, step)
            cur = tuple(x + y for x, y in zip(cur, step))
        assert exps == cur and scalar == acc
    g = (1, 0, 2, 1)
    assert straighten(q, word_of(g)) == (q.group.identity, g)


def random_poly(alg, rng, terms, laurent=False):
    n = alg.n
    lo = -2 if laurent else 0
    f = alg.zero()
    for _ in range(terms):
        gamma = [rng.randint(lo, 2) for _ in range(n)]
        e = alg.q.group.from_vector([rng.randint(-2, 2) for _ in range(alg.q.group.ngens)])
        f = f + alg.monomial(gamma, alg.scalar(e, rng.choice([1, 2, -3])))
    return f


def test_associativity_monomials():
    rng = random.Random(42)
    for trial in range(200):
        q = random_q(rng, rng.randint(2, 4), rng.randint(1, 2), rng.choice([(), (3,)]))
        alg = SkewAlgebra(q, laurent=trial % 2 == 0)
        f, g, h = (random_poly(alg, rng, 1, alg.laurent) for _ in range(3))
        assert (f * g) * h == f * (g * h)


def test_associativity_and_distributivity_polys():
    rng = random.Random(7)
    for _ in range(50):
        q = random_q(rng, 3, 2, (2,))
        alg = SkewAlgebra(q)
        f, g, h = (random_poly(alg, rng, 2) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert (g + h) * f == g * f + h * f


def test_commutator_matches_bicharacter():
    rng = random.Random(9)
    for _ in range(200):
        q = random_q(rng, rng.randint(2, 5), rng.randint(0, 3), rng.choice([(), (2,), (4, 3)]))
        g = [rng.randint(-3, 3) for _ in range(q.n)]
        d = [rng.randint(-3, 3) for _ in range(q.n)]
        assert monomial_commutator(q, g, d) == lambda_of(q, g, d)


def test_commutator_examples():
    q = quaternion_example()
    assert monomial_commutator(q, unit_vec(4, 0), unit_vec(4, 1)) == q.entry(0, 1)
    assert monomial_commutator(q, (1, 2, 0, 1), (1, 2, 0, 1)).is_identity()
    assert monomial_commutator(q, (1, 1, 0, 0), (0, 0, 1, 0)) == q.entry(0, 2) * q.entry(1, 2)


def planted_lambda_i(rng, n, i, l, torsion):
    """Random q whose row i is forced so that a random nu lies in Lambda_i."""
    q = random_q(rng, n, l, torsion)
    nu = [0 if k == i else rng.randint(0, 2) for k in range(n)]
    upper = dict(q.upper)
    for j in range(n):
        if j == i:
            continue
        acc = q.group.identity
        for k in range(n):
            if k not in (i, j) and nu[k]:
                acc = acc * q.entry(k, j) ** nu[k]
        # q_ij must equal prod_k q_kj^nu_k
        if i < j:
            upper[(i, j)] = acc
        else:
            upper[(j, i)] = acc.inverse()
    return QMatrix(n, q.group, upper), nu


def test_derivation_iff_lambda_i():
    rng = random.Random(123)
    agree_true = 0
    for trial in range(100):
        n = rng.randint(2, 4)
        i = rng.randrange(n)
        q, nu = planted_lambda_i(rng, n, i, rng.randint(1, 2), rng.choice([(), (2,)]))
        if trial % 2:
            k = rng.choice([k for k in range(n) if k != i])
            nu[k] += 1
        assert verify_derivation(q, i, nu) == in_lambda_i(q, i, nu)
        agree_true += in_lambda_i(q, i, nu)
    assert agree_true >= 40


def test_derivation_examples():
    q = commutative(3)
    assert all(verify_derivation(q, i, (0, 0, 0)) for i in range(3))
    assert not verify_derivation(generic(3), 0, (0, 0, 0))


def test_conjugating_translation_by_scalars():
    q, phi = build_theorem2_counterexample(3, 1)
    k = phi.index
    tau = AutomorphismSpec.scalar(3, prefix="t")
    alg = SkewAlgebra(q, fresh=["b", "t1", "t2", "t3"])
    conj = compose(alg, tau.inverse().images(alg), compose(alg, phi.images(alg), tau.images(alg)))
    X = alg.gens()
    shift = alg.const_poly(alg.symbol("b") * alg.symbol(f"t{k + 1}"))
    expect = [X[j] + shift if j == k else X[j] for j in range(3)]
    assert conj == expect


def test_automorphism_pairs():
    q, phi = build_theorem2_counterexample(3, 1)
    assert verify_automorphism_pair(q, phi, phi.inverse())
    ident = AutomorphismSpec.monomial((0, 1, 2), prefix=None)
    assert verify_automorphism_pair(generic(3), ident, ident)
    assert verify_automorphism_pair(generic(3), AutomorphismSpec.scalar(3), AutomorphismSpec.scalar(3).inverse())

    swap = AutomorphismSpec.monomial(from_cycles(4, [[1, 2]]))
    check = check_automorphism_pair(quaternion_example(), swap, swap.inverse())
    assert not check.ok and check.forward_relations
    assert check.to_json()["forward_failed_relations"][0] == "1,2"


def test_exp_derivation_pair():
    rng = random.Random(4)
    q, nu = planted_lambda_i(rng, 3, 1, 2, ())
    while not any(nu):
        q, nu = planted_lambda_i(rng, 3, 1, 2, ())
    f = AutomorphismSpec.exp_derivation(1, nu)
    assert verify_automorphism_pair(q, f, f.inverse())
    assert lambda_i_witness(q, 1) is not None


def test_swap_fails_generic():
    q = generic(3)
    alg = SkewAlgebra(q)
    X = alg.gens()
    assert verify_endomorphism(q, X)
    assert not verify_endomorphism(q, [X[1], X[0], X[2]])


def test_json_round_trip():
    specs = [AutomorphismSpec.monomial((2, 0, 1)), AutomorphismSpec.translation(1, sign=-1),
             AutomorphismSpec.exp_derivation(0, (0, 2, 1)), AutomorphismSpec.scalar(3)]
    for s in specs:
        assert AutomorphismSpec.from_json(s.to_json()) == s
        assert s.inverse().inverse() == s
    with pytest.raises(ValueError):
        AutomorphismSpec.from_json({"kind": "bogus"})
