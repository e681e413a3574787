"""Rigidity decisions for quantum affine spaces, with checked witnesses.

A quantum affine space is rigid when its only automorphisms are the toric
ones ``X_i -> a_i X_i``.  Each decision procedure returns a
:class:`RigidityReport`; whenever it claims non-rigidity it carries
explicit automorphisms that have been re-checked by the skew-polynomial
oracle in :mod:`qtorus.skewalg`.

The base field is assumed to have characteristic zero and multiparameters
are generic exactly up to the relations of the declared lambda-group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

from . import abelian
from .bicharacter import (
    bounded_isotropic_pair_search,
    forms_of,
    independent,
    lambda_of,
    pencil_anisotropy_certificate,
    pencil_determinant,
    radical_basis,
)
from .exterior import (
    DEFAULT_PERM_CAP,
    cycles,
    format_perm,
    is_admissible,
    is_identity_perm,
    permutation_matrix,
    permutation_symmetries,
    stab_membership,
)
from .qmatrix import (
    LambdaGroup,
    QMatrix,
    lambda_structure,
    make_qmatrix,
    pairs,
    relations_matrix,
)
from .skewalg import AutomorphismSpec, check_automorphism_pair

RIGID = "rigid"
NON_RIGID = "non_rigid"
HYPOTHESES_VIOLATED = "hypotheses_violated"
INCONCLUSIVE = "inconclusive"

BASE_ASSUMPTIONS = (
    "char(F) = 0",
    "declared free generators are multiplicatively independent (generic parameters)",
)


@dataclass
class Witness:
    forward: AutomorphismSpec
    inverse: AutomorphismSpec
    verified: Optional[bool] = None
    note: str = ""

    def to_json(self) -> dict:
        return {"forward": self.forward.to_json(), "inverse": self.inverse.to_json(),
                "description": self.forward.describe(), "verified": self.verified, "note": self.note}


@dataclass
class RigidityReport:
    verdict: str
    route: str
    witnesses: list = field(default_factory=list)
    assumptions: list = field(default_factory=lambda: list(BASE_ASSUMPTIONS))
    log: list = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.verdict in (RIGID, NON_RIGID)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "route": self.route,
                "witnesses": [w.to_json() for w in self.witnesses],
                "assumptions": list(self.assumptions), "log": list(self.log)}


def _witness(q: QMatrix, forward: AutomorphismSpec, note: str = "", verify: bool = True) -> Witness:
    inv = forward.inverse()
    w = Witness(forward, inv, note=note)
    if verify:
        w.verified = check_automorphism_pair(q, forward, inv).ok
    return w


def lambda_i_system(q: QMatrix, i: int) -> abelian.DiophantineSystem:
    """Exponent form of ``prod_k q_kj^nu_k == q_ij`` for all j != i; unknowns nu_k, k != i."""
    ks = [k for k in range(q.n) if k != i]
    moduli = q.group.moduli
    A, b, mods = [], [], []
    for j in range(q.n):
        if j == i:
            continue
        target = q.entry(i, j).vector
        for s in range(q.group.ngens):
            A.append(tuple(q.entry(k, j).vector[s] for k in ks))
            b.append(target[s])
            mods.append(moduli[s])
    return abelian.DiophantineSystem(tuple(A), tuple(b), tuple(mods), width=len(ks))


def _expand(q: QMatrix, i: int, partial: Sequence[int]) -> tuple[int, ...]:
    it = iter(partial)
    return tuple(0 if k == i else next(it) for k in range(q.n))


def in_lambda_i(q: QMatrix, i: int, nu: Sequence[int]) -> bool:
    if nu[i] or any(x < 0 for x in nu):
        return False
    return all(
        _row_product(q, nu, j) == q.entry(i, j) for j in range(q.n) if j != i
    )


def _row_product(q: QMatrix, nu: Sequence[int], j: int):
    acc = q.group.identity
    for k, e in enumerate(nu):
        if e:
            acc = acc * q.entry(k, j) ** e
    return acc


def lambda_i_witness(q: QMatrix, i: int, nonzero: bool = True) -> Optional[tuple[int, ...]]:
    """Some nu in Lambda_i, or None.  By default only nonzero nu count."""
    if not 0 <= i < q.n:
        raise ValueError(f"index {i} out of range")
    sol = abelian.solve_nonnegative(lambda_i_system(q, i), nonzero=nonzero)
    if sol is None:
        return None
    return _expand(q, i, sol)


def e_module_is_zero(q: QMatrix) -> tuple[bool, Optional[tuple[int, tuple[int, ...]]]]:
    for i in range(q.n):
        nu = lambda_i_witness(q, i)
        if nu is not None:
            return False, (i, nu)
    return True, None


def all_identity_rows(q: QMatrix) -> list[int]:
    return [k for k in range(q.n) if all(e.is_identity() for e in q.row(k))]


def translation_witnesses(q: QMatrix, verify: bool = True) -> list[Witness]:
    return [_witness(q, AutomorphismSpec.translation(k),
                     note=f"row {k + 1} of q is all-identity, so X{k + 1} -> X{k + 1} + b is an automorphism",
                     verify=verify)
            for k in all_identity_rows(q)]


def _admissible_nonidentity(q: QMatrix, cap: int) -> list:
    return [s for s in permutation_symmetries(q, cap) if not is_identity_perm(s)]


def _case2_permutations(q: QMatrix, ip: int, jp: int):
    """Yield combined permutations (pi1 on {i',j'}, pi2 != id on the rest) meeting condition 2(b)."""
    J = [r for r in range(q.n) if r not in (ip, jp)]
    for swap in (False, True):
        p1 = {ip: jp, jp: ip} if swap else {ip: ip, jp: jp}
        for img in itertools.permutations(J):
            p2 = dict(zip(J, img))
            if all(p2[r] == r for r in J):
                continue
            if not all(q.entry(ip, r) == q.entry(p1[ip], p2[r]) and q.entry(jp, r) == q.entry(p1[jp], p2[r])
                       for r in J):
                continue
            if not all(q.entry(r, s) == q.entry(p2[r], p2[s]) for r in J for s in J if r < s):
                continue
            sigma = tuple(p1[k] if k in p1 else p2[k] for k in range(q.n))
            yield sigma


def theorem1_decide(q: QMatrix, perm_cap: int = DEFAULT_PERM_CAP, verify: bool = True) -> RigidityReport:
    """Rigidity when at most one q_ij (i < j) is the identity.

    No identity entry: rigid iff E = 0 and no non-identity permutation is
    admissible.  Exactly one, at (i', j'): rigid iff E = 0 and no pair
    (pi1 on {i', j'}, pi2 != id on the rest) carries rows i', j' correctly
    while preserving the remaining submatrix.
    """
    if q.n < 3:
        raise ValueError("theorem1_decide needs n >= 3")
    ones = q.identity_entries()
    e_zero, e_wit = e_module_is_zero(q)
    log = [{"identity_entries": [f"{i + 1},{j + 1}" for i, j in ones]},
           {"E_is_zero": e_zero,
            "E_witness": None if e_wit is None else {"i": e_wit[0] + 1, "nu": list(e_wit[1])}}]
    if len(ones) >= 2:
        wits = translation_witnesses(q, verify)
        log.append({"note": "two or more identity entries: the criterion does not apply"})
        if wits:
            log.append({"note": "an all-identity row gives translation automorphisms, which are not "
                                "linear; E = 0 alone does not force linearity here"})
        return RigidityReport(HYPOTHESES_VIOLATED, "theorem-1 hypothesis gate", wits, log=log)

    witnesses = []
    if e_wit is not None:
        i, nu = e_wit
        witnesses.append(_witness(q, AutomorphismSpec.exp_derivation(i, nu),
                                  note=f"exp of the square-zero derivation D_(i={i + 1}, nu={list(nu)})",
                                  verify=verify))
    if not ones:
        route = "theorem-1 case 1"
        syms = _admissible_nonidentity(q, perm_cap)
        log.append({"admissible_permutations": [format_perm(s) for s in syms]})
        if syms:
            witnesses.append(_witness(q, AutomorphismSpec.monomial(syms[0]),
                                      note="admissible permutation of the variables", verify=verify))
    else:
        route = "theorem-1 case 2"
        ip, jp = ones[0]
        found = list(_case2_permutations(q, ip, jp))
        log.append({"case2_permutations": [format_perm(s) for s in found]})
        if found:
            witnesses.append(_witness(q, AutomorphismSpec.monomial(found[0]),
                                      note="permutation fixing {i',j'} setwise and moving the rest",
                                      verify=verify))
    if witnesses:
        return RigidityReport(NON_RIGID, route, witnesses, log=log)
    return RigidityReport(RIGID, route, log=log)


def rank_threshold(n: int) -> int:
    return comb(n - 1, 2) + 1


def theorem2_decide(q: QMatrix, perm_cap: int = DEFAULT_PERM_CAP) -> RigidityReport:
    """Rigid when the lambda-group is torsion-free of rank at least C(n-1, 2) + 1."""
    if q.n < 3:
        raise ValueError("theorem2_decide needs n >= 3")
    st = lambda_structure(q)
    c = rank_threshold(q.n)
    log = [{"lambda_rank": st.rank, "torsion": list(st.torsion), "threshold": c}]
    route = "theorem-2 rank threshold"
    if not st.torsion_free:
        log.append({"note": "lambda-group has torsion; pass to torsion_free_reduction first"})
        return RigidityReport(INCONCLUSIVE, route, log=log)
    if st.rank < c:
        log.append({"note": "rank below threshold; this criterion has no converse"})
        return RigidityReport(INCONCLUSIVE, route, log=log)
    rad = radical_basis(q)
    log.append({"radical_basis": rad, "center_trivial": not rad})
    M = relations_matrix(q)
    log.append({"relations_column_rank": abelian.integer_rank(M.free_block)})
    if q.n <= perm_cap:
        stabilizing = [format_perm(s) for s in itertools.permutations(range(q.n))
                       if not is_identity_perm(s) and stab_membership(permutation_matrix(s), M)]
        log.append({"nonidentity_permutations_in_stabilizer": stabilizing})
    return RigidityReport(RIGID, route, log=log)


def build_theorem2_counterexample(n: int, r: int) -> tuple[QMatrix, AutomorphismSpec]:
    """First row all-identity, lower block spanned by r free generators.

    The translation ``X_1 -> X_1 + b`` is then a non-toric automorphism while
    the lambda-group is Z^r.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    top = comb(n - 1, 2)
    if not 1 <= r <= top:
        raise ValueError(f"r must lie in 1..{top} for n = {n}")
    group = LambdaGroup(r)
    lower = [(i, j) for i, j in pairs(n) if i >= 1]
    entries = {}
    for s, p in enumerate(lower[:r]):
        entries[p] = tuple(int(t == s) for t in range(r))
    return make_qmatrix(n, group, entries), AutomorphismSpec.translation(0)


def commuting_witness_from_permutation(q: QMatrix, sigma: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two independent commuting monomials forced by an admissible non-identity permutation.

    A 2-cycle (i j) forces ``q_ij^2 = 1`` so ``X_i^2`` and ``X_j`` commute; an
    r-cycle (i_1 ... i_r), r >= 3, forces ``X_{i_(r-1)} X_{i_1}`` and ``X_{i_r}`` to commute.
    """
    sigma = tuple(sigma)
    if is_identity_perm(sigma):
        raise ValueError("sigma must not be the identity")
    if not is_admissible(q, sigma):
        raise ValueError(f"{format_perm(sigma)} is not admissible for q")
    cyc = cycles(sigma)[0]
    n = q.n
    if len(cyc) == 2:
        i, j = cyc
        gamma = tuple(2 if k == i else 0 for k in range(n))
        delta = tuple(int(k == j) for k in range(n))
    else:
        a, b, c = cyc[-2], cyc[0], cyc[-1]
        gamma = tuple(int(k == a) + int(k == b) for k in range(n))
        delta = tuple(int(k == c) for k in range(n))
    if not lambda_of(q, gamma, delta).is_identity() or not independent(gamma, delta):
        raise AssertionError("derived commuting pair failed its check")
    return gamma, delta


def dimension_one_certificate(q: QMatrix) -> tuple[bool, dict]:
    """Certify that no two independent monomials commute.

    Needs a torsion-free lambda-group, n even, at least n - 1 forms, and a
    pencil determinant of the shape ``c (sum a_s x_s^2)^k``.  Then every
    nonzero pencil member is invertible, and for an isotropic plane
    <u, v> the vectors ``G_s u`` would be independent inside the
    (n-2)-dimensional annihilator of that plane, which is impossible.
    """
    info: dict = {}
    st = lambda_structure(q)
    info["torsion_free"] = st.torsion_free
    if not st.torsion_free:
        info["reason"] = "lambda-group has torsion"
        return False, info
    if q.n % 2:
        info["reason"] = "n is odd: every alternating pencil is singular"
        return False, info
    forms = forms_of(q)
    l = len(forms.forms)
    pdet = pencil_determinant(forms)
    info["pencil_determinant"] = repr(pdet)
    if l < q.n - 1:
        info["reason"] = f"only {l} forms; at least n - 1 = {q.n - 1} are needed"
        return False, info
    verdict = pencil_anisotropy_certificate(pdet)
    info["reason"] = verdict.reason
    return verdict.certified, info


def dim_one_rigidity(q: QMatrix, bound: int = 3, perm_cap: int = DEFAULT_PERM_CAP,
                     verify: bool = True) -> RigidityReport:
    """Rigidity through dimension one: no two independent monomials commute."""
    certified, info = dimension_one_certificate(q)
    log: list = [{"certificate": info}]
    pair = bounded_isotropic_pair_search(q, bound)
    log.append({"bound": bound,
                "commuting_pair": None if pair is None else {"gamma": list(pair[0]), "delta": list(pair[1])}})
    syms = _admissible_nonidentity(q, perm_cap)
    log.append({"admissible_permutations": [format_perm(s) for s in syms]})

    if syms:
        sigma = syms[0]
        g, d = commuting_witness_from_permutation(q, sigma)
        log.append({"commuting_pair_from_permutation": {"sigma": format_perm(sigma),
                                                        "gamma": list(g), "delta": list(d)}})
        if certified:
            log.append({"conflict": "certified dimension one but an admissible permutation exists"})
        w = _witness(q, AutomorphismSpec.monomial(sigma), note="admissible permutation of the variables",
                     verify=verify)
        return RigidityReport(NON_RIGID, "dimension-one permutation check", [w], log=log)
    if certified:
        if pair is not None:
            log.append({"conflict": "certified dimension one but a commuting pair was found"})
        log.append({"dimension": 1})
        return RigidityReport(RIGID, "dimension-one (certified)", log=log)
    if pair is not None:
        log.append({"dimension_lower_bound": 2,
                    "note": "dimension >= 2, so the dimension-one criterion does not apply"})
        return RigidityReport(INCONCLUSIVE, "dimension-one (bounded evidence)", log=log)
    log.append({"note": f"no commuting pair up to bound {bound}; the dimension claim is uncertified, "
                        "the permutation claim is exhaustive"})
    rep = RigidityReport(RIGID, f"dimension-one (bounded evidence, B={bound})", log=log)
    rep.assumptions.append(f"dimension one inferred from a bounded search (B={bound}), not certified")
    return rep
