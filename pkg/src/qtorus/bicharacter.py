"""The commutator bicharacter of a quantum torus and the alternating forms behind it.

``lambda_of(q, g, d)`` is the scalar ``[X^g, X^d]``.  Splitting it over the
free generators of the lambda-group gives one integer alternating form per
generator; the determinant of their pencil decides, in good cases, that no
two independent monomials commute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import abelian
from .polynomial import IntPoly, determinant, sum_of_squares_power
from .qmatrix import LambdaElement, LambdaGroup, QMatrix, lambda_structure, make_qmatrix, pairs


def lambda_of(q: QMatrix, gamma: Sequence[int], delta: Sequence[int]) -> LambdaElement:
    """``prod_{i<j} q_ij^(g_i d_j - g_j d_i)``."""
    if len(gamma) != q.n or len(delta) != q.n:
        raise ValueError(f"monomial indices must have length {q.n}")
    width = q.group.ngens
    acc = [0] * width
    for (i, j), e in q.upper.items():
        c = gamma[i] * delta[j] - gamma[j] * delta[i]
        if c:
            v = e.vector
            for s in range(width):
                acc[s] += c * v[s]
    return q.group.from_vector(acc)


def _centralizer_rows(q: QMatrix) -> tuple[list[list[int]], list[int]]:
    # row (j, s): component s of lambda(gamma, e_j) = sum_i gamma_i * comp_s(q_ij)
    rows, moduli = [], []
    gm = q.group.moduli
    for j in range(q.n):
        for s in range(q.group.ngens):
            rows.append([q.entry(i, j).vector[s] for i in range(q.n)])
            moduli.append(gm[s])
    return rows, moduli


def radical_basis(q: QMatrix) -> list[list[int]]:
    """Z-basis of the radical ``{g : lambda(g, e_j) = 1 for all j}``, the support of the center."""
    rows, moduli = _centralizer_rows(q)
    return abelian.lattice_kernel_with_moduli(rows, moduli, q.n)


def independent(gamma: Sequence[int], delta: Sequence[int]) -> bool:
    n = len(gamma)
    return any(gamma[a] * delta[b] - gamma[b] * delta[a]
               for a in range(n) for b in range(a + 1, n))


def _tensor(q: QMatrix) -> np.ndarray:
    # T[s, i, j] = component s of q_ij as an antisymmetric form
    width = q.group.ngens
    T = np.zeros((width, q.n, q.n), dtype=object)
    for (i, j), e in q.upper.items():
        for s, v in enumerate(e.vector):
            T[s, i, j] = v
            T[s, j, i] = -v
    return T


def bounded_isotropic_pair_search(q: QMatrix, bound: int,
                                  chunk: int = 1024) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """First (lexicographic) independent pair in ``[-B, B]^n`` whose monomials commute.

    ``None`` only means no such pair exists inside the box.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    n = q.n
    box = np.array(list(itertools.product(range(-bound, bound + 1), repeat=n)), dtype=np.int64)
    T = _tensor(q)
    moduli = q.group.moduli
    biggest = max((abs(int(x)) for x in T.flat), default=0)
    if biggest * n * n * bound * bound >= 2 ** 62:
        return _search_slow(q, bound)
    forms = [np.array(T[s], dtype=np.int64) for s in range(T.shape[0])]
    # pairwise 2x2 minors vanish <=> dependent
    ab = pairs(n)
    for start in range(0, len(box), chunk):
        G = box[start:start + chunk]
        ok = np.ones((len(G), len(box)), dtype=bool)
        for F, d in zip(forms, moduli):
            vals = (G @ F) @ box.T
            ok &= (vals % d == 0) if d else (vals == 0)
            if not ok.any():
                break
        if not ok.any():
            continue
        dep = np.ones_like(ok)
        for a, b in ab:
            dep &= np.outer(G[:, a], box[:, b]) == np.outer(G[:, b], box[:, a])
        ok &= ~dep
        hits = np.argwhere(ok)
        if len(hits):
            gi, di = hits[0]
            return tuple(int(x) for x in G[gi]), tuple(int(x) for x in box[di])
    return None


def _search_slow(q: QMatrix, bound: int):
    rng = range(-bound, bound + 1)
    box = list(itertools.product(rng, repeat=q.n))
    for g in box:
        for d in box:
            if independent(g, d) and lambda_of(q, g, d).is_identity():
                return g, d
    return None


@dataclass(frozen=True)
class AlternatingFormSet:
    """Gram matrices ``G_s``; the p_s-exponent of ``lambda(g, d)`` is ``g^T G_s d``."""

    forms: tuple

    @property
    def n(self) -> int:
        return len(self.forms[0]) if self.forms else 0

    def evaluate(self, s: int, gamma: Sequence[int], delta: Sequence[int]) -> int:
        G = self.forms[s]
        return sum(gamma[i] * G[i][j] * delta[j] for i in range(len(G)) for j in range(len(G)))


def forms_of(q: QMatrix) -> AlternatingFormSet:
    """One antisymmetric integer matrix per free generator, with ``G_s[i][j]`` = exponent of p_s in q_ij."""
    if not lambda_structure(q).torsion_free:
        raise ValueError("lambda-group has torsion; apply torsion_free_reduction first")
    forms = []
    for s in range(q.group.free_rank):
        G = abelian.zeros(q.n, q.n)
        for (i, j), e in q.upper.items():
            G[i][j] = e.free[s]
            G[j][i] = -e.free[s]
        forms.append(G)
    return AlternatingFormSet(tuple(forms))


def pencil_matrix(forms: AlternatingFormSet, n: Optional[int] = None) -> list[list[IntPoly]]:
    l = len(forms.forms)
    n = forms.n if n is None else n
    M = [[IntPoly(l) for _ in range(n)] for _ in range(n)]
    for s, G in enumerate(forms.forms):
        xs = IntPoly.variable(l, s)
        for i in range(n):
            for j in range(n):
                if G[i][j]:
                    M[i][j] = M[i][j] + xs * G[i][j]
    return M


def pencil_determinant(forms: AlternatingFormSet) -> IntPoly:
    """``det(x_1 G_1 + ... + x_l G_l)`` expanded over Z (identically 0 for odd n)."""
    l = len(forms.forms)
    n = forms.n
    if n % 2:
        return IntPoly(l)
    return determinant(pencil_matrix(forms), l)


@dataclass(frozen=True)
class AnisotropyVerdict:
    certified: bool
    reason: str
    pattern: Optional[tuple] = None

    def __bool__(self):
        return self.certified


def pencil_anisotropy_certificate(pdet: IntPoly) -> AnisotropyVerdict:
    """Certified when ``pdet == c (sum a_s x_s^2)^k`` with c, a_s > 0.

    Such a polynomial has no nonzero rational zero, so every nonzero member
    of the pencil is nonsingular.  Anything else is "not certified", which
    is not a disproof.
    """
    match = sum_of_squares_power(pdet)
    if match is None:
        return AnisotropyVerdict(False, "pencil determinant is not a positive power of a positive diagonal quadratic form")
    c, coeffs, k = match
    quad = " + ".join(f"{a}*x{s + 1}^2" if a != 1 else f"x{s + 1}^2" for s, a in enumerate(coeffs))
    return AnisotropyVerdict(True, f"pencil determinant = {c}*({quad})^{k}", (c, tuple(coeffs), k))


def quaternion_example() -> QMatrix:
    """The rank-4 matrix whose three forms are the left-regular matrices of i, j, k.

    q_12 = g1^-1, q_13 = g2^-1, q_14 = g3^-1, q_23 = g3^-1, q_24 = g2, q_34 = g1^-1
    with g1, g2, g3 free.
    """
    group = LambdaGroup(3)
    return make_qmatrix(4, group, {
        (0, 1): (-1, 0, 0),
        (0, 2): (0, -1, 0),
        (0, 3): (0, 0, -1),
        (1, 2): (0, 0, -1),
        (1, 3): (0, 1, 0),
        (2, 3): (-1, 0, 0),
    })
