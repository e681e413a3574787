"""Brute-force arithmetic in the quantum affine space, used to check witnesses.

Scalars live in the rational group algebra of the lambda-group, extended
by fresh free generators (names such as ``"b"`` or ``"k1"``) that stand for
generic coefficients of a witness.  That ring is a commutative domain, and
every identity checked here is a polynomial identity, so nothing is ever
divided.

Elements are finite sums of ordered monomials ``X_1^g1 ... X_n^gn``.  In
Laurent mode exponents may be negative; only monomial-level work is
expected there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .exterior import check_perm, inverse_perm, is_identity_perm
from .qmatrix import LambdaElement, QMatrix, pairs

Key = tuple[int, ...]


class Scalar:
    """Element of Q[Lambda x Z^fresh]; ``terms`` maps exponent keys to nonzero rationals."""

    __slots__ = ("terms", "moduli")

    def __init__(self, moduli: tuple[int, ...], terms=None):
        self.moduli = moduli
        self.terms: dict[Key, Fraction] = {}
        if terms:
            for k, c in dict(terms).items():
                if c:
                    self.terms[k] = Fraction(c)

    def _key_mul(self, a: Key, b: Key) -> Key:
        return tuple((x + y) % d if d else x + y for x, y, d in zip(a, b, self.moduli))

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return isinstance(other, Scalar) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Scalar") -> "Scalar":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Scalar(self.moduli, out)

    def __neg__(self) -> "Scalar":
        return Scalar(self.moduli, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.moduli, {k: c * other for k, c in self.terms.items()})
        if isinstance(other, SkewPoly):
            return other.scale(self)
        out: dict[Key, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = self._key_mul(k1, k2)
                out[k] = out.get(k, 0) + c1 * c2
        return Scalar(self.moduli, out)

    __rmul__ = __mul__

    def unit_inverse(self) -> "Scalar":
        """Inverse of a single-term unit ``c * g``."""
        if len(self.terms) != 1:
            raise ValueError("only monomial scalars are invertible here")
        (k, c), = self.terms.items()
        return Scalar(self.moduli, {tuple((-x) % d if d else -x for x, d in zip(k, self.moduli)): 1 / c})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*g{list(k)}" for k, c in sorted(self.terms.items()))


class SkewPoly:
    """Finite sum of ordered monomials with Scalar coefficients."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: "SkewAlgebra", terms=None):
        self.alg = alg
        self.terms: dict[Key, Scalar] = {}
        if terms:
            for m, c in dict(terms).items():
                if not c.is_zero():
                    self.terms[tuple(m)] = c

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return isinstance(other, SkewPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return SkewPoly(self.alg, out)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale(self, s: Scalar) -> "SkewPoly":
        return SkewPoly(self.alg, {m: s * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SkewPoly):
            return self.alg.multiply(self, other)
        if isinstance(other, LambdaElement):
            other = self.alg.scalar(other)
        if isinstance(other, (int, Fraction)):
            other = self.alg.constant(other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, LambdaElement):
            other = self.alg.scalar(other)
        if isinstance(other, (int, Fraction)):
            other = self.alg.constant(other)
        return self.scale(other)

    def __pow__(self, k: int) -> "SkewPoly":
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*X^{list(m)}" for m, c in sorted(self.terms.items()))


def normal_product_scalar(q: QMatrix, gamma: Sequence[int], delta: Sequence[int]) -> LambdaElement:
    """The scalar s with ``X^gamma X^delta = s X^(gamma+delta)``.

    Moving ``X_j^d`` left past ``X_i^g`` for i > j costs ``q_ij^(g d)``, hence
    ``s = prod_{i>j} q_ij^(gamma_i delta_j)``.
    """
    acc = q.group.identity
    for i in range(q.n):
        if not gamma[i]:
            continue
        for j in range(i):
            if delta[j]:
                acc = acc * q.entry(i, j) ** (gamma[i] * delta[j])
    return acc


def straighten(q: QMatrix, word: Iterable[tuple[int, int]]) -> tuple[LambdaElement, tuple[int, ...]]:
    """Bubble-sort a word of letters ``(i, +-1)`` into ordered form, one relation at a time."""
    letters = list(word)
    scalar = q.group.identity
    changed = True
    while changed:
        changed = False
        for pos in range(len(letters) - 1):
            (i, a), (j, b) = letters[pos], letters[pos + 1]
            if i > j:
                # X_i^a X_j^b = q_ij^(ab) X_j^b X_i^a
                scalar = scalar * q.entry(i, j) ** (a * b)
                letters[pos], letters[pos + 1] = letters[pos + 1], letters[pos]
                changed = True
    exps = [0] * q.n
    for i, a in letters:
        exps[i] += a
    return scalar, tuple(exps)


def word_of(gamma: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    for i, g in enumerate(gamma):
        out += [(i, 1 if g > 0 else -1)] * abs(g)
    return out


class SkewAlgebra:
    """Arithmetic context: the parameter matrix, fresh scalar names, and the exponent mode."""

    def __init__(self, q: QMatrix, fresh: Sequence[str] = (), laurent: bool = False):
        self.q = q
        self.n = q.n
        self.fresh = tuple(dict.fromkeys(fresh))
        self.laurent = laurent
        self.moduli = q.group.moduli + (0,) * len(self.fresh)
        self._cache: dict[tuple[Key, Key], Key] = {}

    # scalars
    def scalar(self, e: LambdaElement, coeff=1) -> Scalar:
        return Scalar(self.moduli, {e.vector + (0,) * len(self.fresh): coeff})

    def constant(self, c=1) -> Scalar:
        return Scalar(self.moduli, {(0,) * len(self.moduli): c})

    def symbol(self, name: str, exp: int = 1, coeff=1) -> Scalar:
        if name not in self.fresh:
            raise KeyError(f"unknown fresh scalar {name!r}")
        k = [0] * len(self.moduli)
        k[self.q.group.ngens + self.fresh.index(name)] = exp
        return Scalar(self.moduli, {tuple(k): coeff})

    # polynomials
    def _check_exps(self, gamma: Sequence[int]):
        if len(gamma) != self.n:
            raise ValueError(f"monomial index must have length {self.n}")
        if not self.laurent and any(g < 0 for g in gamma):
            raise ValueError("negative exponent in polynomial mode")

    def monomial(self, gamma: Sequence[int], coeff: Optional[Scalar] = None) -> SkewPoly:
        gamma = tuple(int(g) for g in gamma)
        self._check_exps(gamma)
        return SkewPoly(self, {gamma: coeff if coeff is not None else self.constant()})

    def one(self) -> SkewPoly:
        return self.monomial((0,) * self.n)

    def zero(self) -> SkewPoly:
        return SkewPoly(self)

    def gen(self, i: int) -> SkewPoly:
        return self.monomial(tuple(int(k == i) for k in range(self.n)))

    def gens(self) -> list[SkewPoly]:
        return [self.gen(i) for i in range(self.n)]

    def const_poly(self, s: Scalar) -> SkewPoly:
        return self.monomial((0,) * self.n, s)

    def _product_key(self, g: Key, d: Key) -> Key:
        k = (g, d)
        hit = self._cache.get(k)
        if hit is None:
            s = normal_product_scalar(self.q, g, d)
            hit = s.vector + (0,) * len(self.fresh)
            self._cache[k] = hit
        return hit

    def multiply(self, f: SkewPoly, g: SkewPoly) -> SkewPoly:
        if f.alg is not self or g.alg is not self:
            if f.alg.laurent != g.alg.laurent:
                raise ValueError("mode mismatch: polynomial vs Laurent exponents")
            if f.alg.q != g.alg.q or f.alg.fresh != g.alg.fresh:
                raise ValueError("operands belong to different algebras")
        out: dict[Key, Scalar] = {}
        for m1, c1 in f.terms.items():
            for m2, c2 in g.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2 * Scalar(self.moduli, {self._product_key(m1, m2): 1})
                out[m] = out[m] + c if m in out else c
        return SkewPoly(self, out)

    def monomial_inverse(self, gamma: Sequence[int]) -> SkewPoly:
        """``(X^gamma)^-1 = s(gamma, -gamma)^-1 X^-gamma`` (Laurent mode)."""
        if not self.laurent:
            raise ValueError("monomial inverses need Laurent mode")
        neg = tuple(-g for g in gamma)
        s = normal_product_scalar(self.q, gamma, neg)
        return self.monomial(neg, self.scalar(s.inverse()))

    def apply(self, images: Sequence[SkewPoly], f: SkewPoly) -> SkewPoly:
        """Image of f under the algebra map ``X_k -> images[k]`` (scalars fixed)."""
        out = self.zero()
        for m, c in f.terms.items():
            term = self.const_poly(c)
            for k, e in enumerate(m):
                if e < 0:
                    raise ValueError("cannot substitute into negative powers")
                for _ in range(e):
                    term = term * images[k]
            out = out + term
        return out

    def apply_derivation(self, d_images: Sequence[SkewPoly], f: SkewPoly) -> SkewPoly:
        """Leibniz extension of ``X_k -> d_images[k]`` applied to f (scalars are constants)."""
        out = self.zero()
        for m, c in f.terms.items():
            letters = [k for k, e in enumerate(m) for _ in range(e)]
            for pos, k in enumerate(letters):
                if d_images[k].is_zero():
                    continue
                left = self.monomial(tuple(letters[:pos].count(t) for t in range(self.n)))
                right = self.monomial(tuple(letters[pos + 1:].count(t) for t in range(self.n)))
                out = out + (left * d_images[k] * right).scale(c)
        return out


def multiply(q: QMatrix, f: SkewPoly, g: SkewPoly) -> SkewPoly:
    if f.alg.q != q:
        raise ValueError("polynomial does not belong to this parameter matrix")
    return f.alg.multiply(f, g)


def monomial_commutator(q: QMatrix, gamma: Sequence[int], delta: Sequence[int]) -> LambdaElement:
    """``X^g X^d (X^g)^-1 (X^d)^-1`` computed by Laurent multiplication; returns its scalar."""
    alg = SkewAlgebra(q, laurent=True)
    prod = (alg.monomial(gamma) * alg.monomial(delta)
            * alg.monomial_inverse(gamma) * alg.monomial_inverse(delta))
    (m, c), = prod.terms.items()
    if any(m) or len(c.terms) != 1:
        raise AssertionError("commutator of monomials is not a scalar")
    (k, coeff), = c.terms.items()
    if coeff != 1:
        raise AssertionError("commutator scalar has a non-unit coefficient")
    return q.group.from_vector(k[:q.group.ngens])


def relation_residuals(alg: SkewAlgebra, images: Sequence[SkewPoly]) -> list[tuple[int, int]]:
    """Pairs i < j where ``images[i] images[j] - q_ij images[j] images[i]`` is nonzero."""
    q = alg.q
    bad = []
    for i, j in pairs(q.n):
        r = images[i] * images[j] - images[j] * images[i] * q.upper[(i, j)]
        if not r.is_zero():
            bad.append((i, j))
    return bad


def verify_endomorphism(q: QMatrix, images: Sequence[SkewPoly]) -> bool:
    if len(images) != q.n:
        raise ValueError(f"need {q.n} images")
    return not relation_residuals(images[0].alg, images)


def derivation_residuals(q: QMatrix, i: int, nu: Sequence[int]) -> dict:
    alg = SkewAlgebra(q)
    X = alg.gens()
    xnu = alg.monomial(nu)
    D = [xnu if k == i else alg.zero() for k in range(q.n)]
    bad_rel = []
    for a, b in pairs(q.n):
        # D(X_a X_b - q_ab X_b X_a) by the Leibniz rule on words
        r = (D[a] * X[b] + X[a] * D[b]) - (D[b] * X[a] + X[b] * D[a]) * q.upper[(a, b)]
        if not r.is_zero():
            bad_rel.append((a, b))
    bad_sq = [k for k in range(q.n) if not alg.apply_derivation(D, D[k]).is_zero()]
    return {"relations": bad_rel, "square": bad_sq}


def verify_derivation(q: QMatrix, i: int, nu: Sequence[int]) -> bool:
    """Is ``X_j -> delta_ij X^nu`` a derivation with square zero?"""
    r = derivation_residuals(q, i, nu)
    return not r["relations"] and not r["square"]


KINDS = ("scalar", "monomial", "translation", "exp_derivation")


@dataclass(frozen=True)
class AutomorphismSpec:
    """A candidate automorphism, described symbolically.

    * scalar:         ``X_i -> u_i X_i``
    * monomial:       ``X_i -> u_i X_sigma(i)``
    * translation:    ``X_k -> X_k + sign * b``
    * exp_derivation: ``X_i -> X_i + sign * X^nu``  (exponential of D_{i,nu})

    ``units`` holds ``(name, exponent)`` per variable; ``None`` means 1.
    """

    kind: str
    sigma: tuple = ()
    units: tuple = ()
    index: int = 0
    symbol: str = "b"
    sign: int = 1
    nu: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown automorphism kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def scalar(cls, n: int, prefix: str = "a") -> "AutomorphismSpec":
        return cls("scalar", units=tuple((f"{prefix}{i + 1}", 1) for i in range(n)))

    @classmethod
    def monomial(cls, sigma: Sequence[int], prefix: Optional[str] = "k") -> "AutomorphismSpec":
        sigma = check_perm(sigma)
        units = tuple((f"{prefix}{i + 1}", 1) if prefix else None for i in range(len(sigma)))
        return cls("monomial", sigma=sigma, units=units)

    @classmethod
    def translation(cls, k: int, symbol: str = "b", sign: int = 1) -> "AutomorphismSpec":
        return cls("translation", index=k, symbol=symbol, sign=sign)

    @classmethod
    def exp_derivation(cls, i: int, nu: Sequence[int], sign: int = 1) -> "AutomorphismSpec":
        return cls("exp_derivation", index=i, nu=tuple(int(x) for x in nu), sign=sign)

    def inverse(self) -> "AutomorphismSpec":
        if self.kind == "scalar":
            return AutomorphismSpec("scalar", units=tuple(None if u is None else (u[0], -u[1]) for u in self.units))
        if self.kind == "monomial":
            inv = inverse_perm(self.sigma)
            # X_j -> u_{inv(j)}^-1 X_{inv(j)}
            units = tuple(None if self.units[inv[j]] is None else (self.units[inv[j]][0], -self.units[inv[j]][1])
                          for j in range(len(inv)))
            return AutomorphismSpec("monomial", sigma=inv, units=units)
        return AutomorphismSpec(self.kind, index=self.index, symbol=self.symbol, sign=-self.sign, nu=self.nu)

    def fresh_names(self) -> list[str]:
        if self.kind in ("scalar", "monomial"):
            return [u[0] for u in self.units if u is not None]
        if self.kind == "translation":
            return [self.symbol]
        return []

    def validate(self, n: int):
        if self.kind == "monomial":
            check_perm(self.sigma, n)
        if self.kind in ("scalar", "monomial") and self.units and len(self.units) != n:
            raise ValueError(f"need {n} unit tags")
        if self.kind in ("translation", "exp_derivation") and not 0 <= self.index < n:
            raise ValueError(f"variable index {self.index} out of range")
        if self.kind == "exp_derivation":
            if len(self.nu) != n or any(x < 0 for x in self.nu):
                raise ValueError("nu must be a nonnegative vector of length n")
            if self.nu[self.index]:
                raise ValueError("nu must vanish at the derivation index")

    def images(self, alg: SkewAlgebra) -> list[SkewPoly]:
        n = alg.n
        self.validate(n)
        X = alg.gens()

        def unit(u):
            return alg.constant() if u is None else alg.symbol(u[0], u[1])

        if self.kind == "scalar":
            units = self.units or (None,) * n
            return [X[i].scale(unit(units[i])) for i in range(n)]
        if self.kind == "monomial":
            units = self.units or (None,) * n
            return [X[self.sigma[i]].scale(unit(units[i])) for i in range(n)]
        out = list(X)
        if self.kind == "translation":
            out[self.index] = X[self.index] + alg.const_poly(alg.symbol(self.symbol, 1, self.sign))
        else:
            out[self.index] = X[self.index] + alg.monomial(self.nu).scale(alg.constant(self.sign))
        return out

    def is_toric(self) -> bool:
        return self.kind == "scalar" or (self.kind == "monomial" and is_identity_perm(self.sigma))

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "monomial":
            d["sigma"] = [s + 1 for s in self.sigma]
        if self.kind in ("scalar", "monomial"):
            d["units"] = [None if u is None else list(u) for u in self.units]
        if self.kind in ("translation", "exp_derivation"):
            d["index"] = self.index + 1
            d["sign"] = self.sign
        if self.kind == "translation":
            d["symbol"] = self.symbol
        if self.kind == "exp_derivation":
            d["nu"] = list(self.nu)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AutomorphismSpec":
        try:
            kind = d["kind"]
            units = tuple(None if u is None else (str(u[0]), int(u[1])) for u in d.get("units", ()))
            if kind == "monomial":
                return cls("monomial", sigma=check_perm([s - 1 for s in d["sigma"]]), units=units)
            if kind == "scalar":
                return cls("scalar", units=units)
            if kind == "translation":
                return cls.translation(int(d["index"]) - 1, str(d.get("symbol", "b")), int(d.get("sign", 1)))
            if kind == "exp_derivation":
                return cls.exp_derivation(int(d["index"]) - 1, d["nu"], int(d.get("sign", 1)))
        except (KeyError, TypeError, IndexError) as exc:
            raise ValueError(f"malformed automorphism spec: {exc}") from exc
        raise ValueError(f"unknown automorphism kind {kind!r}")

    def describe(self) -> str:
        if self.kind == "monomial":
            from .exterior import format_perm
            return f"monomial {format_perm(self.sigma)}"
        if self.kind == "translation":
            return f"X{self.index + 1} -> X{self.index + 1} {'+' if self.sign > 0 else '-'} {self.symbol}"
        if self.kind == "exp_derivation":
            return f"X{self.index + 1} -> X{self.index + 1} {'+' if self.sign > 0 else '-'} X^{list(self.nu)}"
        return "scalar"


@dataclass
class PairCheck:
    ok: bool
    forward_relations: list = field(default_factory=list)
    inverse_relations: list = field(default_factory=list)
    not_fixed: list = field(default_factory=list)

    def to_json(self) -> dict:
        def fmt(ps):
            return [f"{i + 1},{j + 1}" for i, j in ps]
        return {"ok": self.ok,
                "forward_failed_relations": fmt(self.forward_relations),
                "inverse_failed_relations": fmt(self.inverse_relations),
                "composition_not_identity_on": [f"X{k + 1}" for k in self.not_fixed]}


def check_automorphism_pair(q: QMatrix, forward: AutomorphismSpec, inverse: AutomorphismSpec) -> PairCheck:
    names = forward.fresh_names() + inverse.fresh_names()
    alg = SkewAlgebra(q, fresh=names)
    f = forward.images(alg)
    g = inverse.images(alg)
    bad_f = relation_residuals(alg, f)
    bad_g = relation_residuals(alg, g)
    X = alg.gens()
    not_fixed = []
    for k in range(q.n):
        if alg.apply(g, f[k]) != X[k] or alg.apply(f, g[k]) != X[k]:
            not_fixed.append(k)
    ok = not bad_f and not bad_g and not not_fixed
    return PairCheck(ok, bad_f, bad_g, not_fixed)


def verify_automorphism_pair(q: QMatrix, forward: AutomorphismSpec, inverse: AutomorphismSpec) -> bool:
    return check_automorphism_pair(q, forward, inverse).ok


def compose(alg: SkewAlgebra, outer: Sequence[SkewPoly], inner: Sequence[SkewPoly]) -> list[SkewPoly]:
    """Images of ``outer o inner``: ``X_k -> outer(inner(X_k))``."""
    return [alg.apply(outer, p) for p in inner]
