"""Multiplicatively antisymmetric parameter matrices over a declared lambda-group.

Every multiparameter is an exponent word in a fixed presentation
``Z^l x Z/d_1 x ... x Z/d_t`` (free generators first).  Actual field
elements never appear: all conditions the decision procedures need are
equalities in this group.

Indices are 0-based in the library; the JSON format uses 1-based ``"i,j"`` keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Any, Iterable, NamedTuple, Optional, Sequence, Union

from . import abelian


class SpecError(ValueError):
    """Malformed parameter-matrix specification."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class LambdaGroup:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(d) for d in self.torsion_orders))
        if self.free_rank < 0:
            raise SpecError("bad_free_rank", f"free_rank must be >= 0, got {self.free_rank}")
        for d in self.torsion_orders:
            if d < 2:
                raise SpecError("bad_torsion_order", f"torsion orders must be >= 2, got {d}")

    @property
    def moduli(self) -> tuple[int, ...]:
        """One modulus per generator, 0 for free generators."""
        return (0,) * self.free_rank + self.torsion_orders

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> "LambdaElement":
        free = tuple(int(x) for x in free) if free else (0,) * self.free_rank
        torsion = tuple(int(x) for x in torsion) if torsion else (0,) * len(self.torsion_orders)
        if len(free) != self.free_rank:
            raise SpecError("bad_length", f"free part has length {len(free)}, expected {self.free_rank}")
        if len(torsion) != len(self.torsion_orders):
            raise SpecError("bad_length",
                            f"torsion part has length {len(torsion)}, expected {len(self.torsion_orders)}")
        return LambdaElement(free, tuple(t % d for t, d in zip(torsion, self.torsion_orders)),
                             self.torsion_orders)

    def from_vector(self, vec: Sequence[int]) -> "LambdaElement":
        return self.element(vec[:self.free_rank], vec[self.free_rank:])

    @property
    def identity(self) -> "LambdaElement":
        return self.element()

    def generator(self, s: int) -> "LambdaElement":
        vec = [0] * self.ngens
        vec[s] = 1
        return self.from_vector(vec)


@dataclass(frozen=True)
class LambdaElement:
    """A group element as an exponent vector; torsion entries are kept reduced."""

    free: tuple[int, ...]
    torsion: tuple[int, ...]
    orders: tuple[int, ...] = ()

    @property
    def vector(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def _check(self, other):
        if self.orders != other.orders or len(self.free) != len(other.free):
            raise ValueError("elements of different lambda-groups")

    def __mul__(self, other: "LambdaElement") -> "LambdaElement":
        self._check(other)
        return LambdaElement(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple((a + b) % d for a, b, d in zip(self.torsion, other.torsion, self.orders)),
            self.orders)

    def __pow__(self, k: int) -> "LambdaElement":
        return LambdaElement(tuple(a * k for a in self.free),
                             tuple((a * k) % d for a, d in zip(self.torsion, self.orders)),
                             self.orders)

    def inverse(self) -> "LambdaElement":
        return self ** -1

    def __truediv__(self, other: "LambdaElement") -> "LambdaElement":
        return self * other.inverse()

    def is_identity(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def __str__(self):
        parts = [f"p{s + 1}^{e}" for s, e in enumerate(self.free) if e]
        parts += [f"z{m + 1}^{e}" for m, e in enumerate(self.torsion) if e]
        return "*".join(parts) or "1"


def is_identity(q: LambdaElement) -> bool:
    return q.is_identity()


def pairs(n: int) -> list[tuple[int, int]]:
    """Pairs i < j in lexicographic order (12), (13), ..., (1n), (23), ..."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@dataclass(frozen=True)
class QMatrix:
    n: int
    group: LambdaGroup
    upper: dict  # (i, j) with i < j -> LambdaElement

    def __post_init__(self):
        if self.n < 2:
            raise SpecError("bad_n", f"n must be >= 2, got {self.n}")
        for p in pairs(self.n):
            if p not in self.upper:
                raise SpecError("missing_entry", f"missing entry {p[0] + 1},{p[1] + 1}")
        if len(self.upper) != len(pairs(self.n)):
            raise SpecError("bad_entry", "entries outside the strict upper triangle")

    def __hash__(self):
        return hash((self.n, self.group, tuple(self.upper[p] for p in pairs(self.n))))

    def entry(self, i: int, j: int) -> LambdaElement:
        if i == j:
            return self.group.identity
        if i < j:
            return self.upper[(i, j)]
        return self.upper[(j, i)].inverse()

    def row(self, i: int) -> list[LambdaElement]:
        return [self.entry(i, r) for r in range(self.n)]

    @cached_property
    def full(self) -> list[list[LambdaElement]]:
        return [self.row(i) for i in range(self.n)]

    def submatrix(self, keep: Sequence[int]) -> "QMatrix":
        keep = list(keep)
        upper = {(a, b): self.entry(keep[a], keep[b]) for a, b in pairs(len(keep))}
        return QMatrix(len(keep), self.group, upper)

    def identity_entries(self) -> list[tuple[int, int]]:
        return [p for p in pairs(self.n) if self.upper[p].is_identity()]

    def __str__(self):
        rows = []
        for i in range(self.n):
            rows.append("  ".join(f"{str(self.entry(i, j)):>12}" for j in range(self.n)))
        return "\n".join(rows)


def make_qmatrix(n: int, group: LambdaGroup, entries: dict) -> QMatrix:
    """Build from ``{(i, j): vector-or-element}`` with 0-based i < j; missing pairs are the identity."""
    upper = {}
    for p in pairs(n):
        v = entries.get(p)
        if v is None:
            upper[p] = group.identity
        elif isinstance(v, LambdaElement):
            upper[p] = v
        else:
            upper[p] = group.from_vector(list(v))
    return QMatrix(n, group, upper)


def parse_spec(text: Union[str, bytes, dict]) -> QMatrix:
    """Parse the JSON specification format (see README)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError("bad_json", str(exc)) from exc
    else:
        doc = text
    if not isinstance(doc, dict):
        raise SpecError("bad_document", "top level must be an object")
    for key in ("n", "lambda", "entries"):
        if key not in doc:
            raise SpecError("missing_field", f"missing field {key!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise SpecError("bad_n", "n must be an integer")
    if n < 2:
        raise SpecError("bad_n", f"n must be >= 2, got {n}")
    lam = doc["lambda"]
    if not isinstance(lam, dict):
        raise SpecError("bad_lambda", "'lambda' must be an object")
    group = LambdaGroup(int(lam.get("free_rank", 0)), tuple(lam.get("torsion_orders", ())))
    entries = doc["entries"]
    if not isinstance(entries, dict):
        raise SpecError("bad_entries", "'entries' must be an object")
    upper = {}
    for key, val in entries.items():
        try:
            i, j = (int(s) for s in key.split(","))
        except ValueError:
            raise SpecError("bad_key", f"entry key {key!r} is not 'i,j'") from None
        if not (1 <= i < j <= n):
            raise SpecError("bad_key", f"entry key {key!r} must satisfy 1 <= i < j <= {n}")
        if (i - 1, j - 1) in upper:
            raise SpecError("duplicate_entry", f"duplicate entry {key!r}")
        if not isinstance(val, dict) or "free" not in val and group.free_rank:
            raise SpecError("bad_entry", f"entry {key!r} needs a 'free' exponent vector")
        free = val.get("free", [])
        torsion = val.get("torsion")
        if len(free) != group.free_rank:
            raise SpecError("bad_length",
                            f"entry {key!r}: free part has length {len(free)}, expected {group.free_rank}")
        if torsion is None:
            torsion = [0] * len(group.torsion_orders)
        if len(torsion) != len(group.torsion_orders):
            raise SpecError("bad_length",
                            f"entry {key!r}: torsion part has length {len(torsion)}, "
                            f"expected {len(group.torsion_orders)}")
        upper[(i - 1, j - 1)] = group.element(free, torsion)
    for i, j in pairs(n):
        if (i, j) not in upper:
            raise SpecError("missing_entry", f"missing entry {i + 1},{j + 1}")
    return QMatrix(n, group, upper)


def to_spec(q: QMatrix) -> dict[str, Any]:
    entries = {}
    for i, j in pairs(q.n):
        e = q.upper[(i, j)]
        item: dict[str, Any] = {"free": list(e.free)}
        if q.group.torsion_orders:
            item["torsion"] = list(e.torsion)
        entries[f"{i + 1},{j + 1}"] = item
    return {"n": q.n,
            "lambda": {"free_rank": q.group.free_rank, "torsion_orders": list(q.group.torsion_orders)},
            "entries": entries}


def serialize(q: QMatrix) -> str:
    return json.dumps(to_spec(q), indent=2) + "\n"


@dataclass(frozen=True)
class RelationsMatrixM:
    """Exponent matrix of the multiparameters, rows in lexicographic pair order."""

    free_block: list
    torsion_block: list
    orders: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]


def relations_matrix(q: QMatrix) -> RelationsMatrixM:
    ps = tuple(pairs(q.n))
    return RelationsMatrixM(
        free_block=[list(q.upper[p].free) for p in ps],
        torsion_block=[list(q.upper[p].torsion) for p in ps],
        orders=q.group.torsion_orders,
        pairs=ps,
    )


class LambdaInvariants(NamedTuple):
    rank: int
    torsion_free: bool


@dataclass(frozen=True)
class LambdaStructure:
    """Isomorphism type ``Z^rank x Z/t_1 x ...`` of the subgroup spanned by the entries."""

    rank: int
    torsion: tuple[int, ...]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def exponent(self) -> int:
        return lcm(*self.torsion) if self.torsion else 1


def subgroup_structure(group: LambdaGroup, generators: Iterable[LambdaElement]) -> LambdaStructure:
    """Structure of the subgroup of ``group`` generated by ``generators``.

    With R the relation lattice of the torsion generators, the subgroup is
    ``L / R`` where L is spanned by the generator vectors together with R.
    """
    width = group.ngens
    rel = []
    for m, d in enumerate(group.torsion_orders):
        v = [0] * width
        v[group.free_rank + m] = d
        rel.append(v)
    gens = [list(g.vector) for g in generators]
    basis = abelian.hermite_row_basis(gens + rel, width)
    r = len(basis)
    if r == 0:
        return LambdaStructure(0, ())
    # coordinates of each relation vector in the basis of L
    Bt = abelian.transpose(basis)
    coords = []
    for v in rel:
        sol = abelian.solve_over_Z(Bt, v, r)
        assert sol is not None, "relation vector outside its own span"
        coords.append(sol[0])
    factors = abelian.invariant_factors(coords) if coords else []
    torsion = tuple(d for d in factors if d > 1)
    return LambdaStructure(r - len(factors), torsion)


def lambda_structure(q: QMatrix) -> LambdaStructure:
    return subgroup_structure(q.group, (q.upper[p] for p in pairs(q.n)))


def lambda_invariants(q: QMatrix) -> LambdaInvariants:
    s = lambda_structure(q)
    return LambdaInvariants(s.rank, s.torsion_free)


def torsion_free_reduction(q: QMatrix) -> tuple[QMatrix, int]:
    """Pass to the subalgebra generated by the p-th powers of the generators.

    p is the exponent of the torsion subgroup of the lambda-group, and the
    commutator of ``X_i^p`` and ``X_j^p`` is ``q_ij^(p^2)``.
    """
    p = lambda_structure(q).exponent
    if p == 1:
        return q, 1
    upper = {k: v ** (p * p) for k, v in q.upper.items()}
    return QMatrix(q.n, q.group, upper), p


def has_equal_rows(q: QMatrix) -> Optional[tuple[int, int]]:
    rows = q.full
    for i in range(q.n):
        for j in range(i + 1, q.n):
            if rows[i] == rows[j]:
                return i, j
    return None
