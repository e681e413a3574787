"""Sparse multivariate polynomials with integer coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping, Sequence


class IntPoly:
    """Immutable sparse polynomial in ``nvars`` variables ``x_1 .. x_nvars``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] = ()):
        self.nvars = nvars
        self.terms = {m: int(c) for m, c in dict(terms).items() if c}

    @classmethod
    def constant(cls, nvars: int, c: int) -> "IntPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, s: int) -> "IntPoly":
        return cls(nvars, {tuple(int(k == s) for k in range(nvars)): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.constant(self.nvars, other)
        return isinstance(other, IntPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "IntPoly") -> "IntPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return IntPoly(self.nvars, out)

    def __neg__(self) -> "IntPoly":
        return IntPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return IntPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "IntPoly":
        result = IntPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def content(self) -> int:
        return reduce(gcd, self.terms.values(), 0)

    def __call__(self, point: Sequence) -> int:
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(f"x{s + 1}" + (f"^{e}" if e > 1 else "") for s, e in enumerate(m) if e)
            if not mono:
                out.append(str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"{c}*{mono}")
        return " + ".join(out).replace("+ -", "- ")


def determinant(matrix: Sequence[Sequence[IntPoly]], nvars: int) -> IntPoly:
    """Division-free determinant by Laplace expansion along rows, memoized on column sets."""
    n = len(matrix)
    if n == 0:
        return IntPoly.constant(nvars, 1)
    memo: dict[int, IntPoly] = {}

    def minor(row: int, cols: int) -> IntPoly:
        # determinant of rows row..n-1 restricted to the column bitmask
        if row == n:
            return IntPoly.constant(nvars, 1)
        if cols in memo:
            return memo[cols]
        acc = IntPoly(nvars)
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = matrix[row][c]
            if not entry.is_zero():
                sub = minor(row + 1, cols & ~(1 << c))
                if not sub.is_zero():
                    acc = acc + entry * sub * sign
            sign = -sign
        memo[cols] = acc
        return acc

    return minor(0, (1 << n) - 1)


def integer_kth_root(x: Fraction, k: int) -> Fraction | None:
    """Exact positive rational k-th root of a positive rational, or None."""
    if x <= 0:
        return None

    def iroot(v: int) -> int | None:
        lo, hi = 0, 1
        while hi ** k <= v:
            hi *= 2
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** k <= v:
                lo = mid
            else:
                hi = mid - 1
        return lo if lo ** k == v else None

    num, den = iroot(x.numerator), iroot(x.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def sum_of_squares_power(p: IntPoly) -> tuple[int, list[Fraction], int] | None:
    """Match ``p == c * (sum_s a_s x_s^2)^k`` with c > 0 and every a_s > 0.

    Returns ``(c, [a_s], k)`` normalized so that ``a_1 == 1``, or None.
    """
    if p.is_zero() or p.nvars == 0:
        return None
    d = p.degree()
    if d < 2 or d % 2 or not p.is_homogeneous():
        return None
    k = d // 2
    lead = []
    for s in range(p.nvars):
        m = tuple(2 * k if t == s else 0 for t in range(p.nvars))
        lead.append(p.terms.get(m, 0))
    if any(c <= 0 for c in lead):
        return None
    c = lead[0]
    coeffs = []
    for cs in lead:
        a = integer_kth_root(Fraction(cs, c), k)
        if a is None:
            return None
        coeffs.append(a)
    # compare c * Q^k with p, clearing denominators of the a_s
    den = 1
    for a in coeffs:
        den = den * a.denominator // gcd(den, a.denominator)
    Q = IntPoly(p.nvars, {tuple(2 if t == s else 0 for t in range(p.nvars)): int(a * den)
                          for s, a in enumerate(coeffs)})
    if Q ** k * c != p * den ** k:
        return None
    return c, coeffs, k
