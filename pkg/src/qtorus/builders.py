"""Constructors for the bundled example matrices."""

from __future__ import annotations

from .autdecide import build_theorem2_counterexample
from .bicharacter import quaternion_example
from .qmatrix import LambdaGroup, QMatrix, make_qmatrix


def ac_rectification() -> QMatrix:
    """``q_12 = q_13 = 1`` and ``q_23 = p`` generic."""
    return make_qmatrix(3, LambdaGroup(1), {(1, 2): (1,)})


def generic(n: int = 3) -> QMatrix:
    """Every ``q_ij`` (i < j) its own free generator."""
    if n < 2:
        raise ValueError("n must be >= 2")
    m = n * (n - 1) // 2
    entries = {}
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            entries[(i, j)] = tuple(int(t == k) for t in range(m))
            k += 1
    return make_qmatrix(n, LambdaGroup(m), entries)


def cyclic_symmetric(n: int = 3) -> QMatrix:
    """``q_ij = f(j - i)`` with ``f(n - d) = f(d)^-1``, so the n-cycle is admissible.

    ``f(d) = p_d`` for ``d < n/2``, and ``f(n/2) = 1`` when n is even.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    rank = (n - 1) // 2
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = j - i
            if 2 * d < n:
                entries[(i, j)] = tuple(int(t == d - 1) for t in range(rank))
            elif 2 * d > n:
                entries[(i, j)] = tuple(-int(t == n - d - 1) for t in range(rank))
    return make_qmatrix(n, LambdaGroup(rank), entries)


def commutative(n: int = 3) -> QMatrix:
    if n < 2:
        raise ValueError("n must be >= 2")
    return make_qmatrix(n, LambdaGroup(0), {})


def theorem2_counterexample(n: int = 4, r: int = 3) -> QMatrix:
    return build_theorem2_counterexample(n, r)[0]


BUILDERS = {
    "quaternion": lambda n=None, r=None: quaternion_example(),
    "ac-rectification": lambda n=None, r=None: ac_rectification(),
    "cyclic-symmetric": lambda n=None, r=None: cyclic_symmetric(3 if n is None else n),
    "commutative": lambda n=None, r=None: commutative(3 if n is None else n),
    "generic": lambda n=None, r=None: generic(3 if n is None else n),
    "theorem2-counterexample": lambda n=None, r=None: theorem2_counterexample(4 if n is None else n,
                                                                              3 if r is None else r),
}

# file name in the shipped corpus -> (builder, n, r)
CORPUS = {
    "quaternion.json": ("quaternion", None, None),
    "ac-rectification.json": ("ac-rectification", None, None),
    "cyclic-symmetric-n3.json": ("cyclic-symmetric", 3, None),
    "commutative-n3.json": ("commutative", 3, None),
    "generic-n3.json": ("generic", 3, None),
    "theorem2-counterexample-n4-r3.json": ("theorem2-counterexample", 4, 3),
}


def build(name: str, n: int | None = None, r: int | None = None) -> QMatrix:
    try:
        maker = BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from {', '.join(sorted(BUILDERS))}") from None
    return maker(n, r)
