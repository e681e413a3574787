"""Random generators shared by the test modules."""

import random

from qtorus.qmatrix import LambdaGroup, make_qmatrix, pairs


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -6, hi: int = 6):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def random_q(rng: random.Random, n: int, free_rank: int, torsion=(), identity_p: float = 0.0, spread: int = 2):
    group = LambdaGroup(free_rank, tuple(torsion))
    entries = {}
    for p in pairs(n):
        if rng.random() < identity_p:
            continue
        free = [rng.randint(-spread, spread) for _ in range(free_rank)]
        tors = [rng.randrange(d) for d in torsion]
        entries[p] = tuple(free + tors)
    return make_qmatrix(n, group, entries)


def random_full_rank_q(rng: random.Random, n: int, rank: int):
    """Torsion-free lambda-group of rank exactly ``rank`` (checked by the caller)."""
    m = n * (n - 1) // 2
    group = LambdaGroup(rank)
    ps = pairs(n)
    chosen = rng.sample(range(m), rank)
    entries = {}
    for s, k in enumerate(chosen):
        entries[ps[k]] = tuple(int(t == s) for t in range(rank))
    for k in range(m):
        if k not in chosen and rng.random() < 0.5:
            entries[ps[k]] = tuple(rng.randint(-1, 1) for _ in range(rank))
    return make_qmatrix(n, group, entries)
