"""Shared oracles and generators for the test suite.

Everything here is written independently of the library internals it
checks: the dense GF(2) oracle uses numpy row reduction, the diagram
oracle enumerates raw endpoint subsets, and the structure-map oracle
evaluates the recursion as an explicit sum over ordered splittings.
"""

from __future__ import annotations

import itertools
from random import Random

import numpy as np

from strandcalc import f2
from strandcalc.morphisms import DAMorphism, _compatible

# --- dense GF(2) oracle (numpy) -------------------------------------------


def dense(m: f2.F2Matrix) -> np.ndarray:
    out = np.zeros((m.rows, m.cols), dtype=np.uint8)
    for r, c in m.entries:
        out[r, c] = 1
    return out


def dense_rref(M: np.ndarray):
    """Row reduce over GF(2); returns (rref, pivot column list)."""
    R = (M % 2).astype(np.uint8).copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        hit = None
        for rr in range(r, rows):
            if R[rr, c]:
                hit = rr
                break
        if hit is None:
            continue
        if hit != r:
            R[[r, hit]] = R[[hit, r]]
        for rr in range(rows):
            if rr != r and R[rr, c]:
                R[rr] ^= R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def dense_rank(M: np.ndarray) -> int:
    return len(dense_rref(M)[1])


def dense_solvable(M: np.ndarray, b: np.ndarray) -> bool:
    aug = np.concatenate([M % 2, (b % 2)[:, None]], axis=1)
    return dense_rank(aug) == dense_rank(M)


def random_matrix(rng: Random, rows: int, cols: int,
                  density: float = 0.3) -> f2.F2Matrix:
    entries = frozenset((r, c) for r in range(rows) for c in range(cols)
                        if rng.random() < density)
    return f2.F2Matrix(rows, cols, entries)


def random_complex(rng: Random, n: int):
    """A random two-step complex d_in, d_out with d_out . d_in = 0.

    d_out is random; d_in's columns are random kernel combinations.
    """
    d_out = random_matrix(rng, n, n)
    kernel = f2.kernel_basis(d_out)
    cols = []
    for _ in range(n):
        combo: frozenset = frozenset()
        for v in kernel:
            if rng.random() < 0.5:
                combo ^= v.support
        cols.append(combo)
    entries = frozenset((r, c) for c, col in enumerate(cols) for r in col)
    d_in = f2.F2Matrix(n, n, entries)
    return d_in, d_out


# --- strand diagram oracle --------------------------------------------------


def brute_force_diagrams(circle):
    """Enumerate diagrams straight from the stated invariants.

    Runs over every pair of endpoint subsets and every bijection, plus
    every horizontal subset, and filters; deliberately dumb and separate
    from the library's generator.
    """
    pairs = circle.matching
    pair_of = {}
    for p in pairs:
        for x in p:
            pair_of[x] = p
    points = list(circle.points)
    found = set()
    for k in range(0, 2 * circle.genus + 1):
        for sources in itertools.combinations(points, k):
            for targets in itertools.combinations(points, k):
                for perm in itertools.permutations(targets):
                    strands = tuple(sorted(zip(sources, perm)))
                    if any(s >= t for s, t in strands):
                        continue
                    if len({pair_of[s] for s, _ in strands}) != k:
                        continue
                    if len({pair_of[t] for _, t in strands}) != k:
                        continue
                    used = {pair_of[s] for s, _ in strands}
                    used |= {pair_of[t] for _, t in strands}
                    free = [p for p in pairs if p not in used]
                    for r in range(len(free) + 1):
                        for horiz in itertools.combinations(free, r):
                            found.add((strands, tuple(sorted(horiz))))
    return found


# --- structure map oracle ----------------------------------------------------


def splittings(seq, parts):
    """All ways to cut seq into `parts` consecutive (possibly empty) runs."""
    if parts == 1:
        yield (seq,)
        return
    for i in range(len(seq) + 1):
        for rest in splittings(seq[i:], parts - 1):
            yield (seq[:i],) + rest


def direct_Dn(M, x, seq, n):
    """D_n as an explicit sum over ordered splittings into n chunks."""
    out = set()
    for chunks in splittings(seq, n):
        states = [((), x)]
        for chunk in chunks:
            new = []
            for chain, y in states:
                for b, z in M.entry(y, chunk):
                    new.append((chain + (b,), z))
            states = new
        for chain, y in states:
            out ^= {(chain, y)}
    return frozenset(out)


# --- random morphisms ---------------------------------------------------------


def chained_coords(M, N, cap):
    """All fully chained morphism coordinates of arity <= cap."""
    A1, A2 = M.left_algebra, M.right_algebra
    by_source: dict[int, list[int]] = {}
    for a in range(A2.size):
        by_source.setdefault(A2.left_idem[a], []).append(a)
    coords = []
    for x in range(M.size):
        frontier = [((), M.gens[x].right)]
        for k in range(cap + 1):
            nxt = []
            for seq, state in frontier:
                for b in range(A1.size):
                    if A1.left_idem[b] != M.gens[x].left:
                        continue
                    for y in range(N.size):
                        if (N.gens[y].left == A1.right_idem[b]
                                and N.gens[y].right == state):
                            coords.append((x, seq, (b, y)))
                if k < cap:
                    for a in by_source.get(state, ()):
                        nxt.append((seq + (a,), A2.right_idem[a]))
            frontier = nxt
    return coords


_COORD_CACHE: dict = {}


def random_chained_table(rng: Random, M, N, cap: int,
                         density: int) -> DAMorphism:
    key = (id(M), id(N), cap)
    if key not in _COORD_CACHE:
        _COORD_CACHE[key] = chained_coords(M, N, cap)
    coords = _COORD_CACHE[key]
    table: dict = {}
    for _ in range(density):
        x, seq, out = coords[rng.randrange(len(coords))]
        table.setdefault((x, seq), set())
        table[(x, seq)] ^= {out}
    return DAMorphism(M, N, {k: frozenset(v) for k, v in table.items() if v})


def random_unchained_table(rng: Random, M, N, cap: int,
                           density: int) -> DAMorphism:
    """Arbitrary idempotent-compatible coordinates (no chain condition)."""
    A1, A2 = M.left_algebra, M.right_algebra
    table: dict = {}
    placed = 0
    while placed < density:
        x = rng.randrange(M.size)
        k = rng.randrange(cap + 1)
        seq = tuple(rng.randrange(A2.size) for _ in range(k))
        b = rng.randrange(A1.size)
        y = rng.randrange(N.size)
        if not _compatible(M, N, x, b, y):
            continue
        table.setdefault((x, seq), set())
        table[(x, seq)] ^= {(b, y)}
        placed += 1
    return DAMorphism(M, N, {k: frozenset(v) for k, v in table.items() if v})
