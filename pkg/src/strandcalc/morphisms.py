"""Morphisms of type DA bimodules and their chain complex.

A morphism from M to N (both over the same algebra pair) is a finitely
supported table

    F : (generator x of M, sequence over A2) -> sums of (b, y)

with b an A1 basis element and y a generator of N, subject to the same
left-idempotent compatibility as a structure table.  Unclosed tables are
legal values: they serve as homotopies.

With A1 an honest DGA the differential of the morphism complex collapses
to four kinds of terms:

    (dH)(x, a)  =  (d_A1 x I) H(x, a)
                + sum over splittings a = a1 a2 of  mu_2< H(x, a1) then D1_N(., a2) >
                + sum over splittings of            mu_2< D1_M(x, a1) then H(., a2) >
                + sum_k H(x, a with d applied to the k-th entry)
                + sum_k H(x, a with entries k, k+1 multiplied)

where < b (x) y then Phi > applies Phi to y and the remaining inputs and
multiplies the A1 outputs in order, and empty chunks are included in all
splittings.  dH is supported in arity <= L + K + 1 for H of arity <= L
over bimodules of arity bound <= K, so closedness is decidable.

Homotopy search is capped: is_homotopic(F, G, cap) decides exactly
whether some H of arity <= cap solves dH = F + G.  The linear system is
restricted to the connected components (in the unknown/equation incidence
graph of d) that meet the support of F + G; any solution projects onto
those components, so the restriction loses nothing.  Found witnesses are
re-verified bit-exactly; "not within cap" is an outcome, not a fault, and
says nothing about larger homotopies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import f2
from .bimodules import Key, Span, TypeDABimodule
from .errors import BimoduleMismatch, IdempotentMismatch, NotClosed, UnknownSymbol

Coord = tuple[int, tuple[int, ...], tuple[int, int]]


def same_shape(P: TypeDABimodule, Q: TypeDABimodule) -> bool:
    """Structural equality: same algebras, idempotents and index tables.

    Generator names are labels only; two bimodules with equal index data
    are interchangeable everywhere.
    """
    return (P.left_algebra is Q.left_algebra
            and P.right_algebra is Q.right_algebra
            and len(P.gens) == len(Q.gens)
            and all(p.left == q.left and p.right == q.right
                    for p, q in zip(P.gens, Q.gens))
            and P.d1 == Q.d1)


class DAMorphism:
    """A morphism-shaped table from M to N; build with make_morphism."""

    def __init__(self, source: TypeDABimodule, target: TypeDABimodule,
                 table: Mapping[Key, Span], label: str = ""):
        self.source = source
        self.target = target
        self.table = {k: v for k, v in table.items() if v}
        self.label = label
        self.arity_bound = max((len(s) for _, s in self.table), default=0)

    def entry(self, x: int, seq: tuple[int, ...]) -> Span:
        return self.table.get((x, seq), frozenset())

    def __add__(self, other: "DAMorphism") -> "DAMorphism":
        if not (same_shape(self.source, other.source)
                and same_shape(self.target, other.target)):
            raise BimoduleMismatch("cannot add morphisms of different shapes")
        table = dict(self.table)
        for k, v in other.table.items():
            table[k] = table.get(k, frozenset()) ^ v
        return DAMorphism(self.source, self.target, table)

    def __bool__(self) -> bool:
        return bool(self.table)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DAMorphism)
                and same_shape(self.source, other.source)
                and same_shape(self.target, other.target)
                and self.table == other.table)

    def __repr__(self):
        tag = self.label or f"{len(self.table)} entries"
        return f"DAMorphism({tag}, L={self.arity_bound})"


def make_morphism(M: TypeDABimodule, N: TypeDABimodule,
                  table: Mapping[Key, Iterable[tuple[int, int]]],
                  label: str = "") -> DAMorphism:
    if M.left_algebra is not N.left_algebra or \
            M.right_algebra is not N.right_algebra:
        raise BimoduleMismatch("source and target live over different algebras")
    A1, A2 = M.left_algebra, M.right_algebra
    clean: dict[Key, Span] = {}
    for (x, seq), outs in table.items():
        if not (0 <= x < M.size):
            raise UnknownSymbol(f"unknown source generator index {x}")
        seq = tuple(seq)
        for a in seq:
            if not (0 <= a < A2.size):
                raise UnknownSymbol(f"unknown right-algebra index {a}")
        outs = frozenset(tuple(o) for o in outs)
        for b, y in outs:
            if not (0 <= b < A1.size):
                raise UnknownSymbol(f"unknown left-algebra index {b}")
            if not (0 <= y < N.size):
                raise UnknownSymbol(f"unknown target generator index {y}")
            if not _compatible(M, N, x, b, y):
                raise IdempotentMismatch(
                    f"output {A1.name(b)} : {N.gens[y].name} at "
                    f"({M.gens[x].name}, arity {len(seq)}) violates "
                    f"left-idempotent compatibility")
        if outs:
            clean[(x, seq)] = outs
    return DAMorphism(M, N, clean, label=label)


def _compatible(M: TypeDABimodule, N: TypeDABimodule,
                x: int, b: int, y: int) -> bool:
    A1 = M.left_algebra
    ix, iy = M.gens[x].left, N.gens[y].left
    one = frozenset((b,))
    return (A1.product_elements(A1.product(ix, b), frozenset((iy,)))
            == one)


def zero_morphism(M: TypeDABimodule, N: TypeDABimodule) -> DAMorphism:
    return DAMorphism(M, N, {}, label="0")


def identity_morphism(M: TypeDABimodule) -> DAMorphism:
    """F(x, []) = iL(x) (x) x, all other entries zero."""
    table = {(x, ()): frozenset(((M.gens[x].left, x),))
             for x in range(M.size)}
    return DAMorphism(M, M, table, label=f"id[{M.label}]")


# --- the differential ----------------------------------------------------

def _coord_image(M: TypeDABimodule, N: TypeDABimodule,
                 x: int, seq: tuple[int, ...], b: int, y: int) -> frozenset:
    """d of the single-coordinate table (x, seq) -> (b, y), as a parity
    set of (x', seq', (t, z)) coordinates."""
    A1, A2 = M.left_algebra, M.right_algebra
    acc: set[Coord] = set()
    for t in A1.d(b):
        acc ^= {(x, seq, (t, y))}
    for seq2, outs2 in N.entries_by_generator.get(y, ()):
        for c, z in outs2:
            for t in A1.product(b, c):
                acc ^= {(x, seq + seq2, (t, z))}
    for x0, seq0, c in M.entries_by_output.get(x, ()):
        for t in A1.product(c, b):
            acc ^= {(x0, seq0 + seq, (t, y))}
    codiff = A2.codiff_index
    for k, u in enumerate(seq):
        for a in codiff.get(u, ()):
            acc ^= {(x, seq[:k] + (a,) + seq[k + 1:], (b, y))}
    coprod = A2.coproduct_index
    for k, w in enumerate(seq):
        for u, v in coprod.get(w, ()):
            acc ^= {(x, seq[:k] + (u, v) + seq[k + 1:], (b, y))}
    return frozenset(acc)


def morphism_differential(H: DAMorphism) -> DAMorphism:
    """The morphism-complex differential of H (an unclosed table is fine)."""
    M, N = H.source, H.target
    acc: dict[Key, set] = {}
    for (x, seq), outs in H.table.items():
        for b, y in outs:
            for (x2, seq2, out) in _coord_image(M, N, x, seq, b, y):
                bucket = acc.setdefault((x2, seq2), set())
                bucket ^= {out}
    table = {k: frozenset(v) for k, v in acc.items() if v}
    return DAMorphism(M, N, table, label=f"d({H.label})" if H.label else "")


@dataclass(frozen=True)
class Closedness:
    closed: bool
    witness: tuple | None  # (generator, sequence names, defect names)

    def __bool__(self) -> bool:
        return self.closed


def is_closed(F: DAMorphism) -> Closedness:
    """dF = 0 at every arity (complete by boundedness of the tables)."""
    dF = morphism_differential(F)
    if not dF.table:
        return Closedness(True, None)
    key = min(dF.table, key=lambda k: (len(k[1]), k))
    x, seq = key
    M, N, A1 = F.source, F.target, F.source.left_algebra
    witness = (
        M.gens[x].name,
        tuple(F.source.right_algebra.name(a) for a in seq),
        tuple(sorted(f"{A1.name(b)} : {N.gens[y].name}"
                     for b, y in dF.table[key])),
    )
    return Closedness(False, witness)


def compose(G: DAMorphism, F: DAMorphism) -> DAMorphism:
    """(G o F)(x, a) = sum over splittings of mu_2< F(x, a1) then G(., a2) >."""
    if not same_shape(F.target, G.source):
        raise BimoduleMismatch("target of F differs from source of G")
    A1 = F.source.left_algebra
    acc: dict[Key, set] = {}
    g_by_gen: dict[int, list] = {}
    for (y, seq2), outs in G.table.items():
        g_by_gen.setdefault(y, []).append((seq2, outs))
    for (x, seq1), outs1 in F.table.items():
        for b, y in outs1:
            for seq2, outs2 in g_by_gen.get(y, ()):
                for c, z in outs2:
                    for t in A1.product(b, c):
                        bucket = acc.setdefault((x, seq1 + seq2), set())
                        bucket ^= {(t, z)}
    table = {k: frozenset(v) for k, v in acc.items() if v}
    return DAMorphism(F.source, G.target, table)


# --- homotopy search ------------------------------------------------------

@dataclass(frozen=True)
class HomotopyWitness:
    h: DAMorphism
    cap: int

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotWithinCap:
    cap: int

    def __bool__(self) -> bool:
        return False


def _candidate_unknowns(M: TypeDABimodule, N: TypeDABimodule,
                        e: Coord, cap: int):
    """Unknown coordinates whose d-image can touch equation e (a superset;
    exact parities come from _coord_image on the forward pass)."""
    A1, A2 = M.left_algebra, M.right_algebra
    x, seq, (t, z) = e
    out = []
    for b in A1.codiff_index.get(t, ()):
        out.append((x, seq, (b, z)))
    by_seq_N = N.entries_by_sequence
    left_fac = A1.left_factor_index
    right_fac = A1.right_factor_index
    for j in range(len(seq) + 1):
        for y, outs2 in by_seq_N.get(seq[j:], ()):
            for c, z2 in outs2:
                if z2 != z:
                    continue
                for b in left_fac.get((t, c), ()):
                    out.append((x, seq[:j], (b, y)))
        for c, x2 in M.entry(x, seq[:j]):
            for b in right_fac.get((t, c), ()):
                out.append((x2, seq[j:], (b, z)))
    for k, a in enumerate(seq):
        for u in A2.d(a):
            out.append((x, seq[:k] + (u,) + seq[k + 1:], (t, z)))
    for k in range(len(seq) - 1):
        for w in A2.product(seq[k], seq[k + 1]):
            out.append((x, seq[:k] + (w,) + seq[k + 2:], (t, z)))
    return [(x2, s2, (b2, y2)) for x2, s2, (b2, y2) in out
            if len(s2) <= cap and _compatible(M, N, x2, b2, y2)]


def is_homotopic(F: DAMorphism, G: DAMorphism,
                 cap: int) -> HomotopyWitness | NotWithinCap:
    """Search for H with dH = F + G over all tables of arity <= cap.

    Preconditions: same source and target shapes, F and G closed.  On
    success the witness has been re-verified bit-exactly at all arities;
    NotWithinCap means no witness of arity <= cap exists and is not a
    proof of non-homotopy.
    """
    if not (same_shape(F.source, G.source)
            and same_shape(F.target, G.target)):
        raise BimoduleMismatch("morphisms do not share source and target")
    for name, Fi in (("first", F), ("second", G)):
        if not is_closed(Fi):
            raise NotClosed(f"{name} morphism is not closed")
    M, N = F.source, F.target
    rhs = (F + G).table
    if not rhs:
        return HomotopyWitness(zero_morphism(M, N), cap)

    seeds = {(x, seq, out) for (x, seq), outs in rhs.items()
             for out in outs}
    unknowns: dict[Coord, frozenset] = {}
    equations: set[Coord] = set(seeds)
    frontier_eq = list(seeds)
    while frontier_eq:
        new_unknowns = []
        for e in frontier_eq:
            for u in _candidate_unknowns(M, N, e, cap):
                if u not in unknowns:
                    unknowns[u] = frozenset()
                    new_unknowns.append(u)
        frontier_eq = []
        for u in new_unknowns:
            x, seq, (b, y) = u
            image = _coord_image(M, N, x, seq, b, y)
            unknowns[u] = image
            for e in image:
                if e not in equations:
                    equations.add(e)
                    frontier_eq.append(e)

    eq_list = sorted(equations)
    eq_pos = {e: i for i, e in enumerate(eq_list)}
    un_list = sorted(unknowns)
    entries = set()
    for col, u in enumerate(un_list):
        for e in unknowns[u]:
            entries.add((eq_pos[e], col))
    matrix = f2.F2Matrix(len(eq_list), len(un_list), frozenset(entries))
    target = f2.F2Vector(frozenset(eq_pos[s] for s in seeds))
    solution = f2.solve(matrix, target)
    if solution is None:
        return NotWithinCap(cap)

    table: dict[Key, set] = {}
    for col in solution.support:
        x, seq, out = un_list[col]
        bucket = table.setdefault((x, seq), set())
        bucket ^= {out}
    witness = DAMorphism(M, N, {k: frozenset(v) for k, v in table.items()})
    if morphism_differential(witness).table != rhs:
        raise AssertionError("homotopy witness failed bit-exact re-check")
    return HomotopyWitness(witness, cap)


# --- induced maps on arity-zero homology ----------------------------------

def _homology_data(M: TypeDABimodule):
    """Representatives of the arity-zero homology, plus the complex data.

    Returns (basis, boundary, reps) where reps are F2Vectors over the
    basis: kernel vectors chosen greedily to be independent modulo the
    image of the boundary.
    """
    from .bimodules import arity_zero_complex
    basis, boundary = arity_zero_complex(M)
    kernel = f2.kernel_basis(boundary)
    n = len(basis)
    pivots: dict[int, int] = {}

    def reduce(vec: frozenset) -> int:
        row = 0
        for i in vec:
            row |= 1 << (n - i)
        while row:
            lead = row.bit_length() - 1
            if lead in pivots:
                row ^= pivots[lead]
            else:
                return row
        return 0

    def insert(row: int) -> None:
        pivots[row.bit_length() - 1] = row

    for col in range(n):
        column = frozenset(r for r, c in boundary.entries if c == col)
        row = reduce(column)
        if row:
            insert(row)
    reps = []
    for vec in kernel:
        row = reduce(vec.support)
        if row:
            insert(row)
            reps.append(vec)
    return basis, boundary, reps


def induced_on_homology(F: DAMorphism) -> f2.F2Matrix:
    """Matrix of the arity-zero part of F on homology.

    The arity-zero part sends b (x) x to sum mu_2(b, b') (x) y over
    F(x, []) = sum b' (x) y; being closed, it is a chain map and descends.
    Columns index source homology representatives, rows target ones.
    """
    if not is_closed(F):
        raise NotClosed("induced_on_homology requires a closed morphism")
    M, N = F.source, F.target
    A1 = M.left_algebra
    basis_M, _, reps_M = _homology_data(M)
    basis_N, boundary_N, reps_N = _homology_data(N)
    pos_N = {bx: i for i, bx in enumerate(basis_N)}

    def f0(vec: f2.F2Vector) -> frozenset:
        out: set = set()
        for i in vec.support:
            b, x = basis_M[i]
            for b2, y in F.entry(x, ()):
                for t in A1.product(b, b2):
                    out ^= {pos_N[(t, y)]}
        return frozenset(out)

    # express each image in homology coordinates: solve [reps | boundary] u = w
    h_N = len(reps_N)
    n_N = len(basis_N)
    cols = []
    for r in reps_N:
        cols.append(r.support)
    boundary_cols = []
    for c in range(n_N):
        boundary_cols.append(frozenset(
            r for r, cc in boundary_N.entries if cc == c))
    cols.extend(boundary_cols)
    entries = frozenset((r, j) for j, col in enumerate(cols) for r in col)
    system = f2.F2Matrix(n_N, len(cols), entries)

    out_entries = set()
    for j, rep in enumerate(reps_M):
        w = f0(rep)
        sol = f2.solve(system, f2.F2Vector(w))
        if sol is None:
            raise AssertionError("chain-map image escaped cycles+boundaries")
        for i in sol.support:
            if i < h_N:
                out_entries.add((i, j))
    return f2.F2Matrix(h_N, len(reps_M), frozenset(out_entries))


def is_naive_quasi_iso(F: DAMorphism) -> bool:
    """True iff the induced matrix on arity-zero homology is invertible.

    This is a deliberately weak stand-in for quasi-isomorphism (it sees
    only the input-free part of the structure); every report built on it
    is labelled naive.
    """
    m = induced_on_homology(F)
    return m.rows == m.cols and f2.rank(m) == m.rows
