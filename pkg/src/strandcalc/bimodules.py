"""Type DA bimodules over two differential graded algebras.

A bimodule over (A1, A2) is a finite generator set, each generator
carrying a left idempotent in A1 and a right idempotent in A2, together
with a finitely supported structure table

    d1 : (generator x, sequence of A2 basis elements) -> sums of (b, y)

with b an A1 basis element and y a generator.  The table is the minimal
encoding: the left differential and products of the underlying module are
recovered from it, and the higher maps D_n arise by the recursion

    D_n(x, a_1..a_i) = sum_j (I x D_1)(D_{n-1}(x, a_1..a_j), a_{j+1}..a_i)

with possibly empty chunks.  Every output (b, y) of an entry at x must
satisfy iL(x) . b . iL(y) = b.

Tables must be bounded: K denotes the largest input arity carrying a
nonzero entry.  With A1 an honest DGA the structure relation

    (mu_1 x I) o D_1 + (mu_2 x I) o D_2 + D_1 o (I x m) = 0

(m the tensor-algebra differential on inputs: entrywise differentials
plus adjacent products) vanishes identically in arity n > 2K, because
D_1 dies above arity K, D_2 needs two chunks of arity <= K, and the
m-term shortens or preserves sequences.  check_structure therefore checks
arities n <= 2K and that check is complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import f2
from .errors import IdempotentMismatch, UnknownSymbol
from .strands import DGAlgebra

# table value: frozenset of (A1 basis index, generator index)
Span = frozenset
Key = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class BimodGenerator:
    name: str
    left: int   # idempotent basis index in A1
    right: int  # idempotent basis index in A2


class TypeDABimodule:
    """Immutable type DA bimodule; build with make_bimodule."""

    def __init__(self, left_algebra: DGAlgebra, right_algebra: DGAlgebra,
                 gens: tuple[BimodGenerator, ...],
                 d1: Mapping[Key, Span], label: str = ""):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.gens = gens
        self.d1 = {k: v for k, v in d1.items() if v}
        self.label = label
        self.arity_bound = max((len(seq) for _, seq in self.d1), default=0)
        self._gen_index = {g.name: i for i, g in enumerate(gens)}
        self._by_seq = None
        self._by_gen = None
        self._by_out = None
        self._chained = None

    @property
    def size(self) -> int:
        return len(self.gens)

    def gen_index(self, name: str) -> int:
        return self._gen_index[name]

    def entry(self, x: int, seq: tuple[int, ...]) -> Span:
        return self.d1.get((x, seq), frozenset())

    @property
    def entries_by_sequence(self) -> dict[tuple[int, ...], list]:
        """seq -> list of (x, outputs); used by the morphism solver."""
        if self._by_seq is None:
            index: dict[tuple[int, ...], list] = {}
            for (x, seq), outs in self.d1.items():
                index.setdefault(seq, []).append((x, outs))
            for v in index.values():
                v.sort()
            self._by_seq = index
        return self._by_seq

    @property
    def entries_by_generator(self) -> dict[int, list]:
        """x -> list of (seq, outputs)."""
        if self._by_gen is None:
            index: dict[int, list] = {}
            for (x, seq), outs in self.d1.items():
                index.setdefault(x, []).append((seq, outs))
            for v in index.values():
                v.sort()
            self._by_gen = index
        return self._by_gen

    @property
    def entries_by_output(self) -> dict[int, list]:
        """output generator y -> list of (x, seq, algebra output c)."""
        if self._by_out is None:
            index: dict[int, list] = {}
            for (x, seq), outs in self.d1.items():
                for c, y in outs:
                    index.setdefault(y, []).append((x, seq, c))
            for v in index.values():
                v.sort()
            self._by_out = index
        return self._by_out

    @property
    def is_chained(self) -> bool:
        """True when the table only couples idempotent-chained data.

        An entry ((x, a_1..a_k), (b, y)) is chained when the inputs
        compose (right idempotent of x = source of a_1, target of a_i =
        source of a_{i+1}) and the output generator continues the chain
        (right idempotent of y = target of a_k, or of x when k = 0).
        Chained tables over idempotent-graded algebras let relation and
        homotopy checks skip non-chained input sequences: every term of
        the structure relation and of the morphism differential then
        references only chained entries on chained sequences.
        """
        if self._chained is None:
            self._chained = (self.left_algebra.idem_graded
                             and self.right_algebra.idem_graded
                             and all(self._entry_chained(k, v)
                                     for k, v in self.d1.items()))
        return self._chained

    def _entry_chained(self, key: Key, outs: Span) -> bool:
        A2 = self.right_algebra
        x, seq = key
        state = self.gens[x].right
        for a in seq:
            if A2.left_idem[a] != state:
                return False
            state = A2.right_idem[a]
        return all(self.gens[y].right == state for _, y in outs)

    def __repr__(self):
        tag = self.label or f"{self.size} generators"
        return f"TypeDABimodule({tag}, K={self.arity_bound})"


def make_bimodule(A1: DGAlgebra, A2: DGAlgebra,
                  gens: Iterable[tuple[str, int, int]],
                  d1: Mapping[Key, Iterable[tuple[int, int]]],
                  label: str = "") -> TypeDABimodule:
    """Construct a bimodule, screening indices and idempotent compatibility.

    The structure relation is NOT verified here; call check_structure.
    """
    gen_tuple = []
    for name, left, right in gens:
        if not (0 <= left < A1.size) or not A1.is_idempotent(left):
            raise UnknownSymbol(f"left idempotent of {name} is not an "
                                f"idempotent of the left algebra")
        if not (0 <= right < A2.size) or not A2.is_idempotent(right):
            raise UnknownSymbol(f"right idempotent of {name} is not an "
                                f"idempotent of the right algebra")
        gen_tuple.append(BimodGenerator(name, left, right))
    gen_tuple = tuple(gen_tuple)
    names = [g.name for g in gen_tuple]
    if len(set(names)) != len(names):
        raise UnknownSymbol("duplicate generator name")

    table: dict[Key, Span] = {}
    for (x, seq), outs in d1.items():
        if not (0 <= x < len(gen_tuple)):
            raise UnknownSymbol(f"unknown generator index {x}")
        seq = tuple(seq)
        for a in seq:
            if not (0 <= a < A2.size):
                raise UnknownSymbol(f"unknown right-algebra index {a}")
        outs = frozenset(tuple(o) for o in outs)
        for b, y in outs:
            if not (0 <= b < A1.size):
                raise UnknownSymbol(f"unknown left-algebra index {b}")
            if not (0 <= y < len(gen_tuple)):
                raise UnknownSymbol(f"unknown generator index {y}")
            ix = gen_tuple[x].left
            iy = gen_tuple[y].left
            sandwich = A1.product_elements(
                A1.product(ix, b), frozenset((iy,)))
            if sandwich != frozenset((b,)):
                raise IdempotentMismatch(
                    f"output {A1.name(b)} : {gen_tuple[y].name} at "
                    f"({gen_tuple[x].name}, arity {len(seq)}) violates "
                    f"left-idempotent compatibility")
        if outs:
            table[(x, seq)] = outs
    return TypeDABimodule(A1, A2, gen_tuple, table, label=label)


def compute_Dn(M: TypeDABimodule, x: int, seq: tuple[int, ...],
               n: int) -> frozenset:
    """The n-fold structure map as a set of (A1 chain, generator) pairs.

    Implements the recursion exactly: D_1 is the stored table and
    D_n(x, a_1..a_i) sums (I x D_1)(D_{n-1}(x, a_1..a_j), a_{j+1}..a_i)
    over all split points j, empty chunks included.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return frozenset(((b,), y) for b, y in M.entry(x, seq))
    out: set = set()
    for j in range(len(seq) + 1):
        for chain, y in compute_Dn(M, x, seq[:j], n - 1):
            for b, z in M.entry(y, seq[j:]):
                out ^= {(chain + (b,), z)}
    return frozenset(out)


def _chained_sequences(M: TypeDABimodule, x: int, max_len: int):
    """Idempotent-chained input sequences for generator x, in canonical
    (length, lexicographic) order."""
    A2 = M.right_algebra
    by_source: dict[int, list[int]] = {}
    for a in range(A2.size):
        by_source.setdefault(A2.left_idem[a], []).append(a)
    frontier = [((), M.gens[x].right)]
    yield ()
    for _ in range(max_len):
        new = []
        for seq, state in frontier:
            for a in by_source.get(state, ()):
                ext = seq + (a,)
                yield ext
                new.append((ext, A2.right_idem[a]))
        frontier = new


def _all_sequences(size: int, max_len: int):
    yield ()
    seqs = [()]
    for _ in range(max_len):
        seqs = [s + (a,) for s in seqs for a in range(size)]
        yield from seqs


def structure_defect(M: TypeDABimodule, x: int,
                     seq: tuple[int, ...]) -> frozenset:
    """The structure relation evaluated at one (generator, sequence)."""
    A1, A2 = M.left_algebra, M.right_algebra
    acc: set = set()
    # (mu_1 x I) o D_1
    for b, y in M.entry(x, seq):
        for t in A1.d(b):
            acc ^= {(t, y)}
    # (mu_2 x I) o D_2
    for j in range(len(seq) + 1):
        for b, y in M.entry(x, seq[:j]):
            for c, z in M.entry(y, seq[j:]):
                for t in A1.product(b, c):
                    acc ^= {(t, z)}
    # D_1 o (I x m): entrywise differentials, then adjacent products
    for k, a in enumerate(seq):
        for u in A2.d(a):
            acc ^= M.entry(x, seq[:k] + (u,) + seq[k + 1:])
    for k in range(len(seq) - 1):
        for w in A2.product(seq[k], seq[k + 1]):
            acc ^= M.entry(x, seq[:k] + (w,) + seq[k + 2:])
    return frozenset(acc)


@dataclass(frozen=True)
class StructureReport:
    label: str
    passed: bool
    max_arity: int
    complete: bool
    restricted_to_chained: bool
    tested: int
    witness: tuple | None  # (generator name, sequence names, defect names)

    def payload(self) -> dict:
        return {
            "label": self.label,
            "passed": self.passed,
            "max_arity": self.max_arity,
            "complete": self.complete,
            "restricted_to_chained": self.restricted_to_chained,
            "tested": self.tested,
            "witness": list(self.witness) if self.witness else None,
        }


def check_structure(M: TypeDABimodule,
                    max_arity: int | None = None) -> StructureReport:
    """Evaluate the structure relation at every arity up to the bound.

    The default bound 2K is complete (see the module docstring).  For
    chained tables the enumeration skips non-chained sequences, on which
    every term vanishes identically; the report records the restriction.
    A failing report carries the canonically first witness.
    """
    bound = 2 * M.arity_bound if max_arity is None else max_arity
    complete = bound >= 2 * M.arity_bound
    chained = M.is_chained
    tested = 0
    failures = []
    for x in range(M.size):
        if chained:
            seqs = _chained_sequences(M, x, bound)
        else:
            seqs = _all_sequences(M.right_algebra.size, bound)
        for seq in seqs:
            tested += 1
            defect = structure_defect(M, x, seq)
            if defect:
                failures.append((len(seq), x, seq, defect))
    witness = None
    if failures:
        _, x, seq, defect = min(failures)
        A1 = M.left_algebra
        witness = (
            M.gens[x].name,
            tuple(M.right_algebra.name(a) for a in seq),
            tuple(sorted(f"{A1.name(b)} : {M.gens[y].name}"
                         for b, y in defect)),
        )
    return StructureReport(M.label, not failures, bound, complete,
                           chained, tested, witness)


def identity_bimodule(A: DGAlgebra, label: str = "") -> TypeDABimodule:
    """The bimodule of A over itself: one generator per elementary
    idempotent i, with D_1(i, [a]) = a (x) i' exactly when i.a.i' = a."""
    gens = [(A.name(i), i, i) for i in A.idempotents]
    idem_pos = {i: k for k, i in enumerate(A.idempotents)}
    d1: dict[Key, set] = {}
    for a in range(A.size):
        i = A.left_idem[a]
        j = A.right_idem[a]
        # sanity: i.a.j = a in any idempotent-graded algebra
        sandwich = A.product_elements(A.product(i, a), frozenset((j,)))
        if sandwich != frozenset((a,)):
            continue
        d1.setdefault((idem_pos[i], (a,)), set()).add((a, idem_pos[j]))
    return make_bimodule(A, A, gens, d1,
                         label=label or f"I({A.label or 'A'})")


def arity_zero_complex(M: TypeDABimodule):
    """The chain complex of input-free data.

    Basis: pairs (b, x) with b an A1 basis element whose right idempotent
    matches the left idempotent of x, canonically ordered.  Boundary:
    (b, x) -> (db, x) + sum b.c (x) y over D_1(x, []) = sum c (x) y.
    Returns (basis, boundary matrix) with matrix columns indexed by the
    basis and rows likewise.
    """
    A1 = M.left_algebra
    basis = [(b, x) for b in range(A1.size) for x in range(M.size)
             if A1.right_idem[b] == M.gens[x].left]
    pos = {bx: k for k, bx in enumerate(basis)}
    entries = set()
    for col, (b, x) in enumerate(basis):
        image: set = set()
        for t in A1.d(b):
            image ^= {(t, x)}
        for c, y in M.entry(x, ()):
            for t in A1.product(b, c):
                image ^= {(t, y)}
        for bx in image:
            entries.add((pos[bx], col))
    n = len(basis)
    return basis, f2.F2Matrix(n, n, frozenset(entries))


def homology(M: TypeDABimodule) -> int:
    """Homology dimension of the arity-zero complex (via f2)."""
    _, boundary = arity_zero_complex(M)
    return f2.homology_dim(boundary, boundary)
