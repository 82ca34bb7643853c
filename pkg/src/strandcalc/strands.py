"""Strand algebras of pointed matched circles.

A basis diagram consists of moving strands (s -> t with s < t, drawn left
to right between two copies of the marked points) together with a set of
horizontally occupied matched pairs.  Within one diagram all strand
sources are distinct points on distinct matched pairs, and likewise all
targets; a source of one strand may coincide with the target of another.
Horizontal pairs are disjoint from every pair touched by a source or a
target.

Horizontal pairs are "smeared": a diagram with h horizontals stands for
the sum of the 2^h primitive diagrams obtained by placing a constant
strand at one point of each horizontal pair.  Products and differentials
are computed on primitives and regrouped:

* product: primitives concatenate when the target points of the left
  factor equal the source points of the right factor; a concatenation in
  which some pair of strands crosses in both halves (a double crossing)
  is discarded;
* differential: sum over crossings of the diagram with the two targets
  swapped, keeping a resolution only when it lowers the crossing count by
  exactly one (resolutions that undo a second crossing are excluded).

Crossings are counted in the primitive picture, where they are
unambiguous; constant strands participate in crossings.  The full algebra
(every number of occupied pairs) is taken.

All diagrams are immutable; multiply and differential are pure.
"""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from random import Random
from typing import Callable, Iterable

from .circles import PointedMatchedCircle

# A GF(2) combination of diagrams is just a frozenset (duplicates cancel).
AlgebraElement = frozenset

Primitive = tuple[tuple[int, int], ...]


@dataclass(frozen=True, order=True)
class StrandDiagram:
    """A basis diagram: sorted moving strands plus sorted horizontal pairs."""

    strands: tuple[tuple[int, int], ...] = ()
    horizontals: tuple[tuple[int, int], ...] = ()

    @property
    def occupied(self) -> int:
        return len(self.strands) + len(self.horizontals)

    def __str__(self) -> str:
        return diagram_name(self)


@lru_cache(maxsize=None)
def _pair_lookup(c: PointedMatchedCircle) -> dict[int, tuple[int, int]]:
    table = {}
    for pair in c.matching:
        for p in pair:
            table[p] = pair
    return table


def make_diagram(c: PointedMatchedCircle, strands, horizontals=()) -> StrandDiagram:
    """Validate and canonicalize a diagram over the circle c."""
    pl = _pair_lookup(c)
    strands = tuple(sorted(tuple(s) for s in strands))
    horizontals = tuple(sorted(tuple(sorted(h)) for h in horizontals))
    sources = [s for s, _ in strands]
    targets = [t for _, t in strands]
    for s, t in strands:
        if s not in pl or t not in pl:
            raise ValueError(f"strand {s}->{t} leaves the marked points")
        if s >= t:
            raise ValueError(f"strand {s}->{t} does not move up")
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        raise ValueError("strands share a source or a target")
    if len({pl[s] for s in sources}) != len(sources):
        raise ValueError("two sources on the same matched pair")
    if len({pl[t] for t in targets}) != len(targets):
        raise ValueError("two targets on the same matched pair")
    touched = {pl[s] for s in sources} | {pl[t] for t in targets}
    for h in horizontals:
        if h not in c.matching:
            raise ValueError(f"{h} is not a matched pair")
        if h in touched:
            raise ValueError(f"horizontal {h} meets a strand endpoint")
    if len(set(horizontals)) != len(horizontals):
        raise ValueError("duplicate horizontal pair")
    return StrandDiagram(strands, horizontals)


def source_idem(c: PointedMatchedCircle, d: StrandDiagram) -> frozenset:
    """Occupied pairs on the left: pairs of sources plus horizontals."""
    pl = _pair_lookup(c)
    return frozenset(pl[s] for s, _ in d.strands) | frozenset(d.horizontals)


def target_idem(c: PointedMatchedCircle, d: StrandDiagram) -> frozenset:
    pl = _pair_lookup(c)
    return frozenset(pl[t] for _, t in d.strands) | frozenset(d.horizontals)


def idempotent_diagram(pairs: Iterable[tuple[int, int]]) -> StrandDiagram:
    return StrandDiagram((), tuple(sorted(pairs)))


# --- primitive calculus --------------------------------------------------

def expansions(d: StrandDiagram) -> tuple[Primitive, ...]:
    """The 2^h primitives of d: one constant strand per horizontal pair."""
    if not d.horizontals:
        return (d.strands,)
    out = []
    for choice in itertools.product(*d.horizontals):
        out.append(tuple(sorted(d.strands + tuple((p, p) for p in choice))))
    return tuple(out)


def _concat(p: Primitive, q: Primitive) -> Primitive | None:
    """Concatenate primitives, or None on mismatch or a double crossing."""
    if sorted(t for _, t in p) != sorted(s for s, _ in q):
        return None
    follow = dict(q)
    triples = [(s, t, follow[t]) for s, t in p]  # already sorted by s
    n = len(triples)
    for i in range(n):
        s1, t1, u1 = triples[i]
        for j in range(i + 1, n):
            s2, t2, u2 = triples[j]
            # s1 < s2; crossed in the left half and again in the right half
            if t1 > t2 and u1 < u2:
                return None
    return tuple(sorted((s, u) for s, _, u in triples))


def _inversions(prim) -> int:
    count = 0
    n = len(prim)
    for i in range(n):
        for j in range(i + 1, n):
            if prim[i][1] > prim[j][1]:
                count += 1
    return count


def _resolutions(prim: Primitive) -> list[Primitive]:
    """Resolve each crossing; keep only drops of exactly one crossing."""
    base = _inversions(prim)
    out = []
    strands = list(prim)
    n = len(strands)
    for i in range(n):
        for j in range(i + 1, n):
            if strands[i][1] > strands[j][1]:
                new = list(strands)
                new[i] = (strands[i][0], strands[j][1])
                new[j] = (strands[j][0], strands[i][1])
                if _inversions(new) == base - 1:
                    out.append(tuple(sorted(new)))
    return out


def _regroup(c: PointedMatchedCircle, prims: set[Primitive]) -> frozenset:
    """Collect a mod-2 sum of primitives back into grouped diagrams.

    Every constant strand must sit on a pair whose full orbit of expansion
    siblings is present; the strand algebra is closed under its operations,
    so failure here signals a bug rather than bad input.
    """
    pl = _pair_lookup(c)
    work = set(prims)
    out = []
    while work:
        prim = min(work)
        movers = tuple(s for s in prim if s[0] != s[1])
        consts = [s for s, t in prim if s == t]
        horizontals = tuple(sorted(pl[p] for p in consts))
        if len(set(horizontals)) != len(horizontals):
            raise ArithmeticError("two constants on one matched pair")
        diag = StrandDiagram(movers, horizontals)
        members = set(expansions(diag))
        if not members <= work:
            raise ArithmeticError("primitive sum does not regroup")
        work -= members
        out.append(diag)
    return frozenset(out)


# --- algebra operations --------------------------------------------------

def multiply(c: PointedMatchedCircle, a: StrandDiagram,
             b: StrandDiagram) -> frozenset:
    """Product of two diagrams as a GF(2) set of diagrams.

    Zero (the empty set) when the target idempotent of a differs from the
    source idempotent of b, and whenever no expansion concatenates.
    """
    if target_idem(c, a) != source_idem(c, b):
        return frozenset()
    acc: set[Primitive] = set()
    for p in expansions(a):
        for q in expansions(b):
            comp = _concat(p, q)
            if comp is not None:
                acc ^= {comp}
    return _regroup(c, acc)


def differential(c: PointedMatchedCircle, a: StrandDiagram) -> frozenset:
    """Sum of the admissible crossing resolutions of a."""
    acc: set[Primitive] = set()
    for p in expansions(a):
        for res in _resolutions(p):
            acc ^= {res}
    return _regroup(c, acc)


def enumerate_basis(c: PointedMatchedCircle) -> tuple[StrandDiagram, ...]:
    """All basis diagrams over c, canonically ordered.

    The order is lexicographic on (occupied pair count, strand list,
    horizontal list) so that reports and golden files are stable.
    """
    return _enumerate_cached(c)


@lru_cache(maxsize=None)
def _enumerate_cached(c: PointedMatchedCircle) -> tuple[StrandDiagram, ...]:
    pl = _pair_lookup(c)
    points = list(c.points)
    out = []
    for k in range(0, 2 * c.genus + 1):
        for sources in itertools.combinations(points, k):
            if len({pl[s] for s in sources}) < k:
                continue
            for targets in itertools.permutations(points, k):
                if any(t <= s for s, t in zip(sources, targets)):
                    continue
                if len({pl[t] for t in targets}) < k:
                    continue
                strands = tuple(sorted(zip(sources, targets)))
                touched = {pl[x] for x in sources}
                touched |= {pl[x] for x in targets}
                free = [p for p in c.matching if p not in touched]
                for r in range(len(free) + 1):
                    for horiz in itertools.combinations(free, r):
                        out.append(StrandDiagram(strands, tuple(horiz)))
    out.sort(key=lambda d: (d.occupied, d.strands, d.horizontals))
    return tuple(out)


# --- printable names -----------------------------------------------------

_NAME_TOKEN = re.compile(r"r\[(\d+)-(\d+)\]|h\((\d+) (\d+)\)")


def diagram_name(d: StrandDiagram) -> str:
    """Canonical text form: `r[1-2]` strands then `h(1 3)` horizontals,
    juxtaposed; the empty diagram is `e`."""
    if not d.strands and not d.horizontals:
        return "e"
    parts = [f"r[{s}-{t}]" for s, t in d.strands]
    parts += [f"h({a} {b})" for a, b in d.horizontals]
    return "".join(parts)


def parse_diagram_name(name: str) -> StrandDiagram:
    if name == "e":
        return StrandDiagram()
    strands = []
    horizontals = []
    pos = 0
    while pos < len(name):
        m = _NAME_TOKEN.match(name, pos)
        if m is None:
            raise ValueError(f"bad diagram name {name!r} at offset {pos}")
        if m.group(1) is not None:
            strands.append((int(m.group(1)), int(m.group(2))))
        else:
            horizontals.append((int(m.group(3)), int(m.group(4))))
        pos = m.end()
    return StrandDiagram(tuple(sorted(strands)), tuple(sorted(horizontals)))


# --- packaged differential graded algebras -------------------------------

EMPTY: frozenset = frozenset()


class DGAlgebra:
    """A finite-basis differential graded algebra over GF(2).

    Elements are frozensets of basis indices.  Each basis element carries a
    left (source) and right (target) idempotent, themselves basis indices.
    The multiplication table may be backed by a closure and filled on
    demand; missing entries mean zero.
    """

    def __init__(self, basis_names, idempotents, left_idem, right_idem,
                 diff, mult=None, mult_fn: Callable[[int, int], frozenset] | None = None,
                 idem_graded: bool | None = None, label: str = ""):
        self.basis_names = tuple(basis_names)
        self.idempotents = tuple(idempotents)
        self.left_idem = tuple(left_idem)
        self.right_idem = tuple(right_idem)
        self.label = label
        self._diff = dict(diff)
        self._mult = {} if mult is None else dict(mult)
        self._mult_fn = mult_fn
        self._materialized = mult_fn is None
        self._index = {n: i for i, n in enumerate(self.basis_names)}
        self._codiff = None
        self._factor_indexes = None
        n = self.size
        if len(self.left_idem) != n or len(self.right_idem) != n:
            raise ValueError("idempotent assignment length mismatch")
        if idem_graded is None:
            idem_graded = self._scan_idem_graded()
        self.idem_graded = idem_graded

    @property
    def size(self) -> int:
        return len(self.basis_names)

    def index(self, name: str) -> int:
        return self._index[name]

    def name(self, i: int) -> str:
        return self.basis_names[i]

    def element_name(self, x: frozenset) -> str:
        if not x:
            return "0"
        return " + ".join(self.basis_names[i] for i in sorted(x))

    def is_idempotent(self, i: int) -> bool:
        return i in self.idempotents

    # -- tables --

    def d(self, i: int) -> frozenset:
        return self._diff.get(i, EMPTY)

    def product(self, i: int, j: int) -> frozenset:
        got = self._mult.get((i, j))
        if got is None:
            if self._mult_fn is None:
                return EMPTY
            got = self._mult_fn(i, j)
            self._mult[(i, j)] = got
        return got

    def d_element(self, x: frozenset) -> frozenset:
        out: frozenset = frozenset()
        for i in x:
            out ^= self.d(i)
        return out

    def product_elements(self, x: frozenset, y: frozenset) -> frozenset:
        out: frozenset = frozenset()
        for i in x:
            for j in y:
                out ^= self.product(i, j)
        return out

    # -- derived indexes (used by the morphism complex) --

    def materialize(self) -> None:
        if self._materialized:
            return
        n = self.size
        for i in range(n):
            for j in range(n):
                self.product(i, j)
        self._materialized = True

    @property
    def codiff_index(self) -> dict[int, tuple[int, ...]]:
        """u -> elements a with u in d(a)."""
        if self._codiff is None:
            index: dict[int, list[int]] = {}
            for a in range(self.size):
                for u in self.d(a):
                    index.setdefault(u, []).append(a)
            self._codiff = {u: tuple(sorted(v)) for u, v in index.items()}
        return self._codiff

    def _build_factor_indexes(self):
        self.materialize()
        coproduct: dict[int, list] = {}
        left: dict[tuple[int, int], list[int]] = {}
        right: dict[tuple[int, int], list[int]] = {}
        for (u, v), terms in self._mult.items():
            for w in terms:
                coproduct.setdefault(w, []).append((u, v))
                left.setdefault((w, v), []).append(u)
                right.setdefault((w, u), []).append(v)
        self._factor_indexes = (
            {k: tuple(sorted(v)) for k, v in coproduct.items()},
            {k: tuple(sorted(v)) for k, v in left.items()},
            {k: tuple(sorted(v)) for k, v in right.items()},
        )

    @property
    def coproduct_index(self) -> dict[int, tuple]:
        """w -> ordered pairs (u, v) with w in u.v (materializes products)."""
        if self._factor_indexes is None:
            self._build_factor_indexes()
        return self._factor_indexes[0]

    @property
    def left_factor_index(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """(w, v) -> elements u with w in u.v."""
        if self._factor_indexes is None:
            self._build_factor_indexes()
        return self._factor_indexes[1]

    @property
    def right_factor_index(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """(w, u) -> elements v with w in u.v."""
        if self._factor_indexes is None:
            self._build_factor_indexes()
        return self._factor_indexes[2]

    def _scan_idem_graded(self) -> bool:
        """True when d and the known products preserve idempotents."""
        for i, terms in self._diff.items():
            for t in terms:
                if (self.left_idem[t] != self.left_idem[i]
                        or self.right_idem[t] != self.right_idem[i]):
                    return False
        for (i, j), terms in self._mult.items():
            for t in terms:
                if (self.left_idem[t] != self.left_idem[i]
                        or self.right_idem[t] != self.right_idem[j]):
                    return False
        return True

    def __repr__(self):
        tag = self.label or f"{self.size} generators"
        return f"DGAlgebra({tag})"


def build_dga(c: PointedMatchedCircle, label: str = "") -> DGAlgebra:
    """Package the strand algebra of c as a DGAlgebra.

    The basis is enumerate_basis(c); the differential table is filled
    eagerly, products on first use.  Products and differentials preserve
    source/target idempotents by construction, so the algebra is flagged
    idempotent-graded without a table scan.
    """
    basis = enumerate_basis(c)
    names = [diagram_name(d) for d in basis]
    index = {d: i for i, d in enumerate(basis)}
    idem_index = {}
    for i, d in enumerate(basis):
        if not d.strands:
            idem_index[frozenset(d.horizontals)] = i
    left = [idem_index[source_idem(c, d)] for d in basis]
    right = [idem_index[target_idem(c, d)] for d in basis]
    diff = {}
    for i, d in enumerate(basis):
        terms = differential(c, d)
        if terms:
            diff[i] = frozenset(index[t] for t in terms)

    def mult_fn(i: int, j: int) -> frozenset:
        return frozenset(index[t] for t in multiply(c, basis[i], basis[j]))

    idempotents = sorted(idem_index.values())
    return DGAlgebra(names, idempotents, left, right, diff,
                     mult_fn=mult_fn, idem_graded=True,
                     label=label or f"A(genus {c.genus})")


# --- verification ---------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    exhaustive: bool
    tested: int
    witnesses: tuple = ()


@dataclass(frozen=True)
class DGAReport:
    label: str
    budget: int
    seed: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def payload(self) -> dict:
        return {
            "label": self.label,
            "budget": self.budget,
            "seed": self.seed,
            "passed": self.passed,
            "checks": {
                c.name: {
                    "passed": c.passed,
                    "exhaustive": c.exhaustive,
                    "tested": c.tested,
                    "witnesses": [list(w) for w in c.witnesses[:5]],
                }
                for c in self.checks
            },
        }


def _run_chunks(items, worker, threads):
    if threads <= 1 or len(items) < 2 * threads:
        return [worker(items)]
    size = (len(items) + threads - 1) // threads
    chunks = [items[k:k + size] for k in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, chunks))


def verify_dga(A: DGAlgebra, sample_budget: int = 10 ** 6,
               seed: int = 0, threads: int = 1) -> DGAReport:
    """Check d^2 = 0, Leibniz, associativity and the idempotent axioms.

    d^2 and the idempotent axioms are always exhaustive.  Leibniz runs over
    all pairs when size^2 <= sample_budget and over sample_budget uniform
    pairs otherwise; associativity does the same with triples.  Sampling is
    seeded, so reports are deterministic; failing checks carry up to five
    witnesses of offending generators, in canonical order.
    """
    n = A.size
    checks = []

    def d2_worker(indices):
        fails = []
        for i in indices:
            if A.d_element(A.d(i)):
                fails.append((A.name(i),))
        return fails

    fails = [w for part in _run_chunks(range(n), d2_worker, threads)
             for w in part]
    checks.append(CheckResult("d_squared", not fails, True, n,
                              tuple(sorted(fails))))

    exhaustive_pairs = n * n <= sample_budget
    if exhaustive_pairs:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    else:
        rng = Random(seed)
        pairs = [(rng.randrange(n), rng.randrange(n))
                 for _ in range(sample_budget)]

    def leibniz_worker(items):
        fails = []
        for i, j in items:
            lhs = A.d_element(A.product(i, j))
            rhs = A.product_elements(A.d(i), frozenset((j,)))
            rhs ^= A.product_elements(frozenset((i,)), A.d(j))
            if lhs != rhs:
                fails.append((A.name(i), A.name(j)))
        return fails

    fails = [w for part in _run_chunks(pairs, leibniz_worker, threads)
             for w in part]
    checks.append(CheckResult("leibniz", not fails, exhaustive_pairs,
                              len(pairs), tuple(sorted(set(fails)))))

    exhaustive_triples = n ** 3 <= sample_budget
    if exhaustive_triples:
        triples = [(i, j, k) for i in range(n) for j in range(n)
                   for k in range(n)]
    else:
        rng = Random(seed + 1)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(sample_budget)]

    def assoc_worker(items):
        fails = []
        for i, j, k in items:
            lhs = A.product_elements(A.product(i, j), frozenset((k,)))
            rhs = A.product_elements(frozenset((i,)), A.product(j, k))
            if lhs != rhs:
                fails.append((A.name(i), A.name(j), A.name(k)))
        return fails

    fails = [w for part in _run_chunks(triples, assoc_worker, threads)
             for w in part]
    checks.append(CheckResult("associativity", not fails, exhaustive_triples,
                              len(triples), tuple(sorted(set(fails)))))

    fails = []
    tested = 0
    unit = frozenset(A.idempotents)
    for u in A.idempotents:
        for v in A.idempotents:
            tested += 1
            expect = frozenset((u,)) if u == v else frozenset()
            if A.product(u, v) != expect:
                fails.append((A.name(u), A.name(v)))
    for a in range(n):
        tested += 2
        one = frozenset((a,))
        if A.product_elements(unit, one) != one:
            fails.append(("unit.left", A.name(a)))
        if A.product_elements(one, unit) != one:
            fails.append(("unit.right", A.name(a)))
    checks.append(CheckResult("idempotents", not fails, True, tested,
                              tuple(sorted(fails))))

    return DGAReport(A.label, sample_budget, seed, tuple(checks))
