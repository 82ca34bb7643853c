"""Box tensor products of type DA bimodules and of their morphisms.

For N over (A1, A2) and M over (A2, A3), the product N . M is a bimodule
over (A1, A3).  Its generators are the idempotent-matched pairs (x, y)
(right idempotent of x = left idempotent of y); pairs that do not match
are excluded.  Its structure table feeds M's outputs into N:

    D1((x, y), a) = sum over realizations of a as a chain:
        split a into consecutive (possibly empty) chunks, apply M's table
        to successive chunks starting at y, collect the A2 outputs
        c_1..c_i and the final generator y'; then look up N's table once
        at (x, (c_1..c_i)) and emit each output b (x) (x', y').

The i = 0 realization contributes N's input-free entries paired with y
unchanged.  Chains longer than N's arity bound cannot hit N's table, so
the sum is finite; a step budget additionally guards pathological tables
(exceeding it raises NonConverging rather than hanging).

Morphisms tensor one side at a time: F . I consumes the whole M-chain in
a single application of F's table, and I . G routes the inputs through
M-iterates, exactly one application of G, then M'-iterates, feeding the
concatenated A2 chain into N's table once.  F . G is the composition
(I . G) o (F . I), matching the 2-functor conventions used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bimodules import Key, TypeDABimodule
from .errors import MiddleAlgebraMismatch, NonConverging
from .morphisms import DAMorphism

Pair = tuple[int, int]


@dataclass(frozen=True)
class BoxGeneratorLabel:
    left_part: str
    right_part: str

    @property
    def name(self) -> str:
        return f"{self.left_part}|{self.right_part}"


def _default_budget(N: TypeDABimodule, M: TypeDABimodule) -> int:
    return max(1, N.right_algebra.size * M.size * (N.arity_bound + 1))


def _matched_pairs(N: TypeDABimodule, M: TypeDABimodule) -> list[Pair]:
    return [(i, j)
            for i in range(N.size) for j in range(M.size)
            if N.gens[i].right == M.gens[j].left]


def _chain_states(M: TypeDABimodule, start: int, max_chain: int,
                  budget: int, steps: list[int]):
    """All (generator, consumed inputs, A2 chain) states reachable from
    start by applying M's table to consecutive chunks; includes the
    zero-application state.  Deterministic order; counts steps against
    the budget."""
    states = [(start, (), ())]
    frontier = [(start, (), ())]
    while frontier:
        new = []
        for y, seq, chain in frontier:
            if len(chain) >= max_chain:
                continue
            for chunk, outs in M.entries_by_generator.get(y, ()):
                for c, y2 in sorted(outs):
                    steps[0] += 1
                    if steps[0] > budget:
                        raise NonConverging(
                            f"box evaluation exceeded {budget} steps; "
                            "the interaction of the tables is unbounded")
                    state = (y2, seq + chunk, chain + (c,))
                    new.append(state)
        states.extend(new)
        frontier = new
    return states


def box_bimodules(N: TypeDABimodule, M: TypeDABimodule,
                  step_budget: int | None = None,
                  label: str = "") -> TypeDABimodule:
    """The box tensor product of bimodules (see module docstring)."""
    if N.right_algebra is not M.left_algebra:
        raise MiddleAlgebraMismatch(
            "right algebra of the left factor differs from the left "
            "algebra of the right factor")
    budget = _default_budget(N, M) if step_budget is None else step_budget
    pairs = _matched_pairs(N, M)
    pos = {p: k for k, p in enumerate(pairs)}
    gens = [(BoxGeneratorLabel(N.gens[i].name, M.gens[j].name).name,
             N.gens[i].left, M.gens[j].right) for i, j in pairs]

    # outputs on unmatched pairs vanish: over the idempotent ground ring
    # x' (x) y' is zero unless the inner idempotents agree
    table: dict[Key, set] = {}
    for i, j in pairs:
        key_gen = pos[(i, j)]
        steps = [0]
        for y, seq, chain in _chain_states(M, j, N.arity_bound,
                                           budget, steps):
            for b, i2 in N.entry(i, chain):
                out = pos.get((i2, y))
                if out is None:
                    continue
                bucket = table.setdefault((key_gen, seq), set())
                bucket ^= {(b, out)}

    from .bimodules import make_bimodule
    return make_bimodule(
        N.left_algebra, M.right_algebra, gens,
        {k: v for k, v in table.items() if v},
        label=label or f"{N.label}.{M.label}")


def box_morphism_left(F: DAMorphism, M: TypeDABimodule,
                      step_budget: int | None = None) -> DAMorphism:
    """F . I : (N . M) -> (N' . M) for F : N -> N'."""
    N, N2 = F.source, F.target
    if N.right_algebra is not M.left_algebra:
        raise MiddleAlgebraMismatch(
            "morphism algebras do not compose with the right factor")
    source = box_bimodules(N, M, step_budget)
    target = box_bimodules(N2, M, step_budget)
    budget = (max(1, N.right_algebra.size * M.size * (F.arity_bound + 1))
              if step_budget is None else step_budget)
    pos_s = {p: k for k, p in enumerate(_matched_pairs(N, M))}
    pos_t = {p: k for k, p in enumerate(_matched_pairs(N2, M))}

    table: dict[Key, set] = {}
    for (i, j), key in pos_s.items():
        steps = [0]
        for y, seq, chain in _chain_states(M, j, F.arity_bound,
                                           budget, steps):
            for b, i2 in F.entry(i, chain):
                out = pos_t.get((i2, y))
                if out is None:
                    continue  # zero over the idempotent ground ring
                bucket = table.setdefault((key, seq), set())
                bucket ^= {(b, out)}

    from .morphisms import make_morphism
    return make_morphism(source, target,
                         {k: v for k, v in table.items() if v},
                         label=f"{F.label}.id" if F.label else "")


def box_morphism_right(N: TypeDABimodule, G: DAMorphism,
                       step_budget: int | None = None) -> DAMorphism:
    """I . G : (N . M) -> (N . M') for G : M -> M'."""
    M, M2 = G.source, G.target
    if N.right_algebra is not M.left_algebra:
        raise MiddleAlgebraMismatch(
            "left factor does not compose with the morphism algebras")
    source = box_bimodules(N, M, step_budget)
    target = box_bimodules(N, M2, step_budget)
    budget = (max(1, N.right_algebra.size * (M.size + M2.size)
                  * (N.arity_bound + 1))
              if step_budget is None else step_budget)
    pos_s = {p: k for k, p in enumerate(_matched_pairs(N, M))}
    pos_t = {p: k for k, p in enumerate(_matched_pairs(N, M2))}
    g_by_gen: dict[int, list] = {}
    for (y, seq), outs in G.table.items():
        g_by_gen.setdefault(y, []).append((seq, outs))
    for v in g_by_gen.values():
        v.sort()

    table: dict[Key, set] = {}
    for (i, j), key in pos_s.items():
        steps = [0]
        # M-iterates, one G application, then M'-iterates
        for y1, seq1, chain1 in _chain_states(M, j, max(N.arity_bound - 1, 0),
                                              budget, steps):
            for seq_g, outs_g in g_by_gen.get(y1, ()):
                for g, y2 in sorted(outs_g):
                    mid_chain = chain1 + (g,)
                    if len(mid_chain) > N.arity_bound:
                        continue
                    for y3, seq3, chain3 in _chain_states(
                            M2, y2,
                            N.arity_bound - len(mid_chain),
                            budget, steps):
                        chain = mid_chain + chain3
                        for b, i2 in N.entry(i, chain):
                            out = pos_t.get((i2, y3))
                            if out is None:
                                continue  # zero over the idempotent ring
                            bucket = table.setdefault(
                                (key, seq1 + seq_g + seq3), set())
                            bucket ^= {(b, out)}

    from .morphisms import make_morphism
    return make_morphism(source, target,
                         {k: v for k, v in table.items() if v},
                         label=f"id.{G.label}" if G.label else "")


def box_morphisms(F: DAMorphism, G: DAMorphism,
                  step_budget: int | None = None) -> DAMorphism:
    """F . G = (I . G) o (F . I)."""
    from .morphisms import compose
    left = box_morphism_left(F, G.source, step_budget)
    right = box_morphism_right(F.target, G, step_budget)
    return compose(right, left)
