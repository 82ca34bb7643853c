"""Box tensor products of bimodules and morphisms."""

from random import Random

import pytest

from strandcalc.bimodules import (check_structure, homology,
                                  identity_bimodule, make_bimodule)
from strandcalc.circles import torus_circle
from strandcalc.errors import MiddleAlgebraMismatch, NonConverging
from strandcalc.morphisms import (compose, identity_morphism, is_closed,
                                  is_homotopic, morphism_differential,
                                  same_shape, zero_morphism)
from strandcalc.boxes import (box_bimodules, box_morphism_left,
                              box_morphism_right, box_morphisms)
from strandcalc.strands import build_dga

from helpers import random_chained_table

A = build_dga(torus_circle(), label="A")
I = identity_bimodule(A, label="I")
I0 = A.index("h(1 3)")

# the two-generator bimodule with an input-free differential entry
M2 = make_bimodule(A, A, [("u", I0, I0), ("v", I0, I0)],
                   {(0, ()): [(I0, 1)]}, label="M2")


def rand_closed(rng, cap=1, density=4):
    return identity_morphism(I) + morphism_differential(
        random_chained_table(rng, I, I, cap, density))


class TestBoxBimodules:
    def test_identity_box_identity_is_identity(self):
        B = box_bimodules(I, I)
        assert same_shape(B, I)
        # the canonical relabeling is the diagonal
        assert [g.name for g in B.gens] == \
            [f"{g.name}|{g.name}" for g in I.gens]

    def test_single_input_entry(self):
        B = box_bimodules(I, I)
        r1 = A.index("r[1-2]")
        x = B.gen_index("h(1 3)|h(1 3)")
        y = B.gen_index("h(2 4)|h(2 4)")
        assert B.entry(x, (r1,)) == frozenset(((r1, y),))

    def test_unit_laws_exact(self):
        for M in (I, M2):
            left = box_bimodules(identity_bimodule(A), M)
            right = box_bimodules(M, identity_bimodule(A))
            assert same_shape(left, M)
            assert same_shape(right, M)

    def test_zero_table_factor(self):
        Z = make_bimodule(A, A, [("z", I0, I0)], {})
        B = box_bimodules(I, Z)
        assert B.size == 1 and not B.d1

    def test_structure_passes_on_boxes(self):
        for N, M in ((I, I), (I, M2), (M2, I)):
            assert check_structure(box_bimodules(N, M)).passed

    def test_strict_associativity(self):
        for triple in ((I, I, I), (I, M2, I), (M2, I, I), (I, I, M2)):
            N, M, P = triple
            left = box_bimodules(box_bimodules(N, M), P)
            right = box_bimodules(N, box_bimodules(M, P))
            assert left.d1 == right.d1
            assert [(g.left, g.right) for g in left.gens] == \
                [(g.left, g.right) for g in right.gens]

    def test_homology_preserved(self):
        assert homology(box_bimodules(I, I)) == homology(I) == 10

    def test_middle_algebra_checked(self):
        B = build_dga(torus_circle(), label="B")
        J = identity_bimodule(B)
        with pytest.raises(MiddleAlgebraMismatch):
            box_bimodules(I, J)

    def test_step_budget_enforced(self):
        with pytest.raises(NonConverging):
            box_bimodules(I, I, step_budget=0)


class TestBoxMorphismLeft:
    def test_identity_gives_identity(self):
        FI = box_morphism_left(identity_morphism(I), I)
        assert FI == identity_morphism(FI.source)

    def test_null_homotopy_transported(self):
        rng = Random(20)
        H = random_chained_table(rng, I, I, 1, 4)
        dH = morphism_differential(H)
        boxed = box_morphism_left(dH, I)
        assert is_closed(boxed)
        result = is_homotopic(boxed, zero_morphism(boxed.source,
                                                   boxed.target), 4)
        assert result

    def test_differential_commutes_with_boxing(self):
        # d(H box I) = (dH) box I: H box I is itself a witness
        rng = Random(27)
        for _ in range(10):
            H = random_chained_table(rng, I, I, 1, 4)
            lhs = morphism_differential(box_morphism_left(H, I))
            rhs = box_morphism_left(morphism_differential(H), I)
            assert lhs.table == rhs.table

    def test_arity_zero_part_matches_tensor(self):
        rng = Random(21)
        F = rand_closed(rng)
        boxed = box_morphism_left(F, I)
        # on pairs (x, y), the input-free action is F's with y carried along
        for (x, seq), outs in F.table.items():
            if seq:
                continue
            for b, x2 in outs:
                for j, g in enumerate(I.gens):
                    if I.gens[x].right != g.left:
                        continue
                    src = boxed.source.gen_index(
                        f"{F.source.gens[x].name}|{g.name}")
                    tgt = boxed.target.gen_index(
                        f"{F.target.gens[x2].name}|{g.name}")
                    assert (b, tgt) in boxed.entry(src, ())


class TestBoxMorphismRight:
    def test_identity_gives_identity(self):
        IG = box_morphism_right(I, identity_morphism(I))
        assert IG == identity_morphism(IG.source)

    def test_arity_zero_transport(self):
        rng = Random(22)
        G = rand_closed(rng, cap=0)
        IG = box_morphism_right(I, G)
        for (y, seq), outs in G.table.items():
            if seq:
                continue
            for g, y2 in outs:
                # pair x with matching right idempotent
                for x, xg in enumerate(I.gens):
                    if xg.right != G.source.gens[y].left:
                        continue
                    src = IG.source.gen_index(
                        f"{xg.name}|{G.source.gens[y].name}")
                    entry = IG.entry(src, ())
                    names = {(IG.source.left_algebra.name(b),
                              IG.target.gens[z].name) for b, z in entry}
                    assert (A.name(g),
                            f"{A.name(A.right_idem[g])}|"
                            f"{G.target.gens[y2].name}") in names

    def test_closedness_preserved(self):
        rng = Random(23)
        for _ in range(5):
            G = rand_closed(rng)
            assert is_closed(box_morphism_right(I, G))


class TestBoxMorphisms:
    def test_identity_box_identity(self):
        FG = box_morphisms(identity_morphism(I), identity_morphism(I))
        assert FG == identity_morphism(FG.source)

    def test_closed_for_closed_inputs(self):
        rng = Random(24)
        for _ in range(10):
            F, G = rand_closed(rng), rand_closed(rng)
            assert is_closed(box_morphisms(F, G))

    def test_lemma_one_consequence_homotopy_invariance(self):
        # replacing F by a homotopic morphism changes F box G by a homotopy
        rng = Random(25)
        F = rand_closed(rng, cap=0)
        G = rand_closed(rng, cap=0)
        H = random_chained_table(rng, I, I, 1, 3)
        F2 = F + morphism_differential(H)
        lhs = box_morphisms(F, G)
        rhs = box_morphisms(F2, G)
        assert is_homotopic(lhs, rhs, 4)

    def test_lemma_two_interchange(self):
        rng = Random(26)
        for _ in range(5):
            F, F2 = rand_closed(rng, 0, 3), rand_closed(rng, 0, 3)
            G, G2 = rand_closed(rng, 0, 3), rand_closed(rng, 0, 3)
            lhs = box_morphisms(compose(F2, F), compose(G2, G))
            rhs = compose(box_morphisms(F2, G2), box_morphisms(F, G))
            result = is_homotopic(lhs, rhs, 4)
            assert result


class TestPairingSanity:
    def test_identity_box_identity_homology(self):
        assert homology(box_bimodules(I, I)) == homology(I)

    def test_canonical_comparison_is_naive_quasi_iso(self):
        # I.I -> I sending (i, i) to i with unit output: an isomorphism
        # of tables, hence a naive quasi-isomorphism
        from strandcalc.morphisms import is_naive_quasi_iso, make_morphism
        B = box_bimodules(I, I)
        table = {(x, ()): [(B.gens[x].left, x)] for x in range(B.size)}
        F = make_morphism(B, I, table)
        assert is_closed(F)
        assert is_naive_quasi_iso(F)
