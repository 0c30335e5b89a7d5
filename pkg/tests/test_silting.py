"""Two-term complexes: construction, hom spaces, reduction, decomposition,
mutation, completion, and the enumeration of the silting order."""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from torslat.algebras import Quiver, build_algebra
from torslat.errors import (
    CapExceeded,
    ConeNotTwoTerm,
    IndexOutOfRange,
    NotPresilting,
    NotSilting,
    ParseError,
    ShapeMismatch,
)
from torslat.silting import (
    SiltingObject,
    bongartz_complete,
    check_presilting_family,
    check_silting_module,
    complexes_isomorphic,
    decompose,
    direct_sum,
    enumerate_2silt,
    g_vector,
    h0_dim_vector,
    hom_k_basis,
    hom_k_dim,
    hom_shift1_dim,
    is_presilting,
    is_silting,
    is_tau_tilting_finite,
    lambda_complex,
    lambda_shifted,
    mutate,
    parse_complex,
    reduce_complex,
    silting_lambda,
    stalk,
    summand_g_key,
    tors_lattice,
    two_term,
)

A1 = build_algebra(Quiver(["1"], []), [])
A2 = build_algebra(Quiver(["1", "2"], [("a", "1", "2")]), [])
A3 = build_algebra(
    Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]), []
)
KK = build_algebra(Quiver(["1", "2"], []), [])
DUAL = build_algebra(
    Quiver(["1"], [("e", "1", "1")]), [[(1, ["e", "e"])]]
)
BG = build_algebra(
    Quiver(["1", "2"], [("b", "1", "2"), ("g", "2", "1")]),
    [[(1, ["b", "g"])]],
)
KRON = build_algebra(
    Quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]), []
)


def s1_presentation():
    # the radical cover of the first projective; cokernel is the simple S1
    return parse_complex(A2, "P = [e2] -> [e1] ; d = [[1*a]]")


def contractible():
    return parse_complex(A2, "P = [e1] -> [e1] ; d = [[1*e1]]")


@pytest.fixture(scope="module")
def pentagon():
    return enumerate_2silt(A2)


# the five objects of the A2 order, named by their g-vector key
M_LAMBDA = "[(0,1),(1,0)]"
M1 = "[(1,-1),(1,0)]"
M2 = "[(-1,0),(0,1)]"
M3 = "[(0,-1),(1,-1)]"
M4 = "[(-1,0),(0,-1)]"


@st.composite
def bg_two_term(draw):
    """Random two-term complex over the cyclic two-vertex algebra."""
    nv = len(BG.quiver.vertices)
    minus = draw(st.lists(st.integers(0, nv - 1), max_size=2))
    zero = draw(st.lists(st.integers(0, nv - 1), max_size=2))
    entries = []
    for r in range(len(zero)):
        row = []
        for c in range(len(minus)):
            cell = {}
            for b in BG.corner_indices(minus[c], zero[r]):
                x = draw(st.integers(-2, 2))
                if x:
                    cell[b] = Fraction(x)
            row.append(cell)
        entries.append(row)
    return two_term(BG, minus, zero, entries)


class TestConstruction:
    def test_two_term_matches_parsed_literal(self):
        a = A2.arrow_element("a")
        built = two_term(A2, ["2"], ["1"], [[a]])
        assert built.key() == s1_presentation().key()

    def test_entry_in_wrong_corner_rejected(self):
        a = A2.arrow_element("a")
        with pytest.raises(ShapeMismatch):
            two_term(A2, ["1"], ["2"], [[a]])

    def test_wrong_row_count_rejected(self):
        with pytest.raises(ShapeMismatch):
            two_term(A2, ["2"], ["1", "1"], [[0]])

    def test_wrong_column_count_rejected(self):
        with pytest.raises(ShapeMismatch):
            two_term(A2, ["2", "2"], ["1"], [[0]])

    def test_stalk_degrees(self):
        P = stalk(A2, [0], 0)
        assert P.degrees() == (0,)
        assert stalk(A2, [0], -1).degrees() == (-1,)

    def test_lambda_complexes(self):
        assert g_vector(lambda_complex(A2)) == (1, 1)
        assert g_vector(lambda_shifted(A2)) == (-1, -1)

    def test_shift_round_trip(self):
        X = s1_presentation()
        assert X.shift(1).shift(-1).key() == X.key()
        assert X.shift(1).degrees() == (-2, -1)

    def test_shift_negates_odd(self):
        X = s1_presentation()
        Y = X.shift(1).shift(1)
        # double shift restores the signs
        assert Y.diff_at(-3) == X.diff_at(-1)

    def test_direct_sum_size(self):
        X = s1_presentation()
        S = direct_sum([X, stalk(A2, [0], 0)])
        assert S.size() == 3
        assert S.summands_at(0) == (0, 0)
        assert S.summands_at(-1) == (1,)

    def test_direct_sum_rejects_all_zero(self):
        with pytest.raises(ValueError):
            direct_sum([two_term(A2, [], [], [])])

    def test_parse_rejects_garbage(self):
        with pytest.raises(ParseError):
            parse_complex(A2, "nope")

    def test_parse_rejects_unknown_summand(self):
        with pytest.raises(ParseError):
            parse_complex(A2, "P = [e9] -> [e1] ; d = [[1*a]]")

    def test_parse_rejects_row_mismatch(self):
        with pytest.raises(ParseError):
            parse_complex(A2, "P = [e2] -> [e1, e1] ; d = [[1*a]]")

    def test_parse_empty_minus(self):
        P = parse_complex(A2, "P = [] -> [e2] ; d = [[]]")
        assert P.degrees() == (0,)
        assert g_vector(P) == (0, 1)


class TestGVectorsAndCohomology:
    def test_g_vector_examples(self):
        X = s1_presentation()
        assert g_vector(X) == (1, -1)
        assert g_vector(stalk(A2, [0], 0)) == (1, 0)
        assert g_vector(stalk(A2, [1], -1)) == (0, -1)

    def test_g_vector_needs_two_term(self):
        with pytest.raises(ShapeMismatch):
            g_vector(s1_presentation().shift(1))

    def test_h0_examples(self):
        assert h0_dim_vector(A2, s1_presentation()) == (1, 0)
        assert h0_dim_vector(A2, stalk(A2, [1], 0)) == (0, 1)
        assert h0_dim_vector(A2, lambda_complex(A2)) == (1, 2)
        assert h0_dim_vector(A2, lambda_shifted(A2)) == (0, 0)

    def test_summand_g_key(self):
        S = direct_sum([s1_presentation(), stalk(A2, [0], 0)])
        assert summand_g_key(A2, S) == ((1, -1), (1, 0))

    @given(bg_two_term(), bg_two_term())
    @settings(max_examples=40, deadline=None)
    def test_g_vector_additive(self, C, D):
        assume(not C.is_zero() and not D.is_zero())
        total = g_vector(direct_sum([C, D]))
        assert total == tuple(
            a + b for a, b in zip(g_vector(C), g_vector(D))
        )


class TestHomSpaces:
    def test_endomorphisms_of_free_module(self):
        L = lambda_complex(A2)
        assert hom_k_dim(A2, L, L) == A2.dim

    def test_endomorphisms_of_radical_map(self):
        X = s1_presentation()
        assert hom_k_dim(A2, X, X) == 1

    def test_hom_from_free_counts_cohomology(self):
        X = s1_presentation()
        assert hom_k_dim(A2, lambda_complex(A2), X) == 1
        assert hom_k_dim(A2, X, lambda_complex(A2)) == 0

    def test_hom_shift1_examples(self):
        X = s1_presentation()
        assert hom_shift1_dim(A2, X, stalk(A2, [1], 0)) == 1
        assert hom_shift1_dim(A2, X, X) == 0
        assert hom_shift1_dim(A2, stalk(A2, [0], 0), X) == 0

    def test_hom_shift1_rejects_other_algebra(self):
        with pytest.raises(ShapeMismatch):
            hom_shift1_dim(A2, lambda_complex(A2), lambda_complex(A3))

    def test_hom_shift1_rejects_wide_complex(self):
        with pytest.raises(ShapeMismatch):
            hom_shift1_dim(A2, s1_presentation().shift(1), s1_presentation())

    @given(bg_two_term(), bg_two_term())
    @settings(max_examples=30, deadline=None)
    def test_dim_agrees_with_basis_length(self, C, D):
        _, basis = hom_k_basis(BG, C, D)
        assert hom_k_dim(BG, C, D) == len(basis)

    @given(bg_two_term(), bg_two_term())
    @settings(max_examples=30, deadline=None)
    def test_dim_invariant_under_shift(self, C, D):
        assert hom_k_dim(BG, C, D) == hom_k_dim(BG, C.shift(1), D.shift(1))


class TestReduce:
    def test_contractible_vanishes(self):
        assert reduce_complex(A2, contractible()).is_zero()

    def test_contractible_summand_stripped(self):
        X = s1_presentation()
        red = reduce_complex(A2, direct_sum([X, contractible()]))
        assert complexes_isomorphic(A2, red, X)

    def test_radical_map_untouched(self):
        X = s1_presentation()
        assert reduce_complex(A2, X).key() == X.key()

    @given(bg_two_term())
    @settings(max_examples=40, deadline=None)
    def test_idempotent(self, C):
        once = reduce_complex(BG, C)
        twice = reduce_complex(BG, once)
        assert once.key() == twice.key()

    @given(bg_two_term())
    @settings(max_examples=30, deadline=None)
    def test_preserves_hom_probes(self, C):
        red = reduce_complex(BG, C)
        L = lambda_complex(BG)
        assert hom_k_dim(BG, L, C) == hom_k_dim(BG, L, red)
        assert hom_k_dim(BG, C, L) == hom_k_dim(BG, red, L)
        assert hom_k_dim(BG, C, C) == hom_k_dim(BG, red, red)


class TestDecompose:
    def test_free_module_splits_into_stalks(self):
        parts = decompose(A2, lambda_complex(A2))
        assert sorted(g_vector(p) for p in parts) == [(0, 1), (1, 0)]

    def test_square_splits_into_copies(self):
        X = s1_presentation()
        parts = decompose(A2, direct_sum([X, X]))
        assert len(parts) == 2
        assert all(complexes_isomorphic(A2, p, X) for p in parts)

    def test_indecomposable_returned_whole(self):
        X = s1_presentation()
        parts = decompose(A2, X)
        assert len(parts) == 1 and parts[0].key() == X.key()

    def test_zero_complex(self):
        assert decompose(A2, two_term(A2, [], [], [])) == []

    @given(bg_two_term())
    @settings(max_examples=25, deadline=None)
    def test_parts_rebuild_the_whole(self, C):
        red = reduce_complex(BG, C)
        assume(not red.is_zero())
        parts = decompose(BG, red)
        assert sum(p.size() for p in parts) == red.size()
        g = [0] * len(BG.quiver.vertices)
        for p in parts:
            for i, x in enumerate(g_vector(p)):
                g[i] += x
        assert tuple(g) == g_vector(red)
        assert complexes_isomorphic(BG, direct_sum(parts), red)


class TestIsomorphism:
    def test_reflexive(self):
        X = s1_presentation()
        assert complexes_isomorphic(A2, X, X)

    def test_summand_order_irrelevant(self):
        X = s1_presentation()
        P1 = stalk(A2, [0], 0)
        assert complexes_isomorphic(
            A2, direct_sum([X, P1]), direct_sum([P1, X])
        )

    def test_distinguishes_classes(self):
        X = s1_presentation()
        assert not complexes_isomorphic(A2, X, stalk(A2, [0], 0))
        assert not complexes_isomorphic(A2, X, X.shift(1))


class TestSiltingPredicates:
    def test_free_module_is_silting(self):
        assert is_silting(A2, lambda_complex(A2))

    def test_radical_map_is_presilting_not_silting(self):
        X = s1_presentation()
        assert is_presilting(A2, X)
        assert not is_silting(A2, X)

    def test_pair_with_extension_not_presilting(self):
        bad = direct_sum([s1_presentation(), stalk(A2, [1], 0)])
        assert not is_presilting(A2, bad)

    def test_completed_pair_is_silting(self):
        good = direct_sum([s1_presentation(), stalk(A2, [0], 0)])
        assert is_silting(A2, good)


class TestSiltingObject:
    def test_free_module_object(self):
        L = silting_lambda(A2, validate=True)
        assert L.key == ((0, 1), (1, 0))
        assert L.id_string() == M_LAMBDA
        assert L.label() == "g=[(0,1),(1,0)];H0=[(0,1),(1,1)]"

    def test_summands_sorted_by_g_vector(self):
        L = silting_lambda(A2)
        assert [g_vector(s) for s in L.summands] == [(0, 1), (1, 0)]

    def test_g_matrix_det_unimodular(self, pentagon):
        for obj in pentagon.objects.values():
            assert abs(obj.g_matrix_det()) == 1


def _new_summand_index(old, new):
    old_gs = [g_vector(s) for s in old.summands]
    hits = [
        i for i, s in enumerate(new.summands)
        if g_vector(s) not in old_gs
    ]
    assert len(hits) == 1
    return hits[0]


class TestMutation:
    def test_left_steps_from_free_module(self):
        L = silting_lambda(A2)
        assert mutate(A2, L, 0, "left").id_string() == M1
        assert mutate(A2, L, 1, "left").id_string() == M2

    def test_left_then_right_is_identity(self, pentagon):
        for obj in pentagon.objects.values():
            for k in range(len(obj.summands)):
                try:
                    down = mutate(A2, obj, k, "left")
                except ConeNotTwoTerm:
                    continue
                back = mutate(A2, down, _new_summand_index(obj, down), "right")
                assert back.key == obj.key

    def test_bottom_has_no_left_mutation(self, pentagon):
        bottom = pentagon.objects[M4]
        for k in range(2):
            with pytest.raises(ConeNotTwoTerm):
                mutate(A2, bottom, k, "left")

    def test_top_has_no_right_mutation(self, pentagon):
        top = pentagon.objects[M_LAMBDA]
        for k in range(2):
            with pytest.raises(ConeNotTwoTerm):
                mutate(A2, top, k, "right")

    def test_rejects_plain_complex(self):
        with pytest.raises(NotSilting):
            mutate(A2, lambda_complex(A2), 0, "left")

    def test_rejects_bad_index(self):
        with pytest.raises(IndexOutOfRange):
            mutate(A2, silting_lambda(A2), 2, "left")

    def test_rejects_bad_direction(self):
        with pytest.raises(ValueError):
            mutate(A2, silting_lambda(A2), 0, "down")


class TestBongartzCompletion:
    def test_free_module_completes_to_itself(self):
        out = bongartz_complete(A2, lambda_complex(A2))
        assert out.id_string() == M_LAMBDA

    def test_zero_completes_to_shifted_free_module(self):
        out = bongartz_complete(A2, two_term(A2, [], [], []))
        assert out.id_string() == M4

    def test_simple_presentation_completes_with_projective(self):
        out = bongartz_complete(A2, s1_presentation())
        assert out.id_string() == M1

    def test_projective_simple_completes_with_shift(self):
        out = bongartz_complete(A2, stalk(A2, [1], 0))
        assert out.id_string() == M2

    def test_rejects_non_presilting(self):
        bad = direct_sum([s1_presentation(), stalk(A2, [1], 0)])
        with pytest.raises(NotPresilting):
            bongartz_complete(A2, bad)

    def test_completion_contains_input_class(self, pentagon):
        for obj in pentagon.objects.values():
            for s in obj.summands:
                out = bongartz_complete(A2, s)
                assert any(
                    complexes_isomorphic(A2, s, t) for t in out.summands
                )


class TestCheckSiltingModule:
    def test_free_module(self):
        assert check_silting_module(A2, lambda_complex(A2)) is True

    def test_simple_with_its_projective(self):
        pres = direct_sum([s1_presentation(), stalk(A2, [0], 0)])
        assert check_silting_module(A2, pres) is True

    def test_projective_simple(self):
        assert check_silting_module(A2, stalk(A2, [1], 0)) is True

    def test_bare_simple_fails(self):
        assert check_silting_module(A2, s1_presentation()) is False


class TestPresiltingFamily:
    def test_banded_family_all_presilting(self):
        assert check_presilting_family(KRON, range(6)) == [True] * 6

    def test_needs_parallel_arrow_pair(self):
        with pytest.raises(ValueError):
            check_presilting_family(A2, range(2))
        with pytest.raises(ValueError):
            check_presilting_family(BG, range(2))


class TestEnumeration:
    def test_counts_across_corpus(self):
        for A, n in ((A1, 2), (KK, 4), (DUAL, 2), (BG, 6), (A3, 14)):
            assert len(enumerate_2silt(A).objects) == n

    def test_pentagon_ids(self, pentagon):
        assert sorted(pentagon.objects) == sorted([M_LAMBDA, M1, M2, M3, M4])

    def test_pentagon_covers(self, pentagon):
        assert sorted(pentagon.poset.covers) == [
            (M2, M4),
            (M3, M4),
            (M_LAMBDA, M2),
            (M_LAMBDA, M1),
            (M1, M3),
        ]

    def test_top_and_bottom(self, pentagon):
        assert pentagon.poset.top() == M_LAMBDA
        assert pentagon.poset.bottom() == M4

    def test_three_vertex_extremes(self):
        r = enumerate_2silt(A3)
        assert r.poset.top() == "[(0,0,1),(0,1,0),(1,0,0)]"
        assert r.poset.bottom() == "[(-1,0,0),(0,-1,0),(0,0,-1)]"

    def test_mutation_edges_are_cover_relations(self):
        for A in (A1, KK, DUAL, BG, A3):
            r = enumerate_2silt(A)
            assert sorted(r.edges) == sorted(r.poset.covers)

    def test_pentagon_edges_match_covers(self, pentagon):
        assert sorted(pentagon.edges) == sorted(pentagon.poset.covers)

    def test_summands_rigid_with_scalar_endomorphisms(self, pentagon):
        for obj in pentagon.objects.values():
            for s in obj.summands:
                assert hom_k_dim(A2, s, s) == 1
                assert hom_shift1_dim(A2, s, s) == 0

    def test_cap_exceeded(self):
        with pytest.raises(CapExceeded):
            enumerate_2silt(A2, cap=4)
        assert len(enumerate_2silt(A2, cap=5).objects) == 5


class TestTorsLattice:
    def test_pentagon_labels(self):
        tl = tors_lattice(A2)
        assert sorted(tl.labels) == [
            "H0=[(0,1),(1,1)]",
            "H0=[(0,1)]",
            "H0=[(1,0),(1,1)]",
            "H0=[(1,0)]",
            "H0=[]",
        ]

    def test_ids_and_covers_preserved(self, pentagon):
        tl = tors_lattice(A2)
        assert tl.ids == pentagon.poset.ids
        assert tl.covers == pentagon.poset.covers

    def test_top_is_whole_module_category(self):
        tl = tors_lattice(A2)
        assert tl.label_of(tl.top()) == "H0=[(0,1),(1,1)]"
        assert tl.label_of(tl.bottom()) == "H0=[]"


class TestTauTiltingFinite:
    def test_finite_case_counts(self):
        rep = is_tau_tilting_finite(A2)
        assert rep.status == "finite"
        assert rep.count == 5

    def test_infinite_case_reports_unknown(self):
        rep = is_tau_tilting_finite(KRON, cap=30)
        assert rep.status == "unknown"
        assert rep.count is None
