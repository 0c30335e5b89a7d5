"""Brute-force module oracle: representation handling, Ext dimensions, and
subset-sweep torsion classes, cross-checked against the complex engine."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torslat.algebras import Quiver, build_algebra
from torslat.config import Config
from torslat.errors import (
    NotRepFiniteWithinBound,
    SearchSpaceExceeded,
    ShapeMismatch,
)
from torslat.fixtures import (
    algebra_a2,
    algebra_a3,
    algebra_beta_gamma,
    algebra_dual_numbers,
    algebra_kronecker,
    corpus,
)
from torslat.oracle import (
    Representation,
    brute_serre,
    brute_torsion_classes,
    direct_sum_rep,
    enumerate_indecomposables,
    ext_dim,
    hom_rep_basis,
    hom_rep_dim,
    projective_rep,
    simple_rep,
)
from torslat.posets import lattice_ops, poset_isomorphism
from torslat.silting import tors_lattice

A2 = algebra_a2()
A3 = algebra_a3()
DUAL = algebra_dual_numbers()
BG = algebra_beta_gamma()
KRON = algebra_kronecker()

TORS_COUNTS = {
    "a1": 2,
    "a2": 5,
    "a3": 14,
    "kxk": 4,
    "dual-numbers": 2,
    "beta-gamma": 6,
}
SERRE_COUNTS = {
    "a1": 2,
    "a2": 4,
    "a3": 8,
    "kxk": 4,
    "dual-numbers": 2,
    "beta-gamma": 4,
}


@pytest.fixture(scope="module")
def oracle_posets():
    return {
        name: (brute_torsion_classes(alg), brute_serre(alg))
        for name, alg in corpus()
    }


class TestRepresentation:
    def test_simple_shape(self):
        s1 = simple_rep(A2, "1")
        assert s1.dims == (1, 0)
        assert s1.p == 2
        assert simple_rep(A2, 1).dims == (0, 1)

    def test_projective_dims(self):
        assert projective_rep(A2, "1").dims == (1, 1)
        assert projective_rep(A2, "2").dims == (0, 1)
        assert projective_rep(BG, "1").dims == (2, 1)
        assert projective_rep(BG, "2").dims == (1, 1)
        assert projective_rep(DUAL, "1").dims == (2,)

    def test_unknown_vertex(self):
        with pytest.raises(ValueError):
            simple_rep(A2, "nope")
        with pytest.raises(ValueError):
            simple_rep(A2, 7)

    def test_bad_shape_rejected(self):
        with pytest.raises(ShapeMismatch):
            Representation(A2, 2, (1, 1), (((1, 1),),))

    def test_unreduced_entries_rejected(self):
        with pytest.raises(ValueError):
            Representation(A2, 2, (1, 1), (((2,),),))

    def test_relation_violation_rejected(self):
        # the loop must square to zero
        with pytest.raises(ValueError):
            Representation(DUAL, 2, (1,), (((1,),),))

    def test_unsupported_field(self):
        with pytest.raises(ValueError):
            simple_rep(A2, "1", field=5)

    def test_direct_sum_dims(self):
        both = direct_sum_rep(A2, [simple_rep(A2, "1"), projective_rep(A2, "1")])
        assert both.dims == (2, 1)

    def test_direct_sum_field_mismatch(self):
        with pytest.raises(ShapeMismatch):
            direct_sum_rep(A2, [simple_rep(A2, "1", 2), simple_rep(A2, "1", 3)])

    def test_wrong_algebra_rejected(self):
        with pytest.raises(ShapeMismatch):
            hom_rep_dim(A2, simple_rep(A3, "1"), simple_rep(A3, "1"))


class TestHomSpaces:
    def test_a2_hom_dims(self):
        p1, p2 = projective_rep(A2, "1"), projective_rep(A2, "2")
        s1 = simple_rep(A2, "1")
        assert hom_rep_dim(A2, p1, s1) == 1
        assert hom_rep_dim(A2, s1, p1) == 0
        assert hom_rep_dim(A2, p2, p1) == 1
        assert hom_rep_dim(A2, p1, p2) == 0

    def test_bg_endomorphisms(self):
        p1 = projective_rep(BG, "1")
        assert hom_rep_dim(BG, p1, p1) == 2

    def test_hom_between_projectives_matches_cartan(self):
        for _, alg in corpus():
            cart = alg.cartan_matrix()
            n = len(alg.quiver.vertices)
            projs = [projective_rep(alg, v) for v in range(n)]
            for i in range(n):
                for j in range(n):
                    assert hom_rep_dim(alg, projs[i], projs[j]) == cart[i][j]

    def test_basis_members_intertwine(self):
        p1 = projective_rep(BG, "1")
        s2 = simple_rep(BG, "2")
        for f in hom_rep_basis(BG, p1, s2):
            q = BG.quiver
            for a in range(len(q.arrows)):
                s, t = q.arrow_source(a), q.arrow_target(a)
                for j in range(p1.dims[s]):
                    left = [
                        sum(f[t][i][k] * p1.mats[a][k][j] for k in range(p1.dims[t])) % 2
                        for i in range(s2.dims[t])
                    ]
                    right = [
                        sum(s2.mats[a][i][l] * f[s][l][j] for l in range(s2.dims[s])) % 2
                        for i in range(s2.dims[t])
                    ]
                    assert left == right


def _pool(alg):
    return [simple_rep(alg, v) for v in range(len(alg.quiver.vertices))] + [
        projective_rep(alg, v) for v in range(len(alg.quiver.vertices))
    ]


summand_indices = st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=2)


class TestAdditivity:
    @given(xs=summand_indices, ys=summand_indices, zs=summand_indices)
    @settings(max_examples=25, deadline=None)
    def test_hom_additive_over_sums(self, xs, ys, zs):
        pool = _pool(A2)
        x = direct_sum_rep(A2, [pool[i] for i in xs])
        y = direct_sum_rep(A2, [pool[i] for i in ys])
        z = direct_sum_rep(A2, [pool[i] for i in zs])
        lhs = hom_rep_dim(A2, direct_sum_rep(A2, [x, y]), z)
        assert lhs == hom_rep_dim(A2, x, z) + hom_rep_dim(A2, y, z)
        rhs = hom_rep_dim(A2, z, direct_sum_rep(A2, [x, y]))
        assert rhs == hom_rep_dim(A2, z, x) + hom_rep_dim(A2, z, y)

    @given(xs=summand_indices, ys=summand_indices, zs=summand_indices)
    @settings(max_examples=15, deadline=None)
    def test_ext_additive_over_sums(self, xs, ys, zs):
        pool = _pool(BG)
        x = direct_sum_rep(BG, [pool[i] for i in xs])
        y = direct_sum_rep(BG, [pool[i] for i in ys])
        z = direct_sum_rep(BG, [pool[i] for i in zs])
        assert ext_dim(BG, direct_sum_rep(BG, [x, y]), z) == ext_dim(
            BG, x, z
        ) + ext_dim(BG, y, z)
        assert ext_dim(BG, z, direct_sum_rep(BG, [x, y])) == ext_dim(
            BG, z, x
        ) + ext_dim(BG, z, y)


class TestEnumerate:
    def test_corpus_class_counts(self):
        expected = {
            "a1": 1,
            "a2": 3,
            "a3": 6,
            "kxk": 2,
            "dual-numbers": 2,
            "beta-gamma": 5,
        }
        for name, alg in corpus():
            assert len(enumerate_indecomposables(alg)) == expected[name], name

    def test_a2_canonical_representatives(self):
        classes = enumerate_indecomposables(A2)
        assert [c.dims for c in classes] == [(0, 1), (1, 0), (1, 1)]
        assert classes[2].mats == (((1,),),)

    def test_a3_intervals(self):
        dims = [c.dims for c in enumerate_indecomposables(A3)]
        assert dims == [
            (0, 0, 1),
            (0, 1, 0),
            (1, 0, 0),
            (0, 1, 1),
            (1, 1, 0),
            (1, 1, 1),
        ]

    def test_beta_gamma_classes(self):
        classes = enumerate_indecomposables(BG)
        assert [c.dims for c in classes] == [(0, 1), (1, 0), (1, 1), (1, 1), (2, 1)]
        # the two distinct one-one classes: only one of them is projective
        assert classes[2].mats == (((0,),), ((1,),))
        assert classes[3].mats == (((1,),), ((0,),))
        # the big class is the first projective
        big = classes[4]
        assert hom_rep_dim(BG, projective_rep(BG, "1"), big) == 2
        assert hom_rep_dim(BG, big, projective_rep(BG, "1")) == 2

    def test_dual_numbers_classes(self):
        classes = enumerate_indecomposables(DUAL)
        assert [c.dims for c in classes] == [(1,), (2,)]
        assert classes[1].mats == (((0, 0), (1, 0)),)

    def test_explicit_bound_examples(self):
        assert len(enumerate_indecomposables(A2, dim_bound=(1, 1))) == 3
        from torslat.fixtures import algebra_a1

        assert len(enumerate_indecomposables(algebra_a1(), dim_bound=2)) == 1

    def test_deterministic_across_instances(self):
        fresh = build_algebra(Quiver(["1", "2"], [("a", "1", "2")]), [])
        ours = [c.key() for c in enumerate_indecomposables(A2)]
        theirs = [c.key() for c in enumerate_indecomposables(fresh)]
        assert ours == theirs

    def test_kronecker_needs_explicit_bound(self):
        with pytest.raises(NotRepFiniteWithinBound):
            enumerate_indecomposables(KRON)

    def test_kronecker_small_bound(self):
        classes = enumerate_indecomposables(KRON, dim_bound=(1, 1))
        assert [c.dims for c in classes] == [(0, 1), (1, 0), (1, 1), (1, 1), (1, 1)]

    def test_search_cap(self):
        with pytest.raises(SearchSpaceExceeded):
            enumerate_indecomposables(KRON, dim_bound=4)
        with pytest.raises(SearchSpaceExceeded):
            enumerate_indecomposables(A2, config=Config(oracle_search_cap=100))

    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            enumerate_indecomposables(A2, dim_bound=0)
        with pytest.raises(ValueError):
            enumerate_indecomposables(A2, dim_bound=(1, 1, 1))

    def test_odd_characteristic(self):
        assert len(enumerate_indecomposables(A2, field=3, dim_bound=(1, 1))) == 3
        assert len(enumerate_indecomposables(DUAL, field=3)) == 2


class TestExtDim:
    def test_a2_simples(self):
        s1, s2 = simple_rep(A2, "1"), simple_rep(A2, "2")
        assert ext_dim(A2, s1, s2) == 1
        assert ext_dim(A2, s2, s1) == 0

    def test_a3_simples_follow_arrows(self):
        s = {v: simple_rep(A3, v) for v in ("1", "2", "3")}
        table = {(a, b): ext_dim(A3, s[a], s[b]) for a in s for b in s}
        assert table[("1", "2")] == 1
        assert table[("2", "3")] == 1
        assert sum(table.values()) == 2

    def test_self_extension_of_dual_numbers_simple(self):
        s = simple_rep(DUAL, "1")
        assert ext_dim(DUAL, s, s) == 1

    def test_projectives_have_no_extensions(self):
        for _, alg in corpus():
            classes = enumerate_indecomposables(alg)
            for v in range(len(alg.quiver.vertices)):
                proj = projective_rep(alg, v)
                assert all(ext_dim(alg, proj, c) == 0 for c in classes)

    def test_zero_source(self):
        zero = Representation(A2, 2, (0, 0), (((),) * 0,))
        assert ext_dim(A2, zero, simple_rep(A2, "1")) == 0


class TestBruteTorsion:
    def test_counts(self, oracle_posets):
        for name, (tors, serre) in oracle_posets.items():
            assert len(tors) == TORS_COUNTS[name], name
            assert len(serre) == SERRE_COUNTS[name], name

    def test_matches_engine_lattice(self, oracle_posets):
        for name, alg in corpus():
            engine = tors_lattice(alg)
            assert poset_isomorphism(engine, oracle_posets[name][0]), name

    def test_a2_subsets(self, oracle_posets):
        tors, serre = oracle_posets["a2"]
        assert list(tors.ids) == ["{}", "{M0}", "{M1}", "{M1,M2}", "{M0,M1,M2}"]
        assert list(serre.ids) == ["{}", "{M0}", "{M1}", "{M0,M1,M2}"]
        assert tors.top() == "{M0,M1,M2}"
        assert tors.bottom() == "{}"

    def test_serre_inside_torsion(self, oracle_posets):
        for name, (tors, serre) in oracle_posets.items():
            assert set(serre.ids) <= set(tors.ids), name

    def test_serre_closed_under_lattice_ops(self, oracle_posets):
        for name, (tors, serre) in oracle_posets.items():
            ops = lattice_ops(tors)
            ids = list(serre.ids)
            for a in ids:
                for b in ids:
                    assert ops.join(a, b) in set(ids), name
                    assert ops.meet(a, b) in set(ids), name

    def test_semisimple_serre_counts(self, oracle_posets):
        # all subsets of the simples
        assert len(oracle_posets["kxk"][1]) == 4
        assert len(oracle_posets["a1"][1]) == 2

    def test_kronecker_truncation_detected(self):
        with pytest.raises(NotRepFiniteWithinBound):
            brute_torsion_classes(KRON, dim_bound=(1, 1))

    def test_subset_cap(self):
        with pytest.raises(SearchSpaceExceeded):
            brute_torsion_classes(BG, config=Config(subset_cap=4))
