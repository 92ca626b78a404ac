import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from halfplane.builders import (
    MetricTree,
    attach_pole,
    from_metric_tree,
    generic_edge_count_check,
    interval_exchange_surface,
    linear_involution_surface,
    linear_involution_words,
    monomial_surface,
    search_exchange,
    segment_tree,
    slit_reglue,
    spine_graph,
    standard_plane,
    star_tree,
    tree_graph,
    truncation_core,
    zigzag_tree,
)
from halfplane.errors import (
    BadPermutation,
    DegenerateVertex,
    InvalidOrder,
    InvalidRayCount,
    MalformedTree,
    NotGeneric,
    SubintervalOutOfRange,
    TooFewInfiniteEdges,
)
from halfplane.generate import random_generic_two_plane, random_surface, random_tree
from halfplane.surface import (
    develop,
    end_path,
    ends,
    gauss_bonnet_check,
    genus,
    is_generic,
    normalize,
    refine,
    scale,
    spine,
    zeros,
)

from conftest import seeds
import oracles


def end_signature(s):
    return sorted((e.order, e.residue) for e in ends(s))


class TestExamples:
    def test_standard_plane(self):
        s = standard_plane()
        assert end_signature(s) == [(4, 0)] and genus(s) == 0
        gb = gauss_bonnet_check(s)
        assert (gb.lhs, gb.rhs) == (-4, -4)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 7])
    def test_monomial(self, n):
        s = monomial_surface(n)
        assert len(s.planes) == n + 2
        assert [z.order for z in zeros(s)] == [n]
        assert end_signature(s) == [(n + 4, 0)]
        assert gauss_bonnet_check(s).lhs == -4

    def test_monomial_4_is_six_ray_star(self):
        sp = spine(monomial_surface(4))
        assert len(sp.vertices) == 1 and len(sp.infinite_edges) == 6

    @pytest.mark.parametrize("n", [0, -1, 2.5])
    def test_monomial_invalid(self, n):
        with pytest.raises(InvalidOrder):
            monomial_surface(n)


class TestTrees:
    def test_star_is_monomial(self):
        s, t = from_metric_tree(star_tree(3)), monomial_surface(1)
        assert end_signature(s) == end_signature(t)
        assert [z.order for z in zeros(s)] == [z.order for z in zeros(t)]
        assert s.gluing.pairs == t.gluing.pairs and [p.cuts for p in s.planes] == [p.cuts for p in t.planes]

    @pytest.mark.parametrize("b", [Fraction(1), Fraction(3, 2), Fraction(7, 5)])
    def test_segment_tree(self, b):
        s = from_metric_tree(segment_tree(b))
        assert end_signature(s) == [(6, 2 * b)]
        assert sorted(z.order for z in zeros(s)) == [1, 1]
        sign, shift = oracles.develop_translation(s, list(s.end_cycles[0]))
        assert sign == 1 and abs(shift) == 2 * b

    @pytest.mark.parametrize("a", [(5, 7, 11), (1, 1, 1), (2, Fraction(1, 3), 9)])
    def test_zigzag_residue(self, a):
        a1, a2, a3 = map(Fraction, a)
        s = from_metric_tree(zigzag_tree(a1, a2, a3))
        (e,) = ends(s)
        assert e.order == 8 and e.residue == abs(2 * a1 - 2 * a3)
        assert develop(s, end_path(s, 0)).translation_length == e.residue

    def test_too_few_infinite(self):
        with pytest.raises(TooFewInfiniteEdges):
            MetricTree(finite={}, infinite={"r": 0}, rotation={0: ("r",)})

    def test_dangling_leaf(self):
        with pytest.raises(MalformedTree):
            MetricTree(
                finite={"e": (0, 1, 1)}, infinite={"r": 0, "s": 0}, rotation={0: ("e", "r", "s"), 1: ("e",)}
            )

    def test_cycle_rejected(self):
        with pytest.raises(MalformedTree):
            MetricTree(
                finite={"e": (0, 1, 1), "f": (1, 0, 1)},
                infinite={"r": 0, "s": 1},
                rotation={0: ("e", "f", "r"), 1: ("e", "f", "s")},
            )

    @given(seeds)
    def test_random_trees(self, seed):
        tree = random_tree(random.Random(seed))
        s = from_metric_tree(tree)
        assert genus(s) == 0 and gauss_bonnet_check(s).ok
        (e,) = ends(s)
        assert e.order == len(tree.infinite) + 2
        # the spine recovers the tree (vertices of the tree all have valence >= 3)
        assert nx.is_isomorphic(
            nx.Graph(spine_graph(s)), nx.Graph(tree_graph(tree)), node_match=lambda a, b: a["rays"] == b["rays"]
        )


class TestAttachPole:
    def test_two_rays_on_tree(self):
        s = from_metric_tree(segment_tree(3))
        t = attach_pole(s, spine(s).finite_edges[0].id, 1, 1, 2)
        assert genus(t) == 0
        assert end_signature(t) == sorted(end_signature(s) + [(4, 0)])

    def test_errors(self):
        s = from_metric_tree(segment_tree(3))
        e = spine(s).finite_edges[0].id
        with pytest.raises(InvalidRayCount):
            attach_pole(s, e, 1, 1, 1)
        with pytest.raises(SubintervalOutOfRange):
            attach_pole(s, e, 0, 1, 2)
        with pytest.raises(SubintervalOutOfRange):
            attach_pole(s, e, 2, 1, 2)

    @given(seeds, st.integers(2, 5))
    def test_random(self, seed, rays):
        rng = random.Random(seed)
        s = random_surface(rng)
        edge = rng.choice(spine(s).edges)
        iv = s.interval(edge.slots[0])
        span = iv.length if iv.length is not None else Fraction(6)
        t = attach_pole(s, edge.id, span / 4, span / 3, rays)
        assert genus(t) == genus(s) and gauss_bonnet_check(t).ok
        assert len(ends(t)) == len(ends(s)) + 1
        assert sorted(e.order for e in ends(t)) == sorted([e.order for e in ends(s)] + [rays + 2])
        # scaling commutes with the surgery
        lam = Fraction(3, 2)
        u = attach_pole(scale(s, lam), edge.id, lam * span / 4, lam * span / 3, rays)
        assert end_signature(u) == sorted((o, lam * r) for o, r in end_signature(t))


class TestExchange:
    def test_swap_torus(self):
        s = interval_exchange_surface([1, 1], [1, 0])
        assert genus(s) == 1 and [z.order for z in zeros(s)] == [4]

    def test_identity_is_plane(self):
        s = interval_exchange_surface([1, 2, 3], [0, 1, 2])
        assert genus(s) == 0
        assert all(z.regular for z in zeros(s))

    def test_bad_permutation(self):
        with pytest.raises(BadPermutation):
            interval_exchange_surface([1, 1], [0, 0])

    def test_all_small_exchanges(self):
        for k in range(1, 6):
            for perm in itertools.permutations(range(k)):
                s = interval_exchange_surface([Fraction(j + 1, 2) for j in range(k)], perm)
                assert genus(s) == oracles.genus(s)
                assert end_signature(s) == [(4, 0)]
                assert all(z.order % 2 == 0 for z in zeros(s))

    @given(seeds)
    def test_random_exchange_oracle(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 8)
        perm = list(range(k))
        rng.shuffle(perm)
        s = interval_exchange_surface([Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(k)], perm)
        assert genus(s) == oracles.genus(s) and ends(s)[0].residue == 0


class TestSlitReglue:
    def test_genus_one_from_monomial(self):
        s = refine(monomial_surface(2), (0, "R"), 4)
        e = next(e for e in spine(s).finite_edges)
        t = slit_reglue(s, e.id, 1, [1, 1], [1, 0])
        assert genus(t) == 1 and end_signature(t) == [(6, 0)]

    def test_identity_permutation(self):
        s = from_metric_tree(segment_tree(5))
        e = spine(s).finite_edges[0].id
        t = slit_reglue(s, e, 1, [1, 2], [0, 1])
        n, m = normalize(t), normalize(s)
        assert genus(n) == genus(m) and end_signature(n) == end_signature(m)
        assert sorted(z.order for z in zeros(n)) == sorted(z.order for z in zeros(m))

    def test_errors(self):
        s = from_metric_tree(segment_tree(2))
        e = spine(s).finite_edges[0].id
        with pytest.raises(BadPermutation):
            slit_reglue(s, e, 0.5, [0.5, 0.5], [0, 2])
        with pytest.raises(SubintervalOutOfRange):
            slit_reglue(s, e, 1, [1, 1], [1, 0])

    @given(seeds)
    def test_ends_unchanged(self, seed):
        rng = random.Random(seed)
        s = random_surface(rng)
        finite = spine(s).finite_edges
        if not finite:
            return
        e = rng.choice(finite)
        k = rng.randint(1, 4)
        pieces = [e.length / (2 * k)] * k
        perm = list(range(k))
        rng.shuffle(perm)
        t = slit_reglue(s, e.id, e.length / 4, pieces, perm)
        assert end_signature(t) == end_signature(s)
        assert genus(t) >= genus(s) and gauss_bonnet_check(t).ok


class TestGenericCount:
    def test_not_generic(self):
        with pytest.raises(NotGeneric):
            generic_edge_count_check(interval_exchange_surface([1, 1], [1, 0]))

    def test_wrong_shape(self):
        with pytest.raises(NotGeneric):
            generic_edge_count_check(monomial_surface(1))

    def test_enumerated_genus_one(self):
        found = []
        for k in range(1, 6):
            for top, bottom in linear_involution_words(k):
                try:
                    s = linear_involution_surface(top, bottom, {lab: 1 for lab in range(k)})
                except DegenerateVertex:
                    continue
                if is_generic(s) and len(ends(s)) == 1:
                    found.append(generic_edge_count_check(s))
        assert found and all(r.ok and r.genus == 1 and r.finite_edges == 5 for r in found)
        assert {r.total_edges for r in found} == {7}

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_random_generic(self, g):
        rng = random.Random(g)
        for _ in range(10):
            r = generic_edge_count_check(random_generic_two_plane(rng, g))
            assert r.genus == g and r.ok and r.finite_edges == 6 * g - 1
            assert r.parameter_dimension == 6 * g - 2


def test_search_finds_order_two_zero():
    (hit,) = search_exchange(1, 2, max_intervals=4)
    s = hit.surface()
    assert genus(s) == 1 and list(hit.zero_orders).count(2) == 1
    assert sorted(z.order for z in zeros(s) if z.order) == sorted(hit.zero_orders)


def test_translation_exchanges_only_even_zeros():
    assert search_exchange(1, 2, max_intervals=4, flips=False) == []


@pytest.mark.parametrize("n,a", [(2, 0), (3, 0), (4, 0), (4, 2), (5, 0), (6, 1)])
def test_truncation_core(n, a):
    s = truncation_core(n, 10, a)
    (e,) = ends(s)
    assert e.order == n + 2 and e.residue == a
    assert sorted(e.widths) == sorted([Fraction(10 + a)] + [Fraction(10)] * (n - 1))
