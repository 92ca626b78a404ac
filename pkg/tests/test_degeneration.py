import math
import random
from fractions import Fraction as F

import networkx as nx
import numpy as np
import pytest
from hypothesis import given

from conftest import seeds, surfaces
from halfplane.builders import from_metric_tree, interval_exchange_surface, segment_tree, zigzag_tree
from halfplane.degeneration import (
    SpineFamily,
    check_forest,
    collapse,
    collapse_with_map,
    collapsing_locus,
    diverging_locus,
    edge_lengths,
    limit_surface,
    stretch_map,
    with_lengths,
)
from halfplane.errors import DivergingEdges, InvalidEpsilon, MissingLimit, NotForest
from halfplane.generate import random_surface
from halfplane.hpsformat import emit_hps
from halfplane.surface import ends, gauss_bonnet_check, genus, spine, zeros


def forest_oracle(surface, C):
    """Acyclic iff #edges = #vertices - #components on the subgraph spanned by C."""
    g = nx.MultiGraph()
    for eid in C:
        u, v = spine(surface).edge(eid).ends
        g.add_edge(u, v)
    if not g.number_of_edges():
        return True
    return g.number_of_edges() == g.number_of_nodes() - nx.number_connected_components(g)


def pole_orders(s):
    return sorted(e.order for e in ends(s))


def residues_by_planes(s):
    return {frozenset(e.plane_cycle): e.residue for e in ends(s)}


def random_forest(rng, s):
    """A random acyclic subset of the finite spine edges."""
    ids = sorted(edge_lengths(s))
    rng.shuffle(ids)
    C = []
    for e in ids:
        if rng.random() < 0.5 and check_forest(s, C + [e]):
            C.append(e)
    return C


TORUS = interval_exchange_surface([1, 1], [1, 0])


class TestLoci:
    def test_genus_one_limit(self):
        fam = SpineFamily(TORUS, (), {"0:0": 0, "0:1": 1})
        assert collapsing_locus(fam) == {"0:0"} and diverging_locus(fam) == set()

    def test_all_positive(self):
        fam = SpineFamily(TORUS, (), {"0:0": 2, "0:1": F(1, 2)})
        assert collapsing_locus(fam) == diverging_locus(fam) == set()

    def test_infinite_marker(self):
        fam = SpineFamily(TORUS, (), {"0:0": math.inf, "0:1": 1})
        assert diverging_locus(fam) == {"0:0"}
        with pytest.raises(DivergingEdges):
            limit_surface(fam)

    def test_missing_limit(self):
        fam = SpineFamily(TORUS, ({"0:0": 1, "0:1": 2},))
        with pytest.raises(MissingLimit):
            collapsing_locus(fam)
        with pytest.raises(MissingLimit):
            diverging_locus(fam)

    def test_family_validation(self):
        with pytest.raises(ValueError):
            SpineFamily(TORUS, ({"0:0": 1},))
        with pytest.raises(ValueError):
            SpineFamily(TORUS, ({"0:0": 0, "0:1": 1},))
        with pytest.raises(ValueError):
            SpineFamily(TORUS, (), {"0:0": -1, "0:1": 1})

    def test_surface_at(self):
        fam = SpineFamily(TORUS, ({"0:0": 3, "0:1": 2},))
        assert edge_lengths(fam.surface_at(0)) == {"0:0": 3, "0:1": 2}


class TestForest:
    def test_trivial(self):
        s = from_metric_tree(zigzag_tree(1, 2, 3))
        assert check_forest(s, []) and check_forest(s, [sorted(edge_lengths(s))[0]])

    def test_torus_edges_are_loops(self):
        for e in edge_lengths(TORUS):
            assert check_forest(TORUS, [e]) is False is forest_oracle(TORUS, [e])

    @given(surfaces(), seeds)
    def test_agrees_with_oracle(self, s, seed):
        rng = random.Random(seed)
        ids = sorted(edge_lengths(s))
        C = [e for e in ids if rng.random() < 0.6]
        assert check_forest(s, C) == forest_oracle(s, C)

    def test_limit_with_cycle(self):
        with pytest.raises(NotForest):
            limit_surface(SpineFamily(TORUS, (), {"0:0": 0, "0:1": 1}))
        with pytest.raises(NotForest):
            collapse(TORUS, ["0:1"])

    def test_unknown_edge(self):
        with pytest.raises(KeyError):
            collapse(TORUS, ["9:9"])


class TestCollapse:
    def test_empty(self):
        s = from_metric_tree(zigzag_tree(2, 3, 5))
        assert emit_hps(collapse(s, [])) == emit_hps(s)

    def test_zigzag_middle_edge(self):
        s = from_metric_tree(zigzag_tree(5, F(1, 100), 11))
        ((end,),) = [ends(s)]
        mid = next(e for e, ln in edge_lengths(s).items() if ln == F(1, 100))
        res = collapse_with_map(s, [mid])
        t = res.surface
        (end2,) = ends(t)
        assert (end2.order, end2.residue) == (end.order, end.residue) == (8, 12)
        assert sorted(z.order for z in zeros(t) if not z.regular) == [1, 1, 2]
        assert sorted(z.order for z in zeros(s) if not z.regular) == [1, 1, 1, 1]
        assert mid not in res.edge_map and len(res.edge_map) == len(edge_lengths(s)) - 1

    def test_segment_tree_edge_carries_residue(self):
        s = from_metric_tree(segment_tree(3))
        (e,) = edge_lengths(s)
        t = collapse(s, [e])
        assert [x.order for x in ends(t)] == [6] and ends(t)[0].residue == 0

    @given(surfaces(), seeds)
    def test_invariants(self, s, seed):
        C = random_forest(random.Random(seed), s)
        t = collapse(s, C)
        assert genus(t) == genus(s)
        assert pole_orders(t) == pole_orders(s)
        assert gauss_bonnet_check(t).ok
        assert len(spine(t).vertices) == len(spine(s).vertices) - len(C)

    @given(surfaces(), seeds)
    def test_functorial(self, s, seed):
        rng = random.Random(seed)
        C = random_forest(rng, s)
        k = rng.randint(0, len(C))
        C1, C2 = C[:k], C[k:]
        step = collapse_with_map(s, C1)
        twice = collapse(step.surface, [step.edge_map[e] for e in C2])
        assert emit_hps(twice) == emit_hps(collapse(s, C))

    def test_lipschitz_on_families(self):
        rng = random.Random(31)
        checked = 0
        while checked < 200:
            s = random_surface(rng)
            C = random_forest(rng, s)
            if not C:
                continue
            lengths = edge_lengths(s)
            for _ in range(3):
                t = dict(lengths)
                for e in C:
                    t[e] = F(rng.randint(1, 40), rng.randint(1, 40))
                fam = SpineFamily(s, (t,), {e: (0 if e in C else v) for e, v in lengths.items()})
                before = residues_by_planes(fam.surface_at(0))
                after = residues_by_planes(limit_surface(fam))
                budget = 2 * sum(t[e] for e in C)
                assert before.keys() == after.keys()
                assert all(abs(before[k] - after[k]) <= budget for k in before)
            checked += 1

    def test_with_lengths_round_trip(self):
        s = from_metric_tree(zigzag_tree(2, 3, 5))
        L = edge_lengths(s)
        assert emit_hps(with_lengths(with_lengths(s, {e: 7 for e in L}), L)) == emit_hps(s)


class TestStretch:
    eps = 0.1

    def samples(self, n=10_000, seed=5):
        g = np.random.default_rng(seed)
        return g.uniform(-2 * self.eps, 2 * self.eps, n), g.uniform(0, 2 * self.eps, n)

    def test_outside_identity(self):
        f = stretch_map(self.eps)
        x, y = self.samples()
        out = (np.abs(x) > self.eps) | (y > self.eps)
        X, Y = f(x[out], y[out])
        assert np.array_equal(X, x[out]) and np.array_equal(Y, y[out])
        assert np.allclose(f.dilatation(x[out], y[out]), 1.0)

    def test_collapses_interval(self):
        f = stretch_map(self.eps)
        x = np.linspace(-self.eps / 2, self.eps / 2, 10_000)
        X, Y = f(x, np.zeros_like(x))
        assert np.all(X == 0) and np.all(Y == 0)

    def test_height_preserved(self):
        f = stretch_map(self.eps)
        x, y = self.samples()
        assert np.array_equal(f(x, y)[1], y)

    def test_dilatation_finite_above_axis(self):
        f = stretch_map(self.eps)
        x, y = self.samples()
        k = f.dilatation(x[y > 0], y[y > 0])
        assert np.all(np.isfinite(k)) and np.all(k >= 1 - 1e-12)

    def test_continuous(self):
        f = stretch_map(self.eps)
        x, y = self.samples()
        X1, _ = f(x, y)
        X2, _ = f(x + 1e-9, y + 1e-9)
        assert np.max(np.abs(X1 - X2)) < 1e-6

    def test_monotone_in_x(self):
        f = stretch_map(self.eps)
        for yy in (0.0, 0.03, 0.07):
            x = np.linspace(-0.2, 0.2, 2001)
            X, _ = f(x, np.full_like(x, yy))
            assert np.all(np.diff(X) >= -1e-15)

    def test_identity_above_delta(self):
        x = np.linspace(-1, 1, 101)
        for eps in (0.5, 0.1, 0.01):
            k = stretch_map(eps).dilatation(x, np.full_like(x, 0.6))
            assert np.allclose(k, 1.0)

    @pytest.mark.parametrize("eps", [0, 1, -0.5, 2])
    def test_invalid(self, eps):
        with pytest.raises(InvalidEpsilon):
            stretch_map(eps)
