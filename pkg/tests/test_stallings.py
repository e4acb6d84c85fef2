import itertools
import random

import pytest

from wml.errors import UndecidedError
from wml.stallings import (
    LabeledGraph,
    core_graph,
    fringe,
    graph_from_edges,
    membership_rewrite,
    quotient,
    wedge_marked,
)
from wml.words import Word, parse


def brute_force_isomorphic(g1, g2):
    """Based labeled-graph isomorphism by permutation search."""
    if (g1.num_vertices, g1.num_edges) != (g2.num_vertices, g2.num_edges):
        return False
    n = g1.num_vertices
    for perm in itertools.permutations(range(n)):
        if perm[g1.basepoint] != g2.basepoint:
            continue
        if {perm[v] for v in g1.marked} != set(g2.marked):
            continue
        mapped = {(perm[s], perm[d], l) for (s, d, l) in g1.edges}
        if mapped == set(g2.edges):
            return True
    return False


class TestCoreGraph:
    def test_whole_group(self):
        g = core_graph([parse("x", 2), parse("y", 2)], 2)
        assert g.num_vertices == 1 and g.num_edges == 2
        assert g.subgroup_rank == 2

    def test_commutator_cycle(self):
        g = core_graph([parse("[x,y]", 2)], 2)
        assert g.num_vertices == 4 and g.num_edges == 4
        assert g.subgroup_rank == 1
        assert g.contains(parse("[x,y]", 2))
        assert not g.contains(parse("x", 2))

    def test_fold_example(self):
        # <x^2, x y x^-1> folds to two vertices and rank 2
        g = core_graph([parse("x^2", 2), parse("x y X", 2)], 2)
        assert g.num_vertices == 2 and g.num_edges == 3
        assert g.subgroup_rank == 2
        assert g.contains(parse("x^2", 2))
        assert g.contains(parse("x y X", 2))
        assert not g.contains(parse("x", 2))
        assert not g.contains(parse("y", 2))

    def test_two_x_loops_fold_to_one(self):
        g = core_graph([parse("x", 1), parse("x", 1)], 1)
        assert g.num_vertices == 1 and g.num_edges == 1

    def test_conjugate_keeps_tail(self):
        # the core graph keeps the basepoint even at degree 1
        g = core_graph([parse("x y X", 2)], 2)
        assert g.num_vertices == 2
        assert g.subgroup_rank == 1

    def test_rank_at_most_generator_count(self):
        rng = random.Random(7)
        for _ in range(120):
            k = rng.randint(1, 4)
            gens = []
            for _ in range(k):
                letters = [
                    rng.choice([1, 2, -1, -2]) for _ in range(rng.randint(1, 8))
                ]
                gens.append(Word(letters, 2))
            g = core_graph([w for w in gens if not w.is_identity()] or
                           [Word((1,), 2)], 2)
            assert g.subgroup_rank <= k


class TestFoldConfluence:
    def test_random_fold_orders_agree(self):
        words = [parse("x^2", 2), parse("x y X", 2), parse("[x,y]", 2)]
        reference = core_graph(words, 2)
        for seed in range(25):
            rng = random.Random(seed)
            assert core_graph(words, 2, shuffle_rng=rng) == reference

    def test_random_graphs_random_orders(self):
        rng = random.Random(3)
        for trial in range(40):
            gens = []
            for _ in range(rng.randint(1, 3)):
                letters = [
                    rng.choice([1, 2, -1, -2]) for _ in range(rng.randint(1, 10))
                ]
                gens.append(Word(letters, 2))
            gens = [w for w in gens if not w.is_identity()] or [Word((1,), 2)]
            reference = core_graph(gens, 2)
            for seed in range(4):
                shuffler = random.Random(1000 * trial + seed)
                assert core_graph(gens, 2, shuffle_rng=shuffler) == reference

    def test_fold_idempotent(self):
        g = core_graph([parse("[x,y]", 2)], 2)
        again = graph_from_edges(
            g.num_vertices, g.edges, g.basepoint, g.marked, g.rank
        )
        assert again == g


class TestCanonicalForm:
    def test_equality_iff_isomorphic(self):
        rng = random.Random(11)
        graphs = []
        for _ in range(30):
            letters = [rng.choice([1, 2, -1, -2]) for _ in range(rng.randint(1, 7))]
            w = Word(letters, 2)
            if w.is_identity():
                continue
            graphs.append(core_graph([w], 2))
        for g1 in graphs:
            for g2 in graphs:
                if g1.num_vertices <= 8 and g2.num_vertices <= 8:
                    assert (g1.serialize() == g2.serialize()) == \
                        brute_force_isomorphic(g1, g2)

    def test_relabeled_input_same_canonical_form(self):
        # spelling the subgroup differently must not change the graph
        g1 = core_graph([parse("x^2", 2), parse("x y X", 2)], 2)
        g2 = core_graph([parse("x y X", 2), parse("x^2", 2), parse("x^2", 2)], 2)
        assert g1 == g2


class TestMembershipRewrite:
    def test_identity_rewrite(self):
        g = core_graph([parse("x", 2), parse("y", 2)], 2)
        w = membership_rewrite(g, parse("[x,y]", 2))
        assert w is not None
        # image is the commutator of the two basis letters, up to naming
        basis = g.basis()
        assert len(basis) == 2
        assert len(w) == 4 and w.abelianization() == (0, 0)

    def test_power_subgroup(self):
        g = core_graph([parse("x^2", 1)], 1)
        assert membership_rewrite(g, parse("x^2", 1)) == Word((1,), 1)
        assert membership_rewrite(g, parse("x", 1)) is None
        assert membership_rewrite(g, parse("x^4", 1)) == Word((1, 1), 1)

    def test_rewrite_roundtrip(self):
        g = core_graph([parse("x^2", 2), parse("x y X", 2)], 2)
        basis = g.basis()
        for text in ["x^2", "x y X", "x^2 x y X", "(x y X)^-1 x^2"]:
            w = parse(text, 2)
            coords = membership_rewrite(g, w)
            assert coords is not None
            rebuilt = Word((), 2)
            for a in coords.letters:
                rebuilt = rebuilt * (basis[abs(a) - 1] if a > 0 else ~basis[abs(a) - 1])
            assert rebuilt == w

    def test_non_member(self):
        g = core_graph([parse("[x,y]", 2)], 2)
        assert membership_rewrite(g, parse("x", 2)) is None


class TestBasis:
    def test_size_is_rank(self):
        rng = random.Random(5)
        for _ in range(40):
            letters = [rng.choice([1, 2, -1, -2]) for _ in range(rng.randint(1, 8))]
            w = Word(letters, 2)
            if w.is_identity():
                continue
            g = core_graph([w], 2)
            assert len(g.basis()) == g.subgroup_rank

    def test_basis_words_are_members(self):
        g = core_graph([parse("x^2", 2), parse("x y X", 2)], 2)
        for b in g.basis():
            assert g.contains(b)


class TestFringe:
    def test_single_generator(self):
        fr = fringe(parse("x", 2))
        assert len(fr) == 1
        g, basis = fr[0]
        assert g.subgroup_rank == 1 and basis == [Word((1,), 2)]

    def test_commutator_contains_self_and_whole_group(self):
        fr = fringe(parse("[x,y]", 2))
        ranks = [g.subgroup_rank for g, _ in fr]
        assert 1 in ranks  # <[x,y]> itself
        whole = core_graph([parse("x", 2), parse("y", 2)], 2)
        assert any(g == whole for g, _ in fr)

    def test_commutator_fringe_size_pinned(self):
        # 15 vertex partitions of the 4-cycle fold to 7 distinct subgroups
        assert len(fringe(parse("[x,y]", 2))) == 7

    def test_every_member_contains_word(self):
        for text in ["[x,y]", "x^2 y^2", "x^3"]:
            w = parse(text, 2)
            for g, _ in fringe(w):
                assert membership_rewrite(g, w) is not None

    def test_conjugation_covariance(self):
        w = parse("[x,y]", 2)
        base = fringe(w)
        base_ranks = sorted(g.subgroup_rank for g, _ in base)
        for rot in w.cyclic_rotations():
            fr = fringe(rot)
            assert len(fr) == len(base)
            assert sorted(g.subgroup_rank for g, _ in fr) == base_ranks

    def test_vertex_cap(self):
        w = parse("[x,y]^4", 2)  # 16 vertices
        with pytest.raises(UndecidedError):
            fringe(w)

    def test_deterministic_order(self):
        a = [g.serialize() for g, _ in fringe(parse("[x,y]", 2))]
        b = [g.serialize() for g, _ in fringe(parse("[x,y]", 2))]
        assert a == b


class TestWedgeMarked:
    def test_marked_basepoint_only(self):
        g0 = core_graph([parse("[x,y]", 2)], 2)
        g = LabeledGraph(g0.num_vertices, g0.edges, g0.basepoint, {0}, g0.rank)
        assert wedge_marked(g).serialize() == g0.serialize()

    def test_two_loops_joined(self):
        # x-loops at both endpoints of a y-edge, both endpoints marked.
        # Identifying the endpoints turns the y-edge into a loop and the
        # quotient multigraph has one more independent loop; folding then
        # merges the two coincident x-loops, so the subgroup generated by
        # marked-to-marked paths is <x, y>.
        edges = {(0, 0, 1), (1, 1, 1), (0, 1, 2)}
        g = graph_from_edges(2, edges, 0, {0, 1}, 2)
        assert g.subgroup_rank == 2
        wedged = wedge_marked(g)
        assert wedged.num_vertices == 1 and wedged.num_edges == 2
        assert wedged.contains(parse("x", 2))
        assert wedged.contains(parse("y", 2))

    def test_quotient_keeps_membership(self):
        w = parse("[x,y]", 2)
        base = core_graph([w], 2)
        g = quotient(base, [0, 1, 0, 1])
        assert g.contains(w)
