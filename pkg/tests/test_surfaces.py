import pytest

from wml.errors import UndecidedError
from wml.stallings import core_graph
from wml.surfaces import (
    spectrum_map,
    MatchingSpec,
    build_surface,
    enumerate_matchings,
    genus_spectrum,
    is_forbidden,
    minimal_single_boundary_genus,
)
from wml.words import parse


def unique_spec(words, k=1):
    specs = list(enumerate_matchings(words, max_subdivision=k))
    assert len(specs) == 1
    return specs[0]


def collapse_spec(w):
    """The annulus matching for (w, w^-1): every letter to its mirror."""
    words = (w, ~w)
    length = len(w)
    matchings = {}
    for t, a in enumerate(w.letters):
        gen = abs(a)
        pair = ((0, t), (1, length - 1 - t)) if a > 0 else \
            ((1, length - 1 - t), (0, t))
        matchings.setdefault(gen, []).append(pair)
    return MatchingSpec(words, {g: (tuple(m),) for g, m in matchings.items()})


class TestBuildSurface:
    def test_commutator_once_punctured_torus(self):
        # V=5, E=10, F=4: chi=-1, one boundary, genus 1
        spec = unique_spec([parse("[x,y]", 2)])
        s = build_surface(spec)
        assert s.cells == (5, 10, 4)
        assert len(s.components) == 1
        comp = s.components[0]
        assert comp.chi == -1
        assert comp.boundary == 1
        assert comp.genus == 1

    def test_annulus(self):
        spec = unique_spec([parse("x", 1), parse("X", 1)])
        s = build_surface(spec)
        comp = s.components[0]
        assert comp.chi == 0 and comp.boundary == 2 and comp.genus == 0

    def test_malformed_matching_rejected(self):
        w = parse("[x,y]", 2)
        with pytest.raises(ValueError):
            MatchingSpec((w,), {1: (((0, 0), (0, 1)),), 2: (((0, 1), (0, 3)),)})

    def test_unbalanced_rejected(self):
        with pytest.raises(ValueError):
            MatchingSpec((parse("x", 1),), {})

    def test_chi_invariant_under_equal_subdivision(self):
        # splitting every gluing into two parallel copies refines the
        # cellulation without changing the surface
        w = parse("[x,y]", 2)
        base = build_surface(unique_spec([w]))
        specs2 = [
            s for s in enumerate_matchings([w], max_subdivision=2)
            if all(s.subdivision(g) == 2 for g in (1, 2))
        ]
        assert len(specs2) == 1
        refined = build_surface(specs2[0])
        assert refined.components[0].chi == base.components[0].chi
        assert refined.components[0].genus == base.components[0].genus

    def test_genus_integrality_everywhere(self):
        # chi - (2 - boundary) is even for every built component
        for words in [
            [parse("[x,y]", 2)],
            [parse("[x,y]", 2), parse("[y,x]", 2)],
            [parse("[x,y]", 2), ~parse("[x,y]", 2)],
            [parse("x^2", 1), parse("X^2", 1)],
        ]:
            for record in genus_spectrum(words, max_subdivision=1):
                for comp in record["components"]:
                    assert (comp["chi"] - (2 - comp["boundary"])) % 2 == 0
                    assert comp["genus"] >= 0


class TestImageSubgroup:
    def test_commutator_surface_fills_rank_two(self):
        spec = unique_spec([parse("[x,y]", 2)])
        s = build_surface(spec)
        g = s.image_subgroup(0)
        whole = core_graph([parse("x", 2), parse("y", 2)], 2)
        assert g == whole

    def test_annulus_image_is_cyclic(self):
        spec = unique_spec([parse("x", 1), parse("X", 1)])
        s = build_surface(spec)
        g = s.image_subgroup(0)
        assert g.subgroup_rank == 1
        assert g.contains(parse("x", 1))

    def test_collapse_matching_gives_cyclic_group(self):
        for text, rank in [("x", 1), ("[x,y]", 2), ("x y^2 x", 2)]:
            w = parse(text, rank)
            s = build_surface(collapse_spec(w))
            comp = s.components[0]
            assert comp.chi == 0 and comp.boundary == 2 and comp.genus == 0
            g = s.image_subgroup(0)
            assert g.subgroup_rank == 1
            assert g.contains(w)

    def test_image_contains_boundary_words(self):
        for words in [
            [parse("[x,y]", 2), parse("[y,x]", 2)],
            [parse("[x,y]", 2), ~parse("[x,y]", 2)],
        ]:
            for spec in enumerate_matchings(words, max_subdivision=1):
                s = build_surface(spec)
                for i, comp in enumerate(s.components):
                    g = s.image_subgroup(i)
                    for m in comp.annuli:
                        assert g.contains(words[m]), (words, i, m)


class TestEnumeration:
    def test_single_commutator(self):
        assert len(list(enumerate_matchings([parse("[x,y]", 2)]))) == 1

    def test_x_xinv(self):
        assert len(list(enumerate_matchings([parse("x", 1), parse("X", 1)]))) == 1

    def test_commutator_and_inverse(self):
        words = [parse("[x,y]", 2), ~parse("[x,y]", 2)]
        assert len(list(enumerate_matchings(words))) == 4

    def test_spec_cap(self):
        words = [parse("[x,y]^2", 2), ~parse("[x,y]^2", 2)]
        with pytest.raises(UndecidedError):
            list(enumerate_matchings(words, max_subdivision=2, spec_cap=10))

    def test_dedup_does_not_lose_topology(self):
        # permuting subdivision indices must not change the attainable
        # topological data; the deduplicated enumeration must cover the
        # same set of (chi, boundary, genus) component profiles
        words = [parse("[x,y]", 2), parse("[y,x]", 2)]

        def profile(dedup):
            out = set()
            for spec in enumerate_matchings(words, max_subdivision=2,
                                            dedup=dedup):
                s = build_surface(spec)
                out.add(
                    tuple(sorted((c.chi, c.boundary, c.genus)
                                 for c in s.components))
                )
            return out

        assert profile(dedup=True) == profile(dedup=False)


class TestForbidden:
    def test_collapse_matching_everywhere_forbidden(self):
        for text, rank in [("x", 1), ("[x,y]", 2)]:
            w = parse(text, rank)
            spec = collapse_spec(w)
            flag, witness = is_forbidden(spec, w)
            assert flag and witness is not None

    def test_single_word_never_forbidden(self):
        w = parse("[x,y]", 2)
        spec = unique_spec([w])
        flag, _ = is_forbidden(spec, w)
        assert not flag

    def test_paper_style_mirror(self):
        # w = x y^2 x; matching the first x of w to the last inverse letter
        # of w^-1 joins two copies of the same letter
        w = parse("x y^2 x", 2)
        for spec in enumerate_matchings([w, ~w], max_subdivision=1):
            pairs = dict()
            flag, witness = is_forbidden(spec, w)
            x_matching = spec.matchings[1][0]
            mirror = (((0, 0), (1, 3)) in x_matching) or \
                (((0, 3), (1, 0)) in x_matching)
            if mirror:
                assert flag

    def test_wrong_base_rejected(self):
        w = parse("[x,y]", 2)
        spec = unique_spec([w])
        with pytest.raises(ValueError):
            is_forbidden(spec, parse("x y", 2))


class TestSpectrumMap:
    def test_single_commutator(self):
        spectrum = spectrum_map([parse("[x,y]", 2)], max_subdivision=1)
        assert spectrum == {(True, (1,)): [-1]}

    def test_annulus_pair(self):
        spectrum = spectrum_map([parse("x", 1), parse("X", 1)],
                                max_subdivision=1)
        assert spectrum == {(True, (2,)): [0]}

    def test_commutator_and_inverse(self):
        spectrum = spectrum_map(
            [parse("[x,y]", 2), ~parse("[x,y]", 2)], max_subdivision=1
        )
        # four collections: connected surfaces plus the disconnected split
        assert sum(len(v) for v in spectrum.values()) == 4


class TestGenusSearch:
    def test_commutator_genus_one(self):
        assert minimal_single_boundary_genus(parse("[x,y]", 2), 1) == 1

    def test_commutator_cube_genus_two(self):
        w = parse("[x,y]^3", 2)
        assert minimal_single_boundary_genus(w, 1) == 2

    def test_unbalanced_none(self):
        assert minimal_single_boundary_genus(parse("x", 1), 1) is None

    def test_figure_style_pair_includes_split_x(self):
        # for ([x,y], [y,x]) at subdivision 2 some collection splits the
        # x-letters in two; the enumeration must include such specs, and
        # their cellulation counts are pinned
        words = [parse("[x,y]", 2), parse("[y,x]", 2)]
        specs = [
            s for s in enumerate_matchings(words, max_subdivision=2)
            if s.subdivision(1) == 2 and s.subdivision(2) == 1
        ]
        assert specs
        profiles = set()
        for s in specs:
            surface = build_surface(s)
            profiles.add(
                tuple(sorted((c.chi, c.boundary) for c in surface.components))
            )
        # connected glued surfaces with both boundary circles occur at
        # chi in {-2, -4, 0}, alongside the split pair of genus-1 pieces
        assert ((-2, 2),) in profiles
        assert ((-4, 2),) in profiles
        assert ((0, 2),) in profiles
        assert ((-1, 1), (-1, 1)) in profiles


class TestChiBound:
    def test_second_corpus_word(self):
        # components whose joined image group is a rank >= 2 algebraic
        # extension of <w> never beat chi = 1 - pi(w)
        from wml.invariants import is_algebraic_extension, primitivity_rank
        from wml.stallings import core_graph

        w = parse("[x,y^2]", 2)
        pi, _ = primitivity_rank(w, 2)
        assert pi == 2
        cases = [([w], 2), ([w, ~w], 1)]
        checked = 0
        for words, k in cases:
            for spec in enumerate_matchings(words, max_subdivision=k):
                s = build_surface(spec)
                for i, comp in enumerate(s.components):
                    image = s.image_subgroup(i)
                    joined = core_graph(image.basis() + [w], 2)
                    if joined.subgroup_rank < 2:
                        continue
                    if not is_algebraic_extension(joined, w):
                        continue
                    checked += 1
                    assert comp.chi <= 1 - pi
        assert checked > 0


class TestFactorThrough:
    def test_cyclic_image_means_annulus(self):
        # components whose image subgroup lies in <w> carry no topology:
        # on the corpus they are exactly the chi = 0 annuli
        w = parse("[x,y]", 2)
        for spec in enumerate_matchings([w, ~w], max_subdivision=2):
            s = build_surface(spec)
            for i, comp in enumerate(s.components):
                image = s.image_subgroup(i)
                if image.subgroup_rank <= 1:
                    assert comp.chi == 0 and comp.genus == 0
                    basis = image.basis()
                    assert len(basis) == 1
                    assert _is_power_of(basis[0], w)

    def test_closed_surface_rank_bound(self):
        # gluing the two boundaries of a (w, w^-1) component gives a closed
        # surface of genus (2 - chi)/2 that surjects onto the image
        # subgroup, so the image rank is at most that genus
        w = parse("[x,y]", 2)
        for spec in enumerate_matchings([w, ~w], max_subdivision=2):
            s = build_surface(spec)
            for i, comp in enumerate(s.components):
                if comp.boundary != 2:
                    continue
                closed_genus = (2 - comp.chi) // 2
                image = s.image_subgroup(i)
                assert image.subgroup_rank <= closed_genus


def _is_power_of(candidate, w):
    for k in range(1, len(w) + 1):
        if w ** k == candidate or w ** (-k) == candidate:
            return True
    return candidate.is_identity()
