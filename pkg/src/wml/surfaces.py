"""Surfaces glued from annuli along letter matchings.

Given boundary words (one annulus each, subdivided into one quadrilateral
per letter sub-segment), a matching collection picks, for every generator x
and every subdivision index j, a perfect matching between the (x, j) and
(x^-1, j) sub-segments across all words.  Gluing matched outer edges with
reversed orientation yields a compact oriented surface whose boundary
circles are the inner circles of the annuli.

Everything topological is computed combinatorially: Euler characteristics
by union-find over cellulation vertices, genus from chi = 2 - 2g - b, and
the image subgroup of a component from the dual graph whose vertices are
the regions between cut arcs and whose edges are the matched pairs of the
first subdivision level.
"""

from __future__ import annotations

from itertools import permutations, product

from .errors import UndecidedError
from .stallings import RawGraph
from .words import is_balanced

DEFAULT_SPEC_CAP = 200_000


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


class MatchingSpec:
    """Boundary words plus, per generator, one matching per subdivision index.

    A matching is a tuple of pairs ``(positive, negative)`` of letter
    occurrences, each occurrence being ``(word_index, position)``.
    """

    __slots__ = ("words", "matchings")

    def __init__(self, words, matchings):
        words = tuple(words)
        balanced, _ = is_balanced(list(words))
        if not balanced:
            raise ValueError("matching specs need balanced word collections")
        occ = _occurrences(words)
        for gen, levels in matchings.items():
            pos, neg = occ.get(gen, ((), ()))
            for matching in levels:
                if sorted(p for p, _ in matching) != sorted(pos):
                    raise ValueError(f"matching does not cover the {gen}-letters")
                if sorted(n for _, n in matching) != sorted(neg):
                    raise ValueError(
                        f"matching is not a bijection onto the inverse {gen}-letters"
                    )
        for gen, (pos, neg) in occ.items():
            if pos and gen not in matchings:
                raise ValueError(f"no matching supplied for generator {gen}")
        object.__setattr__(
            self,
            "words",
            words,
        )
        object.__setattr__(
            self,
            "matchings",
            {g: tuple(tuple(sorted(m)) for m in levels)
             for g, levels in matchings.items()},
        )

    def __setattr__(self, name, value):
        raise AttributeError("MatchingSpec is immutable")

    def subdivision(self, gen):
        return len(self.matchings.get(gen, ()))

    def key(self):
        return tuple(sorted(self.matchings.items()))

    def __eq__(self, other):
        return isinstance(other, MatchingSpec) and self.words == other.words \
            and self.key() == other.key()

    def __hash__(self):
        return hash((self.words, self.key()))


def _occurrences(words):
    """Per generator: ordered positive and negative letter occurrences."""
    occ = {}
    for wi, w in enumerate(words):
        for pos, a in enumerate(w.letters):
            lists = occ.setdefault(abs(a), ([], []))
            lists[0 if a > 0 else 1].append((wi, pos))
    return {g: (tuple(p), tuple(n)) for g, (p, n) in occ.items()}


class SurfaceComponent:
    """Connected component data: annuli members, chi, boundary count, genus."""

    __slots__ = ("annuli", "chi", "boundary", "genus")

    def __init__(self, annuli, chi, boundary):
        object.__setattr__(self, "annuli", tuple(sorted(annuli)))
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "boundary", boundary)
        genus2 = 2 - boundary - chi
        if genus2 % 2 or genus2 < 0:
            raise AssertionError(
                f"chi={chi}, boundary={boundary} is not an oriented surface"
            )
        object.__setattr__(self, "genus", genus2 // 2)

    def __setattr__(self, name, value):
        raise AttributeError("SurfaceComponent is immutable")

    def __repr__(self):
        return (
            f"SurfaceComponent(annuli={self.annuli}, chi={self.chi}, "
            f"boundary={self.boundary}, genus={self.genus})"
        )


class SurfaceComplex:
    """The glued surface: cellulation counts, gluing list, components."""

    __slots__ = ("spec", "sub_letters", "glue_pairs", "components", "chi",
                 "cells")

    def __init__(self, spec, sub_letters, glue_pairs, components, cells):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "sub_letters", sub_letters)
        object.__setattr__(self, "glue_pairs", tuple(glue_pairs))
        object.__setattr__(self, "components", tuple(components))
        object.__setattr__(self, "chi", sum(c.chi for c in components))
        object.__setattr__(self, "cells", cells)  # total (V, E, F)

    def __setattr__(self, name, value):
        raise AttributeError("SurfaceComplex is immutable")

    def component_of_annulus(self, m):
        for i, comp in enumerate(self.components):
            if m in comp.annuli:
                return i
        raise ValueError(f"no component contains annulus {m}")

    def image_subgroup_graph(self, component_index):
        """Dual graph of the component: one vertex per region between the
        first-level arcs, one labeled edge per first-level matched pair,
        the regions holding the annulus basepoints marked."""
        return _dual_graph(self, component_index)

    def image_subgroup(self, component_index):
        """Folded graph of the subgroup generated by the images of all
        marked-point-to-marked-point paths of the component."""
        return _dual_graph(self, component_index).subgroup()

    def to_json(self):
        return {
            "cells": {"vertices": self.cells[0], "edges": self.cells[1],
                      "faces": self.cells[2]},
            "annuli": [
                {
                    "word": str(w),
                    "sub_letters": [
                        {"position": t, "letter": a, "level": j}
                        for (t, a, j) in self.sub_letters[m]
                    ],
                }
                for m, w in enumerate(self.spec.words)
            ],
            "gluings": [
                {
                    "generator": g,
                    "level": j,
                    "positive": [m, q],
                    "negative": [m2, q2],
                }
                for (g, j, (m, q), (m2, q2)) in self.glue_pairs
            ],
            "components": [
                {
                    "annuli": list(c.annuli),
                    "chi": c.chi,
                    "boundary": c.boundary,
                    "genus": c.genus,
                }
                for c in self.components
            ],
        }

    def __repr__(self):
        return f"SurfaceComplex(chi={self.chi}, components={list(self.components)})"


def build_surface(spec):
    """Cellulate the annuli, glue matched outer edges, and read off the
    topology of every connected component."""
    words = spec.words
    # each annulus: one quadrilateral per letter sub-segment
    sub_letters = []  # per annulus: list of (letter position, letter, level j)
    sub_index = []  # per annulus: {(position, level) -> subquad index}
    for w in words:
        subs = []
        index = {}
        for t, a in enumerate(w.letters):
            k = spec.subdivision(abs(a))
            levels = range(1, k + 1) if a > 0 else range(k, 0, -1)
            for j in levels:
                index[(t, j)] = len(subs)
                subs.append((t, a, j))
        sub_letters.append(tuple(subs))
        sub_index.append(index)

    glue_pairs = []
    for gen in sorted(spec.matchings):
        for j, matching in enumerate(spec.matchings[gen], start=1):
            for (wi, pos), (wj, njpos) in matching:
                q = sub_index[wi][(pos, j)]
                q2 = sub_index[wj][(njpos, j)]
                glue_pairs.append((gen, j, (wi, q), (wj, q2)))

    # vertices: inner and outer ring corners, merged along gluings
    uf = _UnionFind()
    sizes = [len(s) for s in sub_letters]
    for m, s in enumerate(sizes):
        for q in range(s):
            uf.add(("i", m, q))
            uf.add(("o", m, q))
    annuli_uf = _UnionFind()
    for m in range(len(words)):
        annuli_uf.add(m)
    for (_, _, (m, q), (m2, q2)) in glue_pairs:
        # orientation-reversing: start of one to end of the other
        uf.union(("o", m, q), ("o", m2, (q2 + 1) % sizes[m2]))
        uf.union(("o", m, (q + 1) % sizes[m]), ("o", m2, q2))
        annuli_uf.union(m, m2)

    comp_of = {m: annuli_uf.find(m) for m in range(len(words))}
    comp_ids = sorted(set(comp_of.values()))
    vertex_count = {c: 0 for c in comp_ids}
    seen = set()
    for m in range(len(words)):
        for q in range(sizes[m]):
            for kind in ("i", "o"):
                root = uf.find((kind, m, q))
                if root not in seen:
                    seen.add(root)
                    vertex_count[comp_of[root[1]]] += 1
    edge_count = {c: 0 for c in comp_ids}
    face_count = {c: 0 for c in comp_ids}
    for m in range(len(words)):
        c = comp_of[m]
        edge_count[c] += 2 * sizes[m]  # inner + radial
        face_count[c] += sizes[m]
    for (_, _, (m, _), _) in glue_pairs:
        edge_count[comp_of[m]] += 1  # each glued pair is one outer edge

    components = []
    for c in comp_ids:
        members = [m for m in range(len(words)) if comp_of[m] == c]
        chi = vertex_count[c] - edge_count[c] + face_count[c]
        components.append(SurfaceComponent(members, chi, boundary=len(members)))
    cells = (
        sum(vertex_count.values()),
        sum(edge_count.values()),
        sum(face_count.values()),
    )
    return SurfaceComplex(spec, tuple(sub_letters), glue_pairs, components,
                          cells)


def _dual_graph(surface, component_index):
    comp = surface.components[component_index]
    members = set(comp.annuli)
    sizes = [len(s) for s in surface.sub_letters]
    uf = _UnionFind()
    for m in members:
        for q in range(sizes[m]):
            uf.add((m, q, 0))
            uf.add((m, q, 1))
        for q in range(sizes[m]):
            uf.union((m, q, 1), (m, (q + 1) % sizes[m], 0))
    cut_glues = []
    for (gen, j, (m, q), (m2, q2)) in surface.glue_pairs:
        if m not in members:
            continue
        if j == 1:
            uf.union((m, q, 0), (m2, q2, 1))
            uf.union((m, q, 1), (m2, q2, 0))
            cut_glues.append((gen, (m, q), (m2, q2)))
        else:
            # no arc at this level: the whole double-quad is one region
            uf.union((m, q, 0), (m2, q2, 1))
            uf.union((m, q, 1), (m2, q2, 0))
            uf.union((m, q, 0), (m, q, 1))
    roots = sorted({uf.find(p) for p in uf.parent})
    region = {root: i for i, root in enumerate(roots)}
    # parallel equal-label arcs between the same regions carry the same
    # path words, and folding merges them anyway; a set suffices
    edges = set()
    for (gen, (m, q), (m2, q2)) in cut_glues:
        _, a, _ = surface.sub_letters[m][q]
        assert a > 0, "glue pairs store the positive occurrence first"
        # crossing the arc in word direction at the positive occurrence
        # reads the generator
        tail, head = (m, q, 0), (m, q, 1)
        edges.add((region[uf.find(tail)], region[uf.find(head)], gen))
    marked = {region[uf.find((m, 0, 0))] for m in members}
    basepoint = region[uf.find((min(members), 0, 0))]
    return RawGraph(
        num_vertices=len(roots),
        edges=tuple(sorted(edges)),
        basepoint=basepoint,
        marked=frozenset(marked),
        rank=max(w.rank for w in surface.spec.words),
    )


def enumerate_matchings(words, max_subdivision=1, spec_cap=DEFAULT_SPEC_CAP,
                        dedup=True):
    """All matching collections with at most ``max_subdivision`` matchings
    per generator, deduplicated under permutations of subdivision indices.

    Yields :class:`MatchingSpec` objects.
    """
    words = list(words)
    balanced, _ = is_balanced(words)
    if not balanced:
        raise ValueError("only balanced collections bound surfaces")
    occ = _occurrences(tuple(words))
    gens = sorted(g for g, (pos, neg) in occ.items() if pos)

    per_gen_choices = []
    total = 1
    for g in gens:
        pos, neg = occ[g]
        single = [
            tuple(zip(pos, (neg[i] for i in perm)))
            for perm in permutations(range(len(neg)))
        ]
        choices = []
        keys = set()
        for k in range(1, max_subdivision + 1):
            for combo in product(single, repeat=k):
                if dedup:
                    key = tuple(sorted(combo))
                    if key in keys:
                        continue
                    keys.add(key)
                choices.append(combo)
        per_gen_choices.append(choices)
        total *= len(choices)
        if total > spec_cap:
            raise UndecidedError(
                f"matching enumeration needs {total}+ collections, over the cap"
            )

    for assignment in product(*per_gen_choices):
        yield MatchingSpec(words, dict(zip(gens, assignment)))


def is_forbidden(spec, base_word):
    """Whether some matched pair joins two copies of the same letter of the
    base word.  All boundary words must be powers of ``base_word``.

    Returns ``(flag, witness)`` where the witness names the offending pair.
    """
    length = len(base_word)
    exponents = []
    for w in spec.words:
        if length == 0 or len(w) % length:
            raise ValueError(f"{w} is not a power of {base_word}")
        e = len(w) // length
        if w == base_word ** e:
            exponents.append(e)
        elif w == base_word ** (-e):
            exponents.append(-e)
        else:
            raise ValueError(f"{w} is not a power of {base_word}")

    def origin(word_index, position):
        e = exponents[word_index]
        if e > 0:
            return position % length, 1
        return length - 1 - (position % length), -1

    for gen, levels in spec.matchings.items():
        for j, matching in enumerate(levels, start=1):
            for (p, n) in matching:
                pos_origin, pos_sign = origin(*p)
                neg_origin, neg_sign = origin(*n)
                if pos_origin == neg_origin and pos_sign != neg_sign:
                    return True, (gen, j, p, n)
    return False, None


def genus_spectrum(words, max_subdivision=1, spec_cap=DEFAULT_SPEC_CAP,
                   compute_images=False):
    """Fold the matching enumeration through the surface builder.

    Returns a list of records, one per matching collection, each holding the
    surface and per-component (chi, boundary, genus[, image subgroup]).
    """
    records = []
    for spec in enumerate_matchings(words, max_subdivision, spec_cap):
        surface = build_surface(spec)
        comps = []
        for i, comp in enumerate(surface.components):
            entry = {
                "chi": comp.chi,
                "boundary": comp.boundary,
                "genus": comp.genus,
            }
            if compute_images:
                subgroup = surface.image_subgroup(i)
                entry["image_rank"] = subgroup.subgroup_rank
                entry["image_graph"] = subgroup
            comps.append(entry)
        records.append({"surface": surface, "components": comps})
    return records


def spectrum_map(words, max_subdivision=1, spec_cap=DEFAULT_SPEC_CAP):
    """Attainable total Euler characteristics keyed by shape.

    Keys are ``(connected, boundary profile)``; values are the sorted list
    of total chi over all matching collections with that shape.
    """
    out = {}
    for record in genus_spectrum(words, max_subdivision, spec_cap):
        comps = record["components"]
        key = (
            len(comps) == 1,
            tuple(sorted(c["boundary"] for c in comps)),
        )
        out.setdefault(key, []).append(sum(c["chi"] for c in comps))
    return {key: sorted(vals) for key, vals in out.items()}


def minimal_single_boundary_genus(word, max_subdivision, spec_cap=DEFAULT_SPEC_CAP):
    """Least genus over all matching-built surfaces with the single
    boundary word; None when the word is not balanced."""
    balanced, _ = is_balanced([word])
    if not balanced:
        return None
    best = None
    for record in genus_spectrum([word], max_subdivision, spec_cap):
        for comp in record["components"]:
            if best is None or comp["genus"] < best:
                best = comp["genus"]
    return best
