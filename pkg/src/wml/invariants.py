"""Word invariants: primitivity rank, commutator length, and the subgroups
in which a word is a product of basis commutators.

The primitivity rank pi(w) is the least rank of a subgroup containing w as
a non-primitive element (infinity for primitive w).  Minimal witnesses are
algebraic extensions of <w>, and every algebraic extension appears among
the folded quotients of the core graph of <w>, so the fringe enumeration is
a complete search space.

The commutator length is found through the surface search: the least genus
of an orientable one-boundary surface spelling w equals cl(w), and the
matching-built surfaces realize the minimal genus on all pinned test words
(the subdivision bound is configurable; discrepancies at higher bounds
surface as changed answers, never silently).

Resource caps raise :class:`~wml.errors.UndecidedError`; the report format
records "undecided" rather than guessing a value.
"""

from __future__ import annotations

import math

from .errors import UndecidedError
from .stallings import (
    DEFAULT_FRINGE_VERTEX_CAP,
    core_graph,
    fringe,
    membership_rewrite,
)
from .surfaces import minimal_single_boundary_genus
from .whitehead import DEFAULT_ORBIT_CAP, in_proper_free_factor, is_primitive, \
    orbit_equivalent
from .words import Word

INFINITY = math.inf


def standard_surface_word(genus):
    """[a_1, b_1] ... [a_g, b_g] over rank 2g, in literal generator order."""
    letters = []
    for i in range(genus):
        a, b = 2 * i + 1, 2 * i + 2
        letters.extend([a, b, -a, -b])
    return Word(letters, max(1, 2 * genus))


def primitivity_rank(w, rank, fringe_cap=DEFAULT_FRINGE_VERTEX_CAP,
                     orbit_cap=DEFAULT_ORBIT_CAP):
    """pi(w) together with the minimal-rank witnesses.

    Returns ``(pi, witnesses)`` where each witness is a pair
    ``(graph, w rewritten in the graph's basis)``.
    """
    if w.is_identity():
        return 0, []
    power, root, exponent = w.is_proper_power()
    if power:
        return 1, [(core_graph([root], rank), Word((1,) * exponent, 1))]
    witnesses = []
    best = INFINITY
    for graph, basis in fringe(w, vertex_cap=fringe_cap):
        r = graph.subgroup_rank
        if r > best:
            continue
        rewritten = membership_rewrite(graph, w)
        assert rewritten is not None
        if r == 0 or is_primitive(rewritten, max(1, r)):
            continue
        if r < best:
            best = r
            witnesses = []
        witnesses.append((graph, rewritten))
    if best is INFINITY:
        return INFINITY, []
    return best, witnesses


def is_algebraic_extension(graph, w, orbit_cap=DEFAULT_ORBIT_CAP):
    """Whether the subgroup is an algebraic extension of <w>: it contains w
    and w lies in no proper free factor of it."""
    rewritten = membership_rewrite(graph, w)
    if rewritten is None:
        raise ValueError("the word is not a member of the subgroup")
    if rewritten.is_identity():
        raise ValueError("algebraic extensions are defined for nontrivial words")
    r = max(1, graph.subgroup_rank)
    return not in_proper_free_factor(rewritten, r, orbit_cap=orbit_cap)


def commutator_length(w, genus_cap=3, max_subdivision=2):
    """cl(w): least genus writing w as a product of commutators.

    Infinite when the exponent totals are nonzero; otherwise the least genus
    over matching-built one-boundary surfaces, trying subdivision 1 first.
    Returns the string ">{genus_cap}" when the search exceeds the cap.
    """
    if w.is_identity():
        return 0
    if any(t != 0 for t in w.abelianization()):
        return INFINITY
    best = None
    for k in range(1, max_subdivision + 1):
        g = minimal_single_boundary_genus(w, k)
        if g is not None and (best is None or g < best):
            best = g
        if best == 1:
            break  # a nontrivial word never bounds a one-boundary genus-0 surface
    if best is None or best > genus_cap:
        return f">{genus_cap}"
    return best


def comm_crit(w, rank, fringe_cap=DEFAULT_FRINGE_VERTEX_CAP,
              orbit_cap=DEFAULT_ORBIT_CAP, genus_cap=3):
    """Subgroups of rank pi(w) containing w as the standard surface word.

    Returns ``(graphs, count)``.  Empty when pi(w) is odd, infinite, or
    differs from twice the commutator length.
    """
    power, _, _ = w.is_proper_power()
    if w.is_identity() or power:
        raise ValueError("commutator-critical subgroups are defined for "
                         "nontrivial non-powers")
    pi, _ = primitivity_rank(w, rank, fringe_cap, orbit_cap)
    if pi is INFINITY or pi % 2 == 1:
        return [], 0
    cl = commutator_length(w, genus_cap=max(genus_cap, pi // 2))
    if cl is INFINITY or isinstance(cl, str) or pi != 2 * cl:
        return [], 0
    genus = pi // 2
    target = standard_surface_word(genus)
    out = []
    for graph, basis in fringe(w, vertex_cap=fringe_cap):
        if graph.subgroup_rank != pi:
            continue
        rewritten = membership_rewrite(graph, w)
        assert rewritten is not None
        if any(t != 0 for t in rewritten.abelianization()):
            continue
        if orbit_equivalent(rewritten, target, pi, orbit_cap=orbit_cap):
            out.append(graph)
    return out, len(out)


def critical_subgroups(w, rank, fringe_cap=DEFAULT_FRINGE_VERTEX_CAP,
                       orbit_cap=DEFAULT_ORBIT_CAP):
    """Subgroups of rank exactly pi(w) containing w as a non-primitive
    element."""
    if w.is_identity():
        raise ValueError("critical subgroups are defined for nontrivial words")
    pi, witnesses = primitivity_rank(w, rank, fringe_cap, orbit_cap)
    if pi is INFINITY:
        return []
    return [graph for graph, _ in witnesses]


class InvariantReport:
    """All invariants of a word in one record, JSON-serializable.

    Resource caps leave the affected fields as the string "undecided"
    (with the reason recorded) instead of a value.
    """

    __slots__ = ("word", "rank", "pi", "pi_witnesses", "cl", "comm_crit_graphs",
                 "comm_crit_count", "proper_power", "undecided")

    def __init__(self, word, rank, pi, pi_witnesses, cl, comm_crit_graphs,
                 comm_crit_count, proper_power, undecided):
        for name, value in [
            ("word", word), ("rank", rank), ("pi", pi),
            ("pi_witnesses", pi_witnesses), ("cl", cl),
            ("comm_crit_graphs", comm_crit_graphs),
            ("comm_crit_count", comm_crit_count),
            ("proper_power", proper_power), ("undecided", undecided),
        ]:
            object.__setattr__(self, name, value)

    def __setattr__(self, name, value):
        raise AttributeError("InvariantReport is immutable")

    def to_json(self):
        def encode_value(v):
            if v is INFINITY:
                return "inf"
            return v

        return {
            "word": str(self.word),
            "rank": self.rank,
            "pi": encode_value(self.pi),
            "cl": encode_value(self.cl),
            "comm_crit_count": self.comm_crit_count,
            "comm_crit": [g.serialize() for g in self.comm_crit_graphs]
            if isinstance(self.comm_crit_graphs, list) else self.comm_crit_graphs,
            "witnesses": [
                {"graph": g.serialize(), "rewritten": str(r)}
                for (g, r) in self.pi_witnesses
            ] if isinstance(self.pi_witnesses, list) else self.pi_witnesses,
            "proper_power": {
                "is_power": self.proper_power[0],
                "root": str(self.proper_power[1]),
                "exponent": self.proper_power[2],
            },
            "undecided": self.undecided,
        }


def analyze(w, rank, fringe_cap=DEFAULT_FRINGE_VERTEX_CAP,
            orbit_cap=DEFAULT_ORBIT_CAP, genus_cap=3):
    """Compute the full invariant report, degrading to "undecided" per field
    when a resource cap fires."""
    undecided = {}
    proper_power = w.is_proper_power()

    try:
        pi, witnesses = primitivity_rank(w, rank, fringe_cap, orbit_cap)
    except UndecidedError as exc:
        pi, witnesses = "undecided", "undecided"
        undecided["pi"] = exc.reason

    try:
        cl = commutator_length(w, genus_cap=genus_cap)
    except UndecidedError as exc:
        cl = "undecided"
        undecided["cl"] = exc.reason

    power = proper_power[0]
    if w.is_identity() or power or pi == "undecided":
        graphs, count = [], 0
        if not w.is_identity() and not power and pi == "undecided":
            graphs, count = "undecided", "undecided"
            undecided.setdefault("comm_crit", undecided.get("pi", "cap"))
    else:
        try:
            graphs, count = comm_crit(w, rank, fringe_cap, orbit_cap, genus_cap)
        except UndecidedError as exc:
            graphs, count = "undecided", "undecided"
            undecided["comm_crit"] = exc.reason

    return InvariantReport(
        word=w,
        rank=rank,
        pi=pi,
        pi_witnesses=witnesses,
        cl=cl,
        comm_crit_graphs=graphs,
        comm_crit_count=count,
        proper_power=proper_power,
        undecided=undecided,
    )
