"""Exact moments of word measures on U(n), as rational functions of n.

The integral E[tr(w_1(U)) ... tr(w_l(U))] over independent Haar unitaries
U_1, ..., U_r is expanded one generator at a time.  Integrating out a
generator x that occurs p times with each sign contributes a sum over pairs
of bijections (sigma, tau) between the positive and negative occurrences:
each pair carries the Weingarten weight Wg(sigma tau^-1, n) and rewires the
trace cycles, with every index loop that closes contributing a factor n.
The last remaining generator is integrated in closed form via the classical
power-sum orthogonality on U(n): E[p_alpha(U) conj(p_beta(U))] equals
delta_{alpha beta} * z_alpha exactly once n >= |alpha|.

Every returned value is an exact :class:`~wml.ratfunc.RationalFunction`
tagged with the validity bound n_min = max_x p_x.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import factorial

from .errors import UndecidedError
from .partitions import (
    cycle_type,
    dimension,
    murnaghan_nakayama,
    partitions_of,
    schur_dim,
    z_order,
)
from .ratfunc import Polynomial, RationalFunction, laurent  # noqa: F401 - laurent re-exported
from .words import free_reduce, is_balanced

DEFAULT_TERM_CAP = 10 ** 8


@lru_cache(maxsize=None)
def wg(sigma_type):
    """Weingarten function Wg(sigma, n) for a cycle type sigma of S_p.

    Wg(sigma, n) = (1/p!^2) sum_{lam |- p} dim(lam)^2 chi^lam(sigma) / s_lam(1^n),
    valid as a rational function for n >= p.
    """
    mu = tuple(sigma_type)
    p = sum(mu)
    if p < 1:
        raise ValueError("cycle type of S_p needs p >= 1")
    total = RationalFunction(0)
    for lam in partitions_of(p):
        d = dimension(lam)
        chi = murnaghan_nakayama(lam, mu)
        if chi == 0:
            continue
        total = total + RationalFunction(d * d * chi) / schur_dim(lam)
    scale = RationalFunction(Polynomial.const(1), Polynomial.const(factorial(p) ** 2))
    return (total * scale).with_n_min(p)


class TraceMonomial:
    """A product xi_{m_1} ... xi_{m_l} of power-of-trace observables.

    Exponents are nonzero integers; the empty monomial is the constant 1.
    """

    __slots__ = ("exponents",)

    def __init__(self, exponents=()):
        exps = tuple(int(m) for m in exponents)
        if any(m == 0 for m in exps):
            raise ValueError("trace exponents must be nonzero")
        object.__setattr__(self, "exponents", exps)

    def __setattr__(self, name, value):
        raise AttributeError("TraceMonomial is immutable")

    def conjugate(self):
        return TraceMonomial(tuple(-m for m in self.exponents))

    def __eq__(self, other):
        return isinstance(other, TraceMonomial) and sorted(self.exponents) == sorted(
            other.exponents
        )

    def __hash__(self):
        return hash(tuple(sorted(self.exponents)))

    def __repr__(self):
        return f"TraceMonomial{self.exponents}"


def stable_inner_product(t1, t2):
    """Large-n inner product of two trace monomials on U(n).

    Combines t1 with the conjugate of t2, tallies a_p (count of exponent +p)
    and b_p (count of -p), and returns prod_p delta_{a_p b_p} a_p! p^{a_p}.
    """
    exps = list(t1.exponents) + [-m for m in t2.exponents]
    a, b = {}, {}
    for m in exps:
        if m > 0:
            a[m] = a.get(m, 0) + 1
        else:
            b[-m] = b.get(-m, 0) + 1
    value = 1
    for p in set(a) | set(b):
        ap, bp = a.get(p, 0), b.get(p, 0)
        if ap != bp:
            return 0
        value *= factorial(ap) * p ** ap
    return value


# --- trace-cycle states -----------------------------------------------------


def _cyclic_key(letters):
    """Canonical form of a cyclic word: lexicographically minimal rotation
    of the cyclically reduced letter tuple; None if it reduces to nothing."""
    word = free_reduce(letters)
    word = list(word)
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    if not word:
        return None
    n = len(word)
    return min(tuple(word[i:] + word[:i]) for i in range(n))


def _integrate_letter(monomial, gen, term_budget):
    """Integrate out one generator from a multiset of cyclic words.

    Returns a dict mapping new monomials (sorted tuples of cyclic keys) to
    RationalFunction coefficients.  ``monomial`` is a tuple of letter tuples.
    """
    active = []
    passthrough = []
    for cw in monomial:
        if any(abs(a) == gen for a in cw):
            active.append(cw)
        else:
            passthrough.append(cw)
    if not active:
        return {tuple(sorted(passthrough)): RationalFunction(1)}

    # occurrences and the in-between segments, per active word
    positives = []  # ids
    negatives = []
    segments = {}  # occurrence id -> letters departing from it
    arrive = {}  # occurrence id at which each departing segment arrives
    occ_id = 0
    for cw in active:
        idxs = [i for i, a in enumerate(cw) if abs(a) == gen]
        ids = []
        for i in idxs:
            ids.append((occ_id, cw[i] > 0))
            (positives if cw[i] > 0 else negatives).append(occ_id)
            occ_id += 1
        for k, i in enumerate(idxs):
            j = idxs[(k + 1) % len(idxs)]
            seg = cw[i + 1:j] if j > i else cw[i + 1:] + cw[:j]
            segments[ids[k][0]] = seg
            arrive[ids[k][0]] = ids[(k + 1) % len(idxs)][0]
    p = len(positives)
    if p != len(negatives):
        # unbalanced in this letter: the integral vanishes
        return {}
    if p == 0:
        return {tuple(sorted(passthrough)): RationalFunction(1)}

    cost = factorial(p) ** 2
    if cost > term_budget[0]:
        raise UndecidedError(
            f"pair sum for generator {gen} needs {cost} terms, over the cap"
        )
    term_budget[0] -= cost

    out = {}
    pos = tuple(positives)
    neg = tuple(negatives)
    for sigma in permutations(range(p)):
        for tau in permutations(range(p)):
            # sigma, tau: positions of positives -> positions of negatives
            tau_inv = [0] * p
            for i, t in enumerate(tau):
                tau_inv[t] = i
            weight = wg(cycle_type(tuple(sigma[tau_inv[i]] for i in range(p))))
            # rewire: successor of the segment arriving at each occurrence
            succ = {}
            for i in range(p):
                succ[pos[i]] = neg[sigma[i]]  # arriving at positive i
                succ[neg[i]] = pos[tau_inv[i]]  # arriving at negative i
            new_words = list(passthrough)
            loops = 0
            seen = set()
            for start in segments:
                if start in seen:
                    continue
                letters = []
                cur = start
                while cur not in seen:
                    seen.add(cur)
                    letters.extend(segments[cur])
                    cur = succ[arrive[cur]]
                key = _cyclic_key(letters)
                if key is None:
                    loops += 1
                else:
                    new_words.append(key)
            coeff = weight * RationalFunction.n_power(loops)
            key = tuple(sorted(new_words))
            out[key] = out.get(key, RationalFunction(0)) + coeff
    return out


def _power_sum_expectation(alpha, beta):
    """E[p_alpha(U) conj(p_beta(U))] over Haar U(n), exact for n >= |alpha|.

    This is the one-matrix orthogonality: nonzero only when the two
    partitions coincide, in which case the value is the centralizer order.
    """
    alpha = tuple(sorted(alpha, reverse=True))
    beta = tuple(sorted(beta, reverse=True))
    if sum(alpha) != sum(beta):
        return 0
    if alpha != beta:
        return 0
    return z_order(alpha)


def _final_letter_value(monomial, gen):
    """Closed-form Haar expectation of a monomial in a single generator."""
    alpha, beta = [], []
    for cw in monomial:
        total = 0
        for a in cw:
            if abs(a) != gen:
                raise ValueError("monomial still mixes generators")
            total += 1 if a > 0 else -1
        if total > 0:
            alpha.append(total)
        elif total < 0:
            beta.append(-total)
        # a cyclic word over one letter always reduces to a pure power,
        # so total == 0 cannot occur for a nonempty reduced cyclic word
    return _power_sum_expectation(alpha, beta)


def word_moment(words, term_cap=DEFAULT_TERM_CAP, force_pair_sum=False):
    """E[tr(w_1) ... tr(w_l)] over independent Haar unitaries, exactly.

    Returns the zero function for unbalanced collections.  The result is
    tagged with n_min = max over generators of the per-sign occurrence count.
    """
    words = list(words)
    if not words:
        return RationalFunction(1)
    balanced, totals = is_balanced(words)
    if not balanced:
        return RationalFunction(0)

    # trivial boundary words contribute tr(I) = n each
    prefactor_exp = sum(1 for w in words if w.is_identity())
    remaining = [w.letters for w in words if not w.is_identity()]
    if not remaining:
        return RationalFunction.n_power(prefactor_exp)

    counts = {}
    for cw in remaining:
        for a in cw:
            if a > 0:
                counts[a] = counts.get(a, 0) + 1
    n_min = max(counts.values())
    gens = sorted(counts, key=lambda g: counts[g])
    final = gens[-1]
    pair_sum_gens = gens[:-1]
    if force_pair_sum:
        pair_sum_gens = gens
        final = None

    budget = [term_cap]
    state = {tuple(sorted(_cyclic_key(cw) for cw in remaining)): RationalFunction(1)}
    # a reduced nontrivial word cannot have a trivial cyclic key
    assert None not in next(iter(state))

    for g in pair_sum_gens:
        new_state = {}
        for monomial, coeff in state.items():
            for key, c in _integrate_letter(monomial, g, budget).items():
                add = coeff * c
                new_state[key] = new_state.get(key, RationalFunction(0)) + add
        state = {k: v for k, v in new_state.items() if not v.is_zero()}

    total = RationalFunction(0)
    for monomial, coeff in state.items():
        if final is None:
            # all letters integrated by pair sums; only loops remain
            value = 1 if not monomial else 0
            if monomial:
                raise AssertionError("letters left after integrating all generators")
        else:
            value = _final_letter_value(monomial, final)
        if value:
            total = total + coeff * RationalFunction(value)
    if prefactor_exp:
        total = total * RationalFunction.n_power(prefactor_exp)
    return total.with_n_min(max(total.n_min, n_min))


def moment(w, trace_monomial, term_cap=DEFAULT_TERM_CAP):
    """E_w[xi_{m_1} ... xi_{m_l}]: the trace-monomial moment of the word
    measure of w, i.e. the mixed moment of (w^{m_1}, ..., w^{m_l})."""
    if isinstance(trace_monomial, (tuple, list)):
        trace_monomial = TraceMonomial(trace_monomial)
    boundary = [w ** m for m in trace_monomial.exponents]
    return word_moment(boundary, term_cap=term_cap)


def expansion_prediction(w, trace_monomial, pi, comm_crit_count):
    """First two predicted expansion terms of E_w[T] and the remainder bound.

    For a non-power w: constant term <T,1>; coefficient
    (<T,xi_1> + <T,xi_-1>) * |commutator-critical subgroups| at exponent
    1 - pi; remainder O(n^-pi).  Exponents are None when pi is infinite.
    """
    if isinstance(trace_monomial, (tuple, list)):
        trace_monomial = TraceMonomial(trace_monomial)
    is_power, _, _ = w.is_proper_power()
    if is_power:
        raise ValueError("expansion prediction applies to non-powers only")
    constant = stable_inner_product(trace_monomial, TraceMonomial())
    bracket = stable_inner_product(trace_monomial, TraceMonomial((1,))) + \
        stable_inner_product(trace_monomial, TraceMonomial((-1,)))
    if pi == float("inf"):
        return {
            "constant": constant,
            "second_coefficient": 0,
            "second_exponent": None,
            "remainder_exponent": None,
        }
    return {
        "constant": constant,
        "second_coefficient": bracket * comm_crit_count,
        "second_exponent": 1 - pi,
        "remainder_exponent": -pi,
    }
