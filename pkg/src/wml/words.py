"""Words in a free group of finite rank, plus a small expression parser.

A letter is a nonzero integer: ``g`` denotes the generator with index ``g``
(1-based) and ``-g`` its inverse.  A :class:`Word` stores a freely reduced
tuple of letters together with the ambient rank; the empty tuple is the
identity.

Input syntax accepted by :func:`parse_word`:

* single-letter generators ``x, y, z, a, b, ..., w`` (in that order), with
  uppercase meaning the inverse;
* indexed generators ``x1, x2, ...`` (``X3`` is the inverse of ``x3``);
* ``^k`` for integer powers (``k`` may be negative), ``[u,v]`` for the
  commutator ``u v u^-1 v^-1``, parentheses for grouping, juxtaposition for
  concatenation.

Indexed form is the canonical output; ``str(word)`` round-trips through the
parser.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

# Single-letter alphabet, in generator order: x is generator 1, y is 2, ...
_ALPHABET = "xyzabcdefghijklmnopqrstuvw"
_LETTER_INDEX = {c: i + 1 for i, c in enumerate(_ALPHABET)}


def free_reduce(letters):
    """Freely reduce a sequence of nonzero integers."""
    out = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


class Word:
    """A freely reduced word in the free group of rank ``rank``.

    Immutable; all operations return new words.

    >>> w = Word([1, 2, -1, -2], 2)
    >>> str(w)
    'x1 x2 x1^-1 x2^-1'
    >>> (w * ~w).is_identity()
    True
    """

    __slots__ = ("letters", "rank")

    def __init__(self, letters, rank):
        letters = free_reduce(letters)
        for a in letters:
            if a == 0 or abs(a) > rank:
                raise ValueError(f"letter {a} outside rank {rank}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @staticmethod
    def identity(rank):
        return Word((), rank)

    def is_identity(self):
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return Word(self.letters + other.letters, self.rank)

    def __invert__(self):
        return Word(tuple(-a for a in reversed(self.letters)), self.rank)

    def inverse(self):
        return ~self

    def __pow__(self, k):
        if k < 0:
            return (~self) ** (-k)
        base = self
        if len(base) >= 2 and base.letters[0] == -base.letters[-1]:
            # conjugate form: take powers of the cyclic core to avoid
            # quadratic re-reduction
            core, conj = base.cyclic_reduce()
            return conj * (core ** k) * ~conj
        return Word(base.letters * k, self.rank)

    def __eq__(self, other):
        return (
            isinstance(other, Word)
            and self.letters == other.letters
            and self.rank == other.rank
        )

    def __hash__(self):
        return hash((self.letters, self.rank))

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for gen, exp in self.syllables():
            if exp == 1:
                parts.append(f"x{gen}")
            else:
                parts.append(f"x{gen}^{exp}")
        return " ".join(parts)

    def syllables(self):
        """Return the word as a list of (generator, nonzero exponent) runs."""
        runs = []
        for a in self.letters:
            g = abs(a)
            e = 1 if a > 0 else -1
            if runs and runs[-1][0] == g and (runs[-1][1] > 0) == (e > 0):
                runs[-1][1] += e
            else:
                runs.append([g, e])
        return [(g, e) for g, e in runs]

    def cyclic_reduce(self):
        """Split off the conjugating prefix.

        Returns ``(core, conj)`` with ``self == conj * core * ~conj`` and
        ``core`` cyclically reduced.  The core is empty iff the word is
        the identity.
        """
        letters = list(self.letters)
        prefix = []
        while len(letters) >= 2 and letters[0] == -letters[-1]:
            prefix.append(letters[0])
            letters = letters[1:-1]
        return Word(letters, self.rank), Word(prefix, self.rank)

    def cyclic_rotations(self):
        """All rotations of the cyclic core (with the same conjugator dropped)."""
        core, _ = self.cyclic_reduce()
        c = core.letters
        return [Word(c[i:] + c[:i], self.rank) for i in range(max(1, len(c)))]

    def abelianization(self):
        """Total exponent of each generator, as a tuple of length ``rank``."""
        totals = [0] * self.rank
        for a in self.letters:
            totals[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(totals)

    def is_proper_power(self):
        """Decide whether the word is ``root**d`` with ``d >= 2``.

        Returns ``(True, root, d)`` with ``d`` maximal, or ``(False, self, 1)``.
        The identity is not considered a proper power.
        """
        core, conj = self.cyclic_reduce()
        n = len(core)
        if n == 0:
            return False, self, 1
        c = core.letters
        for p in range(1, n):
            if n % p:
                continue
            if all(c[i] == c[i % p] for i in range(n)):
                root = conj * Word(c[:p], self.rank) * ~conj
                return True, root, n // p
        return False, self, 1

    def canonical_key(self):
        """Conjugacy-aware text key: minimal rotation of the cyclic core plus
        the adjusted conjugator.  Distinct words get distinct keys."""
        core, conj = self.cyclic_reduce()
        c = core.letters
        if not c:
            return "|"
        best_i = min(range(len(c)), key=lambda i: c[i:] + c[:i])
        rot = Word(c[best_i:] + c[:best_i], self.rank)
        conj_adj = conj * Word(c[:best_i], self.rank)
        return f"{conj_adj}|{rot}"


def commutator(u, v):
    return u * v * ~u * ~v


def is_balanced(words):
    """Check that every generator has total exponent zero over all words.

    Returns ``(flag, totals)`` where ``totals`` maps generator index to its
    total exponent.
    """
    if not words:
        return True, {}
    rank = max(w.rank for w in words)
    totals = {g: 0 for g in range(1, rank + 1)}
    for w in words:
        for a in w.letters:
            totals[abs(a)] += 1 if a > 0 else -1
    return all(t == 0 for t in totals.values()), totals


# --- expression AST ---------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    index: int

    def evaluate(self, rank):
        if self.index > rank:
            raise ParseError(f"generator x{self.index} exceeds rank {rank}", 0)
        return Word((self.index,), rank)


@dataclass(frozen=True)
class Inverse:
    body: "WordExpr"

    def evaluate(self, rank):
        return ~self.body.evaluate(rank)


@dataclass(frozen=True)
class Power:
    body: "WordExpr"
    exponent: int

    def evaluate(self, rank):
        return self.body.evaluate(rank) ** self.exponent


@dataclass(frozen=True)
class Concat:
    parts: tuple

    def evaluate(self, rank):
        w = Word.identity(rank)
        for p in self.parts:
            w = w * p.evaluate(rank)
        return w


@dataclass(frozen=True)
class Commutator:
    left: "WordExpr"
    right: "WordExpr"

    def evaluate(self, rank):
        return commutator(self.left.evaluate(rank), self.right.evaluate(rank))


WordExpr = Generator | Inverse | Power | Concat | Commutator


# --- parser -----------------------------------------------------------------


class _Parser:
    def __init__(self, text, rank=None):
        self.text = text
        self.rank = rank
        self.pos = 0

    def error(self, message):
        raise ParseError(message, self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def _integer(self):
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        if self.peek() is None or not self.text[self.pos].isdigit():
            self.pos = start
            self.error("expected an integer")
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos])

    def _index_suffix(self):
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        return int(self.text[start:self.pos]) if self.pos > start else None

    def parse(self):
        expr = self._sequence()
        if self.peek() is not None:
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return expr

    def _sequence(self):
        parts = []
        while True:
            ch = self.peek()
            if ch is None or ch in "),]":
                break
            parts.append(self._factor())
        if not parts:
            self.error("empty word expression")
        return parts[0] if len(parts) == 1 else Concat(tuple(parts))

    def _factor(self):
        atom = self._atom()
        while self.peek() == "^":
            self.pos += 1
            if self.peek() == "-" and self.text[self.pos:self.pos + 2] == "-1" \
                    and not self.text[self.pos + 2:self.pos + 3].isdigit():
                self.pos += 2
                atom = Inverse(atom)
            else:
                atom = Power(atom, self._integer())
        return atom

    def _atom(self):
        ch = self.peek()
        if ch is None:
            self.error("unexpected end of input")
        if ch == "1":
            self.pos += 1
            return Concat(())
        if ch == "(":
            self.pos += 1
            inner = self._sequence()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "[":
            self.pos += 1
            left = self._sequence()
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            right = self._sequence()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            return Commutator(left, right)
        if ch.isalpha():
            start = self.pos
            self.pos += 1
            lower = ch.lower()
            inverse = ch.isupper()
            if lower == "x":
                idx = self._index_suffix()
                if idx is not None:
                    if idx < 1:
                        self.error("generator index must be >= 1")
                    return self._generator(idx, inverse, start)
            if self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.error("only 'x' takes an index suffix")
            if lower not in _LETTER_INDEX:
                self.error(f"unknown generator letter {ch!r}")
            return self._generator(_LETTER_INDEX[lower], inverse, start)
        self.error(f"unexpected character {ch!r}")

    def _generator(self, index, inverse, start):
        if self.rank is not None and index > self.rank:
            self.pos = start
            self.error(f"generator x{index} exceeds rank {self.rank}")
        g = Generator(index)
        return Inverse(g) if inverse else g


def parse_word(text, rank):
    """Parse word text into an expression tree.

    Generator indices are validated against ``rank`` at their positions in
    the text; evaluation plus free reduction yields the :class:`Word`.
    """
    return _Parser(text, rank).parse()


def parse(text, rank):
    """Parse and evaluate in one step, returning the reduced :class:`Word`."""
    return parse_word(text, rank).evaluate(rank)
