"""Free-group words, laws and the word syntax.

Syntax: identifiers separated by whitespace or ``*``, ``^k`` for any
integer k, parentheses, left-normed commutators ``[u,v,...]`` and ``1``
for the empty word.  ``x1 x2^-1 [x1,x2]^2`` is a word in two variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)|(-?\d+)|(.)")


class WordSyntaxError(ValueError):
    def __init__(self, message, column):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


def _tokens(text):
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        col = pos + 1
        if m.group(1):
            out.append(("id", m.group(1), col))
        elif m.group(2) is not None:
            out.append(("int", int(m.group(2)), col))
        else:
            out.append(("op", m.group(3), col))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


def _reduce(letters):
    out = []
    for v, e in letters:
        if out and out[-1][0] == v and out[-1][1] == -e:
            out.pop()
        else:
            out.append((v, e))
    return out


def _inverse(letters):
    return [(v, -e) for v, e in reversed(letters)]


def _power(letters, k):
    if k < 0:
        letters, k = _inverse(letters), -k
    return letters * k


def _comm(a, b):
    return _reduce(_inverse(a) + _inverse(b) + a + b)


class _Parser:
    def __init__(self, text, resolve):
        self.toks = _tokens(text)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, col = self.take()
        if kind != "op" or val != op:
            raise WordSyntaxError(f"expected '{op}'", col)

    def starts_atom(self, tok):
        kind, val, _ = tok
        return kind == "id" or (kind == "int" and val == 1) or (kind == "op" and val in "([")

    def expr(self):
        letters = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                letters = letters + self.term()
            elif self.starts_atom(tok):
                letters = letters + self.term()
            else:
                return _reduce(letters)

    def term(self):
        letters = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, col = self.take()
            if kind != "int":
                raise WordSyntaxError("exponent must be an integer", col)
            letters = _power(letters, val)
        return _reduce(letters)

    def atom(self):
        kind, val, col = self.take()
        if kind == "id":
            return list(self.resolve(val, col))
        if kind == "int":
            if val != 1:
                raise WordSyntaxError(f"unexpected number {val}", col)
            return []
        if val == "(":
            letters = self.expr()
            self.expect(")")
            return letters
        if val == "[":
            parts = [self.expr()]
            while self.peek()[0] == "op" and self.peek()[1] == ",":
                self.take()
                parts.append(self.expr())
            self.expect("]")
            if len(parts) < 2:
                raise WordSyntaxError("a commutator needs at least two entries", col)
            acc = parts[0]
            for part in parts[1:]:
                acc = _comm(acc, part)
            return acc
        raise WordSyntaxError(f"unexpected '{val if val is not None else 'end of input'}'", col)

    def parse(self):
        letters = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise WordSyntaxError(f"unexpected '{val}'", col)
        return letters


def parse_letters(text, resolve):
    """Parse ``text`` into reduced (symbol, +-1) letters.

    ``resolve(name, column)`` maps an identifier to a list of letters.
    """
    return _Parser(text, resolve).parse()


_VAR = re.compile(r"x(\d+)$")


def _variable_resolver(names=None):
    def resolve(name, col):
        if names is not None:
            if name not in names:
                raise WordSyntaxError(f"unknown variable '{name}'", col)
            return [(names.index(name), 1)]
        m = _VAR.match(name)
        if not m or int(m.group(1)) < 1:
            raise WordSyntaxError(f"variables are written x1, x2, ...; got '{name}'", col)
        return [(int(m.group(1)) - 1, 1)]

    return resolve


class Word:
    """Freely reduced word; ``letters`` are (variable index, +1 or -1)."""

    __slots__ = ("arity", "letters")

    def __init__(self, letters, arity=None):
        letters = tuple((int(v), int(e)) for v, e in _reduce(list(letters)))
        for v, e in letters:
            if e not in (1, -1) or v < 0:
                raise ValueError("letters must be (index >= 0, +1 or -1)")
        need = max((v for v, _ in letters), default=-1) + 1
        self.arity = need if arity is None else arity
        if self.arity < need:
            raise ValueError("arity smaller than the largest variable used")
        self.letters = letters

    @classmethod
    def parse(cls, text, variables=None, arity=None):
        return cls(parse_letters(text, _variable_resolver(variables)), arity)

    @classmethod
    def identity(cls, arity=0):
        return cls((), arity)

    @classmethod
    def variable(cls, i, arity=None):
        return cls(((i, 1),), arity)

    def __len__(self):
        return len(self.letters)

    def is_positive(self):
        return all(e == 1 for _, e in self.letters)

    def inverse(self):
        return Word(_inverse(list(self.letters)), self.arity)

    def __mul__(self, other):
        return Word(self.letters + other.letters, max(self.arity, other.arity))

    def __pow__(self, k):
        return Word(_power(list(self.letters), k), self.arity)

    @staticmethod
    def commutator(*words):
        acc = words[0]
        for w in words[1:]:
            acc = Word(_comm(list(acc.letters), list(w.letters)), max(acc.arity, w.arity))
        return acc

    def substitute(self, images):
        """Replace variable i by the word images[i]."""
        if len(images) < self.arity:
            raise ValueError("not enough images for substitution")
        letters = []
        arity = max((w.arity for w in images), default=0)
        for v, e in self.letters:
            letters.extend(images[v].letters if e == 1 else images[v].inverse().letters)
        return Word(letters, arity)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters and self.arity == other.arity

    def __hash__(self):
        return hash((self.letters, self.arity))

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            v, e = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == (v, e):
                j += 1
            k = (j - i) * e
            parts.append(f"x{v + 1}" + ("" if k == 1 else f"^{k}"))
            i = j
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r}, arity={self.arity})"


@dataclass(frozen=True)
class Law:
    """The identity lhs == rhs (a law ``v`` is v == 1)."""

    lhs: Word
    rhs: Word

    @property
    def arity(self):
        return max(self.lhs.arity, self.rhs.arity)

    @classmethod
    def parse(cls, text):
        if "=" in text:
            left, _, right = text.partition("=")
            try:
                rhs = Word.parse(right)
            except WordSyntaxError as exc:
                raise WordSyntaxError(exc.message, exc.column + len(left) + 1) from None
            lhs = Word.parse(left)
        else:
            lhs, rhs = Word.parse(text), Word.identity()
        if lhs.is_positive() and rhs.is_positive() and "=" in text and len(lhs) and len(rhs):
            return PositiveLaw(lhs, rhs)
        return cls(lhs, rhs)

    def as_word(self):
        """lhs rhs^-1, a word v with the law equivalent to v == 1."""
        w = self.lhs * self.rhs.inverse()
        return Word(w.letters, self.arity)

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


class PositiveLaw(Law):
    """alpha == beta with both sides positive and distinct."""

    def __init__(self, alpha, beta):
        if not (alpha.is_positive() and beta.is_positive()):
            raise ValueError("both sides of a positive law must be positive words")
        if alpha.letters == beta.letters:
            raise ValueError("degenerate law: both sides are the same word")
        super().__init__(alpha, beta)

    @property
    def alpha(self):
        return self.lhs

    @property
    def beta(self):
        return self.rhs

    @property
    def degree(self):
        return max(len(self.alpha), len(self.beta))

    @classmethod
    def parse(cls, text):
        law = Law.parse(text)
        if not isinstance(law, PositiveLaw):
            if "=" not in text:
                raise ValueError("a positive law has the form alpha = beta")
            return cls(law.lhs, law.rhs)
        return law
