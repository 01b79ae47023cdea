"""Line-oriented instance files.

Example::

    name heis3
    prime 3
    generators a b c
    relation [b,a] = c
    subset conj-closure a, b
    law x1 x2 = x2 x1

``#`` starts a comment.  Relations not listed are trivial.  The right-hand
side of a relation is a normal form: generators in increasing order, each
with an exponent below p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pcgroup import InconsistentPresentation, PcGroup
from .words import Law, Word, WordSyntaxError, parse_letters

SUBSET_KINDS = ("elements", "conj-closure", "word-values", "all")


class InstanceError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column else "") + ": "
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Instance:
    name: str
    prime: int
    generators: tuple
    powers: dict = field(default_factory=dict)  # i -> exponent vector
    commutators: dict = field(default_factory=dict)  # (j, i) -> exponent vector
    subset: tuple = None  # (kind, text)
    law: str = None
    word: str = None

    def __post_init__(self):
        self._group = None

    def group(self):
        if self._group is None:
            try:
                self._group = PcGroup(
                    self.prime, self.generators, self.powers, self.commutators, name=self.name
                )
            except InconsistentPresentation:
                raise
            except ValueError as exc:
                raise InstanceError(str(exc)) from None
        return self._group

    def element(self, text):
        return parse_element(self.group(), text)

    def elements(self, text):
        return parse_element_list(self.group(), text)

    def emit(self):
        names = self.generators
        lines = [f"name {self.name}", f"prime {self.prime}", "generators " + " ".join(names)]
        for i in sorted(self.powers):
            if any(self.powers[i]):
                lines.append(f"relation {names[i]}^{self.prime} = {_format_vec(names, self.powers[i])}")
        for j, i in sorted(self.commutators):
            v = self.commutators[(j, i)]
            if any(v):
                lines.append(f"relation [{names[j]},{names[i]}] = {_format_vec(names, v)}")
        if self.subset is not None:
            kind, text = self.subset
            lines.append(f"subset {kind}" + (f" {text}" if text else ""))
        if self.law is not None:
            lines.append(f"law {self.law}")
        if self.word is not None:
            lines.append(f"word {self.word}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self.emit() == other.emit()


def _format_vec(names, vec):
    parts = []
    for nm, e in zip(names, vec):
        if e == 1:
            parts.append(nm)
        elif e:
            parts.append(f"{nm}^{e}")
    return " ".join(parts) or "1"


def _generator_resolver(names):
    def resolve(name, col):
        if name not in names:
            raise WordSyntaxError(f"unknown generator '{name}'", col)
        return [(names.index(name), 1)]

    return resolve


def parse_element(G, text):
    """Evaluate a word over the generator names of G."""
    letters = parse_letters(text, _generator_resolver(list(G.names)))
    x = 0
    gens = G.generators()
    for i, e in letters:
        x = G.mul(x, gens[i] if e == 1 else G.inv(gens[i]))
    return x


def _split_top(text, sep=","):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p for p in parts if p.strip()]


def parse_element_list(G, text):
    return [parse_element(G, part) for part in _split_top(text)]


def _relation_vec(names, p, text, line, offset):
    try:
        letters = parse_letters(text, _generator_resolver(list(names)))
    except WordSyntaxError as exc:
        raise InstanceError(exc.message, line, exc.column + offset) from None
    vec = [0] * len(names)
    last = -1
    i = 0
    while i < len(letters):
        g, e = letters[i]
        if e != 1:
            raise InstanceError("relation right-hand sides must be positive normal forms", line)
        j = i
        while j < len(letters) and letters[j][0] == g:
            j += 1
        if g <= last:
            raise InstanceError("relation right-hand side is not in normal form", line)
        if j - i >= p:
            raise InstanceError(f"exponent of {names[g]} must be below {p}", line)
        vec[g] = j - i
        last = g
        i = j
    return tuple(vec)


def parse_instance(text):
    """Parse instance text; errors carry line and column."""
    fields = {}
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip()
        indent = len(line) - len(stripped)
        key, _, rest = stripped.partition(" ")
        rest_col = indent + len(key) + 2 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if key in ("name", "prime", "generators", "subset", "law", "word"):
            if key in fields:
                raise InstanceError(f"duplicate '{key}' line", lineno, 1)
            fields[key] = (rest, lineno, rest_col)
        elif key == "relation":
            rels.append((rest, lineno, rest_col))
        else:
            raise InstanceError(f"unknown keyword '{key}'", lineno, indent + 1)
    for key in ("prime", "generators"):
        if key not in fields:
            raise InstanceError(f"missing '{key}' line")
    ptext, pline, pcol = fields["prime"]
    try:
        p = int(ptext)
    except ValueError:
        raise InstanceError("prime must be an integer", pline, pcol) from None
    names = tuple(fields["generators"][0].split())
    for nm in names:
        if not nm.isidentifier():
            raise InstanceError(f"bad generator name '{nm}'", fields["generators"][1])
    if len(set(names)) != len(names):
        raise InstanceError("generator names must be distinct", fields["generators"][1])
    name = fields.get("name", ("instance",))[0]
    powers, comms = {}, {}
    for rest, lineno, col in rels:
        lhs, eq, rhs = rest.partition("=")
        if not eq:
            raise InstanceError("relation needs '='", lineno, col)
        lhs = lhs.strip()
        rhs_col = col + len(rest) - len(rhs) + (len(rhs) - len(rhs.lstrip()))
        if lhs.startswith("["):
            inner = lhs[1:-1] if lhs.endswith("]") else None
            parts = inner.split(",") if inner else []
            if len(parts) != 2 or any(q.strip() not in names for q in parts):
                raise InstanceError("expected [gen,gen] on the left", lineno, col)
            j, i = (names.index(q.strip()) for q in parts)
            if j <= i:
                raise InstanceError(
                    f"commutator [{names[j]},{names[i]}] must list the later generator first",
                    lineno, col,
                )
            vec = _relation_vec(names, p, rhs, lineno, rhs_col - 1)
            if any(vec[: j + 1]):
                raise InstanceError(
                    f"[{names[j]},{names[i]}] may only involve generators after {names[j]}",
                    lineno, rhs_col,
                )
            if (j, i) in comms:
                raise InstanceError("duplicate relation", lineno, col)
            comms[(j, i)] = vec
        else:
            base, caret, exp = lhs.partition("^")
            base = base.strip()
            if not caret or base not in names or exp.strip() != str(p):
                raise InstanceError(f"expected gen^{p} or [gen,gen] on the left", lineno, col)
            i = names.index(base)
            vec = _relation_vec(names, p, rhs, lineno, rhs_col - 1)
            if any(vec[: i + 1]):
                raise InstanceError(
                    f"{base}^{p} may only involve generators after {base}", lineno, rhs_col
                )
            if i in powers:
                raise InstanceError("duplicate relation", lineno, col)
            powers[i] = vec
    subset = None
    if "subset" in fields:
        rest, lineno, col = fields["subset"]
        kind, _, payload = rest.partition(" ")
        if kind not in SUBSET_KINDS:
            raise InstanceError(
                f"subset kind must be one of {', '.join(SUBSET_KINDS)}", lineno, col
            )
        subset = (kind, payload.strip())
    inst = Instance(name, p, names, powers, comms, subset,
                    fields.get("law", (None,))[0], fields.get("word", (None,))[0])
    try:
        G = inst.group()
    except InconsistentPresentation as exc:
        raise InstanceError(f"inconsistent presentation: {exc}") from None
    if inst.law is not None:
        _, lineno, col = fields["law"]
        try:
            Law.parse(inst.law)
        except WordSyntaxError as exc:
            raise InstanceError(exc.message, lineno, col + exc.column - 1) from None
        except ValueError as exc:
            raise InstanceError(str(exc), lineno, col) from None
    if inst.word is not None:
        _, lineno, col = fields["word"]
        try:
            Word.parse(inst.word)
        except WordSyntaxError as exc:
            raise InstanceError(exc.message, lineno, col + exc.column - 1) from None
    if subset is not None and subset[0] in ("elements", "conj-closure"):
        _, lineno, col = fields["subset"]
        try:
            parse_element_list(G, subset[1])
        except WordSyntaxError as exc:
            raise InstanceError(exc.message, lineno) from None
    if subset is not None and subset[0] == "word-values":
        _, lineno, col = fields["subset"]
        try:
            Word.parse(subset[1])
        except WordSyntaxError as exc:
            raise InstanceError(exc.message, lineno) from None
    return inst


def resolve_subset(inst, spec, budget=None):
    """Elements (sorted numpy array) named by a subset spec ``(kind, text)``.

    Returns ``(elements, sampled)``.
    """
    from . import lawkit

    G = inst.group()
    kind, text = spec
    if kind == "all":
        return G.elements(), False
    if kind == "elements":
        return np.unique(np.array(inst.elements(text), dtype=np.int64)), False
    if kind == "conj-closure":
        return lawkit.conjugation_closure(G, inst.elements(text)), False
    if kind == "word-values":
        gs = lawkit.word_values(G, Word.parse(text), budget=budget)
        return gs.elements, gs.sampled
    raise InstanceError(f"unknown subset kind '{kind}'")


def parse_subset_spec(text):
    """``"conj-closure a,b"`` -> ("conj-closure", "a,b"); a bare element list
    means ``elements``."""
    text = text.strip()
    kind, _, rest = text.partition(" ")
    if kind in SUBSET_KINDS:
        return kind, rest.strip()
    return "elements", text
