"""Laws on subsets, widths, word values, verbal subgroups, the sets T_k of
left-normed commutators, explicit factorisations in gamma_k, and the
annihilator polynomial attached to a positive law."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exactpoly import IntPoly
from .pcgroup import (
    burnside_generators,
    gamma,
    lower_central_series,
)
from .words import Law, PositiveLaw, Word

LAW_BUDGET = 10**7
BLOCK = 1 << 16


class PreconditionError(ValueError):
    """A hypothesis of an operation does not hold; ``check`` names it."""

    def __init__(self, check, message, witness=None):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.witness = witness


class SearchExhausted(RuntimeError):
    pass


@dataclass
class GeneratingSet:
    group: object
    elements: np.ndarray  # sorted unique codes
    normal: bool = False
    sampled: bool = False
    width: int = None

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        i = np.searchsorted(self.elements, x)
        return i < len(self.elements) and self.elements[i] == x

    def subgroup(self):
        return self.group.subgroup(int(x) for x in self.elements if x)


def make_set(G, elements, check_normal=True):
    els = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray)
                               else elements, dtype=np.int64))
    normal = is_conjugation_closed(G, els) if check_normal else False
    return GeneratingSet(G, els, normal)


def is_conjugation_closed(G, elements):
    els = np.unique(np.asarray(elements, dtype=np.int64))
    for g in G.generators():
        images = np.unique(G.mul_arrays(G.mul_arrays(G.inv(g), els), g))
        if len(images) != len(els) or not np.array_equal(images, els):
            return False
    return True


def conjugation_closure(G, elements):
    """Smallest conjugation-closed set containing ``elements``."""
    cur = np.unique(np.asarray(list(elements), dtype=np.int64))
    gens = G.generators()
    while True:
        parts = [cur] + [G.mul_arrays(G.mul_arrays(G.inv(g), cur), g) for g in gens]
        nxt = np.unique(np.concatenate(parts))
        if len(nxt) == len(cur):
            return nxt
        cur = nxt


# -- evaluation -----------------------------------------------------------------


def evaluate_word(G, w, args):
    """Value of ``w`` at the substitution ``args`` (one element per variable)."""
    if len(args) != w.arity:
        raise ValueError(f"word has {w.arity} variables, got {len(args)} arguments")
    x = 0
    for v, e in w.letters:
        x = G.mul(x, args[v] if e == 1 else G.inv(args[v]))
    return x


def evaluate_word_arrays(G, w, args):
    """Vectorised evaluation; ``args[i]`` are equally shaped code arrays."""
    shape = np.broadcast(*args).shape if args else ()
    x = np.zeros(shape, dtype=np.int64)
    invs = {}
    for v, e in w.letters:
        if e == 1:
            y = args[v]
        else:
            if v not in invs:
                invs[v] = G.inv_arrays(args[v])
            y = invs[v]
        x = G.mul_arrays(x, y)
    return x


def _law_words(law):
    if isinstance(law, Word):
        return law, Word.identity(law.arity)
    return law.lhs, law.rhs


def _tuple_blocks(pools, arity):
    """Yield (prefix tuple, trailing mesh arrays) covering every tuple of the
    product of ``pools`` in lexicographic order."""
    tail = 0
    size = 1
    while tail < arity and size * len(pools[arity - 1 - tail]) <= BLOCK:
        size *= len(pools[arity - 1 - tail])
        tail += 1
    if tail == 0:
        tail = 1
    head = arity - tail
    mesh = np.meshgrid(*pools[head:], indexing="ij")
    flat = [m.ravel() for m in mesh]
    for prefix in itertools.product(*pools[:head]):
        yield prefix, flat


@dataclass
class LawCheck:
    holds: bool
    counterexample: tuple = None
    coverage: str = "proved"  # or "sampled"
    tested: int = 0

    def __bool__(self):
        return self.holds


def check_law_on_subset(G, T, law, budget=None, seed=0):
    """Test ``law`` (a Law, or a Word v meaning v == 1) on all tuples from T.

    Above ``budget`` tuples, ``budget`` uniformly random tuples are tested
    and the result is marked sampled.
    """
    budget = LAW_BUDGET if budget is None else budget
    lhs, rhs = _law_words(law)
    arity = max(lhs.arity, rhs.arity)
    elements = T.elements if isinstance(T, GeneratingSet) else np.unique(np.asarray(T))
    if arity == 0:
        ok = evaluate_word(G, lhs, ()) == evaluate_word(G, rhs, ())
        return LawCheck(ok, None if ok else (), "proved", 1)
    total = len(elements) ** arity
    lhs = Word(lhs.letters, arity)
    rhs = Word(rhs.letters, arity)
    if total <= budget:
        pools = [elements] * arity
        tested = 0
        for prefix, flat in _tuple_blocks(pools, arity):
            n = len(flat[0])
            args = [np.full(n, x, dtype=np.int64) for x in prefix] + flat
            bad = np.nonzero(evaluate_word_arrays(G, lhs, args) != evaluate_word_arrays(G, rhs, args))[0]
            if len(bad):
                i = bad[0]
                return LawCheck(False, tuple(int(a[i]) for a in args), "proved", int(tested + i + 1))
            tested += n
        return LawCheck(True, None, "proved", int(tested))
    rng = np.random.default_rng(seed)
    tested = 0
    while tested < budget:
        n = min(BLOCK, budget - tested)
        args = [elements[rng.integers(0, len(elements), n)] for _ in range(arity)]
        bad = np.nonzero(evaluate_word_arrays(G, lhs, args) != evaluate_word_arrays(G, rhs, args))[0]
        if len(bad):
            i = bad[0]
            return LawCheck(False, tuple(int(a[i]) for a in args), "sampled", int(tested + i + 1))
        tested += n
    return LawCheck(True, None, "sampled", tested)


# -- width and word values --------------------------------------------------------


def width_layers(G, T):
    """Sizes of the balls B_0 = {1}, B_k = B_{k-1} (T u T^-1 u {1}) until
    they reach <T>."""
    elements = T.elements if isinstance(T, GeneratingSet) else np.unique(np.asarray(T))
    S = np.unique(np.concatenate([elements, G.inv_arrays(elements)]))
    target = G.subgroup(int(x) for x in elements if x).order
    ball = np.zeros(1, dtype=np.int64)
    sizes = [1]
    while len(ball) < target:
        prods = G.mul_arrays(ball[:, None], S[None, :]).ravel()
        ball = np.union1d(ball, prods)
        sizes.append(len(ball))
    return sizes


def width(G, T):
    """Least m with every element of <T> a product of at most m elements of
    T u T^-1 (the identity is the empty product)."""
    return len(width_layers(G, T)) - 1


def factor_over(G, S, y, limit=None):
    """Shortest list of elements of S whose product is y (BFS)."""
    S = [int(s) for s in np.unique(np.asarray(S))]
    parent = {0: None}
    frontier = [0]
    depth = 0
    while y not in parent:
        if not frontier or (limit is not None and depth >= limit):
            return None
        nxt = []
        for x in frontier:
            for s in S:
                z = G.mul(x, s)
                if z not in parent:
                    parent[z] = (x, s)
                    nxt.append(z)
        frontier = nxt
        depth += 1
    out = []
    while parent[y] is not None:
        y, s = parent[y]
        out.append(s)
    return out[::-1]


def word_values(G, w, budget=None, seed=0):
    """G_w = {w(g_1, ..., g_r)} as a normal GeneratingSet."""
    budget = LAW_BUDGET if budget is None else budget
    elements = G.elements()
    arity = w.arity
    if arity == 0:
        return GeneratingSet(G, np.array([evaluate_word(G, w, ())]), True)
    sampled = False
    if len(elements) ** arity <= budget:
        parts = []
        for prefix, flat in _tuple_blocks([elements] * arity, arity):
            n = len(flat[0])
            args = [np.full(n, x, dtype=np.int64) for x in prefix] + flat
            parts.append(np.unique(evaluate_word_arrays(G, w, args)))
        values = np.unique(np.concatenate(parts))
    else:
        sampled = True
        rng = np.random.default_rng(seed)
        args = [elements[rng.integers(0, len(elements), budget)] for _ in range(arity)]
        values = np.unique(evaluate_word_arrays(G, w, args))
    if not sampled and not is_conjugation_closed(G, values):
        raise AssertionError("word values are not conjugation-closed")
    return GeneratingSet(G, values, normal=not sampled, sampled=sampled)


def verbal_subgroup(G, w, budget=None):
    return word_values(G, w, budget).subgroup()


# -- T_k and gamma_k factorisations -----------------------------------------------


def _require_normal_generating(G, T):
    els = T.elements if isinstance(T, GeneratingSet) else np.unique(np.asarray(T))
    if not is_conjugation_closed(G, els):
        raise PreconditionError("T normal", "the subset is not closed under conjugation")
    if G.subgroup(int(x) for x in els if x).order != G.order:
        raise PreconditionError("T generates G", "the subset does not generate the group")
    return els


def build_Tk(G, T, k):
    """T_k = {[t_1, ..., t_k] : t_i in T}; checks it is normal and
    generates gamma_k(G)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    els = _require_normal_generating(G, T)
    cur = els
    for _ in range(k - 1):
        a, b = np.meshgrid(cur, els, indexing="ij")
        cur = np.unique(G.comm_arrays(a.ravel(), b.ravel()))
    if not is_conjugation_closed(G, cur):
        raise AssertionError("T_k is not conjugation-closed")
    if G.subgroup(int(x) for x in cur if x) != gamma(G.whole, k):
        raise AssertionError("T_k does not generate gamma_k")
    return GeneratingSet(G, cur, normal=True)


@dataclass
class Factor:
    """One factor c^e, c = [t_1, ..., t_k] in T_k, e = +1 or -1."""

    entries: tuple  # the t_i, elements of T
    value: int  # c
    sign: int

    def element(self, G):
        return self.value if self.sign == 1 else G.inv(self.value)


@dataclass
class Factorization:
    target: int
    k: int
    factors: list
    bound: int

    def product(self, G):
        x = 0
        for f in self.factors:
            x = G.mul(x, f.element(G))
        return x

    def verify(self, G, Tk=None):
        if self.product(G) != self.target or len(self.factors) > self.bound:
            return False
        for f in self.factors:
            if _left_normed(G, f.entries) != f.value:
                return False
            if Tk is not None and f.value not in Tk:
                return False
        return True


def _left_normed(G, entries):
    acc = entries[0]
    for t in entries[1:]:
        acc = G.comm(acc, t)
    return acc


_NEG = 1 << 20


class _CostTable:
    """For each level j <= k: least factor count of every element of
    gamma_j(G), with back-pointers to the chosen decomposition."""

    def __init__(self, G, els, ts, series):
        self.G = G
        self.els = els
        self.ts = ts
        self.series = series
        self.levels = {}

    def level(self, j):
        if j not in self.levels:
            self.levels[j] = self._build(j)
        return self.levels[j]

    def _build(self, j):
        G = self.G
        if j == 1:
            # costs are count * _NEG + (number of inverted factors)
            Tset = set(int(x) for x in self.els)
            S = [int(s) for s in np.unique(np.concatenate([self.els, G.inv_arrays(self.els)]))]
            cost = {0: 0}
            back = {0: None}
            frontier = [0]
            while frontier:
                best = {}
                for x in frontier:
                    for s in S:
                        z = G.mul(x, s)
                        if z in cost:
                            continue
                        c = cost[x] + _NEG + (0 if s in Tset else 1)
                        if z not in best or c < best[z][0]:
                            best[z] = (c, x, s)
                for z, (c, x, s) in best.items():
                    cost[z] = c
                    back[z] = (x, s)
                frontier = list(best)
            return cost, back
        prev_cost, _ = self.level(j - 1)
        prev = np.array(sorted(prev_cost), dtype=np.int64)
        pc = np.array([prev_cost[int(g)] for g in prev], dtype=np.int64)
        layer = np.zeros(1, dtype=np.int64)
        lcost = np.zeros(1, dtype=np.int64)
        stages = []
        for t in self.ts:
            vals = G.comm_arrays(prev, np.full_like(prev, t))
            prods = G.mul_arrays(layer[:, None], vals[None, :]).ravel()
            total = (lcost[:, None] + pc[None, :]).ravel()
            src = np.repeat(np.arange(len(layer)), len(prev))
            gi = np.tile(np.arange(len(prev)), len(layer))
            order = np.lexsort((np.arange(len(prods)), total, prods))
            prods, total, src, gi = prods[order], total[order], src[order], gi[order]
            first = np.ones(len(prods), dtype=bool)
            first[1:] = prods[1:] != prods[:-1]
            stages.append({int(z): (int(layer[s]), int(prev[g]))
                           for z, s, g in zip(prods[first], src[first], gi[first])})
            layer, lcost = prods[first], total[first]
        cost = {int(z): int(c) for z, c in zip(layer, lcost)}
        return cost, stages

    def decompose(self, j, y):
        """g_1..g_d in gamma_{j-1} with y = [g_1,t_1]...[g_d,t_d]."""
        cost, stages = self.level(j)
        if y not in cost:
            return None
        gs = []
        for stage in reversed(stages):
            y, g = stage[y]
            gs.append(g)
        return gs[::-1]

    def word(self, y):
        """Shortest list of elements of T u T^-1 with product y."""
        _, back = self.level(1)
        out = []
        while back[y] is not None:
            y, s = back[y]
            out.append(s)
        return out[::-1]


def express_gamma_k(G, T, k, y, m=None):
    """Write y in gamma_k(G) as at most m d^(k-1) factors from T_k u T_k^-1.

    Uses y = [g_1,t_1]...[g_d,t_d] with g_i in gamma_{k-1}(G) and t_i a
    Burnside basis chosen from T, factors each g_i recursively and expands
    [u_1...u_s, t] = prod_j [u_j, t]^(u_{j+1}...u_s).  Among all such
    decompositions one with the fewest factors is taken.
    """
    els = _require_normal_generating(G, T)
    if y not in gamma(G.whole, k):
        raise ValueError("element is not in gamma_k")
    if m is None:
        m = width(G, els)
    ts = burnside_generators(G.whole, candidates=els)
    d = len(ts)
    table = _CostTable(G, els, ts, lower_central_series(G.whole))
    factors = _express(G, set(int(x) for x in els), table, ts, k, int(y))
    fac = Factorization(int(y), k, factors, m * d ** (k - 1))
    if not fac.verify(G):
        raise AssertionError("factorisation does not re-multiply to the target")
    return fac


def _express(G, Tset, table, ts, k, y):
    if y == 0:
        return []
    if k == 1:
        out = []
        for s in table.word(y):
            if s in Tset:
                out.append(Factor((s,), s, 1))
            else:
                out.append(Factor((G.inv(s),), G.inv(s), -1))
        return out
    gs = table.decompose(k, y)
    if gs is None:
        raise SearchExhausted("no decomposition over the Burnside generators")
    out = []
    for g, t in zip(gs, ts):
        us = _express(G, Tset, table, ts, k - 1, g)
        for j, u in enumerate(us):
            w = 0
            for later in us[j + 1:]:
                w = G.mul(w, later.element(G))
            if u.sign == 1:
                # [u, t]^w = [u_1^w, ..., t^w]
                c, sign = w, 1
            else:
                # [v^-1, t]^w = ([v, t]^(v^-1 w))^-1
                c, sign = G.mul(G.inv(u.value), w), -1
            entries = tuple(G.conj(e, c) for e in u.entries) + (G.conj(t, c),)
            out.append(Factor(entries, _left_normed(G, entries), sign))
    return out


# -- annihilator from a positive law ------------------------------------------------


def _position_poly(word, j):
    """sum over positions l (1-based) of variable j of X^(len - l)."""
    L = len(word)
    coeffs = [0] * L
    for l, (v, _) in enumerate(word.letters, 1):
        if v == j:
            coeffs[L - l] += 1
    return IntPoly(coeffs)


@dataclass
class AnnihilatorDerivation:
    f: IntPoly
    f1: IntPoly
    f_minus1: IntPoly
    variable: int


def derive_annihilator_f(law, detail=False):
    """Monic f of degree <= 2n (n the degree of the law) with f(t) = 0 on
    every abelian normal section, for every t in a normal subset on which
    the law holds.

    Substituting t^a for variable j and t for the others, the module parts
    of both sides must agree, which gives a (1 - X)(Q_alpha - Q_beta) = 0
    with Q the position polynomials of variable j.  f1 is that polynomial
    (powers of X removed); f_{-1} is its reciprocal and handles t^-1.
    """
    if not isinstance(law, PositiveLaw):
        law = PositiveLaw(law.lhs, law.rhs)
    best = None
    for j in range(law.arity):
        diff = _position_poly(law.alpha, j) - _position_poly(law.beta, j)
        if diff.is_zero():
            continue
        f1 = (IntPoly((1, -1)) * diff).strip_x()
        if best is None or f1.degree < best[1].degree:
            best = (j, f1)
    if best is None:
        raise ValueError("law carries no abelian content")
    j, f1 = best
    if f1.lead < 0:
        f1 = -f1
    fm1 = f1.reciprocal()
    if fm1.lead < 0:
        fm1 = -fm1
    f = f1 * fm1
    if not f.is_monic():
        raise AssertionError("annihilator is not monic")
    if f.degree > 2 * law.degree:
        raise AssertionError("annihilator degree exceeds twice the law degree")
    if detail:
        return AnnihilatorDerivation(f, f1, fm1, j)
    return f


def compose_law(w, law):
    """v = alpha(w(x_1..x_l), w(x_{l+1}..x_{2l}), ...) beta(...)^-1."""
    l = w.arity
    k = law.arity
    images = []
    for i in range(k):
        shifted = [(v + i * l, e) for v, e in w.letters]
        images.append(Word(shifted, k * l))
    lhs = law.lhs.substitute(images)
    rhs = law.rhs.substitute(images)
    return Word((lhs * rhs.inverse()).letters, k * l)


def law_from_text(text):
    return Law.parse(text)
