"""Finite p-groups given by power-commutator presentations.

Elements are plain ints: the code of the normal form g_1^e_1 ... g_n^e_n is
sum(e_i * p**i).  Conventions: [x, y] = x^-1 y^-1 x y, x^g = g^-1 x g,
iterated commutators are left-normed.

Subgroups are stored as canonical induced pc sequences, so membership,
order and equality never need the element list.  Groups up to
``TABLE_CAP`` elements also carry a full multiplication table (numpy) and
use it for all arithmetic.
"""

from __future__ import annotations

import random

import numpy as np

from . import _kernel

TABLE_CAP = 2500
ENUMERATION_CAP = 10**6
EXHAUSTIVE_TRIPLES_CAP = 1024


class InconsistentPresentation(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PcGroup:
    """A consistent power-commutator presentation and its arithmetic.

    ``powers[i]`` is the exponent vector of g_i^p (zero at indices <= i) and
    ``commutators[(j, i)]``, for j > i, the exponent vector of [g_j, g_i]
    (zero at indices <= j).  Missing relations are trivial.
    """

    def __init__(self, prime, names, powers=None, commutators=None, name=None,
                 backend=None):
        p = int(prime)
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{prime} is not a prime")
        names = tuple(names)
        n = len(names)
        if len(set(names)) != n:
            raise ValueError("generator names must be distinct")
        self.prime = p
        self.names = names
        self.ngens = n
        self.name = name
        self.order = p**n
        zero = (0,) * n
        pw = [zero] * n
        for i, vec in (powers or {}).items():
            pw[i] = self._check_vec(vec, i, f"power relation of {names[i]}")
        comm = {}
        for (j, i), vec in (commutators or {}).items():
            if not 0 <= i < j < n:
                raise ValueError(
                    f"commutator relation [{j},{i}] must have first index larger"
                )
            v = self._check_vec(vec, j, f"commutator [{names[j]},{names[i]}]")
            if any(v):
                comm[(j, i)] = v
        self.powers = tuple(pw)
        self.commutators = comm
        self._backend = backend or _kernel.backend
        self._packed = self._backend.pack(self._tables())
        self._radix = [p**i for i in range(n)]
        witness = self._overlap_witness()
        if witness is not None:
            raise InconsistentPresentation(
                "presentation fails the consistency test on generators "
                + ", ".join(self.format(x) for x in witness),
                witness,
            )
        self.table = None
        self.inverse_table = None
        if self.order <= TABLE_CAP:
            self._build_table()
        self._identity = 0

    # -- construction helpers -------------------------------------------------

    def _check_vec(self, vec, index, what):
        vec = tuple(int(v) for v in vec)
        if len(vec) != self.ngens:
            raise ValueError(f"{what}: wrong length")
        for k, v in enumerate(vec):
            if not 0 <= v < self.prime:
                raise ValueError(f"{what}: exponent {v} out of range")
            if v and k <= index:
                raise ValueError(
                    f"{what}: involves {self.names[k]}, which is not a later generator"
                )
        return vec

    @staticmethod
    def _letters(vec):
        out = []
        for i, e in enumerate(vec):
            out.extend([i] * e)
        return out

    def _tables(self):
        n = self.ngens
        pw_letters = [self._letters(v)[::-1] for v in self.powers]
        conj = [[[] for _ in range(n)] for _ in range(n)]
        for j in range(n):
            for i in range(j):
                word = [j] + self._letters(self.commutators.get((j, i), (0,) * n))
                conj[j][i] = word[::-1]
        return (self.prime, n, [list(v) for v in self.powers], pw_letters, conj)

    def _collect(self, exps, letters):
        return self._backend.collect(self._packed, exps, letters)

    def _overlap_witness(self):
        n, p = self.ngens, self.prime
        unit = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        col = self._collect
        L = self._letters

        def code(v):
            return self.encode(v)

        for k in range(n):
            for j in range(k):
                for i in range(j):
                    lhs = col(col(unit[k], [j]), [i])
                    rhs = col(unit[k], L(col(unit[j], [i])))
                    if lhs != rhs:
                        return (code(unit[k]), code(unit[j]), code(unit[i]))
        for j in range(n):
            gp1 = col(unit[j], [j] * (p - 2))  # g_j^(p-1)
            for i in range(j):
                lhs = col(self.powers[j], [i])
                rhs = col(gp1, L(col(unit[j], [i])))
                if lhs != rhs:
                    return (code(gp1), code(unit[j]), code(unit[i]))
                lhs = col(col(unit[j], [i] * (p - 1)), [i])
                rhs = col(unit[j], L(self.powers[i]))
                if lhs != rhs:
                    gi = code(unit[i])
                    return (code(unit[j]), gi, self.pow(gi, p - 1))
            lhs = col(self.powers[j], [j])
            rhs = col(unit[j], L(self.powers[j]))
            if lhs != rhs:
                return (code(gp1), code(unit[j]), code(unit[j]))
        return None

    def _build_table(self):
        N, n, p = self.order, self.ngens, self.prime
        R = np.asarray(self._backend.mul_gen_table(self._packed, N), dtype=np.int64)
        R = R.reshape(N, n)
        codes = np.arange(N)
        T = np.tile(codes[:, None], (1, N))
        for i in range(n):
            digit = (codes // p**i) % p
            for rep in range(p - 1):
                cols = np.nonzero(digit > rep)[0]
                if len(cols):
                    T[:, cols] = R[T[:, cols], i]
        self.table = T.astype(np.int32)
        inv = np.argmax(self.table == 0, axis=1)
        self.inverse_table = inv.astype(np.int32)

    # -- element arithmetic ---------------------------------------------------

    @property
    def identity(self):
        return 0

    def generators(self):
        return [self._radix[i] for i in range(self.ngens)]

    def encode(self, exps):
        code = 0
        for i in range(self.ngens - 1, -1, -1):
            code = code * self.prime + int(exps[i])
        return code

    def decode(self, x):
        out = []
        p = self.prime
        for _ in range(self.ngens):
            x, r = divmod(x, p)
            out.append(r)
        return out

    def collect(self, letters):
        """Normal form of a positive word given as generator indices."""
        return self.encode(self._collect((0,) * self.ngens, list(letters)))

    def mul(self, x, y):
        if self.table is not None:
            return int(self.table[x, y])
        return self.encode(self._collect(self.decode(x), self._letters(self.decode(y))))

    def inv(self, x):
        if self.inverse_table is not None:
            return int(self.inverse_table[x])
        z = self.decode(x)
        t = []
        for i in range(self.ngens):
            k = (-z[i]) % self.prime
            t.append(k)
            if k:
                z = self._collect(z, [i] * k)
        return self.encode(t)

    def pow(self, x, k):
        if k < 0:
            x, k = self.inv(x), -k
        result = 0
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def comm(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def conj(self, x, g):
        """x^g = g^-1 x g."""
        return self.mul(self.mul(self.inv(g), x), g)

    def element_order(self, x):
        k = 1
        y = x
        while y != 0:
            y = self.pow(y, self.prime)
            k *= self.prime
        return k

    def elements(self):
        if self.order > ENUMERATION_CAP:
            raise ValueError("group too large to enumerate")
        return np.arange(self.order)

    # -- vectorised arithmetic ------------------------------------------------

    def mul_arrays(self, a, b):
        if self.table is not None:
            return self.table[a, b]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        return np.array([self.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())],
                        dtype=np.int64).reshape(a.shape)

    def inv_arrays(self, a):
        if self.inverse_table is not None:
            return self.inverse_table[a]
        a = np.asarray(a)
        return np.array([self.inv(int(x)) for x in a.ravel()], dtype=np.int64).reshape(a.shape)

    def pow_arrays(self, a, k):
        a = np.asarray(a)
        if k < 0:
            a, k = self.inv_arrays(a), -k
        result = np.zeros_like(a)
        while k:
            if k & 1:
                result = self.mul_arrays(result, a)
            a = self.mul_arrays(a, a)
            k >>= 1
        return result

    def comm_arrays(self, a, b):
        ia, ib = self.inv_arrays(a), self.inv_arrays(b)
        return self.mul_arrays(self.mul_arrays(ia, ib), self.mul_arrays(a, b))

    # -- formatting -----------------------------------------------------------

    def format(self, x):
        parts = []
        for name, e in zip(self.names, self.decode(x)):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    def __repr__(self):
        label = self.name or "PcGroup"
        return f"<{label}: order {self.prime}^{self.ngens}>"

    def relations_text(self):
        lines = []
        for i, v in enumerate(self.powers):
            lines.append(f"{self.names[i]}^{self.prime} = {self.format(self.encode(v))}")
        for (j, i), v in sorted(self.commutators.items()):
            lines.append(f"[{self.names[j]},{self.names[i]}] = {self.format(self.encode(v))}")
        return lines

    # -- subgroups ------------------------------------------------------------

    def depth(self, x):
        """Index of the first nonzero exponent (ngens for the identity)."""
        i = 0
        p = self.prime
        while x:
            if x % p:
                return i
            x //= p
            i += 1
        return self.ngens

    def _lead(self, x, d):
        return (x // self._radix[d]) % self.prime

    def _sift(self, x, basis):
        p = self.prime
        while x:
            d = self.depth(x)
            b = basis.get(d)
            if b is None:
                return x
            x = self.mul(x, self.pow(b, p - self._lead(x, d)))
        return 0

    def _close(self, gens, conjugators=(), basis=None):
        p = self.prime
        basis = dict(basis or {})
        queue = [int(g) for g in gens]
        conjugators = [int(c) for c in conjugators]
        while queue:
            x = self._sift(queue.pop(), basis)
            if x == 0:
                continue
            d = self.depth(x)
            lead = self._lead(x, d)
            if lead != 1:
                x = self.pow(x, pow(lead, -1, p))
            queue.extend(self.comm(x, b) for b in basis.values())
            queue.append(self.pow(x, p))
            queue.extend(self.comm(x, c) for c in conjugators)
            basis[d] = x
        return Subgroup(self, self._canonical(basis))

    def _canonical(self, basis):
        p = self.prime
        depths = sorted(basis)
        out = dict(basis)
        # clear exponents at the other basis depths; deepest entries first so
        # that each one is already reduced when it is used
        changed = True
        while changed:
            changed = False
            for d in reversed(depths):
                b = out[d]
                for d2 in depths:
                    if d2 > d:
                        e = (b // self._radix[d2]) % p
                        if e:
                            b = self.mul(b, self.pow(out[d2], p - e))
                if b != out[d]:
                    out[d] = b
                    changed = True
        return tuple(out[d] for d in depths)

    def subgroup(self, gens):
        return self._close(gens)

    def normal_closure(self, gens, within=None):
        """Smallest subgroup containing gens and normalised by ``within``
        (default: the whole group)."""
        conj = self.generators() if within is None else within.basis
        return self._close(gens, conj)

    @property
    def whole(self):
        return Subgroup(self, tuple(self.generators()))

    @property
    def trivial(self):
        return Subgroup(self, ())

    def is_normal_subset(self, S):
        S = set(int(s) for s in S)
        for s in S:
            for g in self.generators():
                if self.conj(s, g) not in S:
                    return False
        return True

    def commutator(self, H, K, within=None):
        """[H, K], for H and K normalised by ``within`` (default G)."""
        gens = [self.comm(h, k) for h in H.basis for k in K.basis]
        return self.normal_closure(gens, within)

    # -- consistency -------------------------------------------------------------

    def consistency_check(self, exhaustive_cap=EXHAUSTIVE_TRIPLES_CAP, samples=10**5,
                          seed=0):
        """None when consistent, else a triple (x, y, z) with (xy)z != x(yz).

        Runs the generator overlap test, then associativity on every triple
        when the order is at most ``exhaustive_cap`` (random triples above).
        """
        w = self._overlap_witness()
        if w is not None:
            return w
        if self.table is not None and self.order <= exhaustive_cap:
            T = self.table
            for x in range(self.order):
                left = T[T[x], :]
                right = T[x][T]
                bad = np.argwhere(left != right)
                if len(bad):
                    y, z = bad[0]
                    return (x, int(y), int(z))
            return None
        rng = random.Random(seed)
        for _ in range(samples):
            x, y, z = (rng.randrange(self.order) for _ in range(3))
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                return (x, y, z)
        return None


class Subgroup:
    """Subgroup held as a canonical induced pc sequence (``basis``)."""

    __slots__ = ("group", "basis", "depths", "_elements")

    def __init__(self, group, basis):
        self.group = group
        self.basis = tuple(int(b) for b in basis)
        self.depths = tuple(group.depth(b) for b in self.basis)
        self._elements = None

    @property
    def order(self):
        return self.group.prime ** len(self.basis)

    def is_trivial(self):
        return not self.basis

    def __contains__(self, x):
        return self.group._sift(int(x), dict(zip(self.depths, self.basis))) == 0

    def __le__(self, other):
        return all(b in other for b in self.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((id(self.group), self.basis))

    def __repr__(self):
        G = self.group
        gens = ", ".join(G.format(b) for b in self.basis)
        return f"<{gens or '1'}> (order {G.prime}^{len(self.basis)})"

    def elements(self):
        if self._elements is None:
            G = self.group
            if self.order > ENUMERATION_CAP:
                raise ValueError("subgroup too large to enumerate")
            S = np.zeros(1, dtype=np.int64)
            for b in reversed(self.basis):
                powers = [G.pow(b, c) for c in range(G.prime)]
                S = np.concatenate([G.mul_arrays(np.full_like(S, pb), S) for pb in powers])
            self._elements = np.sort(S)
        return self._elements

    def coordinates(self, x):
        """Exponents c with x = prod b_i^c_i over the basis, in order."""
        G = self.group
        out = []
        for b, d in zip(self.basis, self.depths):
            c = G._lead(x, d) if x else 0
            out.append(c)
            if c:
                x = G.mul(G.pow(b, -c), x)
        if x:
            raise ValueError("element not in subgroup")
        return out

    def reduce(self, x):
        """Canonical coset representative of x modulo this (normal) subgroup:
        zero exponent at every depth of the basis."""
        G = self.group
        p = G.prime
        for b, d in zip(self.basis, self.depths):
            e = G._lead(x, d)
            if e:
                x = G.mul(x, G.pow(b, p - e))
        return x

    def reduce_arrays(self, xs):
        G = self.group
        p = G.prime
        xs = np.asarray(xs)
        for b, d in zip(self.basis, self.depths):
            e = (xs // G._radix[d]) % p
            powers = np.array([G.pow(b, (p - k) % p) for k in range(p)])
            xs = G.mul_arrays(xs, powers[e])
        return xs


# -- series and standard subgroups ---------------------------------------------


def _within(H):
    return None if H.basis == tuple(H.group.generators()) else H


def commutator_subgroup(H, K, within):
    return H.group.commutator(H, K, within)


def lower_central_series(H):
    """[H = gamma_1, gamma_2, ..., 1] for a subgroup H."""
    G = H.group
    series = [H]
    while not series[-1].is_trivial():
        nxt = G.commutator(series[-1], H, _within(H))
        if nxt == series[-1]:
            raise AssertionError("lower central series stalled: not a p-group?")
        series.append(nxt)
    return series


def derived_series(H):
    G = H.group
    series = [H]
    while not series[-1].is_trivial():
        cur = series[-1]
        nxt = G.commutator(cur, cur, _within(cur))
        if nxt == cur:
            raise AssertionError("derived series stalled")
        series.append(nxt)
    return series


def nilpotency_class(H):
    return len(lower_central_series(H)) - 1


def derived_length(H):
    return len(derived_series(H)) - 1


def gamma(H, k):
    series = lower_central_series(H)
    return series[k - 1] if k - 1 < len(series) else series[-1]


def derived_subgroup(H):
    return H.group.commutator(H, H, _within(H))


def power_subgroup(H, k):
    """<h^k : h in H>."""
    if k < 1:
        raise ValueError("k must be positive")
    G = H.group
    powers = np.unique(G.pow_arrays(H.elements(), k))
    return G.subgroup(int(x) for x in powers if x)


def is_powerful(H):
    """H' <= H^p for odd p, H' <= H^4 for p = 2."""
    p = H.group.prime
    return derived_subgroup(H) <= power_subgroup(H, 4 if p == 2 else p)


def frattini_subgroup(H):
    G = H.group
    Hp = power_subgroup(H, G.prime)
    return G._close(Hp.basis + derived_subgroup(H).basis)


def burnside_generators(H, candidates=None):
    """Minimal generating tuple lifted from a basis of H/Phi(H).

    With ``candidates`` (a set generating H) the tuple is chosen from it.
    """
    G = H.group
    phi = frattini_subgroup(H)
    span = phi
    chosen = []
    pool = H.basis if candidates is None else [int(c) for c in candidates]
    for x in pool:
        if x not in span:
            chosen.append(x)
            span = G._close(span.basis + (x,))
    if span != H:
        raise ValueError("candidates do not generate the subgroup")
    return tuple(chosen)


def exponent_mod(H, N):
    """Exponent of H/N (N normal): least p^a with H^(p^a) <= N."""
    e = 1
    while not power_subgroup(H, e) <= N:
        e *= H.group.prime
    return e


def subgroup_as_group(H, name=None):
    """A presentation for H on its canonical basis, plus the embedding.

    Returns ``(K, embed)`` where ``embed[c]`` is the code in H.group of the
    element of K with code c.
    """
    G = H.group
    r = len(H.basis)
    taken = set()
    names = []
    for b in H.basis:
        nm = G.format(b)
        if not nm.isidentifier() or nm in taken:
            nm = f"y{len(names) + 1}"
        taken.add(nm)
        names.append(nm)
    powers = {i: H.coordinates(G.pow(b, G.prime)) for i, b in enumerate(H.basis)}
    comms = {}
    for j in range(r):
        for i in range(j):
            comms[(j, i)] = H.coordinates(G.comm(H.basis[j], H.basis[i]))
    K = PcGroup(G.prime, names, powers, comms, name=name)
    embed = np.zeros(K.order, dtype=np.int64)
    for c in range(K.order):
        x = 0
        for b, e in zip(H.basis, K.decode(c)):
            if e:
                x = G.mul(x, G.pow(b, e))
        embed[c] = x
    return K, embed


def quotient(G, N, name=None):
    """Presentation of G/N for N normal in G, with the projection array.

    ``proj[x]`` is the code in G/N of the coset of x.
    """
    if not isinstance(N, Subgroup) or N.group is not G:
        raise TypeError("N must be a subgroup of G")
    for b in N.basis:
        for g in G.generators():
            if G.conj(b, g) not in N:
                raise ValueError("subgroup is not normal")
    keep = [i for i in range(G.ngens) if i not in set(N.depths)]
    names = [G.names[i] for i in keep]

    def image(x):
        e = G.decode(N.reduce(x))
        return [e[i] for i in keep]

    gens = G.generators()
    powers = {a: image(G.pow(gens[i], G.prime)) for a, i in enumerate(keep)}
    comms = {}
    for b, j in enumerate(keep):
        for a, i in enumerate(keep[:b]):
            comms[(b, a)] = image(G.comm(gens[j], gens[i]))
    Q = PcGroup(G.prime, names, powers, comms, name=name)
    reduced = N.reduce_arrays(G.elements())
    proj = np.zeros(G.order, dtype=np.int64)
    p = G.prime
    for a, i in enumerate(keep):
        proj += ((reduced // p**i) % p) * p**a
    return Q, proj


def section_group(K, L, name=None):
    """The group K/L (L normal in K) with a map from G-codes of K.

    Returns ``(Q, proj)`` where ``proj`` is a dict from codes of elements
    of K in the ambient group to codes in Q.
    """
    G = K.group
    Kg, embed = subgroup_as_group(K)
    back = {int(x): c for c, x in enumerate(embed)}
    Lk = Kg.subgroup(back[b] for b in L.basis)
    Q, proj = quotient(Kg, Lk, name=name)
    return Q, {int(x): int(proj[c]) for c, x in enumerate(embed)}


def relative_class(K, L):
    """Nilpotency class of K/L, for L normalised by K (0 when K <= L)."""
    G = K.group
    cur = K
    c = 0
    while not cur <= L:
        nxt = G.commutator(cur, K, within=K)
        cur = G._close(nxt.basis + L.basis, K.basis)
        c += 1
    return c


def class_of_action(K, L, H):
    """Least c with [K, H, ..., H] (c times) <= L, for K, L normal in G."""
    G = K.group
    cur = K
    c = 0
    while not cur <= L:
        nxt = G.commutator(cur, H)
        cur = G._close(nxt.basis + L.basis, G.generators())
        c += 1
        if c > G.ngens + 1:
            raise AssertionError("action is not nilpotent")
    return c
