"""Concrete models of the catalog groups and brute-force set computations.

Nothing here uses nilcert: elements are matrices or integer pairs and all
subgroups are explicit frozensets.
"""

import itertools


def _matmul(p):
    def mul(A, B):
        n = len(A)
        return tuple(
            tuple(sum(A[i][k] * B[k][j] for k in range(n)) % p for j in range(n)) for i in range(n)
        )

    return mul


def _unit(n, i=None, j=None):
    return tuple(
        tuple(1 if (r == c or (r, c) == (i, j)) else 0 for c in range(n)) for r in range(n)
    )


def _semidirect(mod, u, modj):
    # (i, j)(k, l) = (i + k u^j, j + l): conjugating the first factor by
    # the second multiplies by u^-1
    def mul(x, y):
        return ((x[0] + y[0] * pow(u, x[1], mod)) % mod, (x[1] + y[1]) % modj)

    return mul


class Model:
    def __init__(self, mul, one, gens):
        self.mul = mul
        self.one = one
        self.gens = gens

    def power(self, x, k):
        r = self.one
        for _ in range(k):
            r = self.mul(r, x)
        return r

    def inv(self, x):
        # group orders here divide 729
        y = x
        prev = self.one
        while y != self.one:
            prev, y = y, self.mul(y, x)
        return prev

    def comm(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def image(self, exps):
        x = self.one
        for g, e in zip(self.gens, exps):
            x = self.mul(x, self.power(g, e))
        return x

    # -- brute force on explicit sets -------------------------------------

    def closure(self, gens):
        S = {self.one}
        frontier = [self.one]
        gens = list(gens)
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in S:
                        S.add(y)
                        new.append(y)
            frontier = new
        return frozenset(S)

    def elements(self):
        return self.closure(self.gens)

    def commutator_subgroup(self, H, K):
        return self.closure({self.comm(h, k) for h in H for k in K})

    def lower_central(self):
        G = self.elements()
        series = [G]
        while len(series[-1]) > 1:
            series.append(self.commutator_subgroup(series[-1], G))
        return series

    def derived(self):
        series = [self.elements()]
        while len(series[-1]) > 1:
            series.append(self.commutator_subgroup(series[-1], series[-1]))
        return series

    def power_subgroup(self, H, k):
        return self.closure({self.power(h, k) for h in H})

    def is_normal(self, H):
        return all(self.mul(self.mul(self.inv(g), h), g) in H for g in self.gens for h in H)

    def normal_subgroups_2gen(self):
        """Normal subgroups generated by at most two elements."""
        G = sorted(self.elements())
        found = set()
        for x, y in itertools.combinations_with_replacement(G, 2):
            H = self.closure({x, y})
            if self.is_normal(H):
                found.add(H)
        return found

    def width(self, T):
        S = set(T) | {self.inv(t) for t in T}
        target = self.closure(S)
        ball = {self.one}
        m = 0
        while len(ball) < len(target):
            ball = ball | {self.mul(x, s) for x in ball for s in S}
            m += 1
        return m


def _heis3():
    mul = _matmul(3)
    I = _unit(3)
    a, b = _unit(3, 0, 1), _unit(3, 1, 2)
    M = Model(mul, I, [])
    c = M.comm(b, a)
    M.gens = [a, b, c]
    return M


def _ut4_3():
    mul = _matmul(3)
    M = Model(mul, _unit(4), [])
    a, b, c = _unit(4, 0, 1), _unit(4, 1, 2), _unit(4, 2, 3)
    d = M.comm(b, a)
    e = M.comm(c, b)
    f = M.comm(e, a)
    M.gens = [a, b, c, d, e, f]
    return M


def models():
    return {
        "cyc9": Model(lambda x, y: (x + y) % 9, 0, [1, 3]),
        "ab_9_3": Model(lambda x, y: ((x[0] + y[0]) % 9, (x[1] + y[1]) % 3), (0, 0),
                        [(1, 0), (0, 1), (3, 0)]),
        "heis3": _heis3(),
        "mc9": Model(_semidirect(9, 7, 9), (0, 0), [(1, 0), (0, 1), (3, 0), (0, 3)]),
        "m16": Model(_semidirect(8, 5, 2), (0, 0), [(1, 0), (0, 1), (2, 0), (4, 0)]),
        "mc27": Model(_semidirect(27, 7, 9), (0, 0), [(1, 0), (0, 1), (3, 0), (0, 3), (9, 0)]),
        "ut4_3": _ut4_3(),
    }


def image_map(G, M):
    """Model element for every code of the pc group G."""
    return [M.image(G.decode(x)) for x in range(G.order)]
