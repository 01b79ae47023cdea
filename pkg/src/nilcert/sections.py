"""Abelian normal sections K/L of a pc group as modules under conjugation.

A = K/L is written additively in coordinates over a cyclic decomposition
Z/d_1 + ... + Z/d_r.  Elements of G act on the right, a.g = g^-1 a g, by
integer matrices acting on row vectors, so that [a, g] is a.(g - 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .pcgroup import derived_series, derived_subgroup, lower_central_series

FULL_ENUMERATION_ORDER = 3**5


# -- integer matrices -------------------------------------------------------------


def smith_normal_form(R):
    """``(U, D, V)`` with U R V = D diagonal, U and V unimodular, and each
    diagonal entry dividing the next.

    Plain lists of ints; R is square.
    """
    n = len(R)
    A = [list(row) for row in R]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]

    for t in range(n):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
            if not nonzero:
                return U, A, V
            _, i, j = min(nonzero)
            swap_rows(A, t, i)
            swap_rows(U, t, i)
            swap_cols(A, t, j)
            swap_cols(V, t, j)
            piv = A[t][t]
            done = True
            for i in range(t + 1, n):
                q = A[i][t] // piv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # the pivot must divide the rest for the divisibility chain
                bad = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                            if A[i][j] % piv), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad])]
                U[t] = [a + b for a, b in zip(U[t], U[bad])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return U, A, V


def integer_inverse(M):
    """Inverse of a unimodular integer matrix."""
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# -- sections ------------------------------------------------------------------


class SectionError(ValueError):
    pass


class SectionEndomorphism:
    """Integer matrix acting on coordinate rows; column j is read mod d_j."""

    __slots__ = ("moduli", "matrix")

    def __init__(self, moduli, matrix, check=True):
        self.moduli = np.asarray(moduli, dtype=np.int64)
        M = np.asarray(matrix, dtype=np.int64).reshape(len(self.moduli), len(self.moduli))
        self.matrix = M % self.moduli[None, :] if len(self.moduli) else M
        if check:
            # row i is the image of a generator of order d_i, so d_i times it
            # must vanish
            bad = (self.moduli[:, None] * self.matrix) % self.moduli[None, :]
            if bad.any():
                raise SectionError("matrix is not well defined on the decomposition")

    @classmethod
    def identity(cls, moduli):
        return cls(moduli, np.eye(len(moduli), dtype=np.int64), check=False)

    @classmethod
    def zero(cls, moduli):
        return cls(moduli, np.zeros((len(moduli), len(moduli)), dtype=np.int64), check=False)

    def _new(self, M):
        return SectionEndomorphism(self.moduli, M, check=False)

    def __add__(self, other):
        return self._new(self.matrix + other.matrix)

    def __sub__(self, other):
        return self._new(self.matrix - other.matrix)

    def __neg__(self):
        return self._new(-self.matrix)

    def __mul__(self, other):
        """Composition: first self, then other."""
        if isinstance(other, int):
            return self._new(self.matrix * other)
        return self._new(self.matrix @ other.matrix)

    def __pow__(self, k):
        result = SectionEndomorphism.identity(self.moduli)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self):
        return not self.matrix.any()

    def __eq__(self, other):
        return np.array_equal(self.moduli, other.moduli) and np.array_equal(self.matrix, other.matrix)

    def apply(self, y):
        return (np.asarray(y, dtype=np.int64) @ self.matrix) % self.moduli

    def __repr__(self):
        return f"SectionEndomorphism(moduli={self.moduli.tolist()}, {self.matrix.tolist()})"


class AbelianSection:
    """A = K/L for normal subgroups L <= K of G with K/L abelian."""

    def __init__(self, K, L, check=True):
        G = K.group
        if L.group is not G:
            raise SectionError("K and L live in different groups")
        self.group = G
        self.K = K
        self.L = L
        if check:
            if not L <= K:
                raise SectionError("L is not contained in K")
            for H, nm in ((K, "K"), (L, "L")):
                for b in H.basis:
                    for g in G.generators():
                        if G.conj(b, g) not in H:
                            raise SectionError(f"{nm} is not normal")
            for x in K.basis:
                for y in K.basis:
                    if G.comm(x, y) not in L:
                        raise SectionError("K/L is not abelian")
        ldepths = set(L.depths)
        self._rel = [b for b, d in zip(K.basis, K.depths) if d not in ldepths]
        self._rel_depths = [G.depth(b) for b in self._rel]
        self._sift = dict(zip(K.depths, K.basis))
        self._sift.update(zip(L.depths, L.basis))
        self._rel_index = {d: i for i, d in enumerate(self._rel_depths)}
        p = G.prime
        r = len(self._rel)
        R = []
        for i, b in enumerate(self._rel):
            c = self._relative(G.pow(b, p))
            R.append([(p if j == i else 0) - c[j] for j in range(r)])
        U, D, V = smith_normal_form(R) if r else ([], [], [])
        diag = [D[i][i] for i in range(r)]
        self._V = V
        Vinv = integer_inverse(V) if r else []
        self._keep = [i for i in range(r) if diag[i] != 1]
        self.moduli = np.array([diag[i] for i in self._keep], dtype=np.int64)
        self.generators = []
        for i in self._keep:
            x = 0
            for b, e in zip(self._rel, Vinv[i]):
                if e:
                    x = G.mul(x, G.pow(b, e))
            self.generators.append(x)
        self._actions = {}
        if check:
            for i, a in enumerate(self.generators):
                unit = np.zeros(len(self.moduli), dtype=np.int64)
                unit[i] = 1
                if not np.array_equal(self.coordinates(a), unit):
                    raise AssertionError("cyclic decomposition does not round-trip")
            gens = G.generators()
            for g in gens:
                for h in gens:
                    if self.action(G.mul(g, h)) != self.action(g) * self.action(h):
                        raise AssertionError("action is not a homomorphism")

    @property
    def order(self):
        return int(np.prod(self.moduli)) if len(self.moduli) else 1

    @property
    def rank(self):
        return len(self.moduli)

    def _relative(self, x):
        """Exponents of x modulo L over the relative generators."""
        G = self.group
        out = [0] * len(self._rel)
        while x:
            d = G.depth(x)
            b = self._sift.get(d)
            if b is None:
                raise SectionError("element is not in K")
            e = G._lead(x, d)
            i = self._rel_index.get(d)
            if i is not None:
                out[i] = e
            x = G.mul(G.pow(b, -e), x)
        return out

    def coordinates(self, x):
        """Coordinates of xL in the cyclic decomposition."""
        e = self._relative(int(x))
        r = len(e)
        y = [sum(e[k] * self._V[k][j] for k in range(r)) for j in range(r)]
        return np.array([y[i] for i in self._keep], dtype=np.int64) % self.moduli

    def element(self, y):
        """A representative in K of the coordinate vector y."""
        G = self.group
        x = 0
        for a, c in zip(self.generators, y):
            if c:
                x = G.mul(x, G.pow(a, int(c)))
        return x

    def elements(self):
        """All coordinate vectors (for brute-force checks at small order)."""
        grids = np.meshgrid(*[np.arange(d) for d in self.moduli], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1) if len(self.moduli) else np.zeros((1, 0), dtype=np.int64)

    def action(self, g):
        g = int(g)
        M = self._actions.get(g)
        if M is None:
            G = self.group
            rows = [self.coordinates(G.conj(a, g)) for a in self.generators]
            M = SectionEndomorphism(self.moduli, np.array(rows).reshape(self.rank, self.rank))
            self._actions[g] = M
        return M

    def identity(self):
        return SectionEndomorphism.identity(self.moduli)

    def in_power(self, y, i):
        """Whether the coordinate row y lies in A^(p^i)."""
        q = self.group.prime**i
        mods = np.array([gcd(q, int(d)) for d in self.moduli], dtype=np.int64)
        return not (np.asarray(y) % mods).any() if len(mods) else True

    def action_class(self):
        """Least c with [K, G, ..., G] (c times) <= L."""
        G = self.group
        cur = self.K
        c = 0
        while not cur <= self.L:
            cur = G._close(G.commutator(cur, G.whole).basis + self.L.basis)
            c += 1
        return c

    def describe(self):
        G = self.group
        return {
            "K": [G.format(b) for b in self.K.basis],
            "L": [G.format(b) for b in self.L.basis],
            "structure": self.moduli.tolist(),
        }

    def __repr__(self):
        return f"<section {self.describe()}>"


def make_section(K, L):
    return AbelianSection(K, L)


def apply_poly(A, P, g):
    """P(X) evaluated at the action of g, as an endomorphism of A."""
    M = A.action(g)
    I = A.identity()
    R = SectionEndomorphism.zero(A.moduli)
    for c in reversed(P.coeffs):
        R = R * M + I * c
    return R


@dataclass
class CheckResult:
    passed: bool
    witness: object = None
    step: str = None

    def __bool__(self):
        return self.passed


def _first_nonzero_row(E):
    rows = np.nonzero(E.matrix.any(axis=1))[0]
    return int(rows[0]) if len(rows) else None


def verify_annihilation(A, f, S):
    """f(t) = 0 on A for every t in S and every t^-1; witness (t, a)."""
    G = A.group
    seen = set()
    for t in S:
        t = int(t)
        for u in (t, G.inv(t)):
            if u in seen:
                continue
            seen.add(u)
            i = _first_nonzero_row(apply_poly(A, f, u))
            if i is not None:
                return CheckResult(False, (u, A.generators[i]))
    return CheckResult(True)


def engel_mod_p_check(A, g, r):
    """[A, g, ..., g] (r times) lies in A^p."""
    E = (A.action(g) - A.identity()) ** r
    for i in range(A.rank):
        if not A.in_power(E.matrix[i], 1):
            return CheckResult(False, A.generators[i])
    return CheckResult(True)


def engel_power_check(A, g, n, k):
    """(g^k - 1)^n = 0 on A."""
    G = A.group
    E = (A.action(G.pow(int(g), k)) - A.identity()) ** n
    i = _first_nonzero_row(E)
    return CheckResult(True) if i is None else CheckResult(False, A.generators[i])


def stratified_engel_check(A, g, s, r, ell, k):
    """Check the chain giving [A, g^k, ..., g^k] = 1 with n = s r + ell terms.

    (1) [A^(p^i), h, ..., h] (r times) <= A^(p^(i+1)) for i < s and h in
        {g, g^k}; (2) [A^(p^s), g^k, ..., g^k] (ell times) = 1; (3) the
    composed statement with n = s r + ell, re-checked directly.
    """
    if min(s, r, ell) < 0 or k < 1:
        raise ValueError("parameters must be nonnegative and k positive")
    G = A.group
    p = G.prime
    gk = G.pow(int(g), k)
    I = A.identity()
    for i in range(s):
        for h in (int(g), gk):
            E = (A.action(h) - I) ** r
            for j in range(A.rank):
                if not A.in_power(E.matrix[j] * p**i, i + 1):
                    return CheckResult(False, (i, h, A.generators[j]), "step 1")
    E = ((A.action(gk) - I) ** ell) * (p**s)
    j = _first_nonzero_row(E)
    if j is not None:
        return CheckResult(False, A.generators[j], "step 2")
    n = s * r + ell
    res = engel_power_check(A, g, n, k)
    if not res:
        return CheckResult(False, res.witness, "step 3")
    return CheckResult(True)


# -- enumeration -------------------------------------------------------------------


def normal_subgroups(G):
    """Every normal subgroup of G."""
    found = {G.trivial.basis: G.trivial}
    queue = [G.trivial]
    elements = G.elements()
    while queue:
        N = queue.pop()
        reps = np.unique(N.reduce_arrays(elements))
        for x in reps:
            x = int(x)
            if x == 0:
                continue
            M = G._close(N.basis + (x,), G.generators())
            if M.basis not in found:
                found[M.basis] = M
                queue.append(M)
    return sorted(found.values(), key=lambda H: (H.order, H.basis))


def standard_sections(G):
    """The pairs (K, L) used by the pipelines: consecutive terms of the
    lower central and derived series, and gamma_k / gamma_k'."""
    whole = G.whole
    pairs = []
    lcs = lower_central_series(whole)
    for a, b in zip(lcs, lcs[1:]):
        pairs.append((a, b))
    ds = derived_series(whole)
    for a, b in zip(ds, ds[1:]):
        pairs.append((a, b))
    for H in lcs:
        pairs.append((H, derived_subgroup(H)))
    return pairs


def enumerate_abelian_normal_sections(G, full=None):
    """Abelian normal sections of G with the coverage label.

    With ``full`` unset, every section is enumerated when |G| <= 3^5 and
    the standard family is used above that.
    """
    if full is None:
        full = G.order <= FULL_ENUMERATION_ORDER
    if full:
        normals = normal_subgroups(G)
        pairs = []
        for K in normals:
            Kp = derived_subgroup(K)
            for L in normals:
                if Kp <= L and L <= K and L != K:
                    pairs.append((K, L))
        coverage = "full"
    else:
        pairs = [(K, L) for K, L in standard_sections(G) if K != L]
        coverage = "standard-family"
    seen = set()
    out = []
    for K, L in pairs:
        key = (K.basis, L.basis)
        if key in seen or K == L:
            continue
        seen.add(key)
        out.append(AbelianSection(K, L, check=False))
    return out, coverage
