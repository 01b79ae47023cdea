"""Exact polynomials over Z, over F_p and in several variables over Z.

Also holds the integral-dependence construction (``product_annihilator``),
Bezout certificates in F_p[X] and the bounded search for elements
``q X^l (X^k - 1)^l`` of the ideal generated by the ``h(X^i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import NamedTuple

from .linsolve import clear_denominators, echelon, solve_particular


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _fmt_terms(coeffs, var="X"):
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            term = mono
        elif mono and c == -1:
            term = "-" + mono
        else:
            term = f"{c}{'*' + mono if mono else ''}"
        parts.append(term)
    if not parts:
        return "0"
    return " + ".join(parts).replace("+ -", "- ")


@dataclass(frozen=True)
class IntPoly:
    """Polynomial in Z[X]; ``coeffs[i]`` is the coefficient of X^i."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(int(c) for c in self.coeffs))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, deg, c=1):
        return cls((0,) * deg + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lead == 1

    def __add__(self, other):
        other = _as_int_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_int_poly(other))

    def __rsub__(self, other):
        return _as_int_poly(other) - self

    def __mul__(self, other):
        other = _as_int_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = IntPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_monic(self, d):
        """Division with remainder by a monic divisor."""
        if not d.is_monic():
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = d.degree
        quot = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j, b in enumerate(d.coeffs):
                    rem[i - dd + j] -= c * b
        return IntPoly(quot), IntPoly(rem[:dd])

    def __mod__(self, d):
        return self.divmod_monic(d)[1]

    def compose_power(self, i):
        """h(X^i)."""
        out = [0] * (i * self.degree + 1) if self.coeffs else []
        for j, c in enumerate(self.coeffs):
            out[i * j] = c
        return IntPoly(out)

    def shift(self, k):
        """X^k * self."""
        return IntPoly((0,) * k + self.coeffs) if self.coeffs else self

    def reciprocal(self):
        """X^deg * self(1/X)."""
        return IntPoly(reversed(self.coeffs))

    def strip_x(self):
        """Remove the largest power of X dividing self."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return IntPoly(self.coeffs[k:])

    def mod_p(self, p):
        return ModPoly(p, self.coeffs)

    def to_list(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"IntPoly({_fmt_terms(self.coeffs)})"

    def __str__(self):
        return _fmt_terms(self.coeffs)


def _as_int_poly(x):
    if isinstance(x, IntPoly):
        return x
    if isinstance(x, int):
        return IntPoly.const(x)
    return NotImplemented


@dataclass(frozen=True)
class ModPoly:
    """Polynomial in F_p[X] with reduced coefficients."""

    modulus: int
    coeffs: tuple = ()

    def __post_init__(self):
        p = self.modulus
        object.__setattr__(self, "coeffs", _strip(int(c) % p for c in self.coeffs))

    @classmethod
    def x_minus_one_power(cls, p, c):
        return cls(p, (IntPoly((-1, 1)) ** c).coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def _check(self, other):
        if other.modulus != self.modulus:
            raise ValueError("moduli differ")

    def __add__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return ModPoly(self.modulus, (x + y for x, y in zip(a, b)))

    def __neg__(self):
        return ModPoly(self.modulus, (-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ModPoly(self.modulus, (c * other for c in self.coeffs))
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return ModPoly(self.modulus)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return ModPoly(self.modulus, out)

    def __pow__(self, k):
        result = ModPoly(self.modulus, (1,))
        for _ in range(k):
            result = result * self
        return result

    def monic(self):
        if not self.coeffs:
            return self
        inv = pow(self.coeffs[-1], -1, self.modulus)
        return self * inv

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        p = self.modulus
        inv = pow(other.coeffs[-1], -1, p)
        rem = list(self.coeffs)
        dd = other.degree
        quot = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] % p
            if c:
                c = c * inv % p
                quot[i - dd] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dd + j] -= c * b
        return ModPoly(p, quot), ModPoly(p, rem[:dd])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def to_list(self):
        return list(self.coeffs)

    def __repr__(self):
        return f"ModPoly({self.modulus}, {_fmt_terms(self.coeffs)})"


def gcd_bezout(a, b):
    """Extended Euclid in F_p[X]: returns ``(g, u, v)`` with g monic and
    ``u*a + v*b == g``."""
    a._check(b)
    p = a.modulus
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    zero, one = ModPoly(p), ModPoly(p, (1,))
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = pow(r0.coeffs[-1], -1, p)
    return r0 * inv, s0 * inv, t0 * inv


class EngelExponent(NamedTuple):
    r: int
    u: ModPoly
    v: ModPoly


def engel_exponent(h, c, p):
    """Largest r with (X-1)^r = gcd((X-1)^c, h) in F_p[X], plus cofactors.

    ``u*(X-1)^c + v*h == (X-1)^r`` in F_p[X].
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    a = ModPoly.x_minus_one_power(p, c)
    g, u, v = gcd_bezout(a, h.mod_p(p))
    r = g.degree
    if g != ModPoly.x_minus_one_power(p, r):
        raise AssertionError("gcd with a power of X-1 must be a power of X-1")
    return EngelExponent(r, u, v)


def p_part(q, p):
    """Exponent of the largest power of p dividing q."""
    if q < 1:
        raise ValueError("q must be positive")
    s = 0
    while q % p == 0:
        q //= p
        s += 1
    return s


class MultiPoly:
    """Sparse polynomial in Z[X_1, ..., X_m].

    ``terms`` maps exponent tuples of length m to nonzero integers.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars or min(exps, default=0) < 0:
                raise ValueError(f"bad exponent vector {exps}")
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def of_product(cls, h, m):
        """h(X_1 X_2 ... X_m) for h in Z[X]."""
        return cls(m, {(k,) * m: c for k, c in enumerate(h.coeffs) if c})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"X{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "MultiPoly(" + " + ".join(parts) + ")"


class _Remainders:
    """Cache of X^e mod f as coefficient tuples of length deg f."""

    def __init__(self, f):
        self.f = f
        self.d = f.degree
        self.cache = {}

    def __getitem__(self, e):
        r = self.cache.get(e)
        if r is None:
            if e < self.d:
                r = tuple(1 if i == e else 0 for i in range(self.d))
            else:
                prev = self[e - 1]
                # X * prev, then fold X^d -> X^d - f
                top = prev[-1]
                shifted = (0,) + prev[:-1]
                r = tuple(s - top * fc for s, fc in zip(shifted, self.f.coeffs))
            self.cache[e] = r
        return r


def reduce_mod_powers(P, f):
    """Normal form of P modulo the ideal (f(X_1), ..., f(X_m)).

    Every exponent in the result is below deg f; the result is zero exactly
    when P lies in the ideal.
    """
    if not f.is_monic() or f.degree < 1:
        raise ValueError("f must be monic of degree at least 1")
    rem = _Remainders(f)
    d = f.degree
    out = {}
    for exps, c in P.terms.items():
        parts = []
        for e in exps:
            r = rem[e]
            parts.append([(i, v) for i, v in enumerate(r) if v])
        for combo in iproduct(*parts):
            coeff = c
            key = []
            for i, v in combo:
                coeff *= v
                key.append(i)
            key = tuple(key)
            out[key] = out.get(key, 0) + coeff
    result = MultiPoly(P.nvars, out)
    assert all(max(e, default=0) < d for e in result.terms)
    return result


def power_sums(f, count):
    """Power sums s_1..s_count of the roots of the monic polynomial f."""
    c = f.coeffs
    d = f.degree
    s = [0] * (count + 1)
    for k in range(1, count + 1):
        acc = k * c[d - k] if k <= d else 0
        for j in range(1, min(k - 1, d) + 1):
            acc += c[d - j] * s[k - j]
        s[k] = -acc
    return s


def from_power_sums(s, n):
    """Monic degree-n polynomial whose roots have power sums s[1..n]."""
    b = [0] * (n + 1)  # b[j] = coefficient of X^(n-j)
    b[0] = 1
    for k in range(1, n + 1):
        acc = s[k]
        for j in range(1, k):
            acc += b[j] * s[k - j]
        q, rem = divmod(-acc, k)
        if rem:
            raise AssertionError("Newton identities produced a non-integer coefficient")
        b[k] = q
    return IntPoly(reversed(b))


def product_annihilator(f, m):
    """Monic h with h(X_1 ... X_m) in (f(X_1), ..., f(X_m)).

    h is the characteristic polynomial of multiplication by X_1...X_m on
    the free Z-module with basis the monomials of exponents below deg f.
    That operator is the m-fold Kronecker power of the companion matrix of
    f, so the power sums of its eigenvalues are the m-th powers of those of
    f; Newton's identities turn them back into coefficients.  Degree is
    exactly (deg f)^m.
    """
    if not f.is_monic() or f.degree < 1:
        raise ValueError("f must be monic of degree at least 1")
    if m < 1:
        raise ValueError("m must be at least 1")
    n = f.degree**m
    s = power_sums(f, n)
    return from_power_sums([v**m for v in s], n)


@dataclass(frozen=True)
class MembershipCertificate:
    """``target == sum(cofactors[j] * base(X^generators[j]))`` exactly."""

    base: IntPoly
    generators: tuple
    cofactors: tuple
    target: IntPoly

    def expand(self):
        acc = IntPoly()
        for i, c in zip(self.generators, self.cofactors):
            acc = acc + c * self.base.compose_power(i)
        return acc

    def verify(self):
        return self.expand() == self.target

    def to_dict(self):
        return {
            "base": self.base.to_list(),
            "generators": list(self.generators),
            "cofactors": [c.to_list() for c in self.cofactors],
            "target": self.target.to_list(),
        }


class SempleResult(NamedTuple):
    q: int
    k: int
    ell: int
    certificate: MembershipCertificate


def semple_target(q, k, ell):
    """q * X^ell * (X^k - 1)^ell."""
    return ((IntPoly.monomial(k) - 1) ** ell).shift(ell) * q


def _root_multiplicity_at_one(h):
    a = 0
    one = IntPoly((-1, 1))
    while not h.is_zero():
        quo, rem = h.divmod_monic(one)
        if not rem.is_zero():
            break
        h, a = quo, a + 1
    return a


def semple_search(h, i_max=8, deg_max=32, param_max=8):
    """Search for q X^l (X^k - 1)^l in the ideal J = (h(X^i) : i >= 1).

    Cofactors range over degree <= deg_max and substitutions over
    1 <= i <= i_max.  (l, k) are tried in lexicographic order; for the first
    pair that lies in the rational span, q is the common denominator of the
    particular solution (free unknowns set to zero).  Returns a SempleResult,
    or None when the bounds are exhausted.

    If (X-1)^a divides h it divides every h(X^i), so pairs with l < a are
    skipped without solving.
    """
    if not h.is_monic():
        raise ValueError("h must be monic")
    if min(i_max, deg_max, param_max) < 1:
        raise ValueError("bounds must be positive")
    mult = _root_multiplicity_at_one(h)
    if mult > param_max:
        return None
    columns = []  # (i, a) -> polynomial X^a h(X^i)
    polys = []
    for i in range(1, i_max + 1):
        hi = h.compose_power(i)
        for a in range(deg_max + 1):
            columns.append((i, a))
            polys.append(hi.shift(a))
    pairs = [(ell, k) for ell in range(max(mult, 1), param_max + 1) for k in range(1, param_max + 1)]
    targets = [semple_target(1, k, ell) for ell, k in pairs]
    nrows = max(
        max(p.degree for p in polys), max(t.degree for t in targets)
    ) + 1
    ncols = len(columns)
    matrix = []
    for row in range(nrows):
        line = [p.coeffs[row] if row < len(p.coeffs) else 0 for p in polys]
        line += [t.coeffs[row] if row < len(t.coeffs) else 0 for t in targets]
        matrix.append(line)
    ech, pivots = echelon(matrix, ncols)
    for idx, (ell, k) in enumerate(pairs):
        sol = solve_particular(ech, pivots, ncols, ncols + idx)
        if sol is None:
            continue
        q, ints = clear_denominators(sol)
        cof = {}
        for (i, a), v in zip(columns, ints):
            if v:
                cof.setdefault(i, [0] * (deg_max + 1))[a] = v
        gens = tuple(sorted(cof))
        cert = MembershipCertificate(
            base=h,
            generators=gens,
            cofactors=tuple(IntPoly(cof[i]) for i in gens),
            target=semple_target(q, k, ell),
        )
        if not cert.verify():
            raise AssertionError("membership certificate failed to re-expand")
        return SempleResult(q, k, ell, cert)
    return None
