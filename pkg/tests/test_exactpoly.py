import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcert.exactpoly import (
    IntPoly,
    ModPoly,
    MultiPoly,
    engel_exponent,
    gcd_bezout,
    p_part,
    product_annihilator,
    reduce_mod_powers,
    semple_search,
    semple_target,
)

X, Y = sympy.symbols("X Y")


def to_sympy(P):
    return sympy.Integer(0) + sum(sympy.Integer(c) * X**i for i, c in enumerate(P.coeffs))


def from_sympy(expr):
    return IntPoly(reversed(sympy.Poly(expr, X).all_coeffs()))


coeff_lists = st.lists(st.integers(-6, 6), max_size=6)
monic = st.lists(st.integers(-4, 4), min_size=1, max_size=6).map(lambda c: IntPoly(c + [1]))


@settings(max_examples=150, deadline=None)
@given(coeff_lists, coeff_lists)
def test_int_poly_ring_ops(a, b):
    A, B = IntPoly(a), IntPoly(b)
    assert to_sympy(A * B).expand() == (to_sympy(A) * to_sympy(B)).expand()
    assert to_sympy(A + B) == (to_sympy(A) + to_sympy(B)).expand()
    assert A - A == IntPoly()


@settings(max_examples=100, deadline=None)
@given(coeff_lists, monic)
def test_division_by_monic(a, d):
    A = IntPoly(a)
    q, r = A.divmod_monic(d)
    assert q * d + r == A
    assert r.degree < d.degree


primes = st.sampled_from([2, 3, 5, 7])


@settings(max_examples=150, deadline=None)
@given(primes, coeff_lists, coeff_lists)
def test_gcd_bezout_matches_sympy(p, a, b):
    A, B = ModPoly(p, a), ModPoly(p, b)
    if A.is_zero() and B.is_zero():
        return
    g, u, v = gcd_bezout(A, B)
    assert u * A + v * B == g
    ref = sympy.Poly(sympy.gcd(sympy.Poly(to_sympy(IntPoly(a)), X, modulus=p),
                               sympy.Poly(to_sympy(IntPoly(b)), X, modulus=p)))
    ref_coeffs = [int(c) % p for c in reversed(ref.all_coeffs())]
    assert g == ModPoly(p, ref_coeffs).monic()


def test_gcd_example():
    a = ModPoly(3, (-1, 0, 1))
    b = ModPoly(3, (1, -2, 1))
    g, u, v = gcd_bezout(a, b)
    assert g == ModPoly(3, (-1, 1))
    assert u * a + v * b == g


def test_engel_exponent_example():
    h = IntPoly((-1, 1)) ** 2 * IntPoly((1, 1))
    e = engel_exponent(h, 5, 3)
    assert e.r == 2
    assert e.u * ModPoly.x_minus_one_power(3, 5) + e.v * h.mod_p(3) == ModPoly.x_minus_one_power(3, 2)


@settings(max_examples=150, deadline=None)
@given(primes, monic, st.integers(1, 8))
def test_engel_exponent_is_multiplicity(p, h, c):
    e = engel_exponent(h, c, p)
    ref = sympy.gcd(sympy.Poly((X - 1) ** c, X, modulus=p), sympy.Poly(to_sympy(h), X, modulus=p))
    assert e.r == sympy.Poly(ref).degree()
    assert e.u * ModPoly.x_minus_one_power(p, c) + e.v * h.mod_p(p) == ModPoly.x_minus_one_power(p, e.r)


def test_p_part():
    assert [p_part(q, 3) for q in (1, 2, 3, 18, 81)] == [0, 0, 1, 2, 4]
    with pytest.raises(ValueError):
        p_part(0, 3)


def test_product_annihilator_small_example():
    f = IntPoly((-1, 0, 1))
    # X^2 - 1 already works: (X1 X2)^2 - 1 = X1^2 (X2^2 - 1) + (X1^2 - 1)
    assert reduce_mod_powers(MultiPoly.of_product(f, 2), f).is_zero()
    h = product_annihilator(f, 2)
    assert h.degree == 4
    assert reduce_mod_powers(MultiPoly.of_product(h, 2), f).is_zero()


@settings(max_examples=60, deadline=None)
@given(monic)
def test_product_annihilator_is_resultant(f):
    # for m = 2 the roots of h are the pairwise products of roots of f
    d = f.degree
    g = sum(sympy.Integer(c) * X**k * Y ** (d - k) for k, c in enumerate(f.coeffs))
    ref = sympy.resultant(to_sympy(f).subs(X, Y), g, Y)
    h = product_annihilator(f, 2)
    assert h == from_sympy(sympy.expand(ref)) or h == from_sympy(sympy.expand(-ref))


@settings(max_examples=40, deadline=None)
@given(monic, st.sampled_from([2, 3]))
def test_product_annihilator_reduces_to_zero(f, m):
    if f.degree**m > 125:
        return
    h = product_annihilator(f, m)
    assert h.is_monic() and h.degree == f.degree**m
    assert reduce_mod_powers(MultiPoly.of_product(h, m), f).is_zero()


def test_reduce_detects_non_members():
    f = IntPoly((-1, 0, 1))
    P = MultiPoly.variable(2, 0) + MultiPoly.const(2, 1)
    assert not reduce_mod_powers(P, f).is_zero()


def _first_pair_over_q(h, i_max=8, param_max=8):
    """Smallest (l, k) with X^l (X^k - 1)^l divisible by gcd_i h(X^i) over Q."""
    g = to_sympy(h)
    for i in range(2, i_max + 1):
        g = sympy.gcd(g, to_sympy(h.compose_power(i)))
    for ell in range(1, param_max + 1):
        for k in range(1, param_max + 1):
            target = X**ell * (X**k - 1) ** ell
            if sympy.rem(target, g, X) == 0:
                return ell, k
    return None


@pytest.mark.parametrize("coeffs", [(-1, 1), (0, 1), (-2, 1), (-1, 0, 1), (-1, -1, 1)])
def test_semple_search_named_cases(coeffs):
    h = IntPoly(coeffs)
    res = semple_search(h)
    assert res is not None
    assert res.certificate.verify()
    assert res.certificate.target == semple_target(res.q, res.k, res.ell)
    assert (res.ell, res.k) == _first_pair_over_q(h)


def test_semple_frozen_values():
    # q, k, l found by the bounded search; each re-expands exactly
    expected = {
        (-1, 1): (1, 1, 1),
        (0, 1): (1, 1, 1),
        (-2, 1): (1, 1, 1),
        (-1, 0, 1): (1, 2, 1),
        (-1, -1, 1): (2, 1, 1),
    }
    for coeffs, qkl in expected.items():
        r = semple_search(IntPoly(coeffs))
        assert (r.q, r.k, r.ell) == qkl


def test_semple_x_minus_two_identity():
    # -(X - 2) + (X^2 - 2) = X (X - 1), so q = 1 suffices
    cert = semple_search(IntPoly((-2, 1))).certificate
    assert cert.expand() == IntPoly((0, -1, 1))


def test_semple_search_exhausts():
    # (X - 1)^9 divides every h(X^i), so l < 9 is impossible
    h = IntPoly((-1, 1)) ** 9
    assert semple_search(h, param_max=8) is None
    assert semple_search(h, i_max=2, deg_max=9, param_max=9) is not None


def test_semple_rejects_bad_input():
    with pytest.raises(ValueError):
        semple_search(IntPoly((1, 2)))
    with pytest.raises(ValueError):
        semple_search(IntPoly((-1, 1)), i_max=0)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=2))
def test_semple_certificates_verify(c):
    h = IntPoly(c + [1])
    res = semple_search(h, i_max=4, deg_max=12, param_max=4)
    if res is not None:
        assert res.certificate.verify()
        assert res.q >= 1
