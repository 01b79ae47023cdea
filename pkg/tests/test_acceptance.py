"""Acceptance criteria, one test each.

Every test prints a single ``[criterion N] PASS|FAIL ...`` line, with the
elapsed time against its limit.  Arithmetic is exact, so every comparison
is an equality.
"""

import random
import time
from contextlib import contextmanager

import numpy as np

from nilcert import catalog
from nilcert.certifier import (
    black_check,
    certify_general,
    certify_verbal,
    hall_check,
    nbf_powerful_check,
)
from nilcert.exactpoly import (
    IntPoly,
    ModPoly,
    MultiPoly,
    engel_exponent,
    product_annihilator,
    reduce_mod_powers,
    semple_search,
    semple_target,
)
from nilcert.lawkit import (
    build_Tk,
    check_law_on_subset,
    conjugation_closure,
    width,
    width_layers,
)
from nilcert.pcgroup import (
    gamma,
    is_powerful,
    nilpotency_class,
    power_subgroup,
)
from nilcert.sections import AbelianSection, verify_annihilation
from nilcert.words import Law, Word

CLASS2 = Law.parse("x1 x2 x2 x1 = x2 x1 x1 x2")
ABELIAN = Law.parse("x1 x2 = x2 x1")


@contextmanager
def criterion(capsys, number, title, limit):
    """Time the block and print one pass/fail line for it."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        ok = ok and elapsed < limit
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title} "
                  f"({elapsed:.2f}s, limit {limit}s)")
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def _collector_product(G, x, y):
    return G.encode(G._collect(G.decode(x), G._letters(G.decode(y))))


def test_criterion_1_engine_matches_table(capsys):
    with criterion(capsys, 1, "collect() agrees with the table; associativity on all triples", 60):
        for name in catalog.names():
            G = catalog.group(name)
            assert G.order <= 10**4
            if G.order <= 3**6:
                assert G.table is not None
                for x in range(G.order):
                    row = [_collector_product(G, x, y) for y in range(G.order)]
                    assert row == G.table[x].tolist(), (name, x)
            T = G.table
            for x in range(G.order):
                assert np.array_equal(T[T[x], :], T[x][T]), (name, x)


def test_criterion_2_powerful_structure(capsys):
    with criterion(capsys, 2, "gamma_(i+1) <= G^(p^i) for the powerful catalog groups", 10):
        for name in ("cyc9", "ab_9_3", "mc9", "m16"):
            G = catalog.group(name)
            assert is_powerful(G.whole)
            i = 0
            while True:
                lower = gamma(G.whole, i + 1)
                upper = power_subgroup(G.whole, G.prime**i)
                assert lower <= upper, (name, i)
                if lower.is_trivial() and upper.is_trivial():
                    break
                i += 1


def test_criterion_3_Tk_width(capsys):
    with criterion(capsys, 3, "<T_k> = gamma_k(G) and width(T_k) <= width(T) d^(k-1)", 120):
        for name in ("mc9", "heis3"):
            G = catalog.group(name)
            gens = G.generators()[:2]
            T = conjugation_closure(G, gens)
            m, d = width(G, T), len(gens)
            for k in range(1, nilpotency_class(G.whole) + 1):
                Tk = build_Tk(G, T, k)
                assert Tk.subgroup() == gamma(G.whole, k)
                # the BFS balls grow strictly until they fill gamma_k
                sizes = width_layers(G, Tk.elements)
                assert sizes[-1] == gamma(G.whole, k).order
                assert all(a < b for a, b in zip(sizes, sizes[1:]))
                assert width(G, Tk.elements) <= m * d ** (k - 1), (name, k)


def test_criterion_4_product_annihilator(capsys):
    rng = random.Random(20261016)
    with criterion(capsys, 4, "product_annihilator on 200 random monic f, m = 2, 3", 120):
        for _ in range(200):
            deg = rng.randint(1, 6)
            f = IntPoly([rng.randint(-5, 5) for _ in range(deg)] + [1])
            for m in (2, 3):
                h = product_annihilator(f, m)
                assert h.is_monic() and h.degree == deg**m
                assert reduce_mod_powers(MultiPoly.of_product(h, m), f).is_zero()
                if m == 2:
                    n = -(-deg // 2)
                    assert h.degree <= (2 * n) ** 2


def _multiplicity_at_one(h, p):
    # repeated synthetic division by X - 1 over F_p; h is monic so never zero
    coeffs = [c % p for c in h.coeffs]
    r = 0
    while len(coeffs) > 1 and sum(coeffs) % p == 0:
        acc, quotient = 0, []
        for c in reversed(coeffs):
            acc = (acc + c) % p
            quotient.append(acc)
        coeffs = quotient[-2::-1]
        r += 1
    return r


def test_criterion_5_bezout_engel(capsys):
    rng = random.Random(5)
    with criterion(capsys, 5, "Bezout identity with r the gcd multiplicity on 500 triples", 10):
        for _ in range(500):
            p = rng.choice([2, 3, 5, 7])
            deg = rng.randint(1, 8)
            h = IntPoly([rng.randint(-9, 9) for _ in range(deg)] + [1])
            c = rng.randint(1, 10)
            e = engel_exponent(h, c, p)
            assert e.r == min(c, _multiplicity_at_one(h, p))
            lhs = e.u * ModPoly.x_minus_one_power(p, c) + e.v * h.mod_p(p)
            assert lhs == ModPoly.x_minus_one_power(p, e.r)


def test_criterion_6_semple(capsys):
    cases = {"X-1": (-1, 1), "X": (0, 1), "X-2": (-2, 1), "X^2-1": (-1, 0, 1), "X^2-X-1": (-1, -1, 1)}
    with criterion(capsys, 6, "semple_search certificates re-expand exactly", 60):
        for label, coeffs in cases.items():
            res = semple_search(IntPoly(coeffs))
            assert res is not None, label
            cert = res.certificate
            assert cert.verify(), label
            assert cert.expand() == semple_target(res.q, res.k, res.ell), label
            target = IntPoly.monomial(res.ell, res.q) * (IntPoly.monomial(res.k) - IntPoly.const(1)) ** res.ell
            assert cert.expand() == target, label


def test_criterion_7_general_mc9(capsys):
    with criterion(capsys, 7, "certify-general on mc9 passes with observed class 2", 300):
        G = catalog.group("mc9")
        T = conjugation_closure(G, G.generators()[:2])
        cert = certify_general(G, T, CLASS2)
        assert cert.verdict == "passed" and cert.exit_code == 0
        assert all(c.verdict == "pass" for c in cert.checks)
        names = [c.name for c in cert.checks]
        for needed in ("law on T", "width of T", "level 1: width of T_k",
                       "level 1: [A,_r g] <= A^p", "level 1: n = s r + l",
                       "level 1: [A,_n g^k] = 1", "level 1: |Q : <g_i^k> A| <= k^d"):
            assert needed in names, needed
        (level,) = cert.quantities["levels"]
        assert level["n"] == level["s"] * level["r"] + level["ell"]
        assert cert.quantities["observed_class"] == 2


def test_criterion_8_verbal(capsys):
    with criterion(capsys, 8, "certify-verbal on (heis3, [x,y]) and (mc9, x^3)", 300):
        G = catalog.group("heis3")
        cert = certify_verbal(G, Word.parse("[x1,x2]"), ABELIAN)
        assert cert.verdict == "passed"
        assert cert.quantities["|w(G)|"] == 3  # prime order, so cyclic
        assert cert.check("v on G").inputs["coverage"] == "proved"

        H = catalog.group("mc9")
        cert = certify_verbal(H, Word.parse("x1^3"), ABELIAN)
        assert cert.verdict == "passed"
        assert cert.quantities["|w(G)|"] == 9
        assert cert.quantities["observed_class_w(G)"] == 1
        v = Word.parse(cert.quantities["v"])
        full = check_law_on_subset(H, H.elements(), v, budget=10**7)
        assert full.holds and full.coverage == "proved"


def test_criterion_9_standalone_checks(capsys):
    with criterion(capsys, 9, "nbf on (mc9, G^3), black on (heis3, x^3), hall on (heis3, <c>)", 60):
        G = catalog.group("mc9")
        cert = nbf_powerful_check(G, power_subgroup(G.whole, 3))
        assert cert.verdict == "passed"
        assert all(c.verdict == "pass" for c in cert.checks)
        assert "[G^(e^(c+1)), G, ..., G] = 1" in [c.name for c in cert.checks]
        q = cert.quantities
        assert (q["k"], q["c"]) == (2, 1) and q["class"] <= q["k"] + q["c"]

        H = catalog.group("heis3")
        assert black_check(H, Word.parse("x1^3")) == 2
        c = H.generators()[2]
        res = hall_check(H, H.subgroup([c]))
        assert (res["k"], res["c"], res["class"]) == (1, 2, 2)


def test_criterion_10_negative_controls(capsys):
    with criterion(capsys, 10, "heis3 refuted at is_powerful; xy=yx fails on {a,b}; bad f has a witness", 10):
        H = catalog.group("heis3")
        a, b, c = H.generators()
        cert = certify_general(H, conjugation_closure(H, [a, b]), CLASS2)
        assert cert.verdict == "refuted" and cert.failed_check.name == "is_powerful"

        res = check_law_on_subset(H, [a, b], ABELIAN)
        assert not res.holds and res.counterexample == (a, b)

        G = catalog.group("mc9")
        ga, gb = G.generators()[:2]
        A = AbelianSection(G.subgroup([ga]), G.trivial)
        res = verify_annihilation(A, IntPoly((0, 1)), [gb])
        assert not res
        t, x = res.witness
        assert G.format(t) == "b" and G.format(x) == "a"
