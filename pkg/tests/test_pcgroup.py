import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcert import _kernel, catalog
from nilcert.pcgroup import (
    InconsistentPresentation,
    PcGroup,
    burnside_generators,
    class_of_action,
    derived_length,
    derived_series,
    derived_subgroup,
    exponent_mod,
    frattini_subgroup,
    gamma,
    is_powerful,
    lower_central_series,
    nilpotency_class,
    power_subgroup,
    quotient,
    relative_class,
    section_group,
    subgroup_as_group,
)
from oracle_models import image_map, models

MODELS = models()
SMALL = ["cyc9", "ab_9_3", "heis3", "mc9", "m16", "mc27"]


def _as_set(img, H):
    return frozenset(img[int(x)] for x in H.elements())


@pytest.mark.parametrize("name", SMALL)
def test_presentation_matches_model(name):
    G = catalog.group(name)
    M = MODELS[name]
    img = image_map(G, M)
    assert len(set(img)) == G.order
    x, y = np.meshgrid(np.arange(G.order), np.arange(G.order), indexing="ij")
    prod = G.mul_arrays(x.ravel(), y.ravel())
    for a, b, c in zip(x.ravel(), y.ravel(), prod):
        assert img[c] == M.mul(img[a], img[b])


@pytest.mark.parametrize("name", SMALL)
def test_series_match_model(name):
    G = catalog.group(name)
    M = MODELS[name]
    img = image_map(G, M)
    lcs = lower_central_series(G.whole)
    assert [_as_set(img, H) for H in lcs] == M.lower_central()
    ds = derived_series(G.whole)
    assert [_as_set(img, H) for H in ds] == M.derived()


@pytest.mark.parametrize("name", SMALL)
def test_power_subgroups_match_model(name):
    G = catalog.group(name)
    M = MODELS[name]
    img = image_map(G, M)
    whole = M.elements()
    for k in (2, 3, 4, 9):
        assert _as_set(img, power_subgroup(G.whole, k)) == M.power_subgroup(whole, k)


def test_catalog_invariants():
    # frozen from the models above
    expected = {
        "cyc9": (9, 1, 1, True),
        "ab_9_3": (27, 1, 1, True),
        "heis3": (27, 2, 2, False),
        "mc9": (81, 2, 2, True),
        "m16": (16, 2, 2, True),
        "mc27": (243, 3, 2, True),
        "ut4_3": (729, 3, 2, False),
    }
    for name, (order, cls, dl, powerful) in expected.items():
        G = catalog.group(name)
        assert (G.order, nilpotency_class(G.whole), derived_length(G.whole),
                is_powerful(G.whole)) == (order, cls, dl, powerful), name


def test_heis3_basics():
    G = catalog.group("heis3")
    a, b, c = G.generators()
    assert G.format(G.collect([1, 0])) == "a*b*c"
    assert G.comm(b, a) == c
    assert G.consistency_check() is None
    assert [H.order for H in lower_central_series(G.whole)] == [27, 3, 1]
    assert power_subgroup(G.whole, 3).is_trivial()
    cl = G.normal_closure([a])
    assert cl == G.subgroup([a, c])
    assert not G.is_normal_subset([a])
    Q, proj = quotient(G, G.subgroup([c]))
    assert Q.order == 9 and nilpotency_class(Q.whole) == 1
    assert power_subgroup(Q.whole, 3).is_trivial()
    assert len(burnside_generators(G.whole)) == 2


def test_mc9_basics():
    G = catalog.group("mc9")
    a, b, c, d = G.generators()
    assert G.conj(a, b) == G.pow(a, 4)
    assert derived_subgroup(G.whole) == G.subgroup([c])
    assert power_subgroup(G.whole, 3) == G.subgroup([c, d])
    assert power_subgroup(G.whole, 3).order == 9
    Q, _ = quotient(G, G.subgroup([c]))
    assert Q.order == 27 and nilpotency_class(Q.whole) == 1
    assert frattini_subgroup(G.whole) == G.subgroup([c, d])
    assert len(burnside_generators(G.whole)) == 2
    assert exponent_mod(G.whole, power_subgroup(G.whole, 3)) == 3


def test_subgroup_as_group_and_sections():
    G = catalog.group("mc9")
    H = power_subgroup(G.whole, 3)
    K, embed = subgroup_as_group(H)
    assert K.order == 9 and nilpotency_class(K.whole) == 1
    for x in range(K.order):
        for y in range(K.order):
            assert embed[K.mul(x, y)] == G.mul(int(embed[x]), int(embed[y]))
    a = G.generators()[0]
    Q, image = section_group(G.subgroup([a]), G.trivial)
    assert Q.order == 9


def test_relative_class_and_action():
    G = catalog.group("mc27")
    whole = G.whole
    assert relative_class(whole, G.trivial) == 3
    assert relative_class(whole, gamma(whole, 2)) == 1
    assert relative_class(whole, gamma(whole, 3)) == 2
    assert class_of_action(gamma(whole, 2), G.trivial, whole) == 2


def test_inconsistent_presentation_rejected():
    # a^3 = b with b central of order 3 is consistent; making a commute
    # nontrivially with its own power is not
    with pytest.raises(InconsistentPresentation) as err:
        PcGroup(3, "abc", {0: (0, 1, 0)}, {(1, 0): (0, 0, 1)})
    assert err.value.witness is not None


def test_relation_order_rejected():
    with pytest.raises(ValueError):
        PcGroup(3, "ab", {1: (1, 0)})
    with pytest.raises(ValueError):
        PcGroup(3, "ab", {}, {(0, 1): (0, 1)})
    with pytest.raises(ValueError):
        PcGroup(4, "a")


def test_empty_relations_cyclic():
    G = PcGroup(5, "a")
    assert G.order == 5 and nilpotency_class(G.whole) == 1


def test_collector_path_matches_table():
    G = catalog.group("ut4_3")
    H = catalog.group("ut4_3")
    H.table = H.inverse_table = None
    rng = np.random.default_rng(3)
    for x, y in rng.integers(0, G.order, (500, 2)):
        x, y = int(x), int(y)
        assert H.mul(x, y) == G.mul(x, y)
        assert H.inv(x) == G.inv(x)
    a, b, c, d, e, f = H.generators()
    assert H.comm(b, a) == d and H.comm(e, a) == f


@pytest.mark.parametrize("name", ["heis3", "mc9", "m16", "mc27", "ut4_3"])
def test_backends_agree(name):
    G = catalog.group(name)
    rng = np.random.default_rng(7)
    packs = [(b, b.pack(G._tables())) for b in _kernel.available_backends()]
    for _ in range(300):
        exps = [int(v) for v in rng.integers(0, G.prime, G.ngens)]
        letters = [int(v) for v in rng.integers(0, G.ngens, rng.integers(0, 12))]
        results = {tuple(b.collect(pk, exps, letters)) for b, pk in packs}
        assert len(results) == 1


def test_compiled_backend_selected():
    if _kernel.compiled_backend is None:
        pytest.skip("compiled kernel not built")
    assert _kernel.BACKEND == "cython"


elements = st.integers(min_value=0, max_value=242)


@settings(max_examples=200, deadline=None)
@given(elements, elements, elements)
def test_group_axioms_mc27(x, y, z):
    G = catalog.group("mc27")
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, G.inv(x)) == 0
    assert G.comm(x, y) == G.mul(G.inv(G.mul(y, x)), G.mul(x, y))
    assert G.pow(x, G.element_order(x)) == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(elements, max_size=4), st.lists(elements, max_size=4))
def test_subgroup_membership_matches_elements(gens, more):
    G = catalog.group("mc27")
    H = G.subgroup(gens)
    els = set(int(x) for x in H.elements())
    assert len(els) == H.order
    assert all(g in H for g in gens)
    assert H == G.subgroup(list(els))
    K = G.subgroup(gens + more)
    assert H <= K
    for x in more:
        assert (x in H) == (x in els)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=80), min_size=1, max_size=3))
def test_normal_closure_is_smallest_normal(gens):
    G = catalog.group("mc9")
    N = G.normal_closure(gens)
    assert G.is_normal_subset([int(x) for x in N.elements()])
    M = MODELS["mc9"]
    img = image_map(G, M)
    whole = M.elements()
    conj = {M.mul(M.mul(M.inv(g), img[x]), g) for g in whole for x in gens}
    assert _as_set(img, N) == M.closure(conj)
