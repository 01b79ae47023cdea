import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcert import catalog
from nilcert.instance import (
    InstanceError,
    parse_element,
    parse_element_list,
    parse_instance,
    parse_subset_spec,
    resolve_subset,
)
from nilcert.words import Law, PositiveLaw, Word, WordSyntaxError


def test_word_parsing_forms():
    assert str(Word.parse("x1 x2 x2 x1")) == "x1 x2^2 x1"
    assert Word.parse("[x1,x2]") == Word.parse("x1^-1 x2^-1 x1 x2")
    assert Word.parse("[x1,x2,x3]") == Word.parse("[[x1,x2],x3]")
    assert Word.parse("(x1 x2)^2") == Word.parse("x1 x2 x1 x2")
    assert Word.parse("x1*x1^-1") == Word.identity()
    assert Word.parse("1").letters == ()
    assert Word.parse("x3").arity == 3


def test_word_syntax_errors_have_columns():
    with pytest.raises(WordSyntaxError) as err:
        Word.parse("x1 (x2")
    assert err.value.column is not None
    with pytest.raises(WordSyntaxError):
        Word.parse("x1 ^")
    with pytest.raises(WordSyntaxError):
        Word.parse("y1")


def test_law_kinds():
    law = Law.parse("x1 x2 x2 x1 = x2 x1 x1 x2")
    assert isinstance(law, PositiveLaw) and law.degree == 4
    assert not isinstance(Law.parse("[x1,x2] = 1"), PositiveLaw)
    assert not isinstance(Law.parse("x1^3"), PositiveLaw)
    with pytest.raises(ValueError):
        PositiveLaw.parse("x1 x2 = x1 x2")
    with pytest.raises(ValueError):
        PositiveLaw.parse("x1^-1 x2 = x2 x1")


words = st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=10).map(
    lambda letters: Word(letters, 3)
)


@settings(max_examples=200, deadline=None)
@given(words, words, words)
def test_words_form_a_group(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * u.inverse() == Word.identity(3)
    if len(u):
        assert Word.parse(str(u), arity=3) == u


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_substitution_is_a_homomorphism(u, v):
    images = [Word.parse("x1 x2"), Word.parse("x2^-1"), Word.parse("[x1,x2]")]
    assert (u * v).substitute(images) == u.substitute(images) * v.substitute(images)


def test_instance_parses_catalog_and_round_trips():
    for name in catalog.names():
        inst = catalog.load(name)
        assert parse_instance(inst.emit()) == inst
        assert parse_instance(inst.emit()).emit() == inst.emit()
    heis = catalog.load("heis3")
    assert heis.group().order == 27


def test_instance_optional_blocks():
    text = (
        "name demo\nprime 3\ngenerators a b c\nrelation [b,a] = c\n"
        "subset conj-closure a,b\nlaw x1 x2 = x2 x1\nword [x1,x2]\n"
    )
    inst = parse_instance(text)
    assert inst.subset == ("conj-closure", "a,b")
    assert inst.law == "x1 x2 = x2 x1" and inst.word == "[x1,x2]"
    els, sampled = resolve_subset(inst, inst.subset)
    assert len(els) == 6 and not sampled
    vals, _ = resolve_subset(inst, ("word-values", "[x1,x2]"))
    assert len(vals) == 3


def test_instance_single_generator_is_cyclic():
    G = parse_instance("prime 5\ngenerators a\n").group()
    assert G.order == 5


@pytest.mark.parametrize(
    "text, line",
    [
        ("prime 3\ngenerators a b\nrelation b^3 = a\n", 3),
        ("prime 3\ngenerators a b\nrelation [a,b] = b\n", 3),
        ("prime 3\ngenerators a b\nfoo\n", 3),
        ("prime 3\ngenerators a b\nrelation a^3 = b^3\n", 3),
    ],
)
def test_instance_errors_are_positioned(text, line):
    with pytest.raises(InstanceError) as err:
        parse_instance(text)
    assert err.value.line == line


def test_missing_prime():
    with pytest.raises(InstanceError):
        parse_instance("generators a\n")


def test_inconsistent_instance():
    text = "prime 3\ngenerators a b c\nrelation a^3 = b\nrelation [b,a] = c\n"
    with pytest.raises(InstanceError, match="inconsistent"):
        parse_instance(text)


def test_element_parsing():
    G = catalog.group("heis3")
    a, b, c = G.generators()
    assert parse_element(G, "b*a") == G.mul(b, a)
    assert parse_element(G, "[b,a]") == c
    assert parse_element(G, "a^-1") == G.inv(a)
    assert parse_element(G, "1") == 0
    assert parse_element_list(G, "a, [b,a], b^2") == [a, c, G.pow(b, 2)]
    with pytest.raises((InstanceError, WordSyntaxError)):
        parse_element(G, "z")


def test_subset_spec():
    assert parse_subset_spec("conj-closure a,b") == ("conj-closure", "a,b")
    assert parse_subset_spec("a, b") == ("elements", "a, b")
    assert parse_subset_spec("all") == ("all", "")
