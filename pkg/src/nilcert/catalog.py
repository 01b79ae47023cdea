"""Built-in groups, stored as instance text."""

from .instance import parse_instance

_SOURCES = {
    "cyc9": """\
# cyclic of order 9, b = a^3
name cyc9
prime 3
generators a b
relation a^3 = b
""",
    "ab_9_3": """\
# C9 x C3, c = a^3
name ab_9_3
prime 3
generators a b c
relation a^3 = c
""",
    "heis3": """\
# Heisenberg group mod 3: order 27, exponent 3
name heis3
prime 3
generators a b c
relation [b,a] = c
""",
    "mc9": """\
# <a,b | a^9, b^9, a^b = a^4>, c = a^3, d = b^3
name mc9
prime 3
generators a b c d
relation a^3 = c
relation b^3 = d
relation [b,a] = c^2
""",
    "m16": """\
# modular group <a,b | a^8, b^2, a^b = a^5>, c = a^2, d = a^4
name m16
prime 2
generators a b c d
relation a^2 = c
relation c^2 = d
relation [b,a] = d
""",
    "mc27": """\
# <a,b | a^27, b^9, a^b = a^4>, c = a^3, d = b^3, e = a^9
name mc27
prime 3
generators a b c d e
relation a^3 = c
relation b^3 = d
relation c^3 = e
relation [b,a] = c^2 e^2
relation [c,b] = e
relation [d,a] = e^2
""",
    "ut4_3": """\
# upper unitriangular 4x4 matrices over F_3, order 729, class 3
name ut4_3
prime 3
generators a b c d e f
relation [b,a] = d
relation [c,b] = e
relation [d,c] = f^2
relation [e,a] = f
""",
}

POWERFUL = ("cyc9", "ab_9_3", "mc9", "m16", "mc27")


def names():
    return list(_SOURCES)


def source(name):
    try:
        return _SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown catalog group '{name}'; known: {', '.join(_SOURCES)}") from None


def load(name):
    return parse_instance(source(name))


def group(name):
    return load(name).group()
