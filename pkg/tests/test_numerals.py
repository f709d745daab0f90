from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from denormkit.denorm import NumberClass, default_lexicons, parse_number, to_roman, verbalize_number
from denormkit.errors import RangeError

NUMERALS = default_lexicons().numerals

ROMAN_VALUES = {"I": 1, "V": 5, "X": 10, "L": 50, "C": 100, "D": 500, "M": 1000}


def roman_value(text):
    """Independent reader: subtract a symbol when a larger one follows it."""
    total = 0
    for a, b in zip(text, text[1:] + " "):
        v = ROMAN_VALUES[a]
        total += -v if b != " " and ROMAN_VALUES[b] > v else v
    return total


def parse(text):
    return parse_number(text.split(), 0, NUMERALS)


@pytest.mark.parametrize("text, value, cls, length", [
    ("czterdzieści cztery", 44, NumberClass.CARDINAL, 2),
    ("sto siedemnaście", 117, NumberClass.CARDINAL, 2),
    ("pięcioro", 5, NumberClass.COLLECTIVE, 1),
    ("jedna piąta", Fraction(1, 5), NumberClass.FRACTION, 2),
    ("trzy czwarte", Fraction(3, 4), NumberClass.FRACTION, 2),
    ("pół", Fraction(1, 2), NumberClass.FRACTION, 1),
    ("dwudziesty pierwszy", 21, NumberClass.ORDINAL, 2),
    ("sto dwudziesta", 120, NumberClass.ORDINAL, 2),
    ("dwa tysiące czternastego roku", 2014, NumberClass.ORDINAL, 3),
    ("trzy miliony pięćset tysięcy", 3_500_000, NumberClass.CARDINAL, 4),
    ("tysiąc", 1000, NumberClass.CARDINAL, 1),
    ("zero", 0, NumberClass.CARDINAL, 1),
])
def test_parse_examples(text, value, cls, length):
    m = parse(text)
    assert (m.value, m.cls, len(m)) == (value, cls, length)


def test_indeterminate():
    m = parse("kilkaset osób")
    assert m.cls is NumberClass.INDETERMINATE
    assert m.value is None
    assert m.span == (0, 1)
    assert parse("kilkaset tysięcy").span == (0, 2)


def test_ill_formed_composition_stops_early():
    m = parse("cztery czterdzieści")
    assert (m.value, m.span) == (4, (0, 1))
    assert parse("dwadzieścia sto").span == (0, 1)


def test_no_numeral_at_start():
    assert parse("kobiet czterdzieści") is None


def test_start_out_of_range():
    with pytest.raises(IndexError):
        parse_number(["dwa"], 3, NUMERALS)


def test_parse_is_case_insensitive():
    assert parse("Czterdzieści Cztery").value == 44


def test_round_trip_small():
    for n in range(0, 1000):
        m = parse_number(verbalize_number(n), 0, NUMERALS)
        assert (m.value, m.cls, m.end) == (n, NumberClass.CARDINAL, len(verbalize_number(n)))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 999_999_999))
def test_round_trip_large(n):
    words = verbalize_number(n)
    m = parse_number(words, 0, NUMERALS)
    assert m.value == n and m.end == len(words)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 999_999), st.sampled_from(["osób", "lat", "kropka", "jest"]))
def test_span_is_maximal(n, tail):
    """No extension of the returned span parses as a longer numeral."""
    words = verbalize_number(n) + [tail]
    m = parse_number(words, 0, NUMERALS)
    assert m.end == len(words) - 1


@pytest.mark.parametrize("n, words", [
    (0, ["zero"]),
    (44, ["czterdzieści", "cztery"]),
    (117, ["sto", "siedemnaście"]),
    (1000, ["tysiąc"]),
    (2000, ["dwa", "tysiące"]),
    (5000, ["pięć", "tysięcy"]),
    (22_000, ["dwadzieścia", "dwa", "tysiące"]),
    (12_000, ["dwanaście", "tysięcy"]),
    (1_000_000, ["milion"]),
])
def test_verbalize_examples(n, words):
    assert verbalize_number(n) == words


def test_verbalize_range():
    with pytest.raises(RangeError):
        verbalize_number(-1)
    with pytest.raises(RangeError):
        verbalize_number(1_000_000_000)


@pytest.mark.parametrize("n, text", [(1, "I"), (4, "IV"), (21, "XXI"), (1999, "MCMXCIX"), (2014, "MMXIV"), (3999, "MMMCMXCIX")])
def test_roman_examples(n, text):
    assert to_roman(n) == text


def test_roman_exhaustive():
    seen = set()
    for n in range(1, 4000):
        r = to_roman(n)
        assert roman_value(r) == n
        seen.add(r)
    assert len(seen) == 3999


@pytest.mark.parametrize("bad", [0, 4000, -3])
def test_roman_range(bad):
    with pytest.raises(RangeError):
        to_roman(bad)
