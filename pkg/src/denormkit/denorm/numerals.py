"""Polish numeral grammar: verbalization, compositional parsing, Roman numerals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import RangeError
from .lexicon import NumberClass

__all__ = [
    "NumberClass",
    "NumberMatch",
    "parse_number",
    "to_roman",
    "verbalize_number",
]

UNITS = ["zero", "jeden", "dwa", "trzy", "cztery", "pięć", "sześć", "siedem", "osiem", "dziewięć"]
TEENS = [
    "dziesięć", "jedenaście", "dwanaście", "trzynaście", "czternaście",
    "piętnaście", "szesnaście", "siedemnaście", "osiemnaście", "dziewiętnaście",
]
TENS = [
    "", "", "dwadzieścia", "trzydzieści", "czterdzieści", "pięćdziesiąt",
    "sześćdziesiąt", "siedemdziesiąt", "osiemdziesiąt", "dziewięćdziesiąt",
]
HUNDREDS = [
    "", "sto", "dwieście", "trzysta", "czterysta", "pięćset",
    "sześćset", "siedemset", "osiemset", "dziewięćset",
]
# (singular, paucal 2-4, plural) forms of the scale nouns
SCALES = [
    (10**6, ("milion", "miliony", "milionów")),
    (10**3, ("tysiąc", "tysiące", "tysięcy")),
]

MAX_VERBALIZABLE = 999_999_999


def _group_words(n):
    """Words for 1 <= n <= 999."""
    words = []
    hundreds, rest = divmod(n, 100)
    if hundreds:
        words.append(HUNDREDS[hundreds])
    if 10 <= rest < 20:
        words.append(TEENS[rest - 10])
    else:
        tens, units = divmod(rest, 10)
        if tens:
            words.append(TENS[tens])
        if units:
            words.append(UNITS[units])
    return words


def _scale_form(n, forms):
    if n == 1:
        return forms[0]
    if n % 10 in (2, 3, 4) and n % 100 not in (12, 13, 14):
        return forms[1]
    return forms[2]


def verbalize_number(value, cls=NumberClass.CARDINAL):
    """Spell out a non-negative integer as nominative Polish cardinal words.

    >>> verbalize_number(44)
    ['czterdzieści', 'cztery']
    """
    if cls is not NumberClass.CARDINAL:
        raise ValueError("only CARDINAL verbalization is supported")
    if isinstance(value, bool) or int(value) != value:
        raise RangeError(f"not an integer: {value!r}")
    value = int(value)
    if not 0 <= value <= MAX_VERBALIZABLE:
        raise RangeError(f"{value} outside verbalizable range 0..{MAX_VERBALIZABLE}")
    if value == 0:
        return ["zero"]
    words = []
    rest = value
    for scale, forms in SCALES:
        count, rest = divmod(rest, scale)
        if count == 1:
            words.append(forms[0])
        elif count:
            words.extend(_group_words(count))
            words.append(_scale_form(count, forms))
    if rest:
        words.extend(_group_words(rest))
    return words


_ROMAN = [
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"),
    (100, "C"), (90, "XC"), (50, "L"), (40, "XL"),
    (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
]


def to_roman(value):
    if isinstance(value, bool) or int(value) != value or not 1 <= value <= 3999:
        raise RangeError(f"{value!r} cannot be written as a Roman numeral (1..3999)")
    value = int(value)
    out = []
    for amount, symbol in _ROMAN:
        count, value = divmod(value, amount)
        out.append(symbol * count)
    return "".join(out)


@dataclass(frozen=True)
class NumberMatch:
    span: tuple[int, int]
    value: Fraction | None
    cls: NumberClass

    @property
    def start(self):
        return self.span[0]

    @property
    def end(self):
        return self.span[1]

    def __len__(self):
        return self.span[1] - self.span[0]


# magnitude roles inside one scale group
_ZERO, _UNIT, _TEEN, _TEN, _HUNDRED, _SCALE = range(6)

# role -> roles that may follow it within the same group
_FOLLOWS = {
    None: {_HUNDRED, _TEN, _TEEN, _UNIT},
    _HUNDRED: {_TEN, _TEEN, _UNIT},
    _TEN: {_UNIT},
    _TEEN: set(),
    _UNIT: set(),
}


def _role(value):
    if value == 0:
        return _ZERO
    if value < 10:
        return _UNIT
    if value < 20:
        return _TEEN
    if value < 100:
        return _TEN if value % 10 == 0 else None
    if value < 1000:
        return _HUNDRED if value % 100 == 0 else None
    if value in (10**3, 10**6, 10**9):
        return _SCALE
    return None


def _lookup(token, lexicon):
    entry = lexicon.get(token.lower())
    if entry is None or entry.extra is None:
        return None
    return entry.extra


def parse_number(tokens, start, numeral_lexicon):
    """Longest compositional numeral starting at ``tokens[start]``.

    Returns ``None`` when ``tokens[start]`` is not a numeral word.  Parsing
    stops at the longest valid prefix; within a scale group magnitudes must
    strictly decrease (hundreds, then tens or teens, then units), scale words
    multiply the pending group, and the class follows the last word.
    """
    if not 0 <= start < len(tokens):
        raise IndexError(f"start {start} out of range for {len(tokens)} tokens")
    first = _lookup(tokens[start], numeral_lexicon)
    if first is None:
        return None
    value, cls = first
    if cls is NumberClass.FRACTION:
        return NumberMatch((start, start + 1), value, cls)
    if cls is NumberClass.INDETERMINATE:
        end = start + 1
        if end < len(tokens):
            nxt = _lookup(tokens[end], numeral_lexicon)
            if nxt and nxt[1] is NumberClass.CARDINAL and nxt[0] is not None and _role(nxt[0]) == _SCALE:
                end += 1
        return NumberMatch((start, end), None, cls)

    total = 0
    group = 0
    stage = None          # last role placed in the current group
    group_open = False    # current group holds at least one word
    last_scale = None
    in_ordinal = False
    final_cls = cls
    end = start
    for i in range(start, len(tokens)):
        hit = _lookup(tokens[i], numeral_lexicon)
        if hit is None:
            break
        v, c = hit
        if c in (NumberClass.FRACTION, NumberClass.INDETERMINATE) or v is None:
            break
        if v.denominator != 1:
            break
        v = int(v)
        role = _role(v)
        if role is None or (in_ordinal and c is not NumberClass.ORDINAL):
            break
        if role == _ZERO:
            if i == start:
                end, final_cls = i + 1, c
            break
        if role == _SCALE:
            if in_ordinal or c is NumberClass.COLLECTIVE:
                break
            if last_scale is not None and v >= last_scale:
                break
            total += (group if group_open else 1) * v
            group, stage, group_open, last_scale = 0, None, False, v
            end, final_cls = i + 1, c
            if c is NumberClass.ORDINAL:
                break
            continue
        if role in _FOLLOWS[stage]:
            group += v
            stage, group_open = role, True
            end, final_cls = i + 1, c
            if c is NumberClass.ORDINAL:
                in_ordinal = True
            elif c is NumberClass.COLLECTIVE:
                break
            continue
        # "jedna piąta", "trzy czwarte": cardinal followed by an ordinal that
        # cannot continue the compound is a fraction
        if (c is NumberClass.ORDINAL and not in_ordinal and final_cls is NumberClass.CARDINAL
                and v > 1):
            return NumberMatch((start, i + 1), Fraction(total + group, v), NumberClass.FRACTION)
        break
    return NumberMatch((start, end), Fraction(total + group), final_cls)
