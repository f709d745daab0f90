"""Multi-token entities built on numeral parses: dates, times, percentages,
amounts of money, IP addresses and phone numbers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .lexicon import DEFAULT_CURRENCY_UNITS, NumberClass
from .numerals import parse_number


class EntityKind(str, enum.Enum):
    DATE = "DATE"
    TIME = "TIME"
    PERCENT = "PERCENT"
    CURRENCY = "CURRENCY"
    IP = "IP"
    PHONE = "PHONE"


@dataclass(frozen=True)
class EntityMatch:
    span: tuple[int, int]
    kind: EntityKind
    rendering: str

    @property
    def start(self):
        return self.span[0]

    @property
    def end(self):
        return self.span[1]


MONTHS_GENITIVE = (
    "stycznia", "lutego", "marca", "kwietnia", "maja", "czerwca",
    "lipca", "sierpnia", "września", "października", "listopada", "grudnia",
)
PERCENT_WORDS = frozenset({"procent", "procenta", "procentów"})
SINGLE_DIGITS = ("zero", "jeden", "dwa", "trzy", "cztery", "pięć", "sześć", "siedem", "osiem", "dziewięć")
_DIGIT_OF = {w: i for i, w in enumerate(SINGLE_DIGITS)}
DEFAULT_TIME_CUES = frozenset({"o", "godzina", "godzinie", "godz.", "od", "do"})


def _is_int(m, classes=(NumberClass.CARDINAL,)):
    return m is not None and m.cls in classes and m.value is not None and m.value.denominator == 1


def _is_feminine(word):
    return word.endswith(("a", "ą", "ej"))


def _number(tokens, i, lex):
    if i >= len(tokens):
        return None
    return parse_number(tokens, i, lex)


def _ip(tokens, i, lex):
    end = i
    groups = []
    for k in range(4):
        if k:
            if end >= len(tokens) or tokens[end].lower() != "kropka":
                return None
            end += 1
        m = _number(tokens, end, lex)
        if not _is_int(m) or m.value > 255:
            return None
        groups.append(int(m.value))
        end = m.end
    return EntityMatch((i, end), EntityKind.IP, ".".join(map(str, groups)))


def _phone(tokens, i, lengths):
    if i > 0 and tokens[i - 1].lower() in _DIGIT_OF:
        return None
    end = i
    while end < len(tokens) and tokens[end].lower() in _DIGIT_OF:
        end += 1
    n = end - i
    if n not in lengths:
        return None
    digits = "".join(str(_DIGIT_OF[t.lower()]) for t in tokens[i:end])
    if n % 3 == 0:
        groups = [digits[k:k + 3] for k in range(0, n, 3)]
    else:
        groups = [digits[:3]] + [digits[k:k + 2] for k in range(3, n, 2)]
    return EntityMatch((i, end), EntityKind.PHONE, " ".join(groups))


def _date(tokens, i, lex):
    day = _number(tokens, i, lex)
    if not _is_int(day, (NumberClass.ORDINAL,)) or not 1 <= day.value <= 31:
        return None
    if day.end >= len(tokens) or tokens[day.end].lower() not in MONTHS_GENITIVE:
        return None
    month = tokens[day.end].lower()
    end = day.end + 1
    rendering = f"{int(day.value)} {month}"
    year = _number(tokens, end, lex)
    if (_is_int(year, (NumberClass.CARDINAL, NumberClass.ORDINAL))
            and year.end < len(tokens) and tokens[year.end].lower() == "roku"):
        rendering += f" {int(year.value)} roku"
        end = year.end + 1
    return EntityMatch((i, end), EntityKind.DATE, rendering)


def _time(tokens, i, lex, cues):
    hour = _number(tokens, i, lex)
    if not _is_int(hour, (NumberClass.ORDINAL,)) or not 0 <= hour.value <= 24:
        return None
    if not _is_feminine(tokens[hour.end - 1].lower()):
        return None
    minutes = None
    end = hour.end
    if end < len(tokens):
        m = _number(tokens, end, lex)
        if _is_int(m) and m.value == 0 and m.end < len(tokens):
            # "zero pięć" -> :05
            m2 = _number(tokens, m.end, lex)
            if _is_int(m2) and m2.value < 10:
                minutes, end = int(m2.value), m2.end
        if minutes is None and _is_int(m) and m.value < 60:
            minutes, end = int(m.value), m.end
    cued = i > 0 and tokens[i - 1].lower() in cues
    if minutes is None and not cued:
        return None
    return EntityMatch((i, end), EntityKind.TIME, f"{int(hour.value):02d}:{minutes or 0:02d}")


def _percent(tokens, i, lex):
    m = _number(tokens, i, lex)
    if not _is_int(m) or m.end >= len(tokens) or tokens[m.end].lower() not in PERCENT_WORDS:
        return None
    return EntityMatch((i, m.end + 1), EntityKind.PERCENT, f"{int(m.value)}%")


def _currency(tokens, i, lex, units):
    m = _number(tokens, i, lex)
    if not _is_int(m) or m.end >= len(tokens):
        return None
    symbol = units.get(tokens[m.end].lower())
    if symbol is None:
        return None
    return EntityMatch((i, m.end + 1), EntityKind.CURRENCY, f"{int(m.value)} {symbol}")


def recognize_entities(tokens, numeral_lexicon, unit_table=None, phone_lengths=(7, 9),
                       time_cues=DEFAULT_TIME_CUES):
    """Non-overlapping entity matches, scanned left to right, longest first.

    A numeral that starts no entity is skipped as a whole, so an entity never
    begins in the middle of a number ("jedna piąta" stays a fraction).
    """
    units = DEFAULT_CURRENCY_UNITS if unit_table is None else unit_table
    lengths = frozenset(phone_lengths)
    cues = frozenset(time_cues)
    matches = []
    i = 0
    while i < len(tokens):
        number = parse_number(tokens, i, numeral_lexicon)
        if number is None:
            i += 1
            continue
        candidates = [
            _ip(tokens, i, numeral_lexicon),
            _phone(tokens, i, lengths),
            _date(tokens, i, numeral_lexicon),
            _time(tokens, i, numeral_lexicon, cues),
            _percent(tokens, i, numeral_lexicon),
            _currency(tokens, i, numeral_lexicon, units),
        ]
        candidates = [c for c in candidates if c is not None]
        if candidates:
            # max() keeps the first of equally long candidates
            best = max(candidates, key=lambda c: c.end - c.start)
            matches.append(best)
            i = best.end
        else:
            i = number.end
    return matches
