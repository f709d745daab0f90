"""Lexicon tables and the rule-engine configuration file.

Lexicons are UTF-8 TSV files::

    surface<TAB>canonical<TAB>ambiguous(0|1)[<TAB>payload...]

Lines starting with ``#`` and blank lines are ignored.  Numeral lexicons
carry a two-column payload ``value<TAB>class``; abbreviation lexicons may
carry one payload column listing allowed contexts.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..errors import DuplicateEntryError, FormatError

KINDS = ("surname", "given_name", "abbreviation", "numeral_form")

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

# file names inside a lexicon directory
LEXICON_FILES = {
    "given_name": "names.tsv",
    "surname": "surnames.tsv",
    "abbreviation": "abbreviations.tsv",
    "numeral_form": "numerals.tsv",
}


class NumberClass(str, enum.Enum):
    CARDINAL = "CARDINAL"
    ORDINAL = "ORDINAL"
    COLLECTIVE = "COLLECTIVE"
    FRACTION = "FRACTION"
    INDETERMINATE = "INDETERMINATE"


@dataclass(frozen=True)
class LexiconEntry:
    canonical: str
    ambiguous: bool
    extra: Any = None


@dataclass
class Lexicon:
    kind: str
    entries: dict[str, LexiconEntry] = field(default_factory=dict)

    def __contains__(self, surface):
        return surface in self.entries

    def __len__(self):
        return len(self.entries)

    def get(self, surface, default=None):
        return self.entries.get(surface, default)


def _parse_value(text):
    if text == "?":
        return None
    return Fraction(text)


def _parse_payload(kind, payload, path, lineno):
    if kind == "numeral_form":
        if len(payload) != 2:
            raise FormatError("numeral entries need value and class columns", path, lineno)
        try:
            value = _parse_value(payload[0])
            cls = NumberClass(payload[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad numeral payload: {exc}", path, lineno) from None
        return value, cls
    if kind == "abbreviation":
        if len(payload) > 1:
            raise FormatError("abbreviation entries take at most one context column", path, lineno)
        if not payload or not payload[0]:
            return ()
        return tuple(c.strip() for c in payload[0].split(",") if c.strip())
    if payload:
        raise FormatError(f"{kind} entries take no payload", path, lineno)
    return None


def parse_lexicon(lines, kind, path="<string>"):
    """Build a :class:`Lexicon` from an iterable of text lines."""
    if kind not in KINDS:
        raise ValueError(f"unknown lexicon kind {kind!r}")
    lexicon = Lexicon(kind)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3:
            raise FormatError("expected at least 3 tab-separated columns", path, lineno)
        surface, canonical, flag, *payload = cols
        if not surface or surface != surface.lower() or surface != surface.strip():
            raise FormatError(f"surface {surface!r} must be non-empty lowercase", path, lineno)
        if not canonical:
            raise FormatError("empty canonical form", path, lineno)
        if flag not in ("0", "1"):
            raise FormatError(f"ambiguity flag must be 0 or 1, got {flag!r}", path, lineno)
        if surface in lexicon.entries:
            raise DuplicateEntryError(f"duplicate surface {surface!r}", path, lineno)
        extra = _parse_payload(kind, payload, path, lineno)
        lexicon.entries[surface] = LexiconEntry(canonical, flag == "1", extra)
    return lexicon


def load_lexicon(path, kind):
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh, kind, path=str(path))


@dataclass
class Lexicons:
    """The four tables the rule engine consumes; any may be absent."""

    names: Lexicon | None = None
    surnames: Lexicon | None = None
    abbreviations: Lexicon | None = None
    numerals: Lexicon | None = None


def load_lexicons(directory=None, kinds=KINDS):
    """Load lexicons from *directory*, falling back to the shipped tables.

    Raises ``FileNotFoundError`` naming the first missing file.
    """
    if directory is None:
        directory = os.environ.get("DENORM_LEXICON_DIR") or DATA_DIR
    directory = Path(directory)
    found = {}
    for kind in kinds:
        path = directory / LEXICON_FILES[kind]
        if not path.is_file():
            raise FileNotFoundError(f"missing lexicon file: {path}")
        found[kind] = load_lexicon(path, kind)
    return Lexicons(
        names=found.get("given_name"),
        surnames=found.get("surname"),
        abbreviations=found.get("abbreviation"),
        numerals=found.get("numeral_form"),
    )


def default_lexicons():
    return load_lexicons(DATA_DIR)


# -- rule engine configuration ---------------------------------------------

DEFAULT_CURRENCY_UNITS = {
    "złoty": "zł", "złote": "zł", "złotych": "zł", "złotego": "zł",
    "grosz": "gr", "grosze": "gr", "groszy": "gr",
    "euro": "EUR",
    "dolar": "USD", "dolary": "USD", "dolarów": "USD",
}

DEFAULT_ROMAN_CONTEXTS = (
    "wiek", "wieku", "wieki", "wieków", "wiekach",
    "rozdział", "rozdziału", "rozdziale",
    "tom", "tomu", "tomie",
)


@dataclass
class DenormConfig:
    roman_contexts: tuple[str, ...] = DEFAULT_ROMAN_CONTEXTS
    phone_lengths: tuple[int, ...] = (7, 9)
    currency_units: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_CURRENCY_UNITS))
    time_cues: tuple[str, ...] = ("o", "godzina", "godzinie", "godz.", "od", "do")
    salutations: tuple[str, ...] = (
        "pan", "pana", "panu", "panem", "panie", "pani", "panią",
        "mr", "mrs", "dr", "doktor", "prof.", "profesor",
    )
    numbers: bool = True
    entities: bool = True
    abbreviations: bool = True
    casing: bool = True


_LIST_KEYS = {"roman_contexts", "time_cues", "salutations"}
_BOOL_KEYS = {"numbers", "entities", "abbreviations", "casing"}


def parse_config(lines, path="<string>"):
    """Parse ``key=value`` lines into a :class:`DenormConfig`."""
    config = DenormConfig()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError("expected key=value", path, lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        items = [v.strip() for v in value.split(",") if v.strip()]
        if key in _LIST_KEYS:
            setattr(config, key, tuple(i.lower() for i in items))
        elif key == "phone_lengths":
            try:
                config.phone_lengths = tuple(sorted({int(i) for i in items}))
            except ValueError:
                raise FormatError("phone_lengths must be integers", path, lineno) from None
        elif key == "currency_units":
            units = {}
            for item in items:
                if ":" not in item:
                    raise FormatError("currency_units items look like word:symbol", path, lineno)
                word, symbol = item.split(":", 1)
                units[word.strip().lower()] = symbol.strip()
            config.currency_units = units
        elif key in _BOOL_KEYS:
            if value.lower() not in ("on", "off", "true", "false", "1", "0"):
                raise FormatError(f"{key} must be on/off", path, lineno)
            setattr(config, key, value.lower() in ("on", "true", "1"))
        else:
            raise FormatError(f"unknown config key {key!r}", path, lineno)
    return config


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh, path=str(path))
