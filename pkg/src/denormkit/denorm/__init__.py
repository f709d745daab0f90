"""Rule-based de-normalization of verbalized Polish text."""

from .entities import EntityKind, EntityMatch, recognize_entities
from .lexicon import (
    DenormConfig,
    Lexicon,
    LexiconEntry,
    Lexicons,
    NumberClass,
    default_lexicons,
    load_config,
    load_lexicon,
    load_lexicons,
)
from .numerals import NumberMatch, parse_number, to_roman, verbalize_number
from .rules import abbreviate, denormalize, denormalize_segments, restore_case

__all__ = [
    "DenormConfig", "EntityKind", "EntityMatch", "Lexicon", "LexiconEntry", "Lexicons",
    "NumberClass", "NumberMatch", "abbreviate", "default_lexicons", "denormalize",
    "denormalize_segments", "load_config", "load_lexicon", "load_lexicons", "parse_number",
    "recognize_entities", "restore_case", "to_roman", "verbalize_number",
]
