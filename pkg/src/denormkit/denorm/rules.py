"""The de-normalization pipeline: entities, numbers, abbreviations, casing."""

from __future__ import annotations

import re

from .entities import recognize_entities
from .lexicon import DenormConfig, Lexicons, NumberClass
from .numerals import parse_number, to_roman

_NUMERIC = re.compile(r"^(\d+([.,:/]\d+)*%?|[IVXLCDM]+)$")


def _matches_context(item, token):
    if token is None:
        return False
    if item == "#num":
        return bool(_NUMERIC.match(token))
    return token.lower() == item


def _context_ok(contexts, tokens, start, end):
    prev = tokens[start - 1] if start > 0 else None
    nxt = tokens[end] if end < len(tokens) else None
    for item in contexts or ():
        if item.startswith("<"):
            if _matches_context(item[1:], prev):
                return True
        elif _matches_context(item.lstrip(">"), nxt):
            return True
    return False


def _phrase_index(lexicon):
    index = {}
    for surface, entry in lexicon.entries.items():
        words = tuple(surface.split())
        index.setdefault(words[0], []).append((words, entry))
    for options in index.values():
        options.sort(key=lambda o: -len(o[0]))
    return index


def abbreviate(tokens, abbreviation_lexicon):
    """Replace spoken phrases by their abbreviations, longest phrase first.

    Ambiguous entries ("wieku") are replaced only where one of their listed
    contexts holds: ``<x`` looks at the previous token, ``>x`` or a bare
    ``x`` at the following one; ``#num`` matches digits and Roman numerals.
    """
    if abbreviation_lexicon is None or not len(abbreviation_lexicon):
        return list(tokens)
    index = _phrase_index(abbreviation_lexicon)
    out = []
    i = 0
    while i < len(tokens):
        for words, entry in index.get(tokens[i].lower(), ()):
            end = i + len(words)
            if tuple(t.lower() for t in tokens[i:end]) != words:
                continue
            if entry.ambiguous and not _context_ok(entry.extra, tokens, i, end):
                continue
            out.append(entry.canonical)
            i = end
            break
        else:
            out.append(tokens[i])
            i += 1
    return out


def render_number(match, next_token, roman_contexts):
    """Written form of a numeral match, or None to leave the words alone."""
    value, cls = match.value, match.cls
    if cls is NumberClass.INDETERMINATE or value is None:
        return None
    if cls is NumberClass.FRACTION:
        return f"{value.numerator}/{value.denominator}"
    if cls is NumberClass.ORDINAL and next_token is not None \
            and next_token.lower() in roman_contexts and 1 <= value <= 3999:
        return to_roman(int(value))
    return str(int(value))


def convert_numbers(tokens, numeral_lexicon, roman_contexts=()):
    out = []
    i = 0
    contexts = frozenset(roman_contexts)
    while i < len(tokens):
        m = parse_number(tokens, i, numeral_lexicon)
        if m is None:
            out.append(tokens[i])
            i += 1
            continue
        words = tokens[m.start:m.end]
        written = None
        lone_ambiguous = len(m) == 1 and numeral_lexicon.get(words[0].lower()).ambiguous
        if not lone_ambiguous:
            nxt = tokens[m.end] if m.end < len(tokens) else None
            written = render_number(m, nxt, contexts)
        out.extend(words if written is None else [written])
        i = m.end
    return out


def apply_entities(tokens, numeral_lexicon, config):
    matches = recognize_entities(
        tokens, numeral_lexicon, config.currency_units, config.phone_lengths, config.time_cues,
    )
    out = []
    i = 0
    for m in matches:
        out.extend(tokens[i:m.start])
        out.extend(m.rendering.split())
        i = m.end
    out.extend(tokens[i:])
    return out


def _merge_case(token, canonical):
    """Add the capitals of ``canonical`` to ``token``; never lowercase."""
    if len(token) != len(canonical) or token.lower() != canonical.lower():
        return token[:1].upper() + token[1:]
    return "".join(c.upper() if k.isupper() else c for c, k in zip(token, canonical))


def _lookup(word, lexicons):
    """(canonical, strong) for a name/surname hit, else None."""
    found = [lex.get(word) for lex in lexicons if lex is not None]
    found = [e for e in found if e is not None]
    if not found:
        return None
    strong = [e for e in found if not e.ambiguous]
    return ((strong or found)[0].canonical, bool(strong))


def _is_initial(token):
    return (len(token) == 1 and token.isalpha()) or (
        len(token) == 2 and token[0].isalpha() and token[1] == "." and token[0].isupper()
    )


def _case_sentence(tokens, lexicons, salutations):
    n = len(tokens)
    low = [t.lower() for t in tokens]
    info = [_lookup(w, lexicons) for w in low]
    hit = [x is not None and x[1] for x in info]
    salut = [w in salutations for w in low]
    initial = [False] * n
    changed = True
    while changed:
        changed = False
        for i in range(n):
            left = i > 0 and (hit[i - 1] or salut[i - 1] or initial[i - 1])
            right = i + 1 < n and (hit[i + 1] or initial[i + 1])
            if info[i] is not None and not hit[i] and (left or right):
                hit[i] = changed = True
        # runs of single letters between a name (or salutation) and a name
        i = 0
        while i < n:
            if not _is_initial(tokens[i]) or initial[i] or hit[i]:
                i += 1
                continue
            j = i
            while j < n and _is_initial(tokens[j]) and not hit[j]:
                j += 1
            before = i > 0 and (hit[i - 1] or salut[i - 1])
            after = j < n and hit[j]
            if before and after:
                for k in range(i, j):
                    initial[k] = changed = True
            i = j
    out = []
    for i, tok in enumerate(tokens):
        if initial[i]:
            tok = tok[0].upper() + "."
        elif hit[i]:
            tok = _merge_case(tok, info[i][0])
        out.append(tok)
    if out:
        out[0] = out[0][:1].upper() + out[0][1:]
    return out


def restore_case(sentences, name_lexicon, surname_lexicon, salutations=DenormConfig().salutations):
    """Capitalize sentence starts, names and surnames, and initials between them.

    Unambiguous lexicon entries are always capitalized; ambiguous ones
    ("biały") only next to another name or after a salutation.
    """
    from ..segmenter import SegmentedText, Sentence  # corpus imports this package

    lexicons = (name_lexicon, surname_lexicon)
    salutations = frozenset(salutations)
    out = SegmentedText(coerced=sentences.coerced)
    for s in sentences.sentences:
        out.sentences.append(Sentence(_case_sentence(s.tokens, lexicons, salutations), s.commas_after, s.terminal))
    return out


def _chunks(sentence):
    """Split a sentence at its commas: rules never reach across one."""
    chunks, start = [], 0
    for i in sorted(sentence.commas_after):
        chunks.append(sentence.tokens[start:i + 1])
        start = i + 1
    chunks.append(sentence.tokens[start:])
    return chunks


def _rewrite(tokens, lexicons, config):
    if config.entities and lexicons.numerals is not None:
        tokens = apply_entities(tokens, lexicons.numerals, config)
    if config.numbers and lexicons.numerals is not None:
        tokens = convert_numbers(tokens, lexicons.numerals, config.roman_contexts)
    if config.abbreviations and lexicons.abbreviations is not None:
        tokens = abbreviate(tokens, lexicons.abbreviations)
    return tokens


def denormalize_segments(sentences, lexicons, config=None):
    """Run the rule pipeline and return the rewritten :class:`SegmentedText`."""
    from ..segmenter import SegmentedText, Sentence

    config = config or DenormConfig()
    out = SegmentedText(coerced=sentences.coerced)
    for s in sentences.sentences:
        tokens, commas = [], set()
        chunks = _chunks(s)
        for k, chunk in enumerate(chunks):
            tokens.extend(_rewrite(chunk, lexicons, config))
            if k < len(chunks) - 1:
                commas.add(len(tokens) - 1)
        out.sentences.append(Sentence(tokens, frozenset(commas), s.terminal))
    if config.casing:
        out = restore_case(out, lexicons.names, lexicons.surnames, config.salutations)
    return out


def denormalize(sentences, lexicons=None, config=None):
    """Written-form text for segmented ASR output, one sentence per line."""
    from ..segmenter import render

    lexicons = lexicons if lexicons is not None else Lexicons()
    return render(denormalize_segments(sentences, lexicons, config))
