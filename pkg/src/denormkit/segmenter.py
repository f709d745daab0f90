"""Decode boundary/comma labels over a token stream and build punctuated sentences."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import crf
from .corpus import MARK_OF, BoundaryLabel, CommaLabel, tokenize
from .errors import InputError


@dataclass
class Sentence:
    tokens: list[str]
    commas_after: frozenset[int] = frozenset()
    terminal: BoundaryLabel = BoundaryLabel.PERIOD

    def __post_init__(self):
        if not self.tokens:
            raise InputError("a sentence needs at least one token")
        self.terminal = BoundaryLabel(self.terminal)
        if self.terminal is BoundaryLabel.NONE:
            raise InputError("sentence terminal cannot be NONE")
        self.commas_after = frozenset(i for i in self.commas_after if 0 <= i < len(self.tokens) - 1)


@dataclass
class SegmentedText:
    sentences: list[Sentence] = field(default_factory=list)
    coerced: int = 0

    def tokens(self):
        return [t for s in self.sentences for t in s.tokens]


def _surfaces(tokens):
    return [t if isinstance(t, str) else t.surface for t in tokens]


def label_stream(tokens, boundary_model, comma_model=None):
    """Viterbi-decode boundary and comma labels over one token stream.

    A comma is suppressed wherever the boundary decode ends a sentence.
    """
    words = _surfaces(tokens)
    if not words:
        return [], []
    bpath, _ = crf.viterbi(words, boundary_model)
    boundaries = [BoundaryLabel(y) for y in bpath]
    if comma_model is None:
        commas = [CommaLabel.NONE] * len(words)
    else:
        cpath, _ = crf.viterbi(words, comma_model)
        commas = [CommaLabel(y) for y in cpath]
    commas = [
        CommaLabel.NONE if b is not BoundaryLabel.NONE else c
        for b, c in zip(boundaries, commas)
    ]
    return boundaries, commas


def assemble(tokens, boundary_labels, comma_labels):
    """Cut the stream after each non-NONE boundary; a NONE final label becomes PERIOD."""
    words = _surfaces(tokens)
    if not (len(words) == len(boundary_labels) == len(comma_labels)):
        raise InputError(
            f"length mismatch: {len(words)} tokens, {len(boundary_labels)} boundary "
            f"labels, {len(comma_labels)} comma labels"
        )
    out = SegmentedText()
    if not words:
        return out
    boundaries = [BoundaryLabel(b) for b in boundary_labels]
    commas = [CommaLabel(c) for c in comma_labels]
    if boundaries[-1] is BoundaryLabel.NONE:
        boundaries[-1] = BoundaryLabel.PERIOD
        out.coerced += 1
    start = 0
    for i, b in enumerate(boundaries):
        if b is BoundaryLabel.NONE:
            continue
        span = range(start, i + 1)
        out.sentences.append(Sentence(
            words[start:i + 1],
            frozenset(k - start for k in span if commas[k] is CommaLabel.COMMA),
            b,
        ))
        start = i + 1
    return out


def render_sentence(sentence):
    parts = []
    last = len(sentence.tokens) - 1
    for i, tok in enumerate(sentence.tokens):
        if i in sentence.commas_after:
            tok += ","
        if i == last:
            mark = MARK_OF[sentence.terminal]
            # "w XXI w." takes no second period
            if not (mark == "." and tok.endswith(".")):
                tok += mark
        parts.append(tok)
    return " ".join(parts)


def render(segmented):
    """One sentence per line, marks attached to the preceding word."""
    return "".join(render_sentence(s) + "\n" for s in segmented.sentences)


def labels_from_text(text, abbreviations=frozenset()):
    """Tokens plus boundary and comma labels recovered from punctuated text.

    Every line ends a sentence, matching :func:`render`.
    """
    words, boundaries, commas = [], [], []
    for line in text.splitlines():
        tok = tokenize(line, abbreviations)
        if not len(tok):
            continue
        bs = list(tok.boundaries)
        cs = list(tok.commas)
        if bs[-1] is BoundaryLabel.NONE:
            bs[-1] = BoundaryLabel.PERIOD
            cs[-1] = CommaLabel.NONE
        words.extend(t.surface for t in tok.tokens)
        boundaries.extend(bs)
        commas.extend(cs)
    return words, boundaries, commas


def parse_segmented(text, abbreviations=frozenset()):
    """Read rendered text (one sentence per line) back into a :class:`SegmentedText`."""
    words, boundaries, commas = labels_from_text(text, abbreviations)
    return assemble(words, boundaries, commas)


def segment(tokens, boundary_model, comma_model=None):
    boundaries, commas = label_stream(tokens, boundary_model, comma_model)
    return assemble(_surfaces(tokens), boundaries, commas)
