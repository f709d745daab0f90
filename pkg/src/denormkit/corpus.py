"""Turn punctuated, cased text into ASR-style training data.

A punctuated line such as ``Ile kobiet mających 44 lata?`` becomes the
lowercase, verbalized token stream ``ile kobiet mających czterdzieści cztery
lata`` with a boundary label on every token (``QUESTION`` on the last one)
and a comma label on every token.
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass, field

from .errors import FormatError, InputError, RangeError, SizeError
from .denorm.numerals import verbalize_number


class BoundaryLabel(str, enum.Enum):
    NONE = "NONE"
    PERIOD = "PERIOD"
    QUESTION = "QUESTION"
    EXCLAM = "EXCLAM"


class CommaLabel(str, enum.Enum):
    NONE = "NONE"
    COMMA = "COMMA"


BOUNDARY_LABELS = tuple(label.value for label in BoundaryLabel)
COMMA_LABELS = tuple(label.value for label in CommaLabel)

TERMINAL_MARKS = {
    ".": BoundaryLabel.PERIOD,
    "…": BoundaryLabel.PERIOD,
    "?": BoundaryLabel.QUESTION,
    "!": BoundaryLabel.EXCLAM,
}
MARK_OF = {
    BoundaryLabel.PERIOD: ".",
    BoundaryLabel.QUESTION: "?",
    BoundaryLabel.EXCLAM: "!",
}

# characters a normalized surface must never contain
FORBIDDEN = frozenset('.,!?:;"()')
# peeled off token ends; anything else (%, °, $...) stays on the token
_EDGE_PUNCT = frozenset('.,!?…:;"()[]{}«»„”“‘’\'`-–—/*')


@dataclass(frozen=True)
class Token:
    surface: str
    index: int
    cased_original: str | None = None

    def __post_init__(self):
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")
        if self.index < 0:
            raise ValueError("token index must be non-negative")


def is_normalized_surface(surface):
    return surface == surface.lower() and not (FORBIDDEN & set(surface))


@dataclass
class LabeledSequence:
    tokens: list[Token]
    boundaries: list[BoundaryLabel]
    commas: list[CommaLabel]
    flagged: bool = False

    def __post_init__(self):
        n = len(self.tokens)
        if n == 0 or len(self.boundaries) != n or len(self.commas) != n:
            raise InputError(
                f"labeled sequence needs equal non-zero lengths, got "
                f"{n}/{len(self.boundaries)}/{len(self.commas)}"
            )
        self.boundaries = [BoundaryLabel(b) for b in self.boundaries]
        self.commas = [CommaLabel(c) for c in self.commas]

    def __len__(self):
        return len(self.tokens)

    @property
    def surfaces(self):
        return [t.surface for t in self.tokens]

    def labels(self, task):
        """Label strings for the ``boundary`` or ``comma`` task."""
        if task == "boundary":
            return [b.value for b in self.boundaries]
        if task == "comma":
            return [c.value for c in self.commas]
        raise ValueError(f"unknown task {task!r}")


@dataclass(frozen=True)
class SplitSpec:
    segments: int = 250
    per_segment: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.segments < 1 or self.per_segment < 1:
            raise InputError("segments and per_segment must be positive")

    @property
    def held_out(self):
        return self.segments * self.per_segment

    @property
    def minimum_corpus(self):
        return 2 * self.held_out + 1


@dataclass
class Tokenized:
    """Tokens of punctuated text with their punctuation events."""

    tokens: list[Token] = field(default_factory=list)
    boundaries: list[BoundaryLabel] = field(default_factory=list)
    commas: list[CommaLabel] = field(default_factory=list)
    dropped: int = 0

    def __len__(self):
        return len(self.tokens)


def _decode(text):
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputError(f"invalid UTF-8 at byte offset {exc.start}") from None
    return text


def _is_initial(core):
    return len(core) == 1 and core.isalpha() and core.isupper()


def tokenize(text, abbreviations=frozenset()):
    """Split punctuated text into tokens and punctuation events.

    ``abbreviations`` holds lowercase abbreviated forms (``"m.in."``) whose
    final period belongs to the token rather than marking a boundary.
    """
    text = _decode(text)
    out = Tokenized()
    for chunk in text.split():
        start = 0
        while start < len(chunk) and chunk[start] in _EDGE_PUNCT:
            start += 1
        if start == len(chunk):
            # a bare mark ("tak ?") is all trail
            start = 0
        out.dropped += start
        end = len(chunk)
        while end > start and chunk[end - 1] in _EDGE_PUNCT:
            end -= 1
        core, trail = chunk[start:end], chunk[end:]
        if core and trail.startswith(".") and (
            (core + ".").lower() in abbreviations or _is_initial(core)
        ):
            core, trail = core + ".", trail[1:]

        boundary = BoundaryLabel.NONE
        comma = False
        for ch in trail:
            if ch in TERMINAL_MARKS:
                if boundary is BoundaryLabel.NONE:
                    boundary = TERMINAL_MARKS[ch]
            elif ch == ",":
                comma = True
            else:
                out.dropped += 1

        if core:
            out.tokens.append(Token(core, len(out.tokens)))
            out.boundaries.append(boundary)
            out.commas.append(
                CommaLabel.COMMA if comma and boundary is BoundaryLabel.NONE else CommaLabel.NONE
            )
        elif out.tokens:
            # a detached mark ("tak ?") belongs to the previous word
            if boundary is not BoundaryLabel.NONE and out.boundaries[-1] is BoundaryLabel.NONE:
                out.boundaries[-1] = boundary
                out.commas[-1] = CommaLabel.NONE
            elif comma and out.boundaries[-1] is BoundaryLabel.NONE:
                out.commas[-1] = CommaLabel.COMMA
        else:
            # marks with no word before them; other characters were counted above
            out.dropped += trail.count(",") + sum(ch in TERMINAL_MARKS for ch in trail)
    return out


def abbreviation_forms(lexicon):
    """Lowercase abbreviated forms that carry their own period."""
    if lexicon is None:
        return frozenset()
    return frozenset(e.canonical.lower() for e in lexicon.entries.values() if "." in e.canonical)


def expansion_table(lexicon):
    """Map abbreviated form -> spoken phrase, from unambiguous entries only."""
    table = {}
    if lexicon is None:
        return table
    for surface, entry in lexicon.entries.items():
        if not entry.ambiguous:
            table.setdefault(entry.canonical.lower(), surface)
    return table


_INT = re.compile(r"(?:0|[1-9]\d*)")
_PERCENT = re.compile(r"(0|[1-9]\d*)%")
_IP = re.compile(r"(\d{1,3})\.(\d{1,3})\.(\d{1,3})\.(\d{1,3})")


def _strip_forbidden(text):
    return "".join(ch for ch in text if ch not in FORBIDDEN)


def _verbalize_surface(low):
    """Spoken words for a digit-bearing surface, or None if unsupported."""
    try:
        if _INT.fullmatch(low):
            return verbalize_number(int(low))
        m = _PERCENT.fullmatch(low)
        if m:
            return verbalize_number(int(m.group(1))) + ["procent"]
        m = _IP.fullmatch(low)
        if m and all(int(g) <= 255 for g in m.groups()):
            words = []
            for k, group in enumerate(m.groups()):
                if k:
                    words.append("kropka")
                words.extend(verbalize_number(int(group)))
            return words
    except RangeError:
        return None
    return None


def normalize(tokenized, abbreviations=None, report=None, line=0):
    """Produce the ASR-style :class:`LabeledSequence` for tokenized text.

    Problems (unverbalizable digit strings, stripped punctuation) are
    appended to ``report`` as ``(line, reason, fragment)`` tuples; such
    sequences come back with ``flagged=True``.
    """
    if not len(tokenized):
        raise InputError("cannot normalize an empty token list")
    expand = abbreviations if isinstance(abbreviations, dict) else expansion_table(abbreviations)
    tokens, boundaries, commas = [], [], []
    flagged = False
    for tok, boundary, comma in zip(tokenized.tokens, tokenized.boundaries, tokenized.commas):
        original = tok.surface
        low = original.lower()
        if low in expand:
            words = expand[low].split()
        elif any(ch.isdigit() for ch in low):
            words = _verbalize_surface(low)
            if words is None:
                flagged = True
                if report is not None:
                    report.append((line, "unverbalizable", original))
                words = [_strip_forbidden(low)]
        else:
            stripped = _strip_forbidden(low)
            if stripped != low and report is not None:
                report.append((line, "stripped", original))
            words = [stripped]
        words = [w for w in words if w]
        if not words:
            continue
        for k, word in enumerate(words):
            last = k == len(words) - 1
            tokens.append(Token(word, len(tokens), original))
            boundaries.append(boundary if last else BoundaryLabel.NONE)
            commas.append(comma if last else CommaLabel.NONE)
    if not tokens:
        raise InputError("nothing left after normalization")
    if boundaries[-1] is BoundaryLabel.NONE:
        boundaries[-1] = BoundaryLabel.PERIOD
    commas[-1] = CommaLabel.NONE
    return LabeledSequence(tokens, boundaries, commas, flagged=flagged)


def split_sentences(sequence):
    """Cut a labeled stream after every non-NONE boundary label."""
    out = []
    start = 0
    for i, b in enumerate(sequence.boundaries):
        if b is not BoundaryLabel.NONE or i == len(sequence) - 1:
            toks = [Token(t.surface, k, t.cased_original) for k, t in enumerate(sequence.tokens[start:i + 1])]
            out.append(LabeledSequence(
                toks, sequence.boundaries[start:i + 1], sequence.commas[start:i + 1], sequence.flagged,
            ))
            start = i + 1
    return out


def read_corpus(lines, abbreviations=None, free_text=False, exclude_flagged=False):
    """Normalize a punctuated corpus into per-sentence sequences.

    In line mode each line also ends a sentence; in free-text mode only the
    terminal marks do.  Returns ``(sentences, report)``.
    """
    forms = abbreviation_forms(abbreviations)
    expand = expansion_table(abbreviations)
    report = []
    sentences = []
    if free_text:
        chunks = [(1, "\n".join(_decode(line) for line in lines))]
    else:
        chunks = [(i, _decode(line)) for i, line in enumerate(lines, start=1)]
    for lineno, text in chunks:
        tokenized = tokenize(text, forms)
        if not len(tokenized):
            continue
        before = len(report)
        stream = normalize(tokenized, expand, report, lineno)
        for sentence in split_sentences(stream):
            # flag only sentences that own a reported token
            own = {t.cased_original for t in sentence.tokens}
            sentence.flagged = any(
                r[1] == "unverbalizable" and r[2] in own for r in report[before:]
            )
            if exclude_flagged and sentence.flagged:
                continue
            sentences.append(sentence)
    return sentences, report


def split_corpus(corpus, spec=SplitSpec()):
    """Seeded segment-wise hold-out split into ``(train, tune, test)``.

    The corpus is cut into ``spec.segments`` contiguous blocks (the last one
    absorbs the remainder); ``2 * per_segment`` sentences are drawn from each
    block without replacement, the first half going to tune and the second
    to test.  Everything not drawn is training data, in original order.
    """
    n = len(corpus)
    if n < spec.minimum_corpus:
        raise SizeError(
            f"corpus has {n} sentences; at least {spec.minimum_corpus} required "
            f"for {spec.segments} segments x {spec.per_segment}",
            required=spec.minimum_corpus,
        )
    rng = random.Random(spec.seed)
    block = n // spec.segments
    draw = 2 * spec.per_segment
    tune, test = [], []
    taken = set()
    for s in range(spec.segments):
        lo = s * block
        hi = n if s == spec.segments - 1 else lo + block
        if hi - lo < draw:
            raise SizeError(
                f"segment {s} holds {hi - lo} sentences, fewer than the {draw} to draw",
                required=spec.segments * draw,
            )
        picks = [lo + k for k in rng.sample(range(hi - lo), draw)]
        tune.extend(corpus[i] for i in picks[:spec.per_segment])
        test.extend(corpus[i] for i in picks[spec.per_segment:])
        taken.update(picks)
    train = [seq for i, seq in enumerate(corpus) if i not in taken]
    return train, tune, test


# -- file formats ----------------------------------------------------------

def format_labeled(sequences):
    """Token-per-line text: ``surface<TAB>boundary<TAB>comma``, blank line between sequences."""
    parts = []
    for seq in sequences:
        for tok, b, c in zip(seq.tokens, seq.boundaries, seq.commas):
            parts.append(f"{tok.surface}\t{b.value}\t{c.value}\n")
        parts.append("\n")
    return "".join(parts)


def write_labeled(sequences, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_labeled(sequences))


def parse_labeled(lines, path="<string>"):
    sequences = []
    toks, bs, cs = [], [], []

    def flush():
        if toks:
            sequences.append(LabeledSequence(list(toks), list(bs), list(cs)))
            toks.clear(), bs.clear(), cs.clear()

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise FormatError("expected surface<TAB>boundary<TAB>comma", path, lineno)
        surface, b, c = cols
        if b not in BOUNDARY_LABELS:
            raise FormatError(f"unknown boundary label {b!r}", path, lineno)
        if c not in COMMA_LABELS:
            raise FormatError(f"unknown comma label {c!r}", path, lineno)
        try:
            toks.append(Token(surface, len(toks)))
        except ValueError as exc:
            raise FormatError(str(exc), path, lineno) from None
        bs.append(BoundaryLabel(b))
        cs.append(CommaLabel(c))
    flush()
    return sequences


def read_labeled(path):
    with open(path, encoding="utf-8") as fh:
        return parse_labeled(fh, path=str(path))


def format_report(report):
    return "".join(f"{line}\t{reason}\t{fragment}\n" for line, reason, fragment in report)


def join_sequences(sequences):
    """Concatenate sentences into one labeled stream."""
    tokens, bs, cs = [], [], []
    for seq in sequences:
        for tok, b, c in zip(seq.tokens, seq.boundaries, seq.commas):
            tokens.append(Token(tok.surface, len(tokens), tok.cased_original))
            bs.append(b)
            cs.append(c)
    return LabeledSequence(tokens, bs, cs, any(s.flagged for s in sequences))


def windows(sequences, size):
    """Consecutive groups of ``size`` sentences joined into streams."""
    if size < 1:
        raise InputError("window size must be positive")
    return [join_sequences(sequences[i:i + size]) for i in range(0, len(sequences), size)]


def as_instances(sequences, task):
    """``(surfaces, labels)`` pairs for CRF training on ``task``."""
    return [(seq.surfaces, seq.labels(task)) for seq in sequences]
