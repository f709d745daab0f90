"""Translation metrics (BLEU, NIST, TER, a METEOR variant) and boundary scoring."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import BOUNDARY_LABELS, BoundaryLabel, CommaLabel
from .errors import InputError


@dataclass(frozen=True)
class EvaluationReport:
    metric: str
    score: float
    components: dict = field(default_factory=dict)
    segment_scores: tuple | None = None

    def to_line(self):
        """Machine-readable ``metric<TAB>score<TAB>key=value...`` line."""
        parts = [self.metric, _fmt(self.score)]
        parts.extend(f"{k}={_fmt(v)}" for k, v in self.components.items() if not isinstance(v, (list, tuple, dict)))
        return "\t".join(parts)

    def to_text(self):
        lines = [f"{self.metric}: {self.score:.4f}"]
        for k, v in self.components.items():
            if isinstance(v, (list, tuple)):
                lines.append(f"  {k}:")
                lines.extend("    " + " ".join(f"{x:>6}" for x in row) for row in v)
            else:
                lines.append(f"  {k}: {_fmt(v)}")
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def _check_pair(hypotheses, references):
    if len(hypotheses) != len(references):
        raise InputError(f"{len(hypotheses)} hypotheses but {len(references)} references")


def ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _as_refs(ref):
    """A reference is a token list; a list of token lists gives several."""
    if ref and not isinstance(ref[0], str):
        return list(ref)
    return [ref]


def _clipped(hyp_counts, refs, n):
    if len(refs) == 1:
        ref_counts = ngrams(refs[0], n)
    else:
        ref_counts = Counter()
        for r in refs:
            ref_counts |= ngrams(r, n)
    return sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())


def _closest_ref_length(hyp_len, refs):
    return min((abs(len(r) - hyp_len), len(r)) for r in refs)[1]


# ---------------------------------------------------------------- BLEU

def bleu(hypotheses, references, max_n=4):
    """Corpus BLEU: clipped n-gram counts summed over all segments."""
    _check_pair(hypotheses, references)
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        refs = _as_refs(ref)
        hyp_len += len(hyp)
        ref_len += _closest_ref_length(len(hyp), refs)
        for n in range(1, max_n + 1):
            counts = ngrams(hyp, n)
            matches[n - 1] += _clipped(counts, refs, n)
            totals[n - 1] += max(len(hyp) - n + 1, 0)
    precisions = [m / t if t else 0.0 for m, t in zip(matches, totals)]
    if hyp_len == 0:
        bp = 0.0
    elif hyp_len < ref_len:
        bp = math.exp(1 - ref_len / hyp_len)
    else:
        bp = 1.0
    if min(precisions) == 0:
        score = 0.0
    else:
        score = bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    components = {f"p{n}": p for n, p in enumerate(precisions, 1)}
    components.update(bp=bp, hyp_len=hyp_len, ref_len=ref_len)
    return EvaluationReport("BLEU", score, components)


# ---------------------------------------------------------------- NIST

NIST_BETA = math.log(0.5) / math.log(2 / 3) ** 2


def nist_info(references, max_n=5):
    """Information weight of every reference n-gram.

    info(w1..wn) = log2(count(w1..wn-1) / count(w1..wn)); the count of the
    empty prefix is the number of reference words.
    """
    counts = Counter()
    total_words = 0
    for ref in references:
        for r in _as_refs(ref):
            total_words += len(r)
            for n in range(1, max_n + 1):
                counts.update(ngrams(r, n))
    info = {}
    for gram, c in counts.items():
        prefix = total_words if len(gram) == 1 else counts[gram[:-1]]
        info[gram] = math.log2(prefix / c)
    return info


def nist(hypotheses, references, max_n=5):
    _check_pair(hypotheses, references)
    info = nist_info(references, max_n)
    gained = [0.0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        refs = _as_refs(ref)
        hyp_len += len(hyp)
        ref_len += sum(len(r) for r in refs) / len(refs)
        for n in range(1, max_n + 1):
            hyp_counts = ngrams(hyp, n)
            ref_counts = Counter()
            for r in refs:
                ref_counts |= ngrams(r, n)
            totals[n - 1] += max(len(hyp) - n + 1, 0)
            gained[n - 1] += sum(info[g] * min(c, ref_counts[g]) for g, c in hyp_counts.items() if g in ref_counts)
    per_n = [g / t if t else 0.0 for g, t in zip(gained, totals)]
    ratio = min(hyp_len / ref_len, 1.0) if ref_len else 0.0
    bp = math.exp(NIST_BETA * math.log(ratio) ** 2) if ratio > 0 else 0.0
    score = bp * sum(per_n)
    components = {f"n{n}": v for n, v in enumerate(per_n, 1)}
    components.update(bp=bp, hyp_len=hyp_len, ref_len=ref_len)
    return EvaluationReport("NIST", score, components)


# ---------------------------------------------------------------- TER

MAX_SHIFT_SIZE = 10


def edit_distance(a, b):
    """Word-level Levenshtein distance with unit costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def _move(words, start, length, dest):
    """Move words[start:start+length] so that it begins at ``dest`` of the result."""
    block = words[start:start + length]
    rest = words[:start] + words[start + length:]
    return rest[:dest] + block + rest[dest:]


def _best_shift(hyp, ref, current):
    ref_starts = {}
    for n in range(1, MAX_SHIFT_SIZE + 1):
        for k in range(len(ref) - n + 1):
            ref_starts.setdefault(tuple(ref[k:k + n]), []).append(k)
    best = None
    for start in range(len(hyp)):
        for length in range(min(MAX_SHIFT_SIZE, len(hyp) - start), 0, -1):
            targets = ref_starts.get(tuple(hyp[start:start + length]))
            if not targets:
                continue
            limit = len(hyp) - length
            for dest in sorted({min(k, limit) for k in targets}):
                if dest == start:
                    continue
                moved = _move(hyp, start, length, dest)
                gain = current - edit_distance(moved, ref)
                # ties: earlier start, then longer block, then earlier dest
                if best is None or gain > best[0]:
                    best = (gain, moved, current - gain)
    return best


def ter_counts(hypothesis, reference):
    """(edits, shifts) after greedy block shifting.

    A shift is applied only while it lowers the edit distance by more than
    its own cost of one edit.
    """
    hyp = list(hypothesis)
    current = edit_distance(hyp, reference)
    shifts = 0
    while current > 0:
        best = _best_shift(hyp, reference, current)
        if best is None or best[0] <= 1:
            break
        _, hyp, current = best
        shifts += 1
    return current + shifts, shifts


def ter(hypothesis, reference):
    if not reference:
        raise InputError("TER needs a non-empty reference")
    edits, shifts = ter_counts(hypothesis, reference)
    return EvaluationReport("TER", edits / len(reference),
                            {"edits": edits, "shifts": shifts, "ref_len": len(reference)})


def corpus_ter(hypotheses, references):
    """Total edits over total reference length, with per-segment TER."""
    _check_pair(hypotheses, references)
    edits = shifts = length = 0
    segments = []
    for hyp, ref in zip(hypotheses, references):
        rep = ter(hyp, ref)
        edits += rep.components["edits"]
        shifts += rep.components["shifts"]
        length += len(ref)
        segments.append(rep.score)
    if length == 0:
        raise InputError("TER needs a non-empty reference")
    return EvaluationReport("TER", edits / length,
                            {"edits": edits, "shifts": shifts, "ref_len": length}, tuple(segments))


# ---------------------------------------------------------------- METEOR

POLISH_SUFFIXES = tuple(sorted([
    "ami", "ach", "ów", "om", "owi", "ego", "emu", "ymi", "imi", "ych", "ich", "ej", "em",
    "ie", "ią", "ię", "iu", "owie", "owa", "owe", "owy", "ą", "ę", "a", "e", "i", "y", "u", "o",
], key=len, reverse=True))
MIN_STEM = 3
SEARCH_LIMIT = 20_000


def stem(word):
    """Strip the longest listed suffix that leaves at least three letters."""
    w = word.lower()
    for suffix in POLISH_SUFFIXES:
        if w.endswith(suffix) and len(w) - len(suffix) >= MIN_STEM:
            return w[:-len(suffix)]
    return w


def count_chunks(pairs):
    """Runs of pairs adjacent on both sides; ``pairs`` sorted by hypothesis index."""
    chunks = 0
    prev = None
    for i, j in pairs:
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            chunks += 1
        prev = (i, j)
    return chunks


def align(hypothesis, reference):
    """Exact matches first, then stem matches, then the fewest chunks.

    Returns sorted (hyp index, ref index, stage) triples.  The match counts
    of both stages are fixed by word counts; a bounded depth-first search
    then looks for the arrangement with the fewest chunks.
    """
    hyp = list(hypothesis)
    ref = list(reference)
    h_count, r_count = Counter(hyp), Counter(ref)
    exact_need = {w: min(c, r_count[w]) for w, c in h_count.items() if w in r_count}
    left_h = Counter({w: c - exact_need.get(w, 0) for w, c in h_count.items()})
    left_r = Counter({w: c - exact_need.get(w, 0) for w, c in r_count.items()})
    stems_h, stems_r = Counter(), Counter()
    for w, c in left_h.items():
        stems_h[stem(w)] += c
    for w, c in left_r.items():
        stems_r[stem(w)] += c
    stem_need = {s: min(c, stems_r[s]) for s, c in stems_h.items() if stems_r[s]}
    total_need = sum(exact_need.values()) + sum(stem_need.values())
    if total_need == 0:
        return []

    hyp_stems = [stem(w) for w in hyp]
    ref_stems = [stem(w) for w in ref]
    remaining_h = [Counter(hyp[i:]) for i in range(len(hyp) + 1)]
    exact_left = dict(exact_need)
    stem_left = dict(stem_need)
    unused_r = Counter(ref)
    used = [False] * len(ref)
    best = [None, math.inf]
    nodes = [0]
    pairs = []

    def options(i, prev_ref):
        w = hyp[i]
        cands = []
        if exact_left.get(w, 0) > 0:
            cands.extend((j, 0) for j in range(len(ref)) if not used[j] and ref[j] == w)
        s = hyp_stems[i]
        if stem_left.get(s, 0) > 0 and remaining_h[i + 1][w] >= exact_left.get(w, 0):
            for j in range(len(ref)):
                if used[j] or ref[j] == w or ref_stems[j] != s:
                    continue
                # the ref word may not be needed for one of its own exact matches
                if unused_r[ref[j]] - 1 >= exact_left.get(ref[j], 0):
                    cands.append((j, 1))
        # continue the current chunk first
        cands.sort(key=lambda c: (c[0] != (prev_ref + 1 if prev_ref is not None else -1), c[1], c[0]))
        return cands

    def dfs(i, prev_ref, chunks, matched):
        nodes[0] += 1
        # a pending match after a gap opens at least one more chunk
        bound = chunks + (matched < total_need and prev_ref is None)
        if bound >= best[1] or nodes[0] > SEARCH_LIMIT and best[0] is not None:
            return
        if matched == total_need:
            best[0], best[1] = list(pairs), chunks
            return
        if i == len(hyp) or len(hyp) - i < total_need - matched:
            return
        w = hyp[i]
        for j, stage in options(i, prev_ref):
            new_chunk = prev_ref is None or j != prev_ref + 1
            used[j] = True
            unused_r[ref[j]] -= 1
            if stage == 0:
                exact_left[w] -= 1
            else:
                stem_left[hyp_stems[i]] -= 1
            pairs.append((i, j, stage))
            dfs(i + 1, j, chunks + new_chunk, matched + 1)
            pairs.pop()
            if stage == 0:
                exact_left[w] += 1
            else:
                stem_left[hyp_stems[i]] += 1
            unused_r[ref[j]] += 1
            used[j] = False
        # leave hyp[i] unmatched, if its exact quota can still be met later
        if remaining_h[i + 1][w] >= exact_left.get(w, 0):
            dfs(i + 1, None, chunks, matched)

    dfs(0, None, 0, 0)
    return best[0]


def _meteor_from_counts(matches, chunks, hyp_len, ref_len):
    if matches == 0:
        return 0.0, 0.0, 0.0, 0.0
    p = matches / hyp_len
    r = matches / ref_len
    fmean = 10 * p * r / (r + 9 * p)
    penalty = 0.5 * (chunks / matches) ** 3
    return fmean * (1 - penalty), p, r, penalty


def meteor_lite(hypothesis, reference):
    """METEOR with exact and stem stages only (no synonyms)."""
    pairs = align(hypothesis, reference) if hypothesis and reference else []
    chunks = count_chunks([(i, j) for i, j, _ in pairs])
    m = len(pairs)
    score, p, r, penalty = _meteor_from_counts(m, chunks, len(hypothesis), len(reference))
    return EvaluationReport("METEOR", score, {
        "matches": m, "exact": sum(1 for *_, s in pairs if s == 0), "chunks": chunks,
        "precision": p, "recall": r, "penalty": penalty,
    })


def corpus_meteor(hypotheses, references):
    """Pool matches and chunks over segments, then score once."""
    _check_pair(hypotheses, references)
    m = chunks = hyp_len = ref_len = 0
    segments = []
    for hyp, ref in zip(hypotheses, references):
        rep = meteor_lite(hyp, ref)
        m += rep.components["matches"]
        chunks += rep.components["chunks"]
        hyp_len += len(hyp)
        ref_len += len(ref)
        segments.append(rep.score)
    score, p, r, penalty = _meteor_from_counts(m, chunks, hyp_len, ref_len)
    return EvaluationReport("METEOR", score, {
        "matches": m, "chunks": chunks, "precision": p, "recall": r, "penalty": penalty,
    }, tuple(segments))


# ---------------------------------------------------------------- boundaries

def prf(tp, fp, fn):
    precision = tp / (tp + fp) if tp + fp else float(fn == 0)
    recall = tp / (tp + fn) if tp + fn else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def _stream(sequences, attr):
    return [label for s in sequences for label in getattr(s, attr)]


def boundary_eval(predicted, gold):
    """Boundary scores over aligned label streams; the headline score is F1.

    Components cover per-token accuracy, boundary precision/recall/F1 (any
    terminal counts as positive), exact-sentence accuracy over gold
    sentences, a gold-by-predicted confusion matrix and comma P/R/F1.
    """
    pb, gb = _stream(predicted, "boundaries"), _stream(gold, "boundaries")
    if len(pb) != len(gb):
        raise InputError(f"token count mismatch: {len(pb)} predicted, {len(gb)} gold")
    n = len(gb)
    none = BoundaryLabel.NONE
    correct = sum(p == g for p, g in zip(pb, gb))
    tp = sum(p is not none and g is not none for p, g in zip(pb, gb))
    fp = sum(p is not none and g is none for p, g in zip(pb, gb))
    fn = sum(p is none and g is not none for p, g in zip(pb, gb))
    precision, recall, f1 = prf(tp, fp, fn)

    sentences = exact = start = 0
    for i, g in enumerate(gb):
        if g is none and i != n - 1:
            continue
        sentences += 1
        exact += pb[start:i + 1] == gb[start:i + 1]
        start = i + 1

    index = {label: k for k, label in enumerate(BOUNDARY_LABELS)}
    confusion = [[0] * len(BOUNDARY_LABELS) for _ in BOUNDARY_LABELS]
    for p, g in zip(pb, gb):
        confusion[index[g.value]][index[p.value]] += 1

    pc, gc = _stream(predicted, "commas"), _stream(gold, "commas")
    comma = CommaLabel.COMMA
    ctp = sum(p is comma and g is comma for p, g in zip(pc, gc))
    cfp = sum(p is comma and g is not comma for p, g in zip(pc, gc))
    cfn = sum(p is not comma and g is comma for p, g in zip(pc, gc))
    cp, cr, cf = prf(ctp, cfp, cfn)

    return EvaluationReport("boundary", f1, {
        "accuracy": correct / n if n else 1.0,
        "precision": precision, "recall": recall, "f1": f1,
        "sentence_accuracy": exact / sentences if sentences else 1.0,
        "tokens": n, "tp": tp, "fp": fp, "fn": fn,
        "comma_precision": cp, "comma_recall": cr, "comma_f1": cf,
        "confusion": tuple(tuple(row) for row in confusion),
    })
