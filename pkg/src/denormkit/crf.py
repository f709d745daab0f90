"""Linear-chain conditional random field.

Exact inference (forward-backward, Viterbi) in log space, L2-regularized
conditional log-likelihood training by gradient ascent, and a line-oriented
model file.

Scores for a sequence of length ``n`` over ``L`` labels are an ``(n, L)``
array of state scores plus an ``(L, L)`` transition matrix; the score of a
path ``y`` is ``sum_t state[t, y_t] + sum_t trans[y_{t-1}, y_t]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import FormatError, InputError, TrainingDivergenceError

log = logging.getLogger(__name__)

MODEL_VERSION = 1
BOS = "<BOS>"
EOS = "<EOS>"

# -- feature templates -----------------------------------------------------

_TEMPLATE_KINDS = ("word", "lower", "prefix", "suffix", "offset", "bigram", "isdigit", "lenbucket")


@dataclass(frozen=True)
class FeatureTemplate:
    """One feature generator; ``args`` are affix lengths or window offsets."""

    kind: str
    args: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in _TEMPLATE_KINDS:
            raise ValueError(f"unknown template kind {self.kind!r}")
        if self.kind in ("prefix", "suffix"):
            if len(self.args) != 1 or not 1 <= self.args[0] <= 4:
                raise ValueError(f"{self.kind} takes one length in [1, 4]")
        elif self.kind == "offset":
            if len(self.args) != 1 or not -2 <= self.args[0] <= 2:
                raise ValueError("offset takes one window offset in [-2, 2]")
        elif self.kind == "bigram":
            if len(self.args) != 2 or not all(-2 <= d <= 2 for d in self.args):
                raise ValueError("bigram takes two window offsets in [-2, 2]")
        elif self.args:
            raise ValueError(f"{self.kind} takes no arguments")

    @property
    def name(self):
        if not self.args:
            return self.kind
        return self.kind + ":" + ":".join(str(a) for a in self.args)

    @classmethod
    def parse(cls, text):
        kind, *rest = text.split(":")
        try:
            return cls(kind, tuple(int(r) for r in rest))
        except ValueError as exc:
            raise ValueError(f"bad template {text!r}: {exc}") from None


def parse_templates(text):
    return tuple(FeatureTemplate.parse(t) for t in text.replace(",", " ").split())


DEFAULT_TEMPLATES = parse_templates(
    "word offset:-2 offset:-1 offset:1 offset:2 bigram:-1:0 bigram:0:1 bigram:1:2 "
    "prefix:2 suffix:2 suffix:3 isdigit lenbucket"
)


def _word_at(words, i):
    if i < 0:
        return BOS
    if i >= len(words):
        return EOS
    return words[i]


def _offset_name(d):
    return f"w[{d:+d}]" if d else "w[0]"


def _length_bucket(word):
    n = len(word)
    if n <= 2:
        return "1-2"
    if n <= 4:
        return "3-4"
    if n <= 7:
        return "5-7"
    return "8+"


def _surfaces(sequence):
    return [t if isinstance(t, str) else t.surface for t in sequence]


def extract_features(sequence, position, templates=DEFAULT_TEMPLATES):
    """Feature strings for one position, in template order."""
    words = _surfaces(sequence)
    if not 0 <= position < len(words):
        raise IndexError(f"position {position} out of range")
    return _features_at(words, position, templates)


def _features_at(words, position, templates):
    w = words[position]
    feats = []
    for tpl in templates:
        kind = tpl.kind
        if kind == "word":
            feats.append(f"w={w}")
        elif kind == "lower":
            feats.append(f"lw={w.lower()}")
        elif kind == "prefix":
            k = tpl.args[0]
            feats.append(f"pre{k}={w[:k]}")
        elif kind == "suffix":
            k = tpl.args[0]
            feats.append(f"suf{k}={w[-k:]}")
        elif kind == "offset":
            d = tpl.args[0]
            feats.append(f"{_offset_name(d)}={_word_at(words, position + d)}")
        elif kind == "bigram":
            d1, d2 = tpl.args
            feats.append(
                f"{_offset_name(d1)}|{_offset_name(d2)}="
                f"{_word_at(words, position + d1)}|{_word_at(words, position + d2)}"
            )
        elif kind == "isdigit":
            feats.append(f"isdigit={int(w.isdigit())}")
        elif kind == "lenbucket":
            feats.append(f"len={_length_bucket(w)}")
    return feats


# -- model -----------------------------------------------------------------

@dataclass
class CrfModel:
    labels: tuple[str, ...]
    templates: tuple[FeatureTemplate, ...]
    feature_vocab: dict[str, int]
    state_weights: np.ndarray        # (vocab size, L)
    transition_weights: np.ndarray   # (L, L)
    version: int = MODEL_VERSION

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self.templates = tuple(self.templates)
        L, V = len(self.labels), len(self.feature_vocab)
        self.state_weights = np.asarray(self.state_weights, dtype=np.float64).reshape(V, L)
        self.transition_weights = np.asarray(self.transition_weights, dtype=np.float64).reshape(L, L)
        if sorted(self.feature_vocab.values()) != list(range(V)):
            raise ValueError("feature ids must be dense in [0, vocab size)")
        if not (np.isfinite(self.state_weights).all() and np.isfinite(self.transition_weights).all()):
            raise ValueError("model weights must be finite")

    @classmethod
    def zeros(cls, labels, templates, feature_vocab):
        L = len(labels)
        return cls(labels, templates, dict(feature_vocab),
                   np.zeros((len(feature_vocab), L)), np.zeros((L, L)))

    @property
    def n_labels(self):
        return len(self.labels)

    @property
    def n_weights(self):
        return self.state_weights.size + self.transition_weights.size

    def weight_vector(self):
        return np.concatenate([self.state_weights.ravel(), self.transition_weights.ravel()])

    def with_weights(self, vector):
        vector = np.asarray(vector, dtype=np.float64)
        k = self.state_weights.size
        return CrfModel(self.labels, self.templates, self.feature_vocab,
                        vector[:k].copy(), vector[k:].copy(), self.version)

    def feature_ids(self, sequence):
        """Known feature ids per position; unseen features are dropped."""
        words = _surfaces(sequence)
        vocab = self.feature_vocab
        out = []
        for i in range(len(words)):
            ids = [vocab[f] for f in _features_at(words, i, self.templates) if f in vocab]
            out.append(ids)
        return out

    def state_scores(self, sequence):
        ids = self.feature_ids(sequence)
        scores = np.zeros((len(ids), self.n_labels))
        for t, row in enumerate(ids):
            if row:
                scores[t] = self.state_weights[row].sum(axis=0)
        return scores

    def label_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"label {label!r} not in alphabet {self.labels}") from None


# -- inference on raw score arrays -----------------------------------------

def _logsumexp(a, axis):
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    out = np.log(np.sum(np.exp(a - m), axis=axis, keepdims=True)) + m
    return np.squeeze(out, axis=axis)


@dataclass
class Marginals:
    log_partition: float
    marginals: np.ndarray            # (n, L)
    pairwise_marginals: np.ndarray   # (n - 1, L, L)


def forward_backward_scores(state, trans):
    """Forward-backward over explicit score arrays."""
    state = np.asarray(state, dtype=np.float64)
    trans = np.asarray(trans, dtype=np.float64)
    n, L = state.shape
    if n == 0:
        raise InputError("forward_backward needs a non-empty sequence")
    alpha = np.empty((n, L))
    beta = np.zeros((n, L))
    alpha[0] = state[0]
    for t in range(1, n):
        alpha[t] = _logsumexp(alpha[t - 1][:, None] + trans, axis=0) + state[t]
    for t in range(n - 2, -1, -1):
        beta[t] = _logsumexp(trans + (state[t + 1] + beta[t + 1])[None, :], axis=1)
    log_z = float(_logsumexp(alpha[-1], axis=0))
    marg = np.exp(alpha + beta - log_z)
    pair = np.empty((max(n - 1, 0), L, L))
    for t in range(1, n):
        pair[t - 1] = np.exp(
            alpha[t - 1][:, None] + trans + (state[t] + beta[t])[None, :] - log_z
        )
    return Marginals(log_z, marg, pair)


def viterbi_scores(state, trans):
    """Best path over explicit score arrays; ties go to the lower label index."""
    state = np.asarray(state, dtype=np.float64)
    trans = np.asarray(trans, dtype=np.float64)
    n, L = state.shape
    if n == 0:
        raise InputError("viterbi needs a non-empty sequence")
    delta = state[0].copy()
    back = np.zeros((n, L), dtype=np.int64)
    for t in range(1, n):
        cand = delta[:, None] + trans
        # np.argmax returns the first maximum: lowest previous label wins
        back[t] = np.argmax(cand, axis=0)
        delta = cand[back[t], np.arange(L)] + state[t]
    best = int(np.argmax(delta))
    score = float(delta[best])
    path = [best]
    for t in range(n - 1, 0, -1):
        best = int(back[t, best])
        path.append(best)
    path.reverse()
    return path, score


def path_score(state, trans, path):
    state = np.asarray(state)
    total = float(sum(state[t, y] for t, y in enumerate(path)))
    total += float(sum(trans[a, b] for a, b in zip(path, path[1:])))
    return total


# -- inference on models ---------------------------------------------------

def forward_backward(sequence, model):
    return forward_backward_scores(model.state_scores(sequence), model.transition_weights)


def viterbi(sequence, model):
    """Return ``(labels, score)`` for the highest-scoring label path."""
    path, score = viterbi_scores(model.state_scores(sequence), model.transition_weights)
    return [model.labels[i] for i in path], score


def posterior(sequence, model, position):
    """P(label at ``position`` | observations) as an array aligned with ``model.labels``."""
    n = len(sequence)
    if not 0 <= position < n:
        raise IndexError(f"position {position} out of range for length {n}")
    return forward_backward(sequence, model).marginals[position]


# -- objective -------------------------------------------------------------

def _gold_indices(model, labels):
    return [model.label_index(y) for y in labels]


def log_likelihood_and_gradient(dataset, model, l2_lambda):
    """Regularized conditional log-likelihood and its gradient.

    ``dataset`` is a list of ``(tokens, labels)`` pairs.  This is the
    sequence-at-a-time reference implementation; the gradient is laid out
    like :meth:`CrfModel.weight_vector`.
    """
    if not dataset:
        raise InputError("dataset is empty")
    grad_state = np.zeros_like(model.state_weights)
    grad_trans = np.zeros_like(model.transition_weights)
    objective = 0.0
    for tokens, labels in dataset:
        ids = model.feature_ids(tokens)
        state = model.state_scores(tokens)
        gold = _gold_indices(model, labels)
        fb = forward_backward_scores(state, model.transition_weights)
        objective += path_score(state, model.transition_weights, gold) - fb.log_partition
        for t, row in enumerate(ids):
            for f in row:
                grad_state[f, gold[t]] += 1.0
                grad_state[f] -= fb.marginals[t]
        for a, b in zip(gold, gold[1:]):
            grad_trans[a, b] += 1.0
        grad_trans -= fb.pairwise_marginals.sum(axis=0)
    w = model.weight_vector()
    objective -= 0.5 * l2_lambda * float(w @ w)
    grad = np.concatenate([grad_state.ravel(), grad_trans.ravel()]) - l2_lambda * w
    return objective, grad


class _EncodedBatch:
    """Sequences packed for vectorized forward-backward.

    Feature occurrences live in one sparse (positions x vocab) matrix so that
    state scores are ``F @ W`` and expected counts are ``F.T @ marginals``.
    """

    def __init__(self, encoded, n_features, L):
        rows, cols = [], []
        lengths = []
        gold = []
        pos = 0
        for ids, gold_idx in encoded:
            for row in ids:
                rows.extend([pos] * len(row))
                cols.extend(row)
                pos += 1
            lengths.append(len(ids))
            gold.extend(gold_idx)
        self.n_positions = pos
        self.lengths = np.asarray(lengths, dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(self.lengths)])
        data = np.ones(len(rows))
        self.features = sp.csr_matrix(
            (data, (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=(pos, n_features),
        )
        self.features.sum_duplicates()
        self.features_t = self.features.T.tocsr()
        self.gold = np.asarray(gold, dtype=np.int64)
        onehot = np.zeros((pos, L))
        onehot[np.arange(pos), self.gold] = 1.0
        self.empirical_state = np.asarray(self.features_t @ onehot)
        emp_trans = np.zeros((L, L))
        for s, n in zip(self.offsets[:-1], self.lengths):
            g = self.gold[s:s + n]
            np.add.at(emp_trans, (g[:-1], g[1:]), 1.0)
        self.empirical_trans = emp_trans
        B, T = len(lengths), int(self.lengths.max()) if lengths else 0
        self.mask = np.arange(T)[None, :] < self.lengths[:, None]   # (B, T)
        self.flat_index = np.nonzero(self.mask)                     # row-major == sequence order

    def _pad(self, flat, fill=0.0):
        B, T = self.mask.shape
        out = np.full((B, T) + flat.shape[1:], fill)
        out[self.flat_index] = flat
        return out

    def evaluate(self, state_w, trans, need_grad=True):
        """Summed log-likelihood (unregularized) and its gradient pieces."""
        flat_scores = np.asarray(self.features @ state_w)                 # (P, L)
        S = self._pad(flat_scores)                                        # (B, T, L)
        mask = self.mask
        B, T, L = S.shape
        alpha = np.empty((B, T, L))
        alpha[:, 0] = S[:, 0]
        for t in range(1, T):
            a = _logsumexp(alpha[:, t - 1, :, None] + trans[None], axis=1) + S[:, t]
            alpha[:, t] = np.where(mask[:, t, None], a, alpha[:, t - 1])
        log_z = _logsumexp(alpha[:, T - 1], axis=1)                        # (B,)
        gold_flat = flat_scores[np.arange(self.n_positions), self.gold].sum()
        gold_trans = float((self.empirical_trans * trans).sum())
        loglik = float(gold_flat + gold_trans - log_z.sum())
        if not need_grad:
            return loglik, None, None
        beta = np.zeros((B, T, L))
        for t in range(T - 2, -1, -1):
            b = _logsumexp(trans[None] + (S[:, t + 1] + beta[:, t + 1])[:, None, :], axis=2)
            beta[:, t] = np.where(mask[:, t + 1, None], b, 0.0)
        marg = np.exp(alpha + beta - log_z[:, None, None])
        exp_state = np.asarray(self.features_t @ marg[self.flat_index])
        if T > 1:
            pair = np.exp(
                alpha[:, :-1, :, None] + trans[None, None] + (S[:, 1:] + beta[:, 1:])[:, :, None, :]
                - log_z[:, None, None, None]
            )
            pair = pair * mask[:, 1:, None, None]
            exp_trans = pair.sum(axis=(0, 1))
        else:
            exp_trans = np.zeros((L, L))
        return loglik, self.empirical_state - exp_state, self.empirical_trans - exp_trans


def _encode(model, dataset):
    return [(model.feature_ids(tokens), _gold_indices(model, labels)) for tokens, labels in dataset]


def build_vocab(dataset, templates):
    """Feature vocabulary in order of first appearance."""
    vocab = {}
    for tokens, _ in dataset:
        words = _surfaces(tokens)
        for i in range(len(words)):
            for f in _features_at(words, i, templates):
                if f not in vocab:
                    vocab[f] = len(vocab)
    return vocab


# -- training --------------------------------------------------------------

@dataclass
class TrainConfig:
    l2_lambda: float = 1.0
    epochs: int = 50
    learning_rate: float = 0.1
    # step at epoch k is learning_rate / (1 + k) ** decay_power
    decay_power: float = 0.5
    shuffle_seed: int = 0
    convergence_tol: float = 1e-5
    # None: full-batch ascent with step halving (objective never decreases)
    batch_size: int | None = 16

    def __post_init__(self):
        if self.l2_lambda < 0 or not math.isfinite(self.l2_lambda):
            raise InputError("l2_lambda must be a finite non-negative number")
        if self.epochs < 0:
            raise InputError("epochs must be non-negative")
        if not self.learning_rate > 0:
            raise InputError("learning_rate must be positive")
        if not self.convergence_tol > 0:
            raise InputError("convergence_tol must be positive")
        if self.batch_size is not None and self.batch_size < 1:
            raise InputError("batch_size must be positive")


@dataclass
class EpochRecord:
    epoch: int
    objective: float
    step: float


def _check_dataset(dataset, labels):
    if not dataset:
        raise InputError("cannot train on an empty dataset")
    alphabet = set(labels)
    for tokens, ys in dataset:
        if len(tokens) == 0 or len(tokens) != len(ys):
            raise InputError("every training sequence needs one label per token")
        bad = set(ys) - alphabet
        if bad:
            raise InputError(f"labels {sorted(bad)} not in alphabet {tuple(labels)}")


def train(dataset, labels, templates=DEFAULT_TEMPLATES, config=TrainConfig(), on_epoch=None):
    """Fit a CRF by gradient ascent on the regularized log-likelihood.

    ``on_epoch(record, model)`` is called after every epoch with an
    :class:`EpochRecord` and a snapshot of the weights at that point.
    """
    _check_dataset(dataset, labels)
    vocab = build_vocab(dataset, templates)
    model = CrfModel.zeros(labels, templates, vocab)
    k_state = model.state_weights.size
    L = model.n_labels
    N = len(dataset)
    lam = config.l2_lambda

    def unpack(w):
        return w[:k_state].reshape(-1, L), w[k_state:].reshape(L, L)

    encoded = _encode(model, dataset)
    full = _EncodedBatch(encoded, len(vocab), L)

    def objective(w, need_grad=False):
        sw, tw = unpack(w)
        ll, gs, gt = full.evaluate(sw, tw, need_grad)
        obj = ll - 0.5 * lam * float(w @ w)
        if not need_grad:
            return obj, None
        return obj, np.concatenate([gs.ravel(), gt.ravel()]) - lam * w

    w = np.zeros(model.n_weights)
    current, grad = objective(w, need_grad=config.batch_size is None)
    rng = np.random.default_rng(config.shuffle_seed)
    for epoch in range(1, config.epochs + 1):
        eta = config.learning_rate / (1.0 + (epoch - 1)) ** config.decay_power
        if config.batch_size is None:
            step = eta / N
            accepted = False
            for _ in range(40):
                cand = w + step * grad
                obj, _ = objective(cand)
                if not math.isfinite(obj):
                    step *= 0.5
                    continue
                if obj >= current:
                    accepted = True
                    break
                step *= 0.5
            if accepted:
                w = cand
                previous, current = current, obj
                current, grad = objective(w, need_grad=True)
            else:
                previous = current
                step = 0.0
        else:
            order = rng.permutation(N)
            previous = current
            for lo in range(0, N, config.batch_size):
                idx = order[lo:lo + config.batch_size]
                batch = _EncodedBatch([encoded[i] for i in idx], len(vocab), L)
                sw, tw = unpack(w)
                _, gs, gt = batch.evaluate(sw, tw)
                g = np.concatenate([gs.ravel(), gt.ravel()]) - lam * (len(idx) / N) * w
                w = w + (eta / len(idx)) * g
            current, _ = objective(w)
            step = eta
        if not math.isfinite(current):
            raise TrainingDivergenceError(epoch)
        record = EpochRecord(epoch, current, step)
        log.info("epoch %d objective %.6f step %.3g", epoch, current, step)
        snapshot = model.with_weights(w)
        if on_epoch is not None:
            on_epoch(record, snapshot)
        if abs(current - previous) <= config.convergence_tol * max(abs(previous), 1.0):
            break
    return model.with_weights(w)


def objective_value(dataset, model, l2_lambda):
    """Regularized log-likelihood via the vectorized path."""
    batch = _EncodedBatch(_encode(model, dataset), len(model.feature_vocab), model.n_labels)
    ll, _, _ = batch.evaluate(model.state_weights, model.transition_weights, need_grad=False)
    w = model.weight_vector()
    return ll - 0.5 * l2_lambda * float(w @ w)


def decode_batch(model, sequences):
    """Viterbi label paths for many sequences."""
    return [viterbi(seq, model)[0] for seq in sequences]


# -- persistence -----------------------------------------------------------

def _fmt(x):
    return format(float(x), ".17g")


def format_model(model):
    lines = [
        f"version\t{model.version}",
        "labels\t" + ",".join(model.labels),
        "templates\t" + " ".join(t.name for t in model.templates),
    ]
    by_id = sorted(model.feature_vocab.items(), key=lambda kv: kv[1])
    for feat, fid in by_id:
        row = model.state_weights[fid]
        nz = [j for j in range(model.n_labels) if row[j] != 0.0]
        # a feature with no weight still gets one line so the vocabulary survives
        for j in nz or [0]:
            lines.append(f"S\t{feat}\t{model.labels[j]}\t{_fmt(row[j])}")
    for a in range(model.n_labels):
        for b in range(model.n_labels):
            lines.append(f"T\t{model.labels[a]}\t{model.labels[b]}\t{_fmt(model.transition_weights[a, b])}")
    return "\n".join(lines) + "\n"


def save_model(model, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_model(model))


_HEADER = ("version", "labels", "templates")


def parse_model(lines, path="<string>"):
    lines = list(lines)
    header = {}
    for lineno in range(1, 4):
        if lineno > len(lines):
            raise FormatError("truncated header", path, lineno)
        cols = lines[lineno - 1].rstrip("\r\n").split("\t")
        if len(cols) != 2 or cols[0] != _HEADER[lineno - 1]:
            raise FormatError(f"expected '{_HEADER[lineno - 1]}' header line", path, lineno)
        header[cols[0]] = cols[1]
    try:
        version = int(header["version"])
    except ValueError:
        raise FormatError("version is not an integer", path, 1) from None
    if version != MODEL_VERSION:
        raise FormatError(f"unsupported model version {version} (expected {MODEL_VERSION})", path, 1)
    labels = tuple(header["labels"].split(","))
    if not all(labels) or len(set(labels)) != len(labels):
        raise FormatError("bad label list", path, 2)
    try:
        templates = parse_templates(header["templates"])
    except ValueError as exc:
        raise FormatError(str(exc), path, 3) from None
    index = {y: i for i, y in enumerate(labels)}
    L = len(labels)
    vocab = {}
    state_rows = []
    trans = np.zeros((L, L))
    seen_trans = set()
    for lineno, raw in enumerate(lines[3:], start=4):
        line = raw.rstrip("\r\n")
        if not line:
            continue
        cols = line.split("\t")
        try:
            if cols[0] == "S" and len(cols) == 4:
                feat, label, value = cols[1], cols[2], float(cols[3])
                if feat not in vocab:
                    vocab[feat] = len(vocab)
                    state_rows.append(np.zeros(L))
                state_rows[vocab[feat]][index[label]] = value
            elif cols[0] == "T" and len(cols) == 4:
                a, b = index[cols[1]], index[cols[2]]
                trans[a, b] = float(cols[3])
                seen_trans.add((a, b))
            else:
                raise FormatError("expected an S or T weight line", path, lineno)
        except KeyError as exc:
            raise FormatError(f"unknown label {exc.args[0]!r}", path, lineno) from None
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"bad weight: {exc}", path, lineno) from None
        if not math.isfinite(value if cols[0] == "S" else trans[a, b]):
            raise FormatError("non-finite weight", path, lineno)
    if len(seen_trans) != L * L:
        raise FormatError(f"expected {L * L} transition lines, found {len(seen_trans)}", path, len(lines))
    state = np.array(state_rows) if state_rows else np.zeros((0, L))
    return CrfModel(labels, templates, vocab, state, trans, version)


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh, path=str(path))

