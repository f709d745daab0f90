import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from denormkit import crf
from denormkit.corpus import BOUNDARY_LABELS, COMMA_LABELS, BoundaryLabel as B, CommaLabel as C
from denormkit.errors import InputError
from denormkit.segmenter import (
    SegmentedText, Sentence, assemble, label_stream, labels_from_text, parse_segmented, render,
    segment,
)

N, P, Q, E = B.NONE, B.PERIOD, B.QUESTION, B.EXCLAM


def test_assemble_two_sentences():
    words = [f"w{i}" for i in range(10)]
    labels = [N] * 10
    labels[4] = labels[9] = P
    out = assemble(words, labels, [C.NONE] * 10)
    assert [len(s.tokens) for s in out.sentences] == [5, 5]
    assert out.coerced == 0
    assert out.tokens() == words


def test_assemble_coerces_final_none():
    out = assemble(["a", "b", "c"], [N, N, N], [C.NONE] * 3)
    assert len(out.sentences) == 1
    assert out.sentences[0].terminal is P
    assert out.coerced == 1


def test_assemble_length_mismatch():
    with pytest.raises(InputError):
        assemble(["a", "b"], [N], [C.NONE, C.NONE])


def test_assemble_empty_stream():
    assert assemble([], [], []).sentences == []


def test_render_marks():
    assert render(SegmentedText([Sentence(["nie", "bierze"])])) == "nie bierze.\n"
    assert render(SegmentedText([Sentence(["nie", "bierze"], frozenset({0}))])) == "nie, bierze.\n"
    out = assemble(["dobrych", "piosenek"], [N, Q], [C.NONE, C.NONE])
    assert render(out) == "dobrych piosenek?\n"
    assert render(SegmentedText([Sentence(["w", "XXI", "w."])])) == "w XXI w.\n"


def test_sentence_drops_trailing_comma_index():
    s = Sentence(["a", "b"], frozenset({0, 1, 5}))
    assert s.commas_after == frozenset({0})
    with pytest.raises(InputError):
        Sentence([])
    with pytest.raises(InputError):
        Sentence(["a"], terminal=N)


labels = st.lists(
    st.tuples(st.sampled_from(["ala", "ma", "kota", "czy", "tak", "ż", "m.in."]),
              st.sampled_from(list(B)), st.booleans()),
    min_size=1, max_size=30,
)


@settings(max_examples=300, deadline=None)
@given(labels)
def test_render_round_trip(items):
    words = [w for w, _, _ in items]
    bs = [b for _, b, _ in items]
    cs = [C.COMMA if c and b is N else C.NONE for _, b, c in items]
    seg = assemble(words, bs, cs)
    # concatenation reproduces the stream; one sentence per terminal
    assert seg.tokens() == words
    final = bs[:-1] + [bs[-1] if bs[-1] is not N else P]
    assert len(seg.sentences) == sum(b is not N for b in final)
    back_words, back_bs, back_cs = labels_from_text(render(seg), {"m.in."})
    assert back_words == words
    assert back_bs == final
    expected_commas = [c if b is N else C.NONE for c, b in zip(cs, final)]
    assert back_cs == expected_commas


def word_model(labels, weights):
    """A model reading only the current word, with hand-set weights."""
    templates = crf.parse_templates("word")
    vocab = {f"w={w}": i for i, w in enumerate(weights)}
    state = np.zeros((len(vocab), len(labels)))
    for w, (label, value) in weights.items():
        state[vocab[f"w={w}"], labels.index(label)] = value
    return crf.CrfModel(labels, templates, vocab, state, np.zeros((len(labels), len(labels))))


def test_comma_suppressed_at_boundary():
    bmodel = word_model(BOUNDARY_LABELS, {"koniec": ("PERIOD", 5.0)})
    cmodel = word_model(COMMA_LABELS, {"koniec": ("COMMA", 5.0), "tak": ("COMMA", 5.0)})
    bs, cs = label_stream(["tak", "koniec", "dalej"], bmodel, cmodel)
    assert bs == [N, P, N]
    assert cs == [C.COMMA, C.NONE, C.NONE]
    assert label_stream([], bmodel, cmodel) == ([], [])


def test_single_token_gets_terminal():
    bmodel = word_model(BOUNDARY_LABELS, {})
    out = segment(["sam"], bmodel)
    assert render(out) == "sam.\n"
    assert out.coerced == 1


def test_ideal_models_split_sample_text():
    stream = ("ile kobiet mających czterdzieści cztery lata wygląda tak jak amerykańska gwiazda na okładce "
              "swej nowej płyty jennifer lopez nie bierze jednak udziału w konkursie piękności czy więc "
              "również mocno jak do rzeźbienia swego ciała przyłożyła się do stworzenia dobrych piosenek "
              "ostatnie lata nie były dobre dla latynoskiej piosenkarki").split()
    bmodel = word_model(BOUNDARY_LABELS, {
        "lopez": ("QUESTION", 5.0), "piękności": ("PERIOD", 5.0),
        "piosenek": ("QUESTION", 5.0), "piosenkarki": ("PERIOD", 5.0),
    })
    cmodel = word_model(COMMA_LABELS, {"tak": ("COMMA", 5.0), "mocno": ("COMMA", 5.0), "ciała": ("COMMA", 5.0)})
    text = render(segment(stream, bmodel, cmodel))
    assert text.splitlines() == [
        "ile kobiet mających czterdzieści cztery lata wygląda tak, jak amerykańska gwiazda na okładce "
        "swej nowej płyty jennifer lopez?",
        "nie bierze jednak udziału w konkursie piękności.",
        "czy więc również mocno, jak do rzeźbienia swego ciała, przyłożyła się do stworzenia dobrych piosenek?",
        "ostatnie lata nie były dobre dla latynoskiej piosenkarki.",
    ]


def test_parse_segmented_reads_lines():
    seg = parse_segmented("ala, ma kota?\nnie\n")
    assert [s.tokens for s in seg.sentences] == [["ala", "ma", "kota"], ["nie"]]
    assert seg.sentences[0].terminal is Q and seg.sentences[0].commas_after == frozenset({0})
    assert seg.sentences[1].terminal is P
