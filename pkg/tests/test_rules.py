import pytest
from hypothesis import given, settings, strategies as st

from denormkit import synth
from denormkit.corpus import abbreviation_forms, normalize, tokenize
from denormkit.denorm import (
    DenormConfig, Lexicons, abbreviate, default_lexicons, denormalize, restore_case,
)
from denormkit.denorm.lexicon import parse_lexicon
from denormkit.segmenter import SegmentedText, Sentence, assemble, parse_segmented

LEX = default_lexicons()
FORMS = abbreviation_forms(LEX.abbreviations)

SAMPLE_BEFORE = (
    "ile kobiet mających czterdzieści cztery lata wygląda tak jak amerykańska gwiazda na okładce "
    "swej nowej płyty jennifer lopez nie bierze jednak udziału w konkursie piękności czy więc "
    "również mocno jak do rzeźbienia swego ciała przyłożyła się do stworzenia dobrych piosenek "
    "ostatnie lata nie były dobre dla latynoskiej piosenkarki między innymi rozwody i rozstania "
    "zdewastowały jej poczucie kobiecej wartości a klapy ostatnich albumów o mały włos nie "
    "zrujnowały piosenkarskiej kariery"
)
SAMPLE_AFTER = [
    "Ile kobiet mających 44 lata wygląda tak, jak amerykańska gwiazda na okładce swej nowej płyty Jennifer Lopez?",
    "Nie bierze jednak udziału w konkursie piękności.",
    "Czy więc również mocno, jak do rzeźbienia swego ciała, przyłożyła się do stworzenia dobrych piosenek?",
    "Ostatnie lata nie były dobre dla latynoskiej piosenkarki, m.in. rozwody i rozstania zdewastowały "
    "jej poczucie kobiecej wartości, a klapy ostatnich albumów o mały włos nie zrujnowały piosenkarskiej kariery.",
]


def run(text):
    return denormalize(parse_segmented(text, FORMS), LEX).rstrip("\n")


def gold_segmentation():
    seq = normalize(tokenize(" ".join(SAMPLE_AFTER), FORMS), LEX.abbreviations)
    assert " ".join(seq.surfaces) == SAMPLE_BEFORE
    return assemble(seq.surfaces, seq.boundaries, seq.commas)


def test_sample_text_end_to_end():
    assert denormalize(gold_segmentation(), LEX).splitlines() == SAMPLE_AFTER


def test_sample_text_pieces():
    out = denormalize(gold_segmentation(), LEX)
    assert "44 lata" in out
    assert "m.in. rozwody" in out
    assert "Jennifer Lopez" in out


def test_plain_text_only_gets_sentence_case():
    assert run("nie bierze jednak udziału w konkursie") == "Nie bierze jednak udziału w konkursie."


@pytest.mark.parametrize("text, expected", [
    ("w dwudziestym pierwszym wieku", "W XXI w."),
    ("mam dwadzieścia jeden lat", "Mam 21 lat."),
    ("pięcioro dzieci", "5 dzieci."),
    ("jedna piąta tortu", "1/5 tortu."),
    ("kilkaset osób", "Kilkaset osób."),
    ("numer siedem", "Nr 7."),
    ("to kosztuje sto złotych", "To kosztuje 100 zł."),
    ("spotkanie piątego maja o siódmej", "Spotkanie 5 maja o 07:00."),
    ("jeden z nich", "Jeden z nich."),
    ("zobacz rozdział trzeci", "Zobacz rozdział 3."),
])
def test_rule_examples(text, expected):
    assert run(text) == expected


def test_abbreviation_context_guard():
    lex = LEX.abbreviations
    assert abbreviate(["między", "innymi"], lex) == ["m.in."]
    assert abbreviate(["w", "21", "wieku"], lex) == ["w", "21", "w."]
    assert abbreviate(["w", "XXI", "wieku"], lex) == ["w", "XXI", "w."]
    assert abbreviate(["w", "wieku", "13", "lat"], lex) == ["w", "wieku", "13", "lat"]
    assert abbreviate(["numer", "7"], lex) == ["nr", "7"]
    assert abbreviate(["numer", "telefonu"], lex) == ["numer", "telefonu"]


def test_abbreviate_longest_match_and_empty_lexicon():
    lex = parse_lexicon(["stany\tSt.\t0\n", "stany zjednoczone\tUSA\t0\n"], "abbreviation")
    assert abbreviate(["stany", "zjednoczone", "i", "stany"], lex) == ["USA", "i", "St."]
    empty = parse_lexicon([], "abbreviation")
    assert abbreviate(["między", "innymi"], empty) == ["między", "innymi"]


def case(text):
    seg = SegmentedText([Sentence(text.split())])
    out = restore_case(seg, LEX.names, LEX.surnames)
    return " ".join(out.sentences[0].tokens)


@pytest.mark.parametrize("text, expected", [
    ("widzę jennifer lopez", "Widzę Jennifer Lopez"),
    ("to biały dom", "To biały dom"),
    ("przyszedł pan biały", "Przyszedł pan Biały"),
    ("przyszedł jan biały", "Przyszedł Jan Biały"),
    ("pan j kowalski", "Pan J. Kowalski"),
    ("był tam pan j k kowalski", "Był tam pan J. K. Kowalski"),
    ("był tobiasz", "Był tobiasz"),
    ("był jan tobiasz", "Był Jan Tobiasz"),
    ("litera j jest krótka", "Litera j jest krótka"),
])
def test_casing_examples(text, expected):
    assert case(text) == expected


token_lists = st.lists(
    st.sampled_from(["jan", "biały", "tobiasz", "pan", "j", "kowalski", "dom", "Ala", "USA",
                     "m.in.", "lopez", "k", "wilk", "sowa", "i"]),
    min_size=1, max_size=12,
)


@settings(max_examples=300, deadline=None)
@given(token_lists)
def test_casing_never_lowercases(tokens):
    seg = SegmentedText([Sentence(list(tokens))])
    out = restore_case(seg, LEX.names, LEX.surnames).sentences[0].tokens
    assert len(out) == len(tokens)
    for before, after in zip(tokens, out):
        if after.endswith(".") and not before.endswith("."):
            before_core = after[:-1]
            assert before_core.lower() == before.lower()
            continue
        assert after.lower() == before.lower()
        assert all(b == a or (b.islower() and a == b.upper()) for b, a in zip(before, after))


def test_rules_do_not_cross_sentences():
    seg = parse_segmented("mam pięć\nprocent zysku\n", FORMS)
    assert denormalize(seg, LEX).splitlines() == ["Mam 5.", "Procent zysku."]


def test_rules_do_not_cross_commas():
    assert run("ile dwa, procent") == "Ile 2, procent."


def test_stage_toggles():
    cfg = DenormConfig(numbers=False, entities=False)
    seg = parse_segmented("mam czterdzieści cztery lata między innymi", FORMS)
    assert denormalize(seg, LEX, cfg) == "Mam czterdzieści cztery lata m.in.\n"
    cfg = DenormConfig(casing=False, abbreviations=False)
    assert denormalize(seg, LEX, cfg) == "mam 44 lata między innymi.\n"


def test_missing_lexicons_pass_text_through():
    seg = parse_segmented("mam czterdzieści cztery lata", FORMS)
    assert denormalize(seg, Lexicons()) == "Mam czterdzieści cztery lata.\n"


def synthesized_segmentation(seed, n=8):
    lines = synth.generate(n, seed)
    seq = normalize(tokenize(" ".join(lines), FORMS), LEX.abbreviations)
    return assemble(seq.surfaces, seq.boundaries, seq.commas)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_denormalize_is_idempotent(seed):
    once = denormalize(synthesized_segmentation(seed), LEX)
    twice = denormalize(parse_segmented(once, FORMS), LEX)
    assert once == twice


def test_denorm_is_idempotent_on_rule_examples():
    for text in ["w dwudziestym pierwszym wieku", "dzwoń pięć zero zero jeden dwa trzy cztery pięć sześć",
                 "pan j kowalski ma pięć procent", "o siedemnastej trzydzieści"]:
        once = run(text)
        assert run(once) == once
