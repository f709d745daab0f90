"""Seeded generator of punctuated Polish-like sentences.

Stands in for a real corpus when none is at hand: statements, questions and
exclamations with commas before subordinate clauses, names, digits and a few
abbreviations, so every normalization path gets exercised.
"""

from __future__ import annotations

import random

SUBJECTS = [
    "ona", "on", "my", "oni", "kobieta", "student", "nauczyciel", "lekarz", "sąsiad",
    "piosenkarka", "rząd", "firma", "dziecko", "pies", "kierowca", "dziennikarz",
    "prezydent", "pani minister", "mój brat", "ta gwiazda", "nasza drużyna",
]
NAMES = [
    "Jan Kowalski", "Anna Nowak", "Jennifer Lopez", "Piotr Wiśniewski", "Maria Wójcik",
    "Tomasz Lewandowski", "Katarzyna Zielińska", "pan Jan Mazur",
]
VERBS = [
    "kupił", "sprzedała", "widzi", "czyta", "pisze", "zbudował", "przygotowała", "ogląda",
    "znalazł", "zgubiła", "lubi", "otworzył", "zamknęła", "naprawił", "zamówiła", "opisał",
    "przyniósł", "wygrała", "przegrał", "prowadzi",
]
OBJECTS = [
    "nowy samochód", "starą książkę", "list", "dom", "obiad", "płytę", "gazetę", "mecz",
    "film", "projekt", "raport", "piosenkę", "rower", "okno", "sklep", "prezent",
    "konkurs", "album", "bilet", "kawę",
]
PLACES = [
    "w domu", "na okładce", "w pracy", "w szkole", "na rynku", "w kinie", "na wsi",
    "w Warszawie", "w Krakowie", "nad morzem", "w parlamencie", "na stadionie",
]
ADVERBS = ["wczoraj", "dzisiaj", "często", "rzadko", "jednak", "również", "szybko", "nagle", "znowu", "zawsze"]
TIMES = ["rano", "wieczorem", "w nocy", "po południu", "w poniedziałek", "latem"]
CONJ = ["że", "ale", "a", "bo", "chociaż", "kiedy", "jak", "który"]
QWORDS = ["czy", "ile", "gdzie", "dlaczego", "kiedy", "kto", "jak"]
IMPERATIVES = ["uważaj", "patrz", "chodź", "łap", "stój", "słuchaj", "zobacz", "biegnij", "pomóż"]
SHORT_EXCLAIM = ["Gol", "Łap", "Brawo", "Uwaga", "Niesamowite", "Stop", "Pomocy"]
COUNTED = ["lata", "lat", "osób", "złotych", "książek", "minut", "kilometrów", "dni"]
EXTRAS = ["m.in.", "np.", "tzw."]


def _clause(rng, with_subject=True):
    words = []
    if with_subject:
        if rng.random() < 0.15:
            words.append(rng.choice(NAMES))
        else:
            words.append(rng.choice(SUBJECTS))
    if rng.random() < 0.4:
        words.append(rng.choice(ADVERBS))
    words.append(rng.choice(VERBS))
    if rng.random() < 0.12:
        words.append(str(rng.choice([2, 3, 5, 7, 12, 21, 44, 100, 250, 1999, 2014])))
        words.append(rng.choice(COUNTED))
    elif rng.random() < 0.08:
        words.append(rng.choice(EXTRAS))
        words.append(rng.choice(OBJECTS))
    else:
        words.append(rng.choice(OBJECTS))
    if rng.random() < 0.5:
        words.append(rng.choice(PLACES))
    if rng.random() < 0.25:
        words.append(rng.choice(TIMES))
    return " ".join(words)


def _capitalize(text):
    return text[:1].upper() + text[1:]


def sentence(rng):
    r = rng.random()
    if r < 0.07:
        return rng.choice(SHORT_EXCLAIM) + "!"
    if r < 0.15:
        body = rng.choice(IMPERATIVES) + " " + rng.choice(OBJECTS)
        if rng.random() < 0.5:
            body += " " + rng.choice(PLACES)
        return _capitalize(body) + "!"
    if r < 0.35:
        body = rng.choice(QWORDS) + " " + _clause(rng, with_subject=rng.random() < 0.7)
        if rng.random() < 0.2:
            body += ", " + rng.choice(CONJ) + " " + _clause(rng)
        return _capitalize(body) + "?"
    body = _clause(rng)
    for _ in range(2):
        if rng.random() < 0.35:
            body += ", " + rng.choice(CONJ) + " " + _clause(rng, with_subject=rng.random() < 0.6)
    return _capitalize(body) + "."


def generate(n, seed=0):
    """``n`` punctuated sentences, deterministic in ``seed``."""
    rng = random.Random(seed)
    return [sentence(rng) for _ in range(n)]
