"""Regenerate src/denormkit/data/numerals.tsv.

The table lists every inflected numeral surface the rule engine knows about,
one row per surface: ``surface, canonical, ambiguous, value, class``.
"""

from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "denormkit" / "data" / "numerals.tsv"

CARDINALS = {
    0: ["zero"],
    1: ["jeden", "jedna", "jedno", "jednego", "jednej", "jednemu", "jedną", "jednym"],
    2: ["dwa", "dwie", "dwóch", "dwu", "dwom", "dwóm", "dwoma", "dwiema", "dwaj"],
    3: ["trzy", "trzech", "trzem", "trzema", "trzej"],
    4: ["cztery", "czterech", "czterem", "czterema", "czterej"],
    5: ["pięć", "pięciu", "pięcioma"],
    6: ["sześć", "sześciu", "sześcioma"],
    7: ["siedem", "siedmiu", "siedmioma"],
    8: ["osiem", "ośmiu", "ośmioma"],
    9: ["dziewięć", "dziewięciu", "dziewięcioma"],
    10: ["dziesięć", "dziesięciu", "dziesięcioma"],
    20: ["dwadzieścia", "dwudziestu", "dwudziestoma"],
    30: ["trzydzieści", "trzydziestu", "trzydziestoma"],
    40: ["czterdzieści", "czterdziestu", "czterdziestoma"],
    50: ["pięćdziesiąt", "pięćdziesięciu", "pięćdziesięcioma"],
    60: ["sześćdziesiąt", "sześćdziesięciu", "sześćdziesięcioma"],
    70: ["siedemdziesiąt", "siedemdziesięciu", "siedemdziesięcioma"],
    80: ["osiemdziesiąt", "osiemdziesięciu", "osiemdziesięcioma"],
    90: ["dziewięćdziesiąt", "dziewięćdziesięciu", "dziewięćdziesięcioma"],
    100: ["sto", "stu"],
    200: ["dwieście", "dwustu"],
    300: ["trzysta", "trzystu"],
    400: ["czterysta", "czterystu"],
    500: ["pięćset", "pięciuset"],
    600: ["sześćset", "sześciuset"],
    700: ["siedemset", "siedmiuset"],
    800: ["osiemset", "ośmiuset"],
    900: ["dziewięćset", "dziewięciuset"],
    1000: ["tysiąc", "tysiąca", "tysiącu", "tysiącem", "tysiące", "tysięcy",
           "tysiącom", "tysiącami", "tysiącach"],
    10**6: ["milion", "miliona", "milionowi", "milionem", "milionie", "miliony",
            "milionów", "milionom", "milionami", "milionach"],
    10**9: ["miliard", "miliarda", "miliardy", "miliardów"],
}
TEEN_STEMS = {
    11: "jedena", 12: "dwuna", 13: "trzyna", 14: "czterna", 15: "piętna",
    16: "szesna", 17: "siedemna", 18: "osiemna", 19: "dziewiętna",
}
for value, stem in TEEN_STEMS.items():
    nom = "dwanaście" if value == 12 else stem + "ście"
    CARDINALS[value] = [nom, stem + "stu", stem + "stoma"]

ORDINAL_STEMS = {
    1: "pierwsz", 2: "drug", 3: "trzec", 4: "czwart", 5: "piąt", 6: "szóst",
    7: "siódm", 8: "ósm", 9: "dziewiąt", 10: "dziesiąt",
    11: "jedenast", 12: "dwunast", 13: "trzynast", 14: "czternast", 15: "piętnast",
    16: "szesnast", 17: "siedemnast", 18: "osiemnast", 19: "dziewiętnast",
    20: "dwudziest", 30: "trzydziest", 40: "czterdziest", 50: "pięćdziesiąt",
    60: "sześćdziesiąt", 70: "siedemdziesiąt", 80: "osiemdziesiąt", 90: "dziewięćdziesiąt",
    100: "setn", 200: "dwusetn", 300: "trzechsetn", 400: "czterechsetn", 500: "pięćsetn",
    600: "sześćsetn", 700: "siedemsetn", 800: "osiemsetn", 900: "dziewięćsetn",
    1000: "tysięczn", 10**6: "milionow",
}
HARD = ["y", "a", "e", "ego", "ej", "emu", "ą", "ym", "ych", "ymi"]
SOFT = ["i", "ia", "ie", "iego", "iej", "iemu", "ią", "im", "ich", "imi"]
SOFT_G = ["i", "a", "ie", "iego", "iej", "iemu", "ą", "im", "ich", "imi"]


def ordinal_forms(value, stem):
    if value == 2:
        return [stem + e for e in SOFT_G]
    if value == 3:
        return [stem + e for e in SOFT]
    return [stem + e for e in HARD]


COLLECTIVE = {
    2: ["dwoje", "dwojga", "dwojgu", "dwojgiem"],
    3: ["troje", "trojga", "trojgu", "trojgiem"],
    4: ["czworo", "czworga", "czworgu", "czworgiem"],
}
COLLECTIVE_STEMS = {
    5: "pięcio", 6: "sześcio", 7: "siedmio", 8: "ośmio", 9: "dziewięcio", 10: "dziesięcio",
    11: "jedenaścio", 12: "dwanaścio", 13: "trzynaścio", 14: "czternaścio", 15: "piętnaścio",
    16: "szesnaścio", 17: "siedemnaścio", 18: "osiemnaścio", 19: "dziewiętnaścio",
    20: "dwadzieścio",
}
for value, stem in COLLECTIVE_STEMS.items():
    COLLECTIVE[value] = [stem + "ro", stem + "rga"]

FRACTIONS = {"pół": "1/2", "ćwierć": "1/4", "półtora": "3/2", "półtorej": "3/2"}
INDETERMINATE = [
    "kilka", "kilku", "kilkoma", "kilkoro", "kilkorga",
    "kilkanaście", "kilkunastu", "kilkadziesiąt", "kilkudziesięciu",
    "kilkaset", "kilkuset", "parę", "paru",
]
AMBIGUOUS = set(CARDINALS[1]) | set(ordinal_forms(1, "pierwsz")) | set(ordinal_forms(2, "drug")) | {"parę", "paru"}


def rows():
    for value, forms in CARDINALS.items():
        for f in forms:
            yield f, str(value), value, "CARDINAL"
    for value, stem in ORDINAL_STEMS.items():
        for f in ordinal_forms(value, stem):
            yield f, str(value), value, "ORDINAL"
    for value, forms in COLLECTIVE.items():
        for f in forms:
            yield f, str(value), value, "COLLECTIVE"
    for f, frac in FRACTIONS.items():
        yield f, frac, frac, "FRACTION"
    for f in INDETERMINATE:
        yield f, f, "?", "INDETERMINATE"


def main():
    seen = set()
    lines = [
        "# Polish numeral surface forms: surface, canonical, ambiguous, value, class",
        "# generated by scripts/build_numerals.py",
    ]
    for surface, canonical, value, cls in rows():
        if surface in seen:
            raise SystemExit(f"duplicate surface {surface}")
        seen.add(surface)
        flag = "1" if surface in AMBIGUOUS else "0"
        lines.append(f"{surface}\t{canonical}\t{flag}\t{value}\t{cls}")
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(seen)} entries to {OUT}")


if __name__ == "__main__":
    main()
