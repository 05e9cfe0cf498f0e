#!/usr/bin/env python3
"""Regenerates the English/Hausa toy fixture.

The dictionary is built so every lexicon status is exercised with a known
count: GOOD words round-trip, MULTIWORD translate to phrases, BACKTRANS
translate back to a different word, MALFORMED carry foreign script or a
bracketed special. Words in NO_ENTRY have no dictionary row at all.
"""

import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

GOOD = {
    "rice": "shinkafa", "water": "ruwa", "house": "gida", "child": "yaro",
    "woman": "mace", "market": "kasuwa", "money": "kudi", "school": "makaranta",
    "teacher": "malami", "book": "littafi", "road": "hanya", "city": "birni",
    "farm": "gona", "tree": "itace", "horse": "doki", "meat": "nama",
    "milk": "madara", "bread": "burodi", "night": "dare", "morning": "safiya",
    "friend": "aboki", "mother": "uwa", "father": "uba", "king": "sarki",
    "village": "kauye", "food": "abinci", "salt": "gishiri", "chair": "kujera",
    "door": "kofa", "fish": "kifi", "bird": "tsuntsu", "goat": "akuya",
    "land": "ƙasa", "room": "ɗaki", "mouse": "ɓera", "sells": "sayarwa",
    "likes": "sonsa", "sees": "gani", "brings": "kawo",
}
MULTIWORD = {"rain": "ruwan sama", "evening": "da yamma", "river": "babban kogi"}
BACKTRANS = {
    "bank": ("banki", "shore"), "light": ("haske", "bright"),
    "small": ("karami", "little"), "strong": ("karfi", "power"),
}
MALFORMED = {"peace": "ሰላም", "language": "harshe[SEP]"}
NO_ENTRY = {"music": "kida", "story": "labari"}

NOUNS = (list(GOOD)[:35] + list(MULTIWORD) + list(BACKTRANS)
         + list(MALFORMED) + list(NO_ENTRY))
VERBS = ["sells", "likes", "sees", "brings"]


def hausa(word):
    for table in (GOOD, MULTIWORD, NO_ENTRY):
        if word in table:
            return table[word]
    if word in BACKTRANS:
        return BACKTRANS[word][0]
    if word == "peace":
        return "salama"
    if word == "language":
        return "harshe"
    raise KeyError(word)


def main():
    rng = random.Random(20241101)
    en_lines, ha_lines = [], []
    # Every noun appears at least twice so training merges it whole.
    pool = NOUNS * 4
    rng.shuffle(pool)
    while len(en_lines) < 200:
        if len(pool) < 2:
            pool = NOUNS * 2
            rng.shuffle(pool)
        a, b = pool.pop(), pool.pop()
        verb = rng.choice(VERBS)
        form = rng.randrange(3)
        if form == 0:
            en = f"the {a} {verb} the {b}"
            ha = f"{hausa(a)} na {hausa(verb)} {hausa(b)}"
        elif form == 1:
            en = f"a {a} is in the {b}"
            ha = f"{hausa(a)} yana cikin {hausa(b)}"
        else:
            en = f"we see the {a} and the {b}"
            ha = f"mun ga {hausa(a)} da {hausa(b)}"
        en_lines.append(en)
        ha_lines.append(ha)

    (HERE / "en.txt").write_text("\n".join(en_lines) + "\n", encoding="utf-8")
    (HERE / "ha.txt").write_text("\n".join(ha_lines) + "\n", encoding="utf-8")
    rows = ["en\tha"] + [f"{e}\t{h}" for e, h in zip(en_lines, ha_lines)]
    (HERE / "parallel.tsv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    dict_rows = ["# src_lang\ttgt_lang\tsource\ttarget"]
    for en, ha in GOOD.items():
        dict_rows += [f"en\tha\t{en}\t{ha}", f"ha\ten\t{ha}\t{en}"]
    for en, ha in MULTIWORD.items():
        dict_rows.append(f"en\tha\t{en}\t{ha}")
    for en, (ha, back) in BACKTRANS.items():
        dict_rows += [f"en\tha\t{en}\t{ha}", f"ha\ten\t{ha}\t{back}"]
    for en, ha in MALFORMED.items():
        dict_rows += [f"en\tha\t{en}\t{ha}", f"ha\ten\t{ha}\t{en}"]
    (HERE / "dict.en-ha.tsv").write_text("\n".join(dict_rows) + "\n",
                                         encoding="utf-8")


if __name__ == "__main__":
    main()
