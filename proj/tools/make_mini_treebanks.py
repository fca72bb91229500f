#!/usr/bin/env python3
"""Builds the bundled mini-treebanks used by the test suites.

For each language this writes, under data/mini/:
  <lang>.conllu          50 template sentences with gold trees
  <lang>.lexicon.tsv     form/lemma/upos/feats rows covering the vocabulary
  <lang>.wiktextract.jsonl  (en, fr) pronunciation records

Output is deterministic; rerun after editing the templates.
"""

import json
import os
import random
import sys

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "mini")


def feats_str(feats):
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in sorted(feats.items(), key=lambda kv: kv[0].lower()))


class Sent:
    def __init__(self):
        self.toks = []
        self.mwt = []  # (first, last, form)
        self.empty = []  # (after, line)

    def add(self, form, lemma, upos, feats=None, deprel=None, head=None, space=True):
        self.toks.append(dict(form=form, lemma=lemma, upos=upos, feats=feats or {}, head=head,
                              deprel=deprel, space=space))
        return len(self.toks)

    def set_head(self, i, head, deprel):
        self.toks[i - 1]["head"] = head
        self.toks[i - 1]["deprel"] = deprel

    def text(self):
        out = []
        i = 1
        n = len(self.toks)
        while i <= n:
            rng = next((m for m in self.mwt if m[0] == i), None)
            if rng:
                out.append(rng[2])
                space = self.toks[rng[1] - 1]["space"]
                i = rng[1] + 1
            else:
                out.append(self.toks[i - 1]["form"])
                space = self.toks[i - 1]["space"]
                i += 1
            if space and i <= n:
                out.append(" ")
        return "".join(out)

    def conllu(self, sent_id):
        lines = [f"# sent_id = {sent_id}", f"# text = {self.text()}"]
        for e in self.empty:
            if e[0] == 0:
                lines.append(e[1])
        for i, t in enumerate(self.toks, 1):
            for m in self.mwt:
                if m[0] == i:
                    misc = "_" if self.toks[m[1] - 1]["space"] else "SpaceAfter=No"
                    lines.append(f"{m[0]}-{m[1]}\t{m[2]}\t_\t_\t_\t_\t_\t_\t_\t{misc}")
            in_mwt = any(m[0] <= i <= m[1] for m in self.mwt)
            misc = "SpaceAfter=No" if (not t["space"] and not in_mwt and i < len(self.toks)) else "_"
            if not t["space"] and i == len(self.toks):
                misc = "SpaceAfter=No"
            assert t["head"] is not None, (sent_id, t)
            lines.append("\t".join([str(i), t["form"], t["lemma"], t["upos"], "_", feats_str(t["feats"]),
                                    str(t["head"]), t["deprel"], "_", misc]))
            for e in self.empty:
                if e[0] == i:
                    lines.append(e[1])
        return "\n".join(lines) + "\n\n"


def cap(s):
    return s[:1].upper() + s[1:]


# --------------------------------------------------------------------------- en

EN_NOUNS = {
    # lemma: (plural, ipa)
    "apple": ("apples", "/ˈæp.əl/"),
    "elephant": ("elephants", "/ˈɛl.ɪ.fənt/"),
    "idea": ("ideas", "/aɪˈdɪə/"),
    "hour": ("hours", "/ˈaʊ.ə/"),
    "bicycle": ("bicycles", "/ˈbaɪ.sɪ.kəl/"),
    "car": ("cars", "/kɑː/"),
    "house": ("houses", "/haʊs/"),
    "dog": ("dogs", "/dɒɡ/"),
    "university": ("universities", "/ˌjuː.nɪˈvɜː.sɪ.ti/"),
    "service": ("services", "/ˈsɜː.vɪs/"),
    "interior": ("interiors", "/ɪnˈtɪə.ɹi.ə/"),
    "garden": ("gardens", "/ˈɡɑː.dən/"),
    "orange": ("oranges", "/ˈɒɹ.ɪndʒ/"),
    "umbrella": ("umbrellas", "/ʌmˈbɹɛl.ə/"),
    "table": ("tables", "/ˈteɪ.bəl/"),
}
EN_ADJS = {
    # lemma: (comparative, ipa)
    "friendly": ("friendlier", "/ˈfɹɛnd.li/"),
    "fast": ("faster", "/fɑːst/"),
    "nuclear": (None, "/ˈnjuː.kli.ə/"),
    "fresh": ("fresher", "/fɹɛʃ/"),
    "old": ("older", "/əʊld/"),
    "new": ("newer", "/njuː/"),
    "expensive": (None, "/ɪkˈspɛn.sɪv/"),
    "small": ("smaller", "/smɔːl/"),
    "huge": ("huger", "/hjuːdʒ/"),
    "quiet": ("quieter", "/ˈkwaɪ.ət/"),
    "honest": (None, "/ˈɒn.ɪst/"),
    "useful": (None, "/ˈjuːs.fəl/"),
}
EN_VERBS_TR = {  # lemma: (past, pres3sg)
    "see": ("saw", "sees"),
    "eat": ("ate", "eats"),
    "find": ("found", "finds"),
    "like": ("liked", "likes"),
    "buy": ("bought", "buys"),
}
EN_VERBS_INTR = {
    "fall": ("fell", "falls"),
    "sleep": ("slept", "sleeps"),
    "run": ("ran", "runs"),
    "arrive": ("arrived", "arrives"),
    "wait": ("waited", "waits"),
}
EN_ADVS = ["quickly", "quietly", "often", "always", "rarely"]
EN_PROPN = ["Maria", "Alice", "Bob", "London", "Paris"]

VOWEL_IPA = set("aeiouæɛɪɒɔʊʌəɑɜ")


def en_vowel(word):
    ipa = None
    if word in EN_NOUNS:
        ipa = EN_NOUNS[word][1]
    elif word in EN_ADJS:
        ipa = EN_ADJS[word][1]
    else:
        for lemma, (pl, i) in EN_NOUNS.items():
            if pl == word:
                ipa = i
    if ipa is None:
        return word[0].lower() in "aeiou"
    first = ipa.strip("/ˈˌ")[0]
    return first in VOWEL_IPA


EN_DET_IND = {"Definite": "Ind", "PronType": "Art"}
EN_DET_DEF = {"Definite": "Def", "PronType": "Art"}
EN_PAST = {"Mood": "Ind", "Tense": "Past", "VerbForm": "Fin"}
EN_PRES3 = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}


def en_article(next_word, capital=False):
    a = "an" if en_vowel(next_word) else "a"
    return cap(a) if capital else a


def en_sentence(rng, k):
    s = Sent()
    t = k % 5
    N = lambda: rng.choice(sorted(EN_NOUNS))
    A = lambda: rng.choice(sorted(EN_ADJS))
    if t == 0:
        n, a1, a2 = N(), A(), A()
        d = s.add("The", "the", "DET", EN_DET_DEF)
        nn = s.add(n, n, "NOUN", {"Number": "Sing"})
        c = s.add("was", "be", "AUX", {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Past",
                                       "VerbForm": "Fin"})
        r = s.add(a1, a1, "ADJ", {"Degree": "Pos"})
        cc = s.add("and", "and", "CCONJ")
        a = s.add(a2, a2, "ADJ", {"Degree": "Pos"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(nn, r, "nsubj"); s.set_head(c, r, "cop"); s.set_head(r, 0, "root")
        s.set_head(cc, a, "cc"); s.set_head(a, r, "conj"); s.set_head(p, r, "punct")
    elif t == 1:
        pn, a, n = rng.choice(EN_PROPN), A(), N()
        v = rng.choice(sorted(EN_VERBS_TR))
        x = s.add(pn, pn, "PROPN", {"Number": "Sing"})
        vv = s.add(EN_VERBS_TR[v][0], v, "VERB", EN_PAST)
        d = s.add(en_article(a), "a", "DET", EN_DET_IND)
        aa = s.add(a, a, "ADJ", {"Degree": "Pos"})
        nn = s.add(n, n, "NOUN", {"Number": "Sing"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(x, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(d, nn, "det")
        s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "obj"); s.set_head(p, vv, "punct")
    elif t == 2:
        n = N()
        v = rng.choice(sorted(EN_VERBS_INTR))
        adv = rng.choice(EN_ADVS)
        d = s.add(en_article(n, True), "a", "DET", EN_DET_IND)
        nn = s.add(n, n, "NOUN", {"Number": "Sing"})
        vv = s.add(EN_VERBS_INTR[v][1], v, "VERB", EN_PRES3)
        ad = s.add(adv, adv, "ADV", space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root")
        s.set_head(ad, vv, "advmod"); s.set_head(p, vv, "punct")
    elif t == 3:
        n1, n2 = N(), N()
        v = rng.choice(sorted(EN_VERBS_TR))
        i = s.add("I", "I", "PRON", {"Case": "Nom", "Number": "Sing", "Person": "1", "PronType": "Prs"})
        vv = s.add(EN_VERBS_TR[v][0], v, "VERB", EN_PAST)
        d = s.add(en_article(n1), "a", "DET", EN_DET_IND)
        o = s.add(n1, n1, "NOUN", {"Number": "Sing"})
        c = s.add("in", "in", "ADP")
        d2 = s.add("the", "the", "DET", EN_DET_DEF)
        ob = s.add(n2, n2, "NOUN", {"Number": "Sing"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(i, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(d, o, "det"); s.set_head(o, vv, "obj")
        s.set_head(c, ob, "case"); s.set_head(d2, ob, "det"); s.set_head(ob, vv, "obl"); s.set_head(p, vv, "punct")
        if k == 3:
            # an elided predicate, kept as an opaque empty node
            s.empty.append((2, "2.1\tsaw\tsee\tVERB\t_\t_\t_\t_\t0:root\tCopyOf=2"))
    else:
        a, n = A(), N()
        v = rng.choice(sorted(EN_VERBS_INTR))
        plural = k % 2 == 0
        d = s.add("The", "the", "DET", EN_DET_DEF)
        aa = s.add(a, a, "ADJ", {"Degree": "Pos"})
        form = EN_NOUNS[n][0] if plural else n
        nn = s.add(form, n, "NOUN", {"Number": "Plur" if plural else "Sing"})
        vf = EN_VERBS_INTR[v][0]
        vv = s.add(vf, v, "VERB", EN_PAST, space=False)
        p = s.add("!", "!", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "nsubj")
        s.set_head(vv, 0, "root"); s.set_head(p, vv, "punct")
    return s


def en_lexicon():
    rows = []
    for n, (pl, _) in EN_NOUNS.items():
        rows.append((n, n, "NOUN", {"Number": "Sing"}))
        rows.append((pl, n, "NOUN", {"Number": "Plur"}))
    for a, (cmp_, _) in EN_ADJS.items():
        rows.append((a, a, "ADJ", {"Degree": "Pos"}))
        if cmp_:
            rows.append((cmp_, a, "ADJ", {"Degree": "Cmp"}))
    for table in (EN_VERBS_TR, EN_VERBS_INTR):
        for v, (past, pres) in table.items():
            rows.append((v, v, "VERB", {"VerbForm": "Inf"}))
            rows.append((past, v, "VERB", EN_PAST))
            rows.append((pres, v, "VERB", EN_PRES3))
    for a in EN_ADVS:
        rows.append((a, a, "ADV", {}))
    # PROPN deliberately absent except two names: the rest exercise no_inflection.
    for p in ["Alice", "Bob"]:
        rows.append((p, p, "PROPN", {"Number": "Sing"}))
    return rows


def en_wiktextract():
    recs = []
    for n, (pl, ipa) in EN_NOUNS.items():
        recs.append({"word": n, "pos": "noun", "lang_code": "en", "sounds": [{"ipa": ipa}],
                     "forms": [{"form": pl, "tags": ["plural"]}]})
    for a, (cmp_, ipa) in EN_ADJS.items():
        rec = {"word": a, "pos": "adj", "lang_code": "en", "sounds": [{"ipa": ipa}]}
        if cmp_:
            rec["forms"] = [{"form": cmp_, "tags": ["comparative"]}]
        recs.append(rec)
    return recs


# --------------------------------------------------------------------------- de

DE_NOUNS = {  # lemma: gender
    "Hund": "Masc", "Baum": "Masc", "Tisch": "Masc", "Vogel": "Masc",
    "Katze": "Fem", "Blume": "Fem", "Lampe": "Fem", "Tür": "Fem",
    "Haus": "Neut", "Buch": "Neut", "Auto": "Neut", "Fenster": "Neut",
}
DE_ADJS = ["klein", "groß", "alt", "neu", "schnell", "rot", "schön", "laut"]
DE_VERBS_INTR = {"schlafen": "schläft", "laufen": "läuft", "spielen": "spielt", "warten": "wartet"}
DE_VERBS_TR = {"sehen": "sieht", "kaufen": "kauft", "finden": "findet", "lieben": "liebt"}
DE_PRES3 = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}
DE_DEF = {("Nom", "Masc"): "der", ("Acc", "Masc"): "den", ("Dat", "Masc"): "dem",
          ("Nom", "Fem"): "die", ("Acc", "Fem"): "die", ("Dat", "Fem"): "der",
          ("Nom", "Neut"): "das", ("Acc", "Neut"): "das", ("Dat", "Neut"): "dem"}
DE_INDEF = {("Nom", "Masc"): "ein", ("Acc", "Masc"): "einen", ("Dat", "Masc"): "einem",
            ("Nom", "Fem"): "eine", ("Acc", "Fem"): "eine", ("Dat", "Fem"): "einer",
            ("Nom", "Neut"): "ein", ("Acc", "Neut"): "ein", ("Dat", "Neut"): "einem"}


def de_weak(case, gender):
    # ending after a definite article
    if case == "Nom":
        return "e"
    if case == "Acc":
        return "en" if gender == "Masc" else "e"
    return "en"


def de_mixed(case, gender):
    # ending after an indefinite article
    if case == "Nom":
        return {"Masc": "er", "Fem": "e", "Neut": "es"}[gender]
    if case == "Acc":
        return {"Masc": "en", "Fem": "e", "Neut": "es"}[gender]
    return "en"


def de_adj_form(lemma, ending):
    if lemma == "schön" or lemma.endswith("e"):
        return lemma + ending
    return lemma + ending


def de_sentence(rng, k):
    s = Sent()
    t = k % 5
    N = lambda: rng.choice(sorted(DE_NOUNS))
    A = lambda: rng.choice(DE_ADJS)
    if t == 0:
        n, a = N(), A()
        g = DE_NOUNS[n]
        v = rng.choice(sorted(DE_VERBS_INTR))
        d = s.add(cap(DE_DEF[("Nom", g)]), "der", "DET", {"Case": "Nom", "Definite": "Def", "Gender": g,
                                                            "Number": "Sing", "PronType": "Art"})
        aa = s.add(de_adj_form(a, de_weak("Nom", g)), a, "ADJ", {"Degree": "Pos"})
        nn = s.add(n, n, "NOUN", {"Case": "Nom", "Gender": g, "Number": "Sing"})
        vv = s.add(DE_VERBS_INTR[v], v, "VERB", DE_PRES3, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "nsubj")
        s.set_head(vv, 0, "root"); s.set_head(p, vv, "punct")
    elif t == 1:
        n, a = N(), A()
        g = DE_NOUNS[n]
        v = rng.choice(sorted(DE_VERBS_TR))
        i = s.add("Ich", "ich", "PRON", {"Case": "Nom", "Number": "Sing", "Person": "1", "PronType": "Prs"})
        vv = s.add({"sehen": "sehe", "kaufen": "kaufe", "finden": "finde", "lieben": "liebe"}[v], v, "VERB",
                   {"Mood": "Ind", "Number": "Sing", "Person": "1", "Tense": "Pres", "VerbForm": "Fin"})
        d = s.add(DE_DEF[("Acc", g)], "der", "DET", {"Case": "Acc", "Definite": "Def", "Gender": g,
                                                     "Number": "Sing", "PronType": "Art"})
        aa = s.add(de_adj_form(a, de_weak("Acc", g)), a, "ADJ", {"Degree": "Pos"})
        nn = s.add(n, n, "NOUN", {"Case": "Acc", "Gender": g, "Number": "Sing"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(i, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(d, nn, "det")
        s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "obj"); s.set_head(p, vv, "punct")
    elif t == 2:
        n, a = N(), A()
        g = DE_NOUNS[n]
        v = rng.choice(sorted(DE_VERBS_INTR))
        d = s.add(cap(DE_INDEF[("Nom", g)]), "ein", "DET", {"Case": "Nom", "Definite": "Ind", "Gender": g,
                                                              "Number": "Sing", "PronType": "Art"})
        aa = s.add(de_adj_form(a, de_mixed("Nom", g)), a, "ADJ", {"Degree": "Pos"})
        nn = s.add(n, n, "NOUN", {"Case": "Nom", "Gender": g, "Number": "Sing"})
        vv = s.add(DE_VERBS_INTR[v], v, "VERB", DE_PRES3)
        adv = s.add("hier", "hier", "ADV", space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "nsubj")
        s.set_head(vv, 0, "root"); s.set_head(adv, vv, "advmod"); s.set_head(p, vv, "punct")
    elif t == 3:
        # "... im Haus": in + dem under one surface token
        n1 = N()
        g1 = DE_NOUNS[n1]
        n2 = rng.choice([x for x in sorted(DE_NOUNS) if DE_NOUNS[x] != "Fem"])
        g2 = DE_NOUNS[n2]
        v = rng.choice(sorted(DE_VERBS_INTR))
        d = s.add(cap(DE_DEF[("Nom", g1)]), "der", "DET", {"Case": "Nom", "Definite": "Def", "Gender": g1,
                                                             "Number": "Sing", "PronType": "Art"})
        nn = s.add(n1, n1, "NOUN", {"Case": "Nom", "Gender": g1, "Number": "Sing"})
        vv = s.add(DE_VERBS_INTR[v], v, "VERB", DE_PRES3)
        c = s.add("in", "in", "ADP")
        d2 = s.add("dem", "der", "DET", {"Case": "Dat", "Definite": "Def", "Gender": g2, "Number": "Sing",
                                         "PronType": "Art"})
        ob = s.add(n2, n2, "NOUN", {"Case": "Dat", "Gender": g2, "Number": "Sing"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.mwt.append((c, d2, "im"))
        s.set_head(d, nn, "det"); s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root")
        s.set_head(c, ob, "case"); s.set_head(d2, ob, "det"); s.set_head(ob, vv, "obl"); s.set_head(p, vv, "punct")
    else:
        n1, n2, a = N(), N(), A()
        g1, g2 = DE_NOUNS[n1], DE_NOUNS[n2]
        v = rng.choice(sorted(DE_VERBS_TR))
        d = s.add(cap(DE_DEF[("Nom", g1)]), "der", "DET", {"Case": "Nom", "Definite": "Def", "Gender": g1,
                                                             "Number": "Sing", "PronType": "Art"})
        nn = s.add(n1, n1, "NOUN", {"Case": "Nom", "Gender": g1, "Number": "Sing"})
        vv = s.add(DE_VERBS_TR[v], v, "VERB", DE_PRES3)
        d2 = s.add(DE_INDEF[("Acc", g2)], "ein", "DET", {"Case": "Acc", "Definite": "Ind", "Gender": g2,
                                                         "Number": "Sing", "PronType": "Art"})
        aa = s.add(de_adj_form(a, de_mixed("Acc", g2)), a, "ADJ", {"Degree": "Pos"})
        ob = s.add(n2, n2, "NOUN", {"Case": "Acc", "Gender": g2, "Number": "Sing"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root")
        s.set_head(d2, ob, "det"); s.set_head(aa, ob, "amod"); s.set_head(ob, vv, "obj"); s.set_head(p, vv, "punct")
    return s


def de_lexicon():
    rows = []
    for n, g in DE_NOUNS.items():
        for case in ("Nom", "Acc", "Dat"):
            rows.append((n, n, "NOUN", {"Case": case, "Gender": g, "Number": "Sing"}))
    for a in DE_ADJS:
        rows.append((a, a, "ADJ", {"Degree": "Pos"}))
        for case in ("Nom", "Acc", "Dat"):
            for g in ("Masc", "Fem", "Neut"):
                for fn in (de_weak, de_mixed):
                    rows.append((de_adj_form(a, fn(case, g)), a, "ADJ",
                                 {"Case": case, "Degree": "Pos", "Gender": g, "Number": "Sing"}))
        rows.append((a + "em", a, "ADJ", {"Case": "Dat", "Degree": "Pos", "Gender": "Masc", "Number": "Sing",
                                          "Strength": "Strong"}))
    for v, f in DE_VERBS_INTR.items():
        rows.append((f, v, "VERB", DE_PRES3))
    for v, f in DE_VERBS_TR.items():
        rows.append((f, v, "VERB", DE_PRES3))
        first = {"sehen": "sehe", "kaufen": "kaufe", "finden": "finde", "lieben": "liebe"}[v]
        rows.append((first, v, "VERB", {"Mood": "Ind", "Number": "Sing", "Person": "1", "Tense": "Pres",
                                        "VerbForm": "Fin"}))
    rows.append(("hier", "hier", "ADV", {}))
    return rows


# --------------------------------------------------------------------------- fr

FR_NOUNS = {  # lemma: (gender, ipa, aspirated)
    "chat": ("Masc", "/ʃa/", False),
    "chien": ("Masc", "/ʃjɛ̃/", False),
    "livre": ("Masc", "/livʁ/", False),
    "arbre": ("Masc", "/aʁbʁ/", False),
    "oiseau": ("Masc", "/wa.zo/", False),
    "homme": ("Masc", "/ɔm/", False),
    "héros": ("Masc", "/e.ʁo/", True),
    "ami": ("Masc", "/a.mi/", False),
    "hibou": ("Masc", "/i.bu/", True),
    "jardin": ("Masc", "/ʒaʁ.dɛ̃/", False),
}
FR_ADJ_PRE = {"grand": "grande", "petit": "petite", "jeune": "jeune", "bon": "bonne"}
FR_ADJ_POST = {"rouge": "rouge", "noir": "noire", "rapide": "rapide", "célèbre": "célèbre", "vert": "verte"}
FR_VERBS_INTR = {"dormir": "dort", "courir": "court", "chanter": "chante", "tomber": "tombe"}
FR_VERBS_TR = {"voir": "vois", "aimer": "aime", "trouver": "trouve", "acheter": "achète"}
FR_PRES3 = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}
FR_VOWELS = "aeiouéèêâîôûœ"


def fr_elidable(word):
    if word in FR_NOUNS:
        _, ipa, asp = FR_NOUNS[word]
        return not asp and (ipa.strip("/")[0] in "aeiouɛɔœøəɑwɥ")
    return word[0] in FR_VOWELS


def fr_det(next_word, capital=False):
    d = "l'" if fr_elidable(next_word) else "le"
    return cap(d) if capital else d


FR_DEF = {"Definite": "Def", "Gender": "Masc", "Number": "Sing", "PronType": "Art"}
FR_DEF_ELIDED = {"Definite": "Def", "Number": "Sing", "PronType": "Art"}


def fr_sentence(rng, k):
    s = Sent()
    t = k % 5
    N = lambda: rng.choice(sorted(FR_NOUNS))
    nfeat = {"Gender": "Masc", "Number": "Sing"}
    if t == 0:
        n = N()
        a = rng.choice(sorted(FR_ADJ_POST))
        v = rng.choice(sorted(FR_VERBS_INTR))
        df = fr_det(n, True)
        d = s.add(df, "le", "DET", FR_DEF_ELIDED if df.endswith("'") else FR_DEF, space=not df.endswith("'"))
        nn = s.add(n, n, "NOUN", nfeat)
        aa = s.add(a, a, "ADJ", nfeat)
        vv = s.add(FR_VERBS_INTR[v], v, "VERB", FR_PRES3, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(nn, vv, "nsubj"); s.set_head(aa, nn, "amod")
        s.set_head(vv, 0, "root"); s.set_head(p, vv, "punct")
    elif t == 1:
        n = N()
        a = rng.choice(sorted(FR_ADJ_PRE))
        v = rng.choice(sorted(FR_VERBS_INTR))
        d = s.add("Le", "le", "DET", FR_DEF)
        aa = s.add(a, a, "ADJ", nfeat)
        nn = s.add(n, n, "NOUN", nfeat)
        vv = s.add(FR_VERBS_INTR[v], v, "VERB", FR_PRES3, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "nsubj")
        s.set_head(vv, 0, "root"); s.set_head(p, vv, "punct")
    elif t == 2:
        n = N()
        v = rng.choice(sorted(FR_VERBS_TR))
        i = s.add("Je", "il", "PRON", {"Number": "Sing", "Person": "1", "PronType": "Prs"})
        vf = {"voir": "vois", "aimer": "aime", "trouver": "trouve", "acheter": "achète"}[v]
        vv = s.add(vf, v, "VERB", {"Mood": "Ind", "Number": "Sing", "Person": "1", "Tense": "Pres",
                                   "VerbForm": "Fin"})
        df = fr_det(n)
        d = s.add(df, "le", "DET", FR_DEF_ELIDED if df.endswith("'") else FR_DEF, space=not df.endswith("'"))
        nn = s.add(n, n, "NOUN", nfeat, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(i, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(d, nn, "det")
        s.set_head(nn, vv, "obj"); s.set_head(p, vv, "punct")
    elif t == 3:
        # "... parle du jardin": de + le under one surface token
        n1, n2 = N(), rng.choice([x for x in sorted(FR_NOUNS) if not fr_elidable(x)])
        df = fr_det(n1, True)
        d = s.add(df, "le", "DET", FR_DEF_ELIDED if df.endswith("'") else FR_DEF, space=not df.endswith("'"))
        nn = s.add(n1, n1, "NOUN", nfeat)
        vv = s.add("parle", "parler", "VERB", FR_PRES3)
        c = s.add("de", "de", "ADP")
        d2 = s.add("le", "le", "DET", FR_DEF)
        ob = s.add(n2, n2, "NOUN", nfeat, space=False)
        p = s.add(".", ".", "PUNCT")
        s.mwt.append((c, d2, "du"))
        s.set_head(d, nn, "det"); s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root")
        s.set_head(c, ob, "case"); s.set_head(d2, ob, "det"); s.set_head(ob, vv, "obl"); s.set_head(p, vv, "punct")
    else:
        n = N()
        a = rng.choice(sorted(FR_ADJ_POST) + sorted(FR_ADJ_PRE))
        df = fr_det(n, True)
        d = s.add(df, "le", "DET", FR_DEF_ELIDED if df.endswith("'") else FR_DEF, space=not df.endswith("'"))
        nn = s.add(n, n, "NOUN", nfeat)
        c = s.add("est", "être", "AUX", FR_PRES3)
        aa = s.add(a, a, "ADJ", nfeat, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(d, nn, "det"); s.set_head(nn, aa, "nsubj"); s.set_head(c, aa, "cop")
        s.set_head(aa, 0, "root"); s.set_head(p, aa, "punct")
    return s


def fr_lexicon():
    rows = []
    for n, (g, _, _) in FR_NOUNS.items():
        rows.append((n, n, "NOUN", {"Gender": g, "Number": "Sing"}))
        rows.append((n if n.endswith("s") else (n + "x" if n.endswith("eau") or n == "hibou" else n + "s"), n,
                     "NOUN", {"Gender": g, "Number": "Plur"}))
    for table in (FR_ADJ_PRE, FR_ADJ_POST):
        for a, fem in table.items():
            rows.append((a, a, "ADJ", {"Gender": "Masc", "Number": "Sing"}))
            rows.append((fem, a, "ADJ", {"Gender": "Fem", "Number": "Sing"}))
    for v, f in FR_VERBS_INTR.items():
        rows.append((f, v, "VERB", FR_PRES3))
    for v, f in FR_VERBS_TR.items():
        rows.append(({"voir": "vois", "aimer": "aime", "trouver": "trouve", "acheter": "achète"}[v], v, "VERB",
                     {"Mood": "Ind", "Number": "Sing", "Person": "1", "Tense": "Pres", "VerbForm": "Fin"}))
        rows.append((f if v != "voir" else "voit", v, "VERB", FR_PRES3))
    rows.append(("parle", "parler", "VERB", FR_PRES3))
    return rows


def fr_wiktextract():
    recs = []
    for n, (g, ipa, asp) in FR_NOUNS.items():
        rec = {"word": n, "pos": "noun", "lang_code": "fr", "sounds": [{"ipa": ipa}]}
        if asp:
            rec["sounds"][0]["tags"] = ["h-aspirated"]
        recs.append(rec)
    return recs


# --------------------------------------------------------------------------- ru

RU_NOUNS = {  # lemma: (gender, animacy, nom, acc)
    "кошка": ("Fem", "Anim", "кошка", "кошку"),
    "собака": ("Fem", "Anim", "собака", "собаку"),
    "птица": ("Fem", "Anim", "птица", "птицу"),
    "девочка": ("Fem", "Anim", "девочка", "девочку"),
    "книга": ("Fem", "Inan", "книга", "книгу"),
    "лампа": ("Fem", "Inan", "лампа", "лампу"),
    "мальчик": ("Masc", "Anim", "мальчик", "мальчика"),
    "дом": ("Masc", "Inan", "дом", "дом"),
    "стол": ("Masc", "Inan", "стол", "стол"),
    "город": ("Masc", "Inan", "город", "город"),
}
RU_ADJS = {  # lemma: masc nom, fem nom, fem acc
    "большой": ("большой", "большая", "большую"),
    "новый": ("новый", "новая", "новую"),
    "красный": ("красный", "красная", "красную"),
    "старый": ("старый", "старая", "старую"),
    "тихий": ("тихий", "тихая", "тихую"),
}
RU_VERBS_INTR = {"спать": "спит", "бежать": "бежит", "петь": "поёт", "ждать": "ждёт"}
RU_VERBS_TR = {"видеть": "видит", "любить": "любит", "читать": "читает", "искать": "ищет"}
RU_PRES3 = {"Aspect": "Imp", "Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin",
            "Voice": "Act"}
RU_ADVS = ["быстро", "тихо", "часто", "всегда"]


def ru_nfeat(n, case):
    g, anim, _, _ = RU_NOUNS[n]
    return {"Animacy": anim, "Case": case, "Gender": g, "Number": "Sing"}


def ru_sentence(rng, k):
    s = Sent()
    t = k % 3
    N = lambda: rng.choice(sorted(RU_NOUNS))
    if t == 0:
        n = rng.choice([x for x in sorted(RU_NOUNS) if RU_NOUNS[x][0] == "Fem"])
        a = rng.choice(sorted(RU_ADJS))
        v = rng.choice(sorted(RU_VERBS_INTR))
        aa = s.add(cap(RU_ADJS[a][1]), a, "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"})
        nn = s.add(n, n, "NOUN", ru_nfeat(n, "Nom"))
        vv = s.add(RU_VERBS_INTR[v], v, "VERB", RU_PRES3, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(aa, nn, "amod"); s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(p, vv, "punct")
    elif t == 1:
        n1, n2 = N(), N()
        v = rng.choice(sorted(RU_VERBS_TR))
        nn = s.add(cap(RU_NOUNS[n1][2]), n1, "NOUN", ru_nfeat(n1, "Nom"))
        vv = s.add(RU_VERBS_TR[v], v, "VERB", RU_PRES3)
        ob = s.add(RU_NOUNS[n2][3], n2, "NOUN", ru_nfeat(n2, "Acc"), space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(ob, vv, "obj"); s.set_head(p, vv, "punct")
    else:
        n = N()
        v = rng.choice(sorted(RU_VERBS_INTR))
        adv = rng.choice(RU_ADVS)
        nn = s.add(cap(RU_NOUNS[n][2]), n, "NOUN", ru_nfeat(n, "Nom"))
        vv = s.add(RU_VERBS_INTR[v], v, "VERB", RU_PRES3)
        ad = s.add(adv, adv, "ADV", {"Degree": "Pos"}, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(nn, vv, "nsubj"); s.set_head(vv, 0, "root"); s.set_head(ad, vv, "advmod"); s.set_head(p, vv, "punct")
    return s


def ru_lexicon():
    rows = []
    for n, (g, anim, nom, acc) in RU_NOUNS.items():
        rows.append((nom, n, "NOUN", {"Animacy": anim, "Case": "Nom", "Gender": g, "Number": "Sing"}))
        rows.append((acc, n, "NOUN", {"Animacy": anim, "Case": "Acc", "Gender": g, "Number": "Sing"}))
    for a, (m, f, facc) in RU_ADJS.items():
        rows.append((m, a, "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Masc", "Number": "Sing"}))
        rows.append((f, a, "ADJ", {"Case": "Nom", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"}))
        rows.append((facc, a, "ADJ", {"Case": "Acc", "Degree": "Pos", "Gender": "Fem", "Number": "Sing"}))
    for table in (RU_VERBS_INTR, RU_VERBS_TR):
        for v, f in table.items():
            rows.append((f, v, "VERB", RU_PRES3))
    for a in RU_ADVS:
        rows.append((a, a, "ADV", {"Degree": "Pos"}))
    return rows


# --------------------------------------------------------------------------- ar

AR_VERBS = {"كَتَبَ": "كَتَبَ", "قَرَأَ": "قَرَأَ", "فَتَحَ": "فَتَحَ", "رَسَمَ": "رَسَمَ", "أَكَلَ": "أَكَلَ",
            "شَرِبَ": "شَرِبَ"}
AR_SUBJ = {"وَلَد": "الوَلَدُ", "رَجُل": "الرَّجُلُ", "طَالِب": "الطَّالِبُ", "مُعَلِّم": "المُعَلِّمُ"}
AR_OBJ = {"دَرْس": "الدَّرْسَ", "كِتَاب": "الكِتَابَ", "بَاب": "البَابَ", "خُبْز": "الخُبْزَ"}
AR_ADJ = {"كَبِير": "كَبِيرٌ", "جَمِيل": "جَمِيلٌ", "سَعِيد": "سَعِيدٌ", "طَوِيل": "طَوِيلٌ"}
AR_VERB_F = {"Aspect": "Perf", "Gender": "Masc", "Mood": "Ind", "Number": "Sing", "Person": "3", "Voice": "Act"}
AR_NOM = {"Case": "Nom", "Definite": "Def", "Gender": "Masc", "Number": "Sing"}
AR_ACC = {"Case": "Acc", "Definite": "Def", "Gender": "Masc", "Number": "Sing"}
AR_ADJ_F = {"Case": "Nom", "Definite": "Ind", "Gender": "Masc", "Number": "Sing"}


def ar_sentence(rng, k):
    s = Sent()
    t = k % 3
    if t in (0, 1):
        v = rng.choice(sorted(AR_VERBS))
        sb = rng.choice(sorted(AR_SUBJ))
        ob = rng.choice(sorted(AR_OBJ))
        if t == 1:
            c = s.add("وَ", "وَ", "CCONJ", space=False)
        vv = s.add(AR_VERBS[v], v, "VERB", AR_VERB_F)
        nn = s.add(AR_SUBJ[sb], sb, "NOUN", AR_NOM)
        oo = s.add(AR_OBJ[ob], ob, "NOUN", AR_ACC, space=False)
        p = s.add(".", ".", "PUNCT")
        if t == 1:
            s.mwt.append((c, vv, "وَ" + AR_VERBS[v]))
            s.set_head(c, vv, "cc")
        s.set_head(vv, 0, "root"); s.set_head(nn, vv, "nsubj"); s.set_head(oo, vv, "obj"); s.set_head(p, vv, "punct")
    else:
        sb = rng.choice(sorted(AR_SUBJ))
        a = rng.choice(sorted(AR_ADJ))
        nn = s.add(AR_SUBJ[sb], sb, "NOUN", AR_NOM)
        aa = s.add(AR_ADJ[a], a, "ADJ", AR_ADJ_F, space=False)
        p = s.add(".", ".", "PUNCT")
        s.set_head(nn, aa, "nsubj"); s.set_head(aa, 0, "root"); s.set_head(p, aa, "punct")
    return s


def ar_lexicon():
    rows = []
    for v, f in AR_VERBS.items():
        rows.append((f, v, "VERB", AR_VERB_F))
    for n, f in AR_SUBJ.items():
        rows.append((f, n, "NOUN", AR_NOM))
        rows.append((f[:-1] + "َ", n, "NOUN", AR_ACC))
    for n, f in AR_OBJ.items():
        rows.append((f, n, "NOUN", AR_ACC))
        rows.append((f[:-1] + "ُ", n, "NOUN", AR_NOM))
    for a, f in AR_ADJ.items():
        rows.append((f, a, "ADJ", AR_ADJ_F))
    return rows


# --------------------------------------------------------------------------- main

LANGS = {
    "en": (en_sentence, en_lexicon, en_wiktextract),
    "de": (de_sentence, de_lexicon, None),
    "fr": (fr_sentence, fr_lexicon, fr_wiktextract),
    "ru": (ru_sentence, ru_lexicon, None),
    "ar": (ar_sentence, ar_lexicon, None),
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for lang, (sent_fn, lex_fn, wik_fn) in LANGS.items():
        rng = random.Random(f"spud-mini-{lang}")
        with open(os.path.join(OUT, f"{lang}.conllu"), "w", encoding="utf-8", newline="\n") as f:
            for k in range(50):
                f.write(sent_fn(rng, k).conllu(f"mini-{lang}-{k + 1:02d}"))
        rows = sorted(set((a, b, c, feats_str(d)) for a, b, c, d in lex_fn()))
        with open(os.path.join(OUT, f"{lang}.lexicon.tsv"), "w", encoding="utf-8", newline="\n") as f:
            f.write("# form\tlemma\tupos\tfeats\n")
            for r in rows:
                f.write("\t".join(r) + "\n")
        if wik_fn:
            with open(os.path.join(OUT, f"{lang}.wiktextract.jsonl"), "w", encoding="utf-8", newline="\n") as f:
                for rec in wik_fn():
                    f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
