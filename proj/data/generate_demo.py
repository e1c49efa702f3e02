#!/usr/bin/env python3
"""Regenerates the bundled demo corpus, score file and mini lexicon.

    pip install numpy jellyfish cmudict
    python3 data/generate_demo.py

Everything is synthetic. References are short spoken commands; hypotheses
are seeded corruptions of them whose error rate depends on the system and
severity. The NLI and semantic channels are noisy functions of WER with
independent noise, so no single channel tracks the ratings on its own.
Six annotator ratings per record are drawn around
1 + 4 * (0.40 * s_nli + 0.28 * s_sem + 0.32 * s_phon).
"""

import importlib.resources
import json
import pathlib

import jellyfish
import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent
SEED = 61

SYSTEMS = [("wav2vec-demo", "w2v", 1.35), ("whisper-demo", "wsp", 1.0), ("wavllm-demo", "wlm", 0.75)]
SEVERITIES = [("H", 0.42), ("M", 0.28), ("L", 0.16), ("VL", 0.08)]
PER_CELL = 5

SENTENCES = [
    "SET THE AIR CONDITIONING TO SEVENTY EIGHT",
    "OPEN DUOLINGO",
    "TURN ON THE KITCHEN LIGHTS",
    "CALL MY DAUGHTER ON HER CELL PHONE",
    "WHAT IS THE WEATHER TOMORROW MORNING",
    "PLAY SOME QUIET MUSIC IN THE BEDROOM",
    "REMIND ME TO TAKE MY MEDICINE AT NINE",
    "SEND A TEXT MESSAGE TO MY BROTHER",
    "HOW MANY STEPS DID I WALK TODAY",
    "LOCK THE FRONT DOOR",
    "SET A TIMER FOR TWENTY MINUTES",
    "ADD MILK AND BREAD TO THE SHOPPING LIST",
    "READ ME THE LATEST NEWS HEADLINES",
    "TURN THE VOLUME DOWN A LITTLE",
    "WHEN IS MY NEXT DOCTOR APPOINTMENT",
    "CLOSE THE GARAGE DOOR PLEASE",
    "START THE ROBOT VACUUM IN THE LIVING ROOM",
    "FIND A RECIPE FOR CHICKEN SOUP",
    "WAKE ME UP AT SEVEN THIRTY",
    "SHOW ME PICTURES FROM LAST SUMMER",
]

FILLERS = ["UH", "UM", "E", "AH", "THE", "A", "SO", "AND"]
HALLUCINATIONS = ["CORRECTED TEXT", "PLEASE", "FOR ME NOW", "AGAIN", "IN THE HOUSE", "RIGHT AWAY"]
VOWELS = "AEIOU"

# Fixture words outside the sentence vocabulary.
EXTRA_WORDS = ["CAT", "BAT", "ROBERT", "RUPERT", "MARTHA", "GYM", "NBA", "TEXT", "CORRECTED", "CONDITION"]
# Not in CMUdict; hand-written entries.
HAND_ENTRIES = {"DUOLINGO": "D UW1 OW0 L IH1 NG G OW0"}


def mutate(word, rng):
    """A phonetically plausible misrecognition of one word."""
    w = list(word)
    kind = rng.integers(4)
    if kind == 0 and len(w) > 2:  # vowel swap
        idx = [i for i, c in enumerate(w) if c in VOWELS]
        if idx:
            i = idx[rng.integers(len(idx))]
            w[i] = VOWELS[(VOWELS.index(w[i]) + 1 + rng.integers(4)) % 5]
            return "".join(w)
    if kind == 1 and len(w) > 3:  # truncation
        return "".join(w[: max(2, len(w) - 1 - rng.integers(3))])
    if kind == 2:  # stuttered onset, e.g. SEESEVENTY
        return word[: min(3, len(word))] + word
    # consonant drop
    idx = [i for i, c in enumerate(w) if c not in VOWELS]
    if len(idx) > 1:
        del w[idx[1 + rng.integers(len(idx) - 1)]]
    return "".join(w) or word


def corrupt(tokens, p, rng):
    out = []
    for t in tokens:
        if rng.random() >= p:
            out.append(t)
            continue
        r = rng.random()
        if r < 0.5:
            out.append(mutate(t, rng))
        elif r < 0.7:
            pass  # deletion
        elif r < 0.9:
            out.append(t)
            out.append(FILLERS[rng.integers(len(FILLERS))])
        else:  # split into a fragment and the word
            out.append(t[: max(1, len(t) // 2)])
            out.append(t)
    return out or [tokens[0]]


def wer(ref, hyp):
    d = list(range(len(hyp) + 1))
    for i in range(1, len(ref) + 1):
        prev, d[0] = d[0], i
        for j in range(1, len(hyp) + 1):
            cur = min(prev + (ref[i - 1] != hyp[j - 1]), d[j] + 1, d[j - 1] + 1)
            prev, d[j] = d[j], cur
    return d[len(hyp)] / len(ref)


def jaro_winkler(a, b):
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    j = jellyfish.jaro_similarity(a, b)
    l = 0
    for x, y in zip(a[:4], b[:4]):
        if x != y:
            break
        l += 1
    return j + l * 0.1 * (1 - j)


def psim_soundex(ref, hyp):
    codes = lambda toks: " ".join(jellyfish.soundex(t) for t in toks)
    return jaro_winkler(codes(ref), codes(hyp))


def channels(ref, hyp, bias, rng):
    w = min(wer(ref, hyp), 1.5)
    s_nli = float(np.clip(0.97 - 0.62 * w + bias + rng.normal(0, 0.16), 0.01, 0.99))
    s_sem = float(np.clip(0.95 - 0.8 * w + rng.normal(0, 0.26), -0.6, 0.99))
    bleurt = float(np.clip(-0.15 - 0.9 * w + rng.normal(0, 0.2), -1.6, 0.6))
    heval = float(np.clip(0.9 - 0.5 * w + rng.normal(0, 0.1), 0.0, 1.0))
    return round(s_nli, 4), round(s_sem, 4), {"bleurt": round(bleurt, 4), "heval": round(heval, 4)}


def pearson(x, y):
    return float(np.corrcoef(x, y)[0, 1])


def main():
    rng = np.random.default_rng(SEED)
    records, scores, check = [], [], []
    for system, short, mult in SYSTEMS:
        bias = {"w2v": -0.03, "wsp": 0.0, "wlm": 0.02}[short]
        for sev, p in SEVERITIES:
            for k in range(PER_CELL):
                ref = SENTENCES[rng.integers(len(SENTENCES))].split()
                hyp = corrupt(ref, min(0.85, p * mult), rng)
                roll = rng.random()
                if roll < 0.55:
                    corr = corrupt(ref, p * mult * 0.3, rng)
                elif roll < 0.8:
                    corr = hyp + HALLUCINATIONS[rng.integers(len(HALLUCINATIONS))].split()
                else:
                    corr = list(hyp)
                rid = f"{short}-{sev}-{k + 1:02d}"

                s_nli, s_sem, extras = channels(ref, hyp, bias, rng)
                s_phon = psim_soundex(ref, hyp)
                latent = 0.40 * s_nli + 0.28 * s_sem + 0.32 * s_phon
                ratings = [int(np.clip(np.rint(1 + 4 * latent + rng.normal(0, 0.5)), 1, 5)) for _ in range(6)]

                records.append({
                    "id": rid, "system_id": system, "severity": sev,
                    "reference": " ".join(ref).lower().capitalize() + ".",
                    "hypothesis": " ".join(hyp).lower(),
                    "corrected_hypothesis": " ".join(corr).lower().capitalize() + ".",
                    "ratings": ratings,
                })
                scores.append({"id": rid, "s_nli": s_nli, "s_sem": s_sem, "extras": extras})
                c_nli, c_sem, c_extras = channels(ref, corr, bias, rng)
                scores.append({"id": rid + "#corrected", "s_nli": c_nli, "s_sem": c_sem, "extras": c_extras})
                check.append((s_nli, s_sem, s_phon, wer(ref, hyp), float(np.mean(ratings))))

    demo = ROOT / "demo"
    demo.mkdir(exist_ok=True)
    with open(demo / "corpus.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")
    with open(demo / "scores.jsonl", "w") as f:
        for s in scores:
            f.write(json.dumps(s) + "\n")

    # Sanity: the weighted combination must beat every single channel and
    # the unweighted sum.
    a = np.array(check)
    rating = a[:, 4]
    integrated = 0.40 * a[:, 0] + 0.28 * a[:, 1] + 0.32 * a[:, 2]
    table = {
        "integrated": pearson(integrated, rating),
        "sum": pearson(a[:, 0] + a[:, 1] + a[:, 2], rating),
        "nli": pearson(a[:, 0], rating),
        "semantic": pearson(a[:, 1], rating),
        "phonetic": pearson(a[:, 2], rating),
        "neg_wer": pearson(-a[:, 3], rating),
    }
    for k, v in sorted(table.items(), key=lambda kv: -kv[1]):
        print(f"{k:12s} {v:.4f}")
    assert max(table, key=table.get) == "integrated", table

    write_lexicon(records)


def write_lexicon(records):
    vocab = set(EXTRA_WORDS)
    for s in SENTENCES:
        vocab.update(s.split())
    for r in records:
        vocab.update(r["reference"].upper().replace(".", "").split())
    vocab -= set(HAND_ENTRIES)

    source = importlib.resources.files("cmudict") / "data" / "cmudict.dict"
    prons = {}
    for line in source.read_text().splitlines():
        word, _, pron = line.partition(" ")
        pron = pron.split("#")[0].strip()
        if word.upper() in vocab and word.upper() not in prons:
            prons[word.upper()] = pron
    missing = vocab - set(prons)
    assert not missing, missing
    prons.update(HAND_ENTRIES)

    header = (ROOT / "lexicon" / "HEADER").read_text()
    with open(ROOT / "lexicon" / "mini.dict", "w") as f:
        f.write(header)
        for word in sorted(prons):
            f.write(f"{word}  {prons[word]}\n")
    print(f"lexicon: {len(prons)} words")


if __name__ == "__main__":
    main()
