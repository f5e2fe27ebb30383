#!/usr/bin/env python3
"""Regenerates data/sample: a synthetic labelled corpus and small invented
resource files in the formats read by ResourceBundle::load_directory.

Every value here is made up. The output is deterministic.

    python3 tools/make_sample_data.py [out_dir]
"""

import json
import math
import random
import sys
from pathlib import Path

SEED = 42

POSITIVE_OPENERS = [
    "I was diagnosed with social anxiety disorder when I was {age}.",
    "My psychiatrist finally gave me a diagnosis of social anxiety last {month}.",
    "After years of avoiding people I got diagnosed with SAD.",
    "I have been officially diagnosed with social phobia.",
    "My therapist confirmed that I have social anxiety disorder.",
]
POSITIVE_BODY = [
    "Talking to strangers makes my heart race and my hands shake.",
    "I rehearse every phone call several times before I dial.",
    "Therapy has helped a little, but group settings are still hard.",
    "My doctor prescribed medication and it takes the edge off.",
    "I skipped my friend's party again because I could not face the crowd.",
    "Eye contact feels impossible when I am nervous.",
    "The diagnosis made me feel less alone, honestly.",
    "I worry for days that people judged what I said.",
    "Cognitive behavioral therapy taught me to challenge those thoughts.",
    "Presentations at work leave me exhausted and anxious.",
]
NEGATIVE_OPENERS = [
    "I get a little nervous before exams, like everyone.",
    "Does anyone else feel awkward at big family dinners?",
    "My cousin thinks she might be shy, not anxious.",
    "I am writing a paper about anxiety in teenagers.",
    "Just moved to a new city and trying to meet people.",
    "I had a stressful week at work and needed to vent.",
]
NEGATIVE_BODY = [
    "The weather was great so we walked along the river.",
    "I think most people feel uneasy in a room full of strangers.",
    "We played board games and ordered pizza for dinner.",
    "My manager asked me to lead the meeting on Monday.",
    "I read that regular exercise can lower stress levels.",
    "The new job is fine, although the commute is long.",
    "Some articles say social media makes people lonely.",
    "I joined a hiking club and the members are friendly.",
    "My sister gave a speech at her wedding and did well.",
    "Honestly the hardest part is finding time to sleep.",
]
CLOSERS = [
    "Any advice would be appreciated!!",
    "Thanks for reading.",
    "Has anyone else been through this?",
    "I hope this helps someone.",
    "What do you think?",
    "Sorry for the long post...",
]
NOISE = [
    " More info at https://example.org/forum/thread{n} .",
    " <b>edit:</b> fixed a typo.",
    " \U0001F642",
    " (see www.example.com/help)",
    "",
    "",
    "",
]
MONTHS = ["January", "March", "May", "July", "September", "November"]


def make_post(rng, idx, positive):
    openers = POSITIVE_OPENERS if positive else NEGATIVE_OPENERS
    body = POSITIVE_BODY if positive else NEGATIVE_BODY
    sents = [rng.choice(openers).format(age=rng.randint(14, 35), month=rng.choice(MONTHS))]
    # Some cross-talk so the classes overlap.
    pool = body + (NEGATIVE_BODY[:3] if positive else POSITIVE_BODY[5:8])
    for _ in range(rng.randint(2, 6)):
        sents.append(rng.choice(pool))
    if rng.random() < 0.7:
        sents.append(rng.choice(CLOSERS))
    text = " ".join(sents) + rng.choice(NOISE).format(n=idx)
    return {"id": f"p{idx:04d}", "text": text, "label": 1 if positive else 0}


def corpus(rng, n=200, positive_rate=0.4):
    n_pos = round(n * positive_rate)
    labels = [1] * n_pos + [0] * (n - n_pos)
    rng.shuffle(labels)
    posts = []
    for i, lab in enumerate(labels):
        # About 8% of posts are written in the other class's voice.
        voice = (lab == 1) != (rng.random() < 0.08)
        post = make_post(rng, i, voice)
        post["label"] = lab
        posts.append(post)
    return posts


def words_of(posts):
    vocab = set()
    for p in posts:
        for tok in p["text"].replace("'", " ").split():
            w = "".join(c for c in tok.lower() if c.isalpha())
            if w:
                vocab.add(w)
    return sorted(vocab)


AFFECT = {
    "anew": ["valence", "arousal", "dominance"],
    "anew_emo": ["happiness", "anger", "sadness", "fear", "disgust"],
    "depechemood": ["afraid", "amused", "angry", "annoyed", "dont_care", "happy", "inspired", "sad"],
    "galc": [f"galc{i:02d}" for i in range(38)],
    "nrc_emotion": ["anger", "anticipation", "disgust", "fear", "joy", "negative", "positive",
                    "sadness", "surprise", "trust"],
    "nrc_vad": ["valence", "arousal", "dominance"],
    "senticnet": ["pleasantness", "attention", "sensitivity", "aptitude", "polarity"],
    "sentiment140": ["score"],
}

STOPWORDS = ("a an and are as at be but by for from had has have he her his i if in is it its me my "
             "of on or our she so that the their them they this to was we were what when which who "
             "will with you your not do does did just am been").split()

AFL = ["on the other hand", "as well as", "in terms of", "at the same time", "a lot of",
       "i think", "you know", "for example", "in order to", "the fact that"]


def write_lines(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def resources(rng, out, vocab):
    res = out / "resources"
    common = [w for w in vocab if len(w) <= 6]
    write_lines(res / "wordlists" / "stopwords.txt", ["# invented sample list"] + sorted(STOPWORDS))
    write_lines(res / "wordlists" / "afl.txt", ["# invented sample list"] + AFL)
    for name, frac in [("anc", 0.55), ("bnc", 0.5), ("ngsl", 0.6), ("dale_chall", 0.65), ("spache", 0.45)]:
        chosen = sorted(set(STOPWORDS) | {w for w in common if rng.random() < frac})
        write_lines(res / "wordlists" / f"{name}.txt", ["# invented sample list"] + chosen)
    academic = sorted(w for w in vocab if len(w) >= 8 and rng.random() < 0.5)
    write_lines(res / "wordlists" / "nawl.txt", ["# invented sample list"] + academic)

    aoa = [f"{w}\t{2.5 + 0.45 * len(w) + rng.uniform(-1, 1):.3f}" for w in vocab]
    write_lines(res / "scalar" / "aoa.tsv", ["# word<TAB>age of acquisition (invented)"] + aoa)
    prev = [f"{w}\t{min(2.6, max(0.5, 2.4 - 0.08 * len(w) + rng.uniform(-0.3, 0.3))):.3f}" for w in vocab]
    write_lines(res / "scalar" / "prevalence.tsv", ["# word<TAB>prevalence (invented)"] + prev)

    for name, cats in AFFECT.items():
        rows = ["# word<TAB>category=value,... (invented)"]
        for w in vocab:
            if rng.random() < 0.35:
                picked = [c for c in cats if rng.random() < 0.5] or [cats[0]]
                rows.append(w + "\t" + ",".join(f"{c}={rng.uniform(0, 1):.4f}" for c in picked))
        # make sure every category appears at least once
        rows.append("zzsample\t" + ",".join(f"{c}=0.5" for c in cats))
        write_lines(res / "affect" / f"{name}.tsv", rows)

    cats = [f"prev{i:02d}" for i in range(35)]
    rows = ["# word<TAB>category=value,... (invented)"]
    for w in vocab:
        if rng.random() < 0.3:
            rows.append(w + "\t" + ",".join(f"{c}={rng.uniform(0, 1):.3f}" for c in cats if rng.random() < 0.2))
    write_lines(res / "prevalence_categories.tsv", [r for r in rows if not r.endswith("\t")])


def ngrams(rng, out, posts):
    counts = {}
    for p in posts:
        toks = ["".join(c for c in t.lower() if c.isalnum()) for t in p["text"].split()]
        toks = [t for t in toks if t]
        for n in range(1, 6):
            for i in range(len(toks) - n + 1):
                g = " ".join(toks[i:i + n])
                counts[(n, g)] = counts.get((n, g), 0) + 1
    genres = ["spoken", "fiction", "magazine", "news", "academic"]
    rows_by_genre = {g: ["# n<TAB>genre<TAB>ngram<TAB>log10 frequency (invented)"] for g in genres}
    for (n, g), c in sorted(counts.items()):
        for genre in genres:
            if rng.random() < 0.6:
                rows_by_genre[genre].append(f"{n}\t{genre}\t{g}\t{math.log10(c) + rng.uniform(0, 2):.4f}")
    for genre, rows in rows_by_genre.items():
        write_lines(out / "resources" / "ngrams" / f"{genre}.tsv", rows)


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "sample"
    rng = random.Random(SEED)
    posts = corpus(rng)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "posts.jsonl", "w", encoding="utf-8") as f:
        for p in posts:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")
    vocab = words_of(posts)
    resources(rng, out, vocab)
    ngrams(rng, out, posts)


if __name__ == "__main__":
    main()
