#!/usr/bin/env python3
"""Generate a small self-contained demo corpus for the pipeline.

Writes stories.csv, stories.conllu, lexicon.tsv and run.ini into the
target directory.  Stories are template-generated prompt-triad
narratives with four synthetic raters; parses are simple chain trees
(each token attaches to the next), which are well-formed but not
linguistically meaningful - good enough to exercise every stage,
including the dependency-based builder.
"""

import argparse
import csv
from pathlib import Path

import numpy as np

PROMPT_TRIADS = [
    ("belief", "faith", "sing"),
    ("gloom", "payment", "exist"),
    ("organ", "empire", "comply"),
    ("petrol", "diesel", "pump"),
    ("stamp", "letter", "send"),
    ("statement", "stealth", "detect"),
    ("year", "week", "embark"),
]

FILLER = [
    "river", "stone", "lantern", "market", "violin", "garden", "harbor",
    "shadow", "engine", "mirror", "forest", "candle", "window", "journey",
    "whisper", "thunder", "meadow", "anchor", "ribbon", "ember",
]

EMOTION_WORDS = {
    "joy": ["delight", "laughter", "cheer"],
    "trust": ["comfort", "loyal", "honest"],
    "fear": ["dread", "panic", "terror"],
    "surprise": ["shock", "sudden", "marvel"],
    "sadness": ["sorrow", "grief", "mourn"],
    "disgust": ["rot", "filth", "sour"],
    "anger": ["rage", "fury", "spite"],
    "anticipation": ["hope", "eager", "await"],
}

VALENCE = {
    "joy": "positive", "trust": "positive", "anticipation": "positive",
    "surprise": "positive", "fear": "negative", "sadness": "negative",
    "disgust": "negative", "anger": "negative",
}


def chain_parse(story_id, sentences):
    blocks = []
    for words in sentences:
        lines = [f"# story_id = {story_id}"]
        for i, word in enumerate(words, start=1):
            head = i + 1 if i < len(words) else 0
            deprel = "dep" if head else "root"
            lines.append(f"{i}\t{word}\t{word.lower()}\tNOUN\t_\t_\t{head}\t{deprel}\t_\t_")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)


def make_story(story_id, prompts, rng):
    """Richness (distinct words per sentence) drives the synthetic ratings,
    so the evaluation stage has genuine signal to find."""
    emotion = list(EMOTION_WORDS)[rng.integers(0, 8)]
    richness = int(rng.integers(2, 7))
    sentences = []
    for prompt in prompts:
        words = list(rng.choice(FILLER, size=richness, replace=False))
        words.insert(int(rng.integers(0, len(words))), prompt)
        if rng.random() < 0.7:
            words.append(str(rng.choice(EMOTION_WORDS[emotion])))
        sentences.append(words)
    text = ". ".join(
        " ".join(w.capitalize() if i == 0 else w for i, w in enumerate(s))
        for s in sentences
    ) + "."
    distinct = len({w.lower() for s in sentences for w in s})
    base = 1 + 4 * (distinct - 8) / 16  # ~[1, 5] over the richness range
    ratings = [
        int(min(5, max(1, round(base + rng.normal(scale=0.6))))) for _ in range(4)
    ]
    return text, sentences, ratings


def write_lexicon(path):
    with open(path, "w", encoding="utf-8") as fh:
        for emotion, words in EMOTION_WORDS.items():
            for word in words:
                fh.write(f"{word}\t{emotion}\t1\n")
                fh.write(f"{word}\t{VALENCE[emotion]}\t1\n")
        for word in FILLER:
            fh.write(f"{word}\tjoy\t0\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out_dir", nargs="?", default="demo", type=Path)
    parser.add_argument("--n-stories", type=int, default=42)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    rows = [["id", "prompt1", "prompt2", "prompt3", "text", "H", "J", "K", "N"]]
    conllu_parts = []
    for i in range(args.n_stories):
        prompts = PROMPT_TRIADS[i % len(PROMPT_TRIADS)]
        sid = f"story{i:03d}"
        text, sentences, ratings = make_story(sid, prompts, rng)
        rows.append([sid, *prompts, text, *map(str, ratings)])
        conllu_parts.append(chain_parse(sid, sentences))
    with open(args.out_dir / "stories.csv", "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    (args.out_dir / "stories.conllu").write_text("\n".join(conllu_parts), encoding="utf-8")
    write_lexicon(args.out_dir / "lexicon.tsv")

    (args.out_dir / "run.ini").write_text(
        "[storynets]\n"
        f"stories_csv = {args.out_dir / 'stories.csv'}\n"
        f"conllu = {args.out_dir / 'stories.conllu'}\n"
        f"lexicon = {args.out_dir / 'lexicon.tsv'}\n"
        f"out_dir = {args.out_dir / 'out'}\n"
        "models = linear,knn,decision_tree\n"
        "retention = 0.5\n"
        "folds = 4\n"
        "n_perm = 2000\n"
        "rng_seed = 7\n"
        "shap_samples = 500\n"
        "shap_max_rows = 20\n",
        encoding="utf-8",
    )
    print(f"demo corpus with {args.n_stories} stories written to {args.out_dir}/")
    print(f"next: storynets preprocess --config {args.out_dir / 'run.ini'}")


if __name__ == "__main__":
    main()
