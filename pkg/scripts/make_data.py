"""Regenerate the sample deck and lexicon files under data/.

The outputs are committed; rerun only when the generation recipe changes.
"""

import itertools
from pathlib import Path

import numpy as np

from dixit.cards import DEMO_TAGS, CandidateLexicon, Phrase, make_demo_deck, save_deck, save_lexicon

ROOT = Path(__file__).resolve().parent.parent
FILLER = ("the", "a", "lost", "last", "silent", "broken", "hidden", "golden")


def build_lexicon(rng: np.random.Generator, n_features: int = 8) -> CandidateLexicon:
    phrases: list[Phrase] = []
    for tag in DEMO_TAGS:
        phrases.append(Phrase((tag,)))
    for first, second in itertools.islice(itertools.combinations(DEMO_TAGS, 2), 0, 60, 3):
        phrases.append(Phrase((first, second)))
    for i, tag in enumerate(DEMO_TAGS[:16]):
        filler = FILLER[i % len(FILLER)]
        phrases.append(Phrase((filler, tag)))
    for i, (a, b) in enumerate(zip(DEMO_TAGS[::2], DEMO_TAGS[1::2])):
        if i % 2 == 0:
            phrases.append(Phrase((FILLER[i % len(FILLER)], a, "and", b)))

    vectors = {}
    for phrase in phrases:
        vec = rng.normal(size=n_features)
        vectors[phrase.text] = vec / np.linalg.norm(vec)
    return CandidateLexicon(phrases=phrases, vectors=vectors)


def main() -> None:
    out = ROOT / "data"
    out.mkdir(exist_ok=True)
    deck = make_demo_deck(84, seed=2718, n_features=8)
    save_deck(deck, out / "deck.jsonl")
    lexicon = build_lexicon(np.random.default_rng(3141))
    save_lexicon(lexicon, out / "lexicon.jsonl")
    print(f"wrote {len(deck)} cards and {len(lexicon)} phrases to {out}")


if __name__ == "__main__":
    main()
