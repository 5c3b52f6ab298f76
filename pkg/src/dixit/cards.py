"""Cards, phrases, and the JSONL deck / lexicon file formats.

Deck files hold one JSON object per line:
    {"id": "c001", "tags": ["moon", "ladder"], "features": [0.1, ...]?, "image_ref": "..."?}

Lexicon files hold one JSON object per line:
    {"tokens": ["climbing", "the", "sky"], "vector": [0.3, ...]?}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyLexicon


@dataclass(frozen=True)
class Phrase:
    """An ordered sequence of whitespace-free tokens."""

    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("phrase needs at least one token")
        for tok in self.tokens:
            if not tok or any(ch.isspace() for ch in tok):
                raise ValueError(f"bad phrase token: {tok!r}")
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def from_text(cls, text: str) -> "Phrase":
        """Tokenize on whitespace; token count is the phrase length."""
        return cls(tuple(text.split()))

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __str__(self) -> str:
        return self.text

    def sort_key(self) -> tuple[str, ...]:
        return self.tokens


@dataclass(frozen=True)
class Card:
    """One game card. The engine never interprets image_ref."""

    id: str
    tags: frozenset[str] = frozenset()
    features: tuple[float, ...] | None = None
    image_ref: str | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.tags, frozenset):
            object.__setattr__(self, "tags", frozenset(self.tags))
        if self.features is not None and not isinstance(self.features, tuple):
            object.__setattr__(self, "features", tuple(float(x) for x in self.features))

    def to_record(self) -> dict:
        rec: dict = {"id": self.id, "tags": sorted(self.tags)}
        if self.features is not None:
            rec["features"] = list(self.features)
        if self.image_ref is not None:
            rec["image_ref"] = self.image_ref
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "Card":
        return cls(
            id=str(rec["id"]),
            tags=frozenset(str(t).lower() for t in rec.get("tags", [])),
            features=tuple(rec["features"]) if rec.get("features") is not None else None,
            image_ref=rec.get("image_ref"),
        )


def load_deck(path: str | Path) -> list[Card]:
    """Parse a JSONL deck file. Errors carry the 1-based line number."""
    cards: list[Card] = []
    feature_len: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                card = Card.from_record(json.loads(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad deck record: {exc}") from exc
            if card.features is not None:
                if feature_len is None:
                    feature_len = len(card.features)
                elif len(card.features) != feature_len:
                    raise ValueError(
                        f"{path}:{lineno}: feature length {len(card.features)} "
                        f"!= {feature_len} seen earlier in the deck"
                    )
            cards.append(card)
    return cards


def save_deck(cards: Iterable[Card], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for card in cards:
            fh.write(json.dumps(card.to_record()) + "\n")


@dataclass
class CandidateLexicon:
    """A finite pool of candidate phrases, optionally with phrase vectors."""

    phrases: list[Phrase]
    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.phrases:
            raise EmptyLexicon("lexicon has no phrases")

    def __len__(self) -> int:
        return len(self.phrases)

    def __iter__(self):
        return iter(self.phrases)

    def vector_for(self, phrase: Phrase) -> np.ndarray | None:
        return self.vectors.get(phrase.text)


def load_lexicon(path: str | Path, max_tokens: int | None = None) -> CandidateLexicon:
    """Parse a JSONL lexicon file. Errors carry the 1-based line number."""
    phrases: list[Phrase] = []
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                phrase = Phrase(tuple(str(t) for t in rec["tokens"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad lexicon record: {exc}") from exc
            if max_tokens is not None and len(phrase) > max_tokens:
                raise ValueError(
                    f"{path}:{lineno}: phrase has {len(phrase)} tokens, limit is {max_tokens}"
                )
            phrases.append(phrase)
            if rec.get("vector") is not None:
                vectors[phrase.text] = np.asarray(rec["vector"], dtype=float)
    return CandidateLexicon(phrases=phrases, vectors=vectors)


def save_lexicon(lexicon: CandidateLexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for phrase in lexicon.phrases:
            rec: dict = {"tokens": list(phrase.tokens)}
            vec = lexicon.vector_for(phrase)
            if vec is not None:
                rec["vector"] = [float(x) for x in vec]
            fh.write(json.dumps(rec) + "\n")


def make_demo_deck(
    n_cards: int,
    seed: int = 0,
    tag_pool: Sequence[str] | None = None,
    n_features: int | None = None,
) -> list[Card]:
    """Generate a synthetic tagged deck, mainly for tests and demos."""
    rng = np.random.default_rng(seed)
    pool = list(tag_pool) if tag_pool is not None else list(DEMO_TAGS)
    width = max(3, len(str(n_cards)))
    cards = []
    for i in range(n_cards):
        k = int(rng.integers(3, min(7, len(pool))))
        tags = frozenset(rng.choice(pool, size=k, replace=False).tolist())
        features = None
        if n_features:
            vec = rng.normal(size=n_features)
            features = tuple(float(x) for x in vec / np.linalg.norm(vec))
        cards.append(Card(id=f"c{i + 1:0{width}d}", tags=tags, features=features))
    return cards


DEMO_TAGS = (
    "moon", "ladder", "clock", "whale", "door", "mirror", "forest", "crown",
    "storm", "candle", "river", "mask", "tower", "garden", "shadow", "violin",
    "anchor", "balloon", "bridge", "compass", "feather", "lantern", "maze",
    "ocean", "piano", "raven", "snail", "telescope", "umbrella", "wolf",
    "island", "key", "train", "cloud", "giant", "chess", "book", "star",
)
