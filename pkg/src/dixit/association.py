"""Card-phrase association models.

An association model scores how well a phrase fits a card; every agent
decision reduces to comparing these scores. The three baselines here are
deliberately simple stand-ins for real perception: tag overlap, feature
vector similarity, and a deterministic pseudo-random scorer for null
experiments.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod

import numpy as np

from .cards import CandidateLexicon, Card, Phrase


class AssociationModel(ABC):
    """Scores (card, phrase) pairs. Deterministic and finite by contract."""

    name = "abstract"

    @abstractmethod
    def score(self, card: Card, phrase: Phrase) -> float:
        ...


class TagJaccard(AssociationModel):
    """Jaccard overlap between the card's tags and the phrase's tokens."""

    name = "tag_jaccard"

    def score(self, card: Card, phrase: Phrase) -> float:
        tokens = {t.lower() for t in phrase.tokens}
        union = card.tags | tokens
        if not union:
            return 0.0
        return len(card.tags & tokens) / len(union)


class FeatureCosine(AssociationModel):
    """Cosine similarity between card features and a lexicon phrase vector.

    Pairs with no card features, no phrase vector, or a zero vector score 0.
    """

    name = "feature_cosine"

    def __init__(self, lexicon: CandidateLexicon):
        self._vectors = {text: np.asarray(v, dtype=float) for text, v in lexicon.vectors.items()}

    def score(self, card: Card, phrase: Phrase) -> float:
        vec = self._vectors.get(phrase.text)
        if vec is None or card.features is None:
            return 0.0
        feat = np.asarray(card.features, dtype=float)
        if feat.shape != vec.shape:
            return 0.0
        denom = np.linalg.norm(feat) * np.linalg.norm(vec)
        if denom == 0.0:
            return 0.0
        return float(feat @ vec / denom)


class SeededRandom(AssociationModel):
    """Deterministic hash-based score in [0, 1), stable across runs and hosts.

    Useful as a null model: it carries no signal about the cards, so agents
    built on it play a symmetric game.
    """

    name = "seeded_random"

    def __init__(self, seed: int = 0):
        self.seed = int(seed)

    def score(self, card: Card, phrase: Phrase) -> float:
        key = f"{self.seed}\x00{card.id}\x00{phrase.text}".encode()
        digest = hashlib.sha256(key).digest()
        return int.from_bytes(digest[:8], "big") / 2.0 ** 64


MODEL_NAMES = ("tag_jaccard", "feature_cosine", "seeded_random")


def make_model(name: str, lexicon: CandidateLexicon | None = None, seed: int = 0) -> AssociationModel:
    """Build a baseline model by name; feature_cosine needs the lexicon vectors."""
    if name == "tag_jaccard":
        return TagJaccard()
    if name == "feature_cosine":
        if lexicon is None:
            raise ValueError("feature_cosine needs a lexicon for its phrase vectors")
        return FeatureCosine(lexicon)
    if name == "seeded_random":
        return SeededRandom(seed)
    raise ValueError(f"unknown association model {name!r}; choose from {MODEL_NAMES}")
