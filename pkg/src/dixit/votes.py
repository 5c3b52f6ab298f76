"""Probabilistic vote machinery shared by agents and the simulator.

The round quantity of interest is n_V, the number of voters who picked the
storyteller's card. Under an independent-voter model each voter j picks the
storyteller's card with some probability p_j, so n_V is Poisson-binomial.
``vote_count_distribution`` computes its exact mass by dynamic-programming
convolution; ``brute_force_vote_count_distribution`` recomputes it by
enumerating the full joint space of voter choices and exists purely as a
test oracle for the fast path.
"""

from __future__ import annotations

import itertools
import math
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BadTemperature,
    EmptyTable,
    ProbabilityOutOfRange,
    SizeMismatch,
    TooLargeToEnumerate,
    UnknownCard,
)

MAX_ENUM_VOTERS = 5
MAX_ENUM_CARDS = 8


def voter_choice_probabilities(
    scores: Mapping[str, float],
    own_card: str,
    temperature: float = 1.0,
) -> dict[str, float]:
    """Softmax choice over the table, with zero mass on the voter's own card.

    p(c) is proportional to exp(score(c) / temperature) for every table card c
    other than own_card, which keeps probability exactly 0. Equal scores give
    equal mass.
    """
    if temperature <= 0 or not math.isfinite(temperature):
        raise BadTemperature(f"temperature must be positive, got {temperature}")
    if len(scores) < 2:
        raise EmptyTable("need at least two table cards to choose from")
    if own_card not in scores:
        raise UnknownCard(f"own card {own_card!r} not among the table scores")

    others = [c for c in scores if c != own_card]
    logits = np.array([scores[c] for c in others], dtype=float) / temperature
    logits -= logits.max()
    weights = np.exp(logits)
    probs = weights / weights.sum()

    out = {c: 0.0 for c in scores}
    for card, p in zip(others, probs):
        out[card] = float(p)
    return out


def vote_count_distribution(p: Sequence[float]) -> np.ndarray:
    """Exact Poisson-binomial mass of n_V over {0..len(p)} via DP convolution.

    Folds one voter at a time: after voter j, dist[k] holds the probability
    that exactly k of the first j voters picked the storyteller's card.
    """
    p = np.asarray(p, dtype=float)
    if p.size and (p.min() < 0.0 or p.max() > 1.0):
        raise ProbabilityOutOfRange(f"probabilities must lie in [0, 1], got {p}")

    dist = np.zeros(p.size + 1)
    dist[0] = 1.0
    for j, pj in enumerate(p):
        prev = dist[: j + 1].copy()
        dist[: j + 1] = prev * (1.0 - pj)
        dist[1: j + 2] += prev * pj
    return dist


def brute_force_vote_count_distribution(
    choice_models: Sequence[Mapping[str, float]],
    storyteller_card: str,
) -> np.ndarray:
    """Oracle: enumerate every joint assignment of voter choices.

    Each entry of choice_models maps every table card to that voter's pick
    probability (their own card carries mass 0). Only instances with at most
    5 voters and 8 table cards are enumerable (joint space <= 8^5).
    """
    if len(choice_models) > MAX_ENUM_VOTERS:
        raise TooLargeToEnumerate(f"{len(choice_models)} voters > {MAX_ENUM_VOTERS}")
    for model in choice_models:
        if len(model) > MAX_ENUM_CARDS:
            raise TooLargeToEnumerate(f"{len(model)} table cards > {MAX_ENUM_CARDS}")

    n_voters = len(choice_models)
    dist = np.zeros(n_voters + 1)
    supports = [
        [(card, prob) for card, prob in model.items() if prob > 0.0]
        for model in choice_models
    ]
    for outcome in itertools.product(*supports):
        joint = 1.0
        hits = 0
        for card, prob in outcome:
            joint *= prob
            if card == storyteller_card:
                hits += 1
        dist[hits] += joint
    return dist


def p_scoring(dist: Sequence[float], n: int) -> float:
    """Probability that n_V lands strictly between 0 and n-1 (the scoring band)."""
    dist = np.asarray(dist, dtype=float)
    if dist.size != n:
        raise SizeMismatch(f"distribution over {dist.size} outcomes, expected {n}")
    return float(dist[1: n - 1].sum())


def expected_votes(dist: Sequence[float]) -> float:
    """Mean of a vote-count distribution."""
    dist = np.asarray(dist, dtype=float)
    return float(np.arange(dist.size) @ dist)
