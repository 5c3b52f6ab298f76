import random

import pytest

from dixit.cards import Card, CandidateLexicon, Phrase
from dixit.engine import GameConfig, GameState, Phase, RoundState, new_game


def make_cards(n, prefix="c", tags=None):
    width = max(3, len(str(n)))
    return [
        Card(id=f"{prefix}{i + 1:0{width}d}", tags=frozenset(tags[i] if tags else ()))
        for i in range(n)
    ]


def synthetic_state(hands_ids, seed=7, phrase_limit=4, target_score=30, deck_ids=()):
    """Build a mid-game state directly, bypassing the dealer."""
    n = len(hands_ids)
    all_ids = [cid for hand in hands_ids for cid in hand] + list(deck_ids)
    cards = {cid: Card(id=cid) for cid in all_ids}
    config = GameConfig(
        n_players=n, phrase_limit=phrase_limit, target_score=target_score, rng_seed=seed
    )
    return GameState(
        config=config,
        deck=[cards[cid] for cid in deck_ids],
        hands=[[cards[cid] for cid in hand] for hand in hands_ids],
        scores=[0] * n,
        storyteller=0,
        phase=Phase.AWAIT_STORYTELLER,
        round=RoundState(),
        rng=random.Random(seed),
        cards_by_id=cards,
    )


@pytest.fixture
def deck84():
    return make_cards(84)


@pytest.fixture
def deck24():
    return make_cards(24)


@pytest.fixture
def config4():
    return GameConfig(n_players=4, rng_seed=11)


@pytest.fixture
def game4(deck84, config4):
    return new_game(deck84, config4)


@pytest.fixture
def tiny_lexicon():
    return CandidateLexicon(
        phrases=[
            Phrase(("silver", "moon")),
            Phrase(("a", "difficult", "choice")),
            Phrase(("scary",)),
        ]
    )
