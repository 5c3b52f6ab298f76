"""Authoritative Dixit rules: full-game state machine, round scoring, hand
replenishment, turn rotation, and end-of-game detection.

All game randomness (initial shuffle, table reveal order) comes from a single
stream seeded by ``GameConfig.rng_seed``, so an identical (deck order, config,
action sequence) triple always reproduces the identical final state.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Sequence

from .cards import Card, Phrase
from .errors import (
    AlreadySubmitted,
    CardNotInHand,
    DeckTooSmall,
    DuplicateCardId,
    OwnCardVote,
    PhraseTooLong,
    UnknownCard,
    UnknownPlayer,
    WrongPhase,
)

HAND_SIZE = 6


class Phase(str, Enum):
    AWAIT_STORYTELLER = "await_storyteller"
    AWAIT_DECOYS = "await_decoys"
    AWAIT_VOTES = "await_votes"
    ROUND_SCORED = "round_scored"
    GAME_OVER = "game_over"


@dataclass(frozen=True)
class GameConfig:
    n_players: int = 4
    phrase_limit: int = 4          # hard token cap K on phrases
    target_score: int = 30
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 4 <= self.n_players <= 6:
            raise ValueError(f"n_players must be in [4, 6], got {self.n_players}")
        if self.phrase_limit < 1:
            raise ValueError("phrase_limit must be >= 1")
        if self.target_score < 1:
            raise ValueError("target_score must be >= 1")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ValueError("rng_seed must fit in 64 unsigned bits")

    def to_dict(self) -> dict:
        return {
            "n_players": self.n_players,
            "phrase_limit": self.phrase_limit,
            "target_score": self.target_score,
            "rng_seed": self.rng_seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GameConfig":
        return cls(**{k: d[k] for k in ("n_players", "phrase_limit", "target_score", "rng_seed") if k in d})


class TableCard(NamedTuple):
    card_id: str
    owner: int   # hidden from players until the round is scored


@dataclass
class RoundScore:
    """Points earned this round, per player, plus the storyteller vote count."""

    points: list[int]
    n_v: int


@dataclass
class RoundState:
    phrase: Phrase | None = None
    submissions: dict[int, str] = field(default_factory=dict)   # player -> card id
    table: list[TableCard] = field(default_factory=list)        # revealed order
    votes: dict[int, str] = field(default_factory=dict)         # voter -> card id
    score: RoundScore | None = None


@dataclass
class GameState:
    config: GameConfig
    deck: list[Card]                 # undrawn cards, drawn from the end
    hands: list[list[Card]]
    scores: list[int]
    storyteller: int
    phase: Phase
    round: RoundState
    discard: list[Card] = field(default_factory=list)
    round_index: int = 0
    winners: list[int] | None = None
    rng: random.Random = field(default_factory=random.Random, repr=False)
    cards_by_id: dict[str, Card] = field(default_factory=dict, repr=False)

    @property
    def n_players(self) -> int:
        return self.config.n_players

    def hand_of(self, player: int) -> list[Card]:
        if not 0 <= player < self.n_players:
            raise UnknownPlayer(f"no player {player}")
        return self.hands[player]

    def card_in_hand(self, player: int, card_id: str) -> Card | None:
        for card in self.hands[player]:
            if card.id == card_id:
                return card
        return None

    def summary(self) -> dict:
        """Stable snapshot used for replay verification and tests."""
        return {
            "phase": self.phase.value,
            "scores": list(self.scores),
            "storyteller": self.storyteller,
            "round_index": self.round_index,
            "winners": list(self.winners) if self.winners is not None else None,
            "hands": [[c.id for c in hand] for hand in self.hands],
            "deck": [c.id for c in self.deck],
            "discard": [c.id for c in self.discard],
        }


def new_game(deck: Sequence[Card], config: GameConfig) -> GameState:
    """Shuffle the deck with the config seed and deal six cards to each player.

    Player 0 is the first storyteller. Cards are dealt round-robin, one at a
    time, starting with player 0.
    """
    seen: set[str] = set()
    for card in deck:
        if card.id in seen:
            raise DuplicateCardId(f"card id {card.id!r} appears more than once")
        seen.add(card.id)
    if len(deck) < HAND_SIZE * config.n_players:
        raise DeckTooSmall(
            f"deck has {len(deck)} cards, need {HAND_SIZE * config.n_players} "
            f"for {config.n_players} players"
        )

    rng = random.Random(config.rng_seed)
    pile = list(deck)
    rng.shuffle(pile)

    hands: list[list[Card]] = [[] for _ in range(config.n_players)]
    for _ in range(HAND_SIZE):
        for hand in hands:
            hand.append(pile.pop())

    return GameState(
        config=config,
        deck=pile,
        hands=hands,
        scores=[0] * config.n_players,
        storyteller=0,
        phase=Phase.AWAIT_STORYTELLER,
        round=RoundState(),
        rng=rng,
        cards_by_id={c.id: c for c in deck},
    )


def storyteller_submit(state: GameState, card_id: str, phrase: Phrase) -> GameState:
    """The storyteller plays a hidden card together with its phrase."""
    if state.phase is not Phase.AWAIT_STORYTELLER:
        raise WrongPhase(f"cannot submit a phrase during {state.phase.value}")
    if len(phrase) > state.config.phrase_limit:
        raise PhraseTooLong(
            f"phrase has {len(phrase)} tokens, limit is {state.config.phrase_limit}"
        )
    card = state.card_in_hand(state.storyteller, card_id)
    if card is None:
        raise CardNotInHand(f"{card_id!r} is not in the storyteller's hand")

    state.hands[state.storyteller].remove(card)
    state.round.phrase = phrase
    state.round.submissions[state.storyteller] = card.id
    state.phase = Phase.AWAIT_DECOYS
    return state


def decoy_submit(state: GameState, player: int, card_id: str) -> GameState:
    """A non-storyteller plays a decoy. The last decoy reveals the table."""
    if state.phase is not Phase.AWAIT_DECOYS:
        raise WrongPhase(f"cannot submit a decoy during {state.phase.value}")
    if not 0 <= player < state.n_players:
        raise UnknownPlayer(f"no player {player}")
    if player == state.storyteller:
        raise WrongPhase("the storyteller does not play a decoy")
    if player in state.round.submissions:
        raise AlreadySubmitted(f"player {player} already played a decoy")
    card = state.card_in_hand(player, card_id)
    if card is None:
        raise CardNotInHand(f"{card_id!r} is not in player {player}'s hand")

    state.hands[player].remove(card)
    state.round.submissions[player] = card.id

    if len(state.round.submissions) == state.n_players:
        _reveal_table(state)
        state.phase = Phase.AWAIT_VOTES
    return state


def _reveal_table(state: GameState) -> None:
    # Canonical order is by card id, so the seeded permutation is the only
    # thing that decides the reveal order; owner identity never enters.
    slots = sorted(
        (TableCard(card_id, owner) for owner, card_id in state.round.submissions.items()),
        key=lambda s: s.card_id,
    )
    state.rng.shuffle(slots)
    state.round.table = slots


def vote_submit(state: GameState, player: int, card_id: str) -> GameState:
    """A non-storyteller votes for a table card other than their own."""
    if state.phase is not Phase.AWAIT_VOTES:
        raise WrongPhase(f"cannot vote during {state.phase.value}")
    if not 0 <= player < state.n_players:
        raise UnknownPlayer(f"no player {player}")
    if player == state.storyteller:
        raise WrongPhase("the storyteller does not vote")
    if player in state.round.votes:
        raise AlreadySubmitted(f"player {player} already voted")
    if card_id not in {slot.card_id for slot in state.round.table}:
        raise UnknownCard(f"{card_id!r} is not on the table")
    if card_id == state.round.submissions[player]:
        raise OwnCardVote("players cannot vote for their own card")

    state.round.votes[player] = card_id

    if len(state.round.votes) == state.n_players - 1:
        state.round.score = score_round(
            state.round.submissions, state.round.votes, state.storyteller, state.n_players
        )
        state.phase = Phase.ROUND_SCORED
    return state


def score_round(
    submissions: dict[int, str],
    votes: dict[int, str],
    storyteller: int,
    n: int,
) -> RoundScore:
    """Piecewise round scoring from the submitted cards and cast votes.

    With n_v votes on the storyteller's card: if n_v is 0 or n-1 the
    storyteller gets 0 and every other player a base of 2; otherwise the
    storyteller gets 3, correct voters a base of 3, and wrong voters 0.
    Every non-storyteller additionally gets one point per vote their own
    decoy received.
    """
    story_card = submissions[storyteller]
    n_v = sum(1 for c in votes.values() if c == story_card)

    points = [0] * n
    everyone_or_noone = n_v == 0 or n_v == n - 1
    if not everyone_or_noone:
        points[storyteller] = 3

    for player in range(n):
        if player == storyteller:
            continue
        if everyone_or_noone:
            points[player] = 2
        elif votes[player] == story_card:
            points[player] = 3
        decoy_votes = sum(1 for c in votes.values() if c == submissions[player])
        points[player] += decoy_votes

    return RoundScore(points=points, n_v=n_v)


def advance_round(state: GameState) -> GameState:
    """Apply the round score, replenish hands, rotate the storyteller.

    The game ends when a score reaches the target, or when the deck runs out
    while drawing (players take as many cards as remain). The table cards go
    to the discard pile. Draws go one card at a time starting with the player
    left of the storyteller.
    """
    if state.phase is not Phase.ROUND_SCORED:
        raise WrongPhase(f"cannot advance during {state.phase.value}")

    assert state.round.score is not None
    for player, pts in enumerate(state.round.score.points):
        state.scores[player] += pts

    # table cards were removed from hands at submit time; they retire here
    for slot in state.round.table:
        state.discard.append(state.cards_by_id[slot.card_id])

    if max(state.scores) >= state.config.target_score:
        return _finish(state)

    drew_any = True
    while drew_any and state.deck:
        drew_any = False
        for offset in range(state.n_players):
            player = (state.storyteller + 1 + offset) % state.n_players
            if len(state.hands[player]) < HAND_SIZE and state.deck:
                state.hands[player].append(state.deck.pop())
                drew_any = True

    if not state.deck:
        return _finish(state)

    state.storyteller = (state.storyteller + 1) % state.n_players
    state.round = RoundState()
    state.round_index += 1
    state.phase = Phase.AWAIT_STORYTELLER
    return state


def _finish(state: GameState) -> GameState:
    best = max(state.scores)
    state.winners = [p for p, s in enumerate(state.scores) if s == best]
    state.phase = Phase.GAME_OVER
    return state
