"""One full round of the game engine, narrated.

Run: python3 demos/01_engine_walkthrough.py
"""

from dixit.cards import Phrase, make_demo_deck
from dixit.engine import (
    GameConfig,
    advance_round,
    decoy_submit,
    new_game,
    storyteller_submit,
    vote_submit,
)

deck = make_demo_deck(84, seed=7)
state = new_game(deck, GameConfig(n_players=4, rng_seed=42))

print("== setup ==")
print(f"players: {state.n_players}, deck after dealing: {len(state.deck)} cards")
for seat, hand in enumerate(state.hands):
    print(f"  seat {seat} hand: {[c.id for c in hand]}")

teller = state.storyteller
card = state.hands[teller][0]
phrase = Phrase.from_text("silver moon rising")
print(f"\n== storyteller turn ==\nseat {teller} plays {card.id} face down and utters {phrase.text!r}")
storyteller_submit(state, card.id, phrase)

print("\n== decoys ==")
for seat in range(4):
    if seat == teller:
        continue
    decoy = state.hands[seat][0]
    print(f"seat {seat} plays decoy {decoy.id}")
    decoy_submit(state, seat, decoy.id)

print(f"\ntable revealed (seeded shuffle): {[slot.card_id for slot in state.round.table]}")
print("owners stay hidden until the round is scored")

print("\n== votes ==")
story_card = state.round.submissions[teller]
votes = {1: story_card, 2: story_card, 3: state.round.submissions[1]}
for seat, choice in votes.items():
    print(f"seat {seat} votes for {choice}")
    vote_submit(state, seat, choice)

score = state.round.score
print(f"\n== scoring ==\nvotes on the storyteller's card: n_V = {score.n_v}")
print(f"points this round: {score.points}")
print("(storyteller scores 3 only when somebody, but not everybody, found the card;")
print(" every other player gets +1 per vote lured to their decoy)")

advance_round(state)
print(f"\n== next round ==\nscores: {state.scores}, storyteller is now seat {state.storyteller}")
print(f"hands replenished to {[len(h) for h in state.hands]} cards, {len(state.deck)} left in the deck")
