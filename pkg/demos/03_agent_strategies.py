"""Agent decisions with their explanations: both storyteller strategies,
decoy choice, voting, and the end-game objective switch.

Run: python3 demos/03_agent_strategies.py
"""

import json

import numpy as np

from dixit.agents import (
    GameContext,
    choose_decoy,
    choose_vote,
    endgame_objective,
    storyteller_move_strategy1,
    storyteller_move_strategy2,
)
from dixit.association import TagJaccard
from dixit.cards import CandidateLexicon, Phrase, make_demo_deck

deck = make_demo_deck(30, seed=12)
hand, pool = deck[:6], deck[6:]
lexicon = CandidateLexicon(
    phrases=[Phrase.from_text(t) for t in (
        "moon", "silver moon", "the locked door", "storm at sea",
        "a difficult choice", "shadow in the garden",
    )]
)


def fresh_ctx(seed=5):
    return GameContext(
        n_players=4, seat=0, hand=list(hand), scores=[0, 0, 0, 0],
        storyteller=0, target_score=30, unseen=list(pool),
        model=TagJaccard(), temperature=0.5, samples=1500,
        rng=np.random.default_rng(seed),
    )


def show(title, decision):
    print(f"\n== {title} ==")
    action = decision.card_id + (f" / {' '.join(decision.tokens)!r}" if decision.tokens else "")
    print(f"chosen: {action}")
    exp = decision.explanation
    print(f"strategy: {exp.strategy}, objective: {exp.objective:.4f}")
    if exp.distribution:
        print("estimated n_V distribution:", [round(x, 3) for x in exp.distribution])
    for alt in exp.alternatives:
        print(f"  rejected: {alt.action}  (objective {alt.objective:.4f})")
    if exp.notes:
        print(f"notes: {json.dumps(exp.notes)}")


print("hand:", [f"{c.id}:{'/'.join(sorted(c.tags))}" for c in hand])

show("storyteller strategy #1: maximize P(0 < n_V < n-1)",
     storyteller_move_strategy1(fresh_ctx(), lexicon, candidate_limit=3))

show("storyteller strategy #2: minimize E[n_V] with P(n_V >= 1) above the floor",
     storyteller_move_strategy2(fresh_ctx(), lexicon, candidate_limit=3))

phrase = Phrase.from_text("storm at sea")
show(f"decoy choice against {phrase.text!r}: maximize expected votes lured",
     choose_decoy(phrase, fresh_ctx()))

table = pool[:3] + [hand[0]]
show(f"vote: most believable storyteller card for {phrase.text!r}",
     choose_vote(table, hand[0].id, phrase, fresh_ctx()))

print("\n== end-game switch ==")
ctx = fresh_ctx()
ctx.scores = [4, 27, 11, 8]   # seat 1 is storytelling within 3 of the target
ctx.storyteller = 1
print(f"scoreboard {ctx.scores}, storyteller seat 1, target 30 -> mode {endgame_objective(ctx).value}")
show("same vote in block mode: least believable card, to deny the storyteller",
     choose_vote(table, hand[0].id, phrase, ctx))
