"""A hosted game session: one scripted human seat against three agent seats,
showing the information-restricted PlayerViews, the message flow, and the
end-of-game explanation disclosure.

This drives the server's session core directly; `dixit serve` puts the same
thing behind a WebSocket (see PROTOCOL.md and frontend/ for the browser
client).

Run: python3 demos/05_hosted_game.py
"""

import json
from pathlib import Path

from dixit.agents import AgentSpec
from dixit.cards import load_deck, load_lexicon
from dixit.engine import GameConfig, Phase
from dixit.server.session import GameSession, SessionConfig

DATA = Path(__file__).resolve().parent.parent / "data"

deck = load_deck(DATA / "deck.jsonl")
lexicon = load_lexicon(DATA / "lexicon.jsonl", max_tokens=4)
session = GameSession(
    "demo",
    SessionConfig(game=GameConfig(n_players=4, rng_seed=77, target_score=8)),
    deck,
    lexicon,
    default_agent=AgentSpec(model="tag_jaccard", samples=300, candidate_limit=3),
)

me, _ = session.join_human("demo-human")
for _ in range(3):
    session.seat_agent()
out = session.start()
print(f"joined as seat {me}; 3 agent seats filled; game started")
print("(nothing the server sends reveals which seats are agents)")

view = next(env["payload"] for seat, env in out if seat == me and env["type"] == "StateUpdate")
print(f"\nmy first PlayerView: phase={view['phase']}, my hand={[c['id'] for c in view['hand']]}")
print("the view carries my hand only; votes and card owners stay hidden until scoring")


def my_move(state):
    if state.phase is Phase.AWAIT_STORYTELLER:
        card = min(state.hands[me], key=lambda c: c.id)
        return {"type": "SubmitPhrase", "seq": 1,
                "payload": {"card_id": card.id, "tokens": ["silver", "moon"]}}
    if state.phase is Phase.AWAIT_DECOYS:
        card = min(state.hands[me], key=lambda c: c.id)
        return {"type": "SubmitCard", "seq": 1, "payload": {"card_id": card.id}}
    own = state.round.submissions[me]
    pick = min(s.card_id for s in state.round.table if s.card_id != own)
    return {"type": "SubmitVote", "seq": 1, "payload": {"card_id": pick}}


while session.state.phase is not Phase.GAME_OVER:
    if me not in session.pending_human_seats():
        break
    out = session.handle_message(me, my_move(session.state))
    for seat, env in out:
        if seat == me and env["type"] == "RoundResult":
            p = env["payload"]
            print(f"round {p['round']}: n_V={p['n_v']}, points {p['points']}, scores {p['scores_after']}")

print(f"\ngame over; final scores {session.state.scores}, winners {session.state.winners}")

explanations = [env for env in session.outboxes[me] if env["type"] == "Explanation"]
print(f"\n{len(explanations)} agent explanations were disclosed at game end; the first one:")
print(json.dumps(explanations[0]["payload"], indent=2)[:600])
