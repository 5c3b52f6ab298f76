"""A small seeded tournament: four different agents, transcripts on disk,
the statistics report, and a deterministic replay check.

Run: python3 demos/04_tournament.py
"""

import tempfile
from pathlib import Path

from dixit.agents import AgentSpec
from dixit.engine import GameConfig
from dixit.tournament import TournamentConfig, run_tournament
from dixit.transcript import replay

DATA = Path(__file__).resolve().parent.parent / "data"

config = TournamentConfig(
    games=12,
    agents=[
        AgentSpec(model="tag_jaccard", strategy="strategy1", samples=300, candidate_limit=4, seed=1),
        AgentSpec(model="tag_jaccard", strategy="strategy2", samples=300, candidate_limit=4, seed=2),
        AgentSpec(model="tag_jaccard", strategy="random_phrase", seed=3),
        AgentSpec(model="seeded_random", strategy="strategy1", samples=300, candidate_limit=4, seed=4),
    ],
    deck_path=str(DATA / "deck.jsonl"),
    lexicon_path=str(DATA / "lexicon.jsonl"),
    game=GameConfig(n_players=4, target_score=30),
    master_seed=2026,
)

out = Path(tempfile.mkdtemp(prefix="dixit-demo-"))
print(f"playing {config.games} games into {out} ...")
report = run_tournament(config, out)
print()
print(report.to_table())
print()
print("agents 0/1 play the informed strategies, agent 2 utters random phrases,")
print("agent 3 has no real association signal at all")

first = sorted(out.glob("game_*.jsonl"))[0]
state = replay(first)
print(f"\nreplay check on {first.name}: final scores {state.scores}, winners {state.winners}")
print("every transcript replays to the exact recorded outcome (the replayer verifies it)")
