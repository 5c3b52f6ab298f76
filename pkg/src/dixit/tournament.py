"""Seeded headless tournaments of bot agents with replayable transcripts.

Seats rotate deterministically across games so no agent always goes first.
Every statistic in the report is a pure fold over the emitted transcripts:
``run_tournament`` writes the transcripts and then rebuilds its report from
those files alone.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .agents import AgentSpec, DixitAgent
from .cards import CandidateLexicon, Card, Phrase, load_deck, load_lexicon
from .engine import (
    GameConfig,
    Phase,
    advance_round,
    decoy_submit,
    new_game,
    storyteller_submit,
    vote_submit,
)
from .transcript import TRANSCRIPT_VERSION, load_transcript, save_transcript


def derive_seed(master: int, *parts: object) -> int:
    """Stable 64-bit sub-seed from a master seed and a label path."""
    key = ":".join(str(p) for p in (master, *parts)).encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big")


@dataclass
class TournamentConfig:
    games: int
    agents: list[AgentSpec]
    deck_path: str
    lexicon_path: str
    game: GameConfig = field(default_factory=GameConfig)
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.games < 1:
            raise ValueError("games must be >= 1")
        if len(self.agents) != self.game.n_players:
            raise ValueError(
                f"{len(self.agents)} agent specs for {self.game.n_players} seats"
            )

    @classmethod
    def from_file(cls, path: str | Path) -> "TournamentConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        base = path.parent
        game = GameConfig.from_dict(raw.get("game", {}))
        return cls(
            games=int(raw.get("games", 1)),
            agents=[AgentSpec.from_dict(a) for a in raw["agents"]],
            deck_path=str((base / raw["deck"]).resolve()),
            lexicon_path=str((base / raw["lexicon"]).resolve()),
            game=game,
            master_seed=int(raw.get("master_seed", 0)),
        )


def run_game(
    deck: Sequence[Card],
    config: GameConfig,
    agents: Sequence[DixitAgent],
    seat_agents: Sequence[int] | None = None,
    game_index: int = 0,
) -> list[dict]:
    """Play one full game between bot seats; returns the transcript records.

    ``agents[s]`` plays physical seat s; ``seat_agents[s]`` names the config
    seat sitting there, for per-agent statistics under rotation.
    """
    state = new_game(deck, config)
    n = config.n_players
    seat_agents = list(seat_agents) if seat_agents is not None else list(range(n))
    records: list[dict] = [
        {
            "type": "game_start",
            "version": TRANSCRIPT_VERSION,
            "game_index": game_index,
            "config": config.to_dict(),
            "deck": [c.id for c in deck],
            "seat_agents": seat_agents,
        }
    ]

    def record_action(kind: str, seat: int, decision) -> None:
        rec = {"type": kind, "seat": seat, "card": decision.card_id}
        if decision.tokens is not None:
            rec["tokens"] = list(decision.tokens)
        records.append(rec)
        records.append(
            {
                "type": "explanation",
                "seat": seat,
                "action": kind,
                "explanation": decision.explanation.to_dict(),
            }
        )

    while state.phase is not Phase.GAME_OVER:
        teller = state.storyteller
        decision = agents[teller].storyteller_move(state, teller)
        storyteller_submit(state, decision.card_id, Phrase(tuple(decision.tokens)))
        record_action("phrase", teller, decision)

        for seat in range(n):
            if seat == teller:
                continue
            decision = agents[seat].decoy_move(state, seat)
            decoy_submit(state, seat, decision.card_id)
            record_action("decoy", seat, decision)

        for seat in range(n):
            if seat == teller:
                continue
            decision = agents[seat].vote_move(state, seat)
            vote_submit(state, seat, decision.card_id)
            record_action("vote", seat, decision)

        assert state.round.score is not None
        records.append(
            {
                "type": "round_result",
                "round": state.round_index,
                "storyteller": teller,
                "n_v": state.round.score.n_v,
                "points": list(state.round.score.points),
                "votes": {str(v): c for v, c in sorted(state.round.votes.items())},
                "owners": {c: o for o, c in sorted(state.round.submissions.items())},
            }
        )
        records.append({"type": "advance"})
        advance_round(state)

    records.append(
        {
            "type": "game_end",
            "scores": list(state.scores),
            "winners": list(state.winners or []),
            "rounds": state.round_index + 1,
        }
    )
    return records


@dataclass
class SeatReport:
    agent: int
    games: int = 0
    wins: int = 0
    draws: int = 0
    win_share: float = 0.0
    final_scores: list[int] = field(default_factory=list)
    storyteller_rounds: int = 0
    storyteller_successes: int = 0
    votes_on_story_card: int = 0

    @property
    def win_rate(self) -> float:
        return self.win_share / self.games if self.games else 0.0

    @property
    def mean_score(self) -> float:
        return float(np.mean(self.final_scores)) if self.final_scores else 0.0

    @property
    def std_score(self) -> float:
        return float(np.std(self.final_scores)) if self.final_scores else 0.0

    @property
    def storyteller_success_rate(self) -> float:
        if not self.storyteller_rounds:
            return 0.0
        return self.storyteller_successes / self.storyteller_rounds

    @property
    def mean_n_v(self) -> float:
        if not self.storyteller_rounds:
            return 0.0
        return self.votes_on_story_card / self.storyteller_rounds

    def to_dict(self) -> dict:
        return {
            "agent": self.agent,
            "games": self.games,
            "wins": self.wins,
            "draws": self.draws,
            "win_share": self.win_share,
            "win_rate": self.win_rate,
            "mean_score": self.mean_score,
            "std_score": self.std_score,
            "storyteller_rounds": self.storyteller_rounds,
            "storyteller_success_rate": self.storyteller_success_rate,
            "mean_n_v": self.mean_n_v,
        }


@dataclass
class TournamentReport:
    games: int
    rounds: int
    seats: list[SeatReport]

    def to_dict(self) -> dict:
        return {
            "games": self.games,
            "rounds": self.rounds,
            "seats": [s.to_dict() for s in self.seats],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        header = (
            f"{'agent':>5}  {'wins':>5}  {'draws':>5}  {'win rate':>8}  "
            f"{'score':>12}  {'st.success':>10}  {'mean n_V':>8}"
        )
        lines = [f"games: {self.games}   rounds: {self.rounds}", header, "-" * len(header)]
        for s in self.seats:
            lines.append(
                f"{s.agent:>5}  {s.wins:>5}  {s.draws:>5}  {s.win_rate:>8.3f}  "
                f"{s.mean_score:>6.2f}±{s.std_score:<5.2f}  "
                f"{s.storyteller_success_rate:>10.3f}  {s.mean_n_v:>8.3f}"
            )
        return "\n".join(lines)


def build_report(transcripts: Iterable[list[dict]]) -> TournamentReport:
    """Aggregate statistics across transcripts; a pure fold over the records."""
    seats: dict[int, SeatReport] = {}
    games = 0
    rounds = 0

    def seat(agent: int) -> SeatReport:
        if agent not in seats:
            seats[agent] = SeatReport(agent=agent)
        return seats[agent]

    for records in transcripts:
        head = records[0]
        seat_agents = head.get("seat_agents") or list(range(head["config"]["n_players"]))
        games += 1
        for rec in records[1:]:
            if rec["type"] == "round_result":
                rounds += 1
                teller = seat_agents[rec["storyteller"]]
                rep = seat(teller)
                rep.storyteller_rounds += 1
                rep.votes_on_story_card += rec["n_v"]
                if rec["points"][rec["storyteller"]] == 3:
                    rep.storyteller_successes += 1
            elif rec["type"] == "game_end":
                winners = rec["winners"]
                for phys, agent in enumerate(seat_agents):
                    rep = seat(agent)
                    rep.games += 1
                    rep.final_scores.append(rec["scores"][phys])
                    if phys in winners:
                        rep.win_share += 1.0 / len(winners)
                        if len(winners) == 1:
                            rep.wins += 1
                        else:
                            rep.draws += 1

    ordered = [seats[a] for a in sorted(seats)]
    return TournamentReport(games=games, rounds=rounds, seats=ordered)


def run_tournament(config: TournamentConfig, out_dir: str | Path) -> TournamentReport:
    """Play ``config.games`` full games, write one transcript per game, and
    report statistics folded back out of the transcript files."""
    deck = load_deck(config.deck_path)
    lexicon = load_lexicon(config.lexicon_path, max_tokens=config.game.phrase_limit)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    n = config.game.n_players
    paths = []
    for g in range(config.games):
        rotation = g % n
        seat_agents = [(s - rotation) % n for s in range(n)]
        agents = [
            DixitAgent(
                config.agents[seat_agents[s]],
                lexicon,
                seed=derive_seed(config.master_seed, "agent", g, s),
            )
            for s in range(n)
        ]
        game_config = dataclasses.replace(
            config.game, rng_seed=derive_seed(config.master_seed, "game", g)
        )
        records = run_game(deck, game_config, agents, seat_agents=seat_agents, game_index=g)
        path = out / f"game_{g:04d}.jsonl"
        save_transcript(records, path)
        paths.append(path)

    report = build_report(load_transcript(p) for p in paths)
    (out / "report.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "report.txt").write_text(report.to_table() + "\n", encoding="utf-8")
    return report
