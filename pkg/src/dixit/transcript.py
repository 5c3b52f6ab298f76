"""Game transcripts: JSONL action logs sufficient for deterministic replay.

A transcript starts with a ``game_start`` record carrying the config (seed
included) and the deck ids in pre-shuffle order; every action follows in
play order, agent actions paired with ``explanation`` records; round results
and the final scoreboard are embedded so replays can be verified against
what was recorded.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .cards import Card, Phrase
from .engine import (
    GameConfig,
    GameState,
    Phase,
    advance_round,
    decoy_submit,
    new_game,
    storyteller_submit,
    vote_submit,
)
from .errors import CorruptTranscript, DixitError

TRANSCRIPT_VERSION = 1


def save_transcript(records: Iterable[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")


def load_transcript(path: str | Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptTranscript(f"{path}:{lineno}: {exc}") from exc
    return records


def replay(path: str | Path) -> GameState:
    """Re-run a transcript through the engine and verify the recorded outcome.

    The recorded seed and deck order drive the replay, so the reconstructed
    final state matches the original exactly; any divergence from the
    recorded round results or final scores raises CorruptTranscript.
    """
    records = load_transcript(path)
    return replay_records(records, source=str(path))


def replay_records(records: list[dict], source: str = "<records>") -> GameState:
    if not records or records[0].get("type") != "game_start":
        raise CorruptTranscript(f"{source}: transcript does not begin with game_start")

    head = records[0]
    try:
        config = GameConfig.from_dict(head["config"])
        deck = [Card(id=cid) for cid in head["deck"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptTranscript(f"{source}: bad game_start record: {exc}") from exc

    try:
        state = new_game(deck, config)
    except DixitError as exc:
        raise CorruptTranscript(f"{source}: cannot redeal: {exc}") from exc

    ended = False
    for i, rec in enumerate(records[1:], start=2):
        kind = rec.get("type")
        try:
            if kind == "phrase":
                storyteller_submit(state, rec["card"], Phrase(tuple(rec["tokens"])))
            elif kind == "decoy":
                decoy_submit(state, rec["seat"], rec["card"])
            elif kind == "vote":
                vote_submit(state, rec["seat"], rec["card"])
            elif kind == "advance":
                advance_round(state)
            elif kind == "round_result":
                _check_round_result(state, rec, source, i)
            elif kind == "game_end":
                _check_game_end(state, rec, source, i)
                ended = True
            elif kind == "explanation":
                if not rec.get("explanation"):
                    raise CorruptTranscript(f"{source}:{i}: empty explanation record")
            else:
                raise CorruptTranscript(f"{source}:{i}: unknown record type {kind!r}")
        except CorruptTranscript:
            raise
        except (DixitError, KeyError, TypeError, ValueError) as exc:
            raise CorruptTranscript(f"{source}:{i}: {kind} record rejected: {exc}") from exc

    if not ended:
        raise CorruptTranscript(f"{source}: truncated transcript (no game_end)")
    return state


def _check_round_result(state: GameState, rec: dict, source: str, lineno: int) -> None:
    if state.phase is not Phase.ROUND_SCORED or state.round.score is None:
        raise CorruptTranscript(f"{source}:{lineno}: round_result before the round was scored")
    score = state.round.score
    if rec["points"] != score.points or rec["n_v"] != score.n_v:
        raise CorruptTranscript(
            f"{source}:{lineno}: recorded round result {rec['points']}/{rec['n_v']} "
            f"!= replayed {score.points}/{score.n_v}"
        )


def _check_game_end(state: GameState, rec: dict, source: str, lineno: int) -> None:
    if state.phase is not Phase.GAME_OVER:
        raise CorruptTranscript(f"{source}:{lineno}: game_end before the game was over")
    if rec["scores"] != state.scores or rec["winners"] != state.winners:
        raise CorruptTranscript(
            f"{source}:{lineno}: recorded outcome {rec['scores']}/{rec['winners']} "
            f"!= replayed {state.scores}/{state.winners}"
        )
