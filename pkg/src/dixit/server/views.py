"""Information-restricted projections of game state, one per player.

A PlayerView never contains another player's hand and never reveals card
ownership or votes before the round is scored. The scoreboard is always
present.
"""

from __future__ import annotations

from ..engine import GameState, Phase
from ..errors import UnknownPlayer


def project_state_for_player(state: GameState, player: int) -> dict:
    """Pure projection of (state, player) into the PlayerView wire dict."""
    if not 0 <= player < state.n_players:
        raise UnknownPlayer(f"no player {player}")

    revealed = state.phase in (Phase.AWAIT_VOTES, Phase.ROUND_SCORED, Phase.GAME_OVER)
    scored = state.phase in (Phase.ROUND_SCORED, Phase.GAME_OVER)
    rnd = state.round

    view: dict = {
        "seat": player,
        "phase": state.phase.value,
        "round": state.round_index,
        "storyteller": state.storyteller,
        "scores": list(state.scores),
        "target_score": state.config.target_score,
        "phrase_limit": state.config.phrase_limit,
        "deck_remaining": len(state.deck),
        "hand": [_card_view(c) for c in state.hands[player]],
        "phrase": list(rnd.phrase.tokens) if rnd.phrase is not None else None,
        "table": [slot.card_id for slot in rnd.table] if revealed and rnd.table else None,
        "your_submission": rnd.submissions.get(player),
        "your_vote": rnd.votes.get(player),
        "pending_decoys": _pending_decoys(state),
        "pending_votes": _pending_votes(state),
        "winners": list(state.winners) if state.winners is not None else None,
        "result": None,
    }

    if scored and rnd.score is not None:
        view["result"] = {
            "storyteller": state.storyteller,
            "phrase": list(rnd.phrase.tokens) if rnd.phrase is not None else None,
            "owners": {card: owner for owner, card in sorted(rnd.submissions.items())},
            "votes": {str(voter): card for voter, card in sorted(rnd.votes.items())},
            "points": list(rnd.score.points),
            "n_v": rnd.score.n_v,
        }
    return view


def _card_view(card) -> dict:
    view = {"id": card.id, "tags": sorted(card.tags)}
    if card.image_ref is not None:
        view["image_ref"] = card.image_ref
    return view


def _pending_decoys(state: GameState) -> int:
    if state.phase is not Phase.AWAIT_DECOYS:
        return 0
    return state.n_players - len(state.round.submissions)


def _pending_votes(state: GameState) -> int:
    if state.phase is not Phase.AWAIT_VOTES:
        return 0
    return (state.n_players - 1) - len(state.round.votes)
