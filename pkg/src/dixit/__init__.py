"""Dixit: a rules-exact game engine, probabilistic agents, a seeded
tournament simulator, and a networked play server."""

from .cards import CandidateLexicon, Card, Phrase, load_deck, load_lexicon, save_deck, save_lexicon
from .engine import (
    GameConfig,
    GameState,
    Phase,
    RoundScore,
    RoundState,
    TableCard,
    advance_round,
    decoy_submit,
    new_game,
    score_round,
    storyteller_submit,
    vote_submit,
)
from .association import AssociationModel, FeatureCosine, SeededRandom, TagJaccard, make_model
from .votes import (
    brute_force_vote_count_distribution,
    expected_votes,
    p_scoring,
    vote_count_distribution,
    voter_choice_probabilities,
)
from .agents import (
    AgentDecision,
    AgentSpec,
    DixitAgent,
    Explanation,
    GameContext,
    ObjectiveMode,
    build_context,
    choose_decoy,
    choose_vote,
    endgame_objective,
    estimate_vote_distribution,
    generate_candidate_phrases,
    storyteller_move_strategy1,
    storyteller_move_strategy2,
)
from .transcript import load_transcript, replay, save_transcript
from .tournament import TournamentConfig, TournamentReport, build_report, run_game, run_tournament

__version__ = "0.1.0"

__all__ = [
    "AgentDecision",
    "AgentSpec",
    "AssociationModel",
    "CandidateLexicon",
    "Card",
    "DixitAgent",
    "Explanation",
    "FeatureCosine",
    "GameConfig",
    "GameContext",
    "GameState",
    "ObjectiveMode",
    "Phase",
    "Phrase",
    "RoundScore",
    "RoundState",
    "SeededRandom",
    "TableCard",
    "TagJaccard",
    "TournamentConfig",
    "TournamentReport",
    "advance_round",
    "build_context",
    "build_report",
    "brute_force_vote_count_distribution",
    "choose_decoy",
    "choose_vote",
    "decoy_submit",
    "endgame_objective",
    "estimate_vote_distribution",
    "expected_votes",
    "generate_candidate_phrases",
    "load_deck",
    "load_lexicon",
    "load_transcript",
    "make_model",
    "new_game",
    "p_scoring",
    "replay",
    "run_game",
    "run_tournament",
    "save_deck",
    "save_lexicon",
    "save_transcript",
    "score_round",
    "storyteller_move_strategy1",
    "storyteller_move_strategy2",
    "storyteller_submit",
    "vote_count_distribution",
    "vote_submit",
    "voter_choice_probabilities",
]
