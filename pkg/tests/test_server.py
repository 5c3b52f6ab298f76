import json
from pathlib import Path

import pytest

from dixit.agents import AgentSpec
from dixit.cards import load_deck, load_lexicon
from dixit.engine import GameConfig, Phase
from dixit.errors import ProtocolViolation, SeatCountInvalid, UnknownPlayer
from dixit.server.protocol import CLIENT_TYPES, parse_client_message
from dixit.server.session import GameSession, SessionConfig, replay_inbound_log
from dixit.server.views import project_state_for_player

from conftest import synthetic_state

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="module")
def deck():
    return load_deck(DATA / "deck.jsonl")


@pytest.fixture(scope="module")
def lexicon():
    return load_lexicon(DATA / "lexicon.jsonl", max_tokens=4)


def fast_agent(seed=0):
    return AgentSpec(model="tag_jaccard", samples=50, candidate_limit=2, seed=seed)


def make_session(deck, lexicon, n_players=4, seed=123, target=30, agent_limit=None):
    config = SessionConfig(
        game=GameConfig(n_players=n_players, rng_seed=seed, target_score=target),
        agent_seat_limit=agent_limit,
    )
    return GameSession("t1", config, deck, lexicon, default_agent=fast_agent())


def client_msg(msg_type, **payload):
    return {"type": msg_type, "seq": 1, "payload": payload}


# -- projection ------------------------------------------------------------------

def test_view_never_contains_other_hands(game4):
    for player in range(4):
        view = project_state_for_player(game4, player)
        own = {c["id"] for c in view["hand"]}
        assert own == {c.id for c in game4.hands[player]}
        blob = json.dumps(view)
        for other in range(4):
            if other == player:
                continue
            for card in game4.hands[other]:
                assert f'"{card.id}"' not in blob


def test_view_hides_owners_and_votes_until_scored():
    from dixit.cards import Phrase
    from dixit.engine import decoy_submit, storyteller_submit, vote_submit

    state = synthetic_state([["s1", "x1"], ["d1", "x2"], ["d2", "x3"], ["d3", "x4"]])
    storyteller_submit(state, "s1", Phrase(("clue",)))
    for p in (1, 2, 3):
        decoy_submit(state, p, state.hands[p][0].id)
    assert state.phase is Phase.AWAIT_VOTES

    vote_submit(state, 1, "s1")
    view = project_state_for_player(state, 2)
    blob = json.dumps(view)
    assert view["table"] is not None
    assert view["result"] is None
    assert view["your_vote"] is None
    assert '"votes"' not in blob and '"owners"' not in blob
    assert view["pending_votes"] == 2

    vote_submit(state, 2, "s1")
    vote_submit(state, 3, "s1")
    assert state.phase is Phase.ROUND_SCORED
    view = project_state_for_player(state, 2)
    assert view["result"]["owners"] == {"s1": 0, "d1": 1, "d2": 2, "d3": 3}
    assert view["result"]["votes"] == {"1": "s1", "2": "s1", "3": "s1"}
    assert view["result"]["n_v"] == 3


def test_view_unknown_player(game4):
    with pytest.raises(UnknownPlayer):
        project_state_for_player(game4, 7)


# -- lobby -----------------------------------------------------------------------

def test_lobby_fills_and_starts(deck, lexicon):
    session = make_session(deck, lexicon)
    session.join_human("alice")
    session.join_human("bob")
    with pytest.raises(SeatCountInvalid):
        session.start()
    session.seat_agent()
    session.seat_agent()
    out = session.start()
    assert session.started
    types = [env["type"] for _, env in out]
    assert "GameStart" in types and "StateUpdate" in types


def test_lobby_agent_seat_limit(deck, lexicon):
    session = make_session(deck, lexicon, agent_limit=1)
    session.seat_agent()
    with pytest.raises(ProtocolViolation):
        session.seat_agent()


def test_join_after_start_rejected(deck, lexicon):
    session = make_session(deck, lexicon)
    for name in ("a", "b", "c", "d"):
        session.join_human(name)
    session.start()
    with pytest.raises(ProtocolViolation):
        session.join_human("late")


def test_reconnect_by_token(deck, lexicon):
    session = make_session(deck, lexicon)
    seat, _ = session.join_human("alice")
    token = session.token_for(seat)
    again, out = session.join_human("whoever", token=token)
    assert again == seat
    assert out  # resync message


def test_names_and_kinds_never_leave_the_server(deck, lexicon):
    session = make_session(deck, lexicon)
    session.join_human("very-secret-name")
    for _ in range(3):
        session.seat_agent()
    out = session.start()
    blob = json.dumps([env for _, env in out])
    assert "very-secret-name" not in blob
    assert "agent" not in blob and "human" not in blob


# -- protocol -----------------------------------------------------------------------

def test_parse_rejects_foreign_types():
    for bad in ("Chat", "LobbyState", "StateUpdate", None, 42):
        with pytest.raises(ProtocolViolation):
            parse_client_message({"type": bad, "payload": {}})
    for good in CLIENT_TYPES:
        parse_client_message({"type": good, "payload": {}})


def test_illegal_message_becomes_error_without_state_change(deck, lexicon):
    session = make_session(deck, lexicon)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    before = session.state.summary()
    out = session.handle_message(seat, {"type": "Chat", "payload": {"text": "hi"}})
    assert [env["type"] for s, env in out if s == seat] == ["Error"]
    assert out[0][1]["payload"]["code"] == "protocol_violation"
    assert session.state.summary() == before


def drive_human(session, seat, max_steps=500):
    """Scripted human: always the deterministic lowest-id legal move."""
    steps = 0
    while session.state.phase is not Phase.GAME_OVER and steps < max_steps:
        steps += 1
        state = session.state
        if seat not in session.pending_human_seats():
            break
        if state.phase is Phase.AWAIT_STORYTELLER:
            card = min(state.hands[seat], key=lambda c: c.id)
            session.handle_message(
                seat, client_msg("SubmitPhrase", card_id=card.id, tokens=["moon"])
            )
        elif state.phase is Phase.AWAIT_DECOYS:
            card = min(state.hands[seat], key=lambda c: c.id)
            session.handle_message(seat, client_msg("SubmitCard", card_id=card.id))
        elif state.phase is Phase.AWAIT_VOTES:
            own = state.round.submissions[seat]
            pick = min(s.card_id for s in state.round.table if s.card_id != own)
            session.handle_message(seat, client_msg("SubmitVote", card_id=pick))
    return steps


def test_full_game_one_human_three_agents(deck, lexicon):
    session = make_session(deck, lexicon, target=6)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    drive_human(session, seat)
    assert session.state.phase is Phase.GAME_OVER

    # every agent action carries an explanation, disclosed only at game end
    agent_actions = sum(
        1 for rec in session.explanations if rec.explanation.get("strategy")
    )
    assert agent_actions == len(session.explanations) > 0
    end_types = [env["type"] for env in session.outboxes[seat]]
    assert "GameEnd" in end_types
    first_explanation = end_types.index("Explanation")
    assert "RoundResult" in end_types[:first_explanation]  # none leaked early


def test_phrase_too_long_maps_to_error(deck, lexicon):
    # the first-joined human is seat 0, the opening storyteller
    session = make_session(deck, lexicon, target=30)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    state = session.state
    assert state.phase is Phase.AWAIT_STORYTELLER and state.storyteller == seat
    card = min(state.hands[seat], key=lambda c: c.id)
    before = state.summary()
    session.handle_message(
        seat, client_msg("SubmitPhrase", card_id=card.id, tokens=["a", "b", "c", "d", "e"])
    )
    last = session.outboxes[seat][-1]
    assert last["type"] == "Error" and last["payload"]["code"] == "phrase_too_long"
    assert state.summary() == before


def test_own_card_vote_maps_to_error(deck, lexicon):
    # seat the agents first so the human is a non-storyteller voter
    session = make_session(deck, lexicon, target=30)
    for _ in range(3):
        session.seat_agent()
    seat, _ = session.join_human("alice")
    session.start()
    state = session.state
    assert state.phase is Phase.AWAIT_DECOYS
    card = min(state.hands[seat], key=lambda c: c.id)
    session.handle_message(seat, client_msg("SubmitCard", card_id=card.id))
    assert state.phase is Phase.AWAIT_VOTES
    own = state.round.submissions[seat]
    before = state.summary()
    session.handle_message(seat, client_msg("SubmitVote", card_id=own))
    last = session.outboxes[seat][-1]
    assert last["type"] == "Error" and last["payload"]["code"] == "own_card_vote"
    assert state.summary() == before


def test_sequence_numbers_gapless(deck, lexicon):
    session = make_session(deck, lexicon, target=6)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    drive_human(session, seat)
    for outbox in session.outboxes:
        assert [env["seq"] for env in outbox] == list(range(1, len(outbox) + 1))


def test_inbound_log_replay_identical_round_results(deck, lexicon):
    session = make_session(deck, lexicon, target=6)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    drive_human(session, seat)
    assert session.state.phase is Phase.GAME_OVER

    fresh = replay_inbound_log(session.inbound_log, deck, lexicon, session.config)
    assert fresh.round_results == session.round_results
    assert fresh.state.scores == session.state.scores


def test_fallback_moves(deck, lexicon):
    session = make_session(deck, lexicon, target=30)
    seat, _ = session.join_human("alice")
    for _ in range(3):
        session.seat_agent()
    session.start()
    # the human is the storyteller (seat 0): forfeit the phrase. The agents
    # then decoy and vote on their own, finishing round 1 without the human
    # (storytellers don't vote), and round 2 stalls on the human's decoy.
    assert session.pending_human_seats() == [seat]
    lowest = min(session.state.hands[seat], key=lambda c: c.id).id
    session.apply_fallback(seat)
    assert session.round_results
    assert session.round_results[0]["owners"][lowest] == seat
    assert session.state.phase is Phase.AWAIT_DECOYS
    assert session.pending_human_seats() == [seat]

    # forfeit the decoy, then the vote
    lowest = min(session.state.hands[seat], key=lambda c: c.id).id
    session.apply_fallback(seat)
    assert session.state.round.submissions[seat] == lowest
    assert session.state.phase is Phase.AWAIT_VOTES
    own = session.state.round.submissions[seat]
    eligible = min(
        s.card_id for s in session.state.round.table if s.card_id != own
    )
    session.apply_fallback(seat)
    assert len(session.round_results) == 2
    assert session.round_results[1]["votes"][str(seat)] == eligible
