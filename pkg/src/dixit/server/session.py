"""One hosted game: lobby, seat management, message handling, agent seats.

The session is a synchronous core with no notion of sockets: inbound
messages go through ``handle_message`` (or the lobby methods) and outbound
``(seat, envelope)`` pairs come back. The network layer in ``app.py`` wraps
it; tests drive it directly.

Every state mutation funnels through the engine operations; engine errors
become Error messages and leave the state untouched. Agent seats respond
inline: after each applied action the session lets every agent whose turn
it is move, records its explanation, and keeps going until the game waits
on a human (or ends). Explanations are disclosed to everyone at game end
only, so the agent stays indistinguishable during play.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, field

from ..agents import AgentSpec, DixitAgent
from ..cards import CandidateLexicon, Card, Phrase
from ..engine import (
    GameConfig,
    GameState,
    Phase,
    advance_round,
    decoy_submit,
    new_game,
    storyteller_submit,
    vote_submit,
)
from ..errors import DixitError, ProtocolViolation, SeatCountInvalid, WrongPhase
from .protocol import envelope, parse_client_message
from .views import project_state_for_player

Outbound = list[tuple[int, dict]]


@dataclass
class SessionConfig:
    game: GameConfig
    agent_seat_limit: int | None = None     # None: no limit
    move_timeout: float | None = None       # seconds; None disables
    locale: str | None = None               # lobby metadata passed to agents, uninterpreted


@dataclass
class Seat:
    kind: str                    # "human" | "agent"
    name: str | None = None      # never broadcast; seats are mutually anonymous
    token: str | None = None
    agent: DixitAgent | None = None
    connected: bool = False


@dataclass
class _Recorded:
    seat: int
    action: str
    round: int
    explanation: dict = field(default_factory=dict)


class GameSession:
    def __init__(
        self,
        session_id: str,
        config: SessionConfig,
        deck: list[Card],
        lexicon: CandidateLexicon,
        default_agent: AgentSpec | None = None,
    ):
        self.id = session_id
        self.config = config
        self.deck = deck
        self.lexicon = lexicon
        self.default_agent = default_agent or AgentSpec()
        self.seats: list[Seat | None] = [None] * config.game.n_players
        self.state: GameState | None = None
        self.started = False
        self.inbound_log: list[dict] = [
            {"op": "create", "config": config.game.to_dict()}
        ]
        self.outboxes: list[list[dict]] = [[] for _ in range(config.game.n_players)]
        self.explanations: list[_Recorded] = []
        self.round_results: list[dict] = []

    # -- lobby -----------------------------------------------------------------

    @property
    def n_players(self) -> int:
        return self.config.game.n_players

    def seats_filled(self) -> int:
        return sum(1 for s in self.seats if s is not None)

    def join_human(self, name: str, token: str | None = None) -> tuple[int, Outbound]:
        """Seat a human, or reattach one presenting a known token."""
        if token is not None:
            for idx, seat in enumerate(self.seats):
                if seat is not None and seat.kind == "human" and seat.token == token:
                    seat.connected = True
                    return idx, self._resync(idx)
            raise ProtocolViolation("unknown session token")
        if self.started:
            raise ProtocolViolation("game already started")
        idx = self._free_seat()
        self.seats[idx] = Seat(
            kind="human", name=name, token=secrets.token_hex(16), connected=True
        )
        self.inbound_log.append({"op": "join", "name": name, "seat": idx})
        return idx, self._broadcast_lobby()

    def seat_agent(self, spec: AgentSpec | None = None) -> tuple[int, Outbound]:
        if self.started:
            raise ProtocolViolation("game already started")
        spec = spec or self.default_agent
        limit = self.config.agent_seat_limit
        agents = sum(1 for s in self.seats if s is not None and s.kind == "agent")
        if limit is not None and agents >= limit:
            raise ProtocolViolation(f"agent seat limit ({limit}) reached")
        idx = self._free_seat()
        self.seats[idx] = Seat(kind="agent", agent=DixitAgent(spec, self.lexicon, seed=spec.seed))
        self.inbound_log.append({"op": "agent", "seat": idx, "spec": spec.to_dict()})
        return idx, self._broadcast_lobby()

    def _free_seat(self) -> int:
        for idx, seat in enumerate(self.seats):
            if seat is None:
                return idx
        raise SeatCountInvalid(f"all {self.n_players} seats are taken")

    def start(self) -> Outbound:
        if self.started:
            raise ProtocolViolation("game already started")
        filled = self.seats_filled()
        if filled != self.n_players:
            raise SeatCountInvalid(
                f"{filled} of {self.n_players} seats filled; the game needs every seat"
            )
        self.inbound_log.append({"op": "start"})
        self.started = True
        self.state = new_game(self.deck, self.config.game)

        out: Outbound = []
        for seat in range(self.n_players):
            out.append(
                self._send(
                    seat,
                    "GameStart",
                    {
                        "your_seat": seat,
                        "n_players": self.n_players,
                        "phrase_limit": self.config.game.phrase_limit,
                        "target_score": self.config.game.target_score,
                    },
                )
            )
        out += self._broadcast_state()
        out += self._run_agents()
        return out

    # -- game messages -----------------------------------------------------------

    def handle_message(self, seat: int, raw: dict) -> Outbound:
        """Apply one client frame; returns every outbound (seat, envelope)."""
        try:
            msg_type, payload = parse_client_message(raw)
        except ProtocolViolation as exc:
            return [self._error(seat, exc)]
        self.inbound_log.append({"op": "message", "seat": seat, "message": raw})

        if msg_type == "JoinLobby":
            # joining is connection-level; a seated player re-sending it is a no-op resync
            return self._resync(seat)
        if not self.started or self.state is None:
            return [self._error(seat, ProtocolViolation("game not started"))]

        try:
            self._apply_action(seat, msg_type, payload)
        except DixitError as exc:
            return [self._error(seat, exc)]
        return self._after_action()

    def _apply_action(self, seat: int, msg_type: str, payload: dict) -> None:
        state = self.state
        assert state is not None
        if msg_type == "SubmitPhrase":
            if seat != state.storyteller:
                raise WrongPhase("you are not the storyteller")
            tokens = payload.get("tokens")
            if not isinstance(tokens, list) or not tokens:
                raise ProtocolViolation("SubmitPhrase needs a non-empty token list")
            try:
                phrase = Phrase(tuple(str(t) for t in tokens))
            except ValueError as exc:
                raise ProtocolViolation(str(exc)) from exc
            storyteller_submit(state, str(payload.get("card_id")), phrase)
        elif msg_type == "SubmitCard":
            decoy_submit(state, seat, str(payload.get("card_id")))
        elif msg_type == "SubmitVote":
            vote_submit(state, seat, str(payload.get("card_id")))
        else:  # pragma: no cover - parse_client_message already filters
            raise ProtocolViolation(f"unhandled message type {msg_type}")

    def apply_fallback(self, seat: int) -> Outbound:
        """Deterministic forfeit move for a timed-out human seat."""
        state = self.state
        if state is None or seat not in self.pending_human_seats():
            return []
        self.inbound_log.append({"op": "fallback", "seat": seat})
        if state.phase is Phase.AWAIT_STORYTELLER:
            card = min(state.hands[seat], key=lambda c: c.id)
            phrase = min(
                (p for p in self.lexicon.phrases if len(p) <= state.config.phrase_limit),
                key=lambda p: p.sort_key(),
            )
            storyteller_submit(state, card.id, phrase)
        elif state.phase is Phase.AWAIT_DECOYS:
            card = min(state.hands[seat], key=lambda c: c.id)
            decoy_submit(state, seat, card.id)
        elif state.phase is Phase.AWAIT_VOTES:
            own = state.round.submissions[seat]
            card_id = min(s.card_id for s in state.round.table if s.card_id != own)
            vote_submit(state, seat, card_id)
        return self._after_action()

    def pending_human_seats(self) -> list[int]:
        """Human seats whose action the game is currently waiting on."""
        state = self.state
        if state is None or state.phase is Phase.GAME_OVER:
            return []
        pending = []
        for seat in self._pending_seats(state):
            holder = self.seats[seat]
            if holder is not None and holder.kind == "human":
                pending.append(seat)
        return pending

    @staticmethod
    def _pending_seats(state: GameState) -> list[int]:
        if state.phase is Phase.AWAIT_STORYTELLER:
            return [state.storyteller]
        if state.phase is Phase.AWAIT_DECOYS:
            return [
                s
                for s in range(state.n_players)
                if s != state.storyteller and s not in state.round.submissions
            ]
        if state.phase is Phase.AWAIT_VOTES:
            return [
                s
                for s in range(state.n_players)
                if s != state.storyteller and s not in state.round.votes
            ]
        return []

    # -- agent turns and round flow ------------------------------------------------

    def _after_action(self) -> Outbound:
        out = self._settle_round()
        out += self._run_agents()
        return out

    def _run_agents(self) -> Outbound:
        """Let agent seats act until a human is needed or the game ends."""
        state = self.state
        assert state is not None
        out: Outbound = []
        progressed = True
        while progressed and state.phase is not Phase.GAME_OVER:
            progressed = False
            for seat in self._pending_seats(state):
                holder = self.seats[seat]
                if holder is None or holder.kind != "agent":
                    continue
                assert holder.agent is not None
                decision = self._agent_move(holder.agent, seat)
                self.explanations.append(
                    _Recorded(
                        seat=seat,
                        action=decision.kind,
                        round=state.round_index,
                        explanation=decision.explanation.to_dict(),
                    )
                )
                progressed = True
                break  # re-derive pending seats: the phase may have flipped
            if progressed:
                out += self._settle_round()
        out += self._broadcast_state()
        if state.phase is Phase.GAME_OVER:
            out += self._game_end_messages()
        return out

    def _agent_move(self, agent: DixitAgent, seat: int):
        state = self.state
        assert state is not None
        if state.phase is Phase.AWAIT_STORYTELLER:
            decision = agent.storyteller_move(state, seat)
            storyteller_submit(state, decision.card_id, Phrase(tuple(decision.tokens)))
        elif state.phase is Phase.AWAIT_DECOYS:
            decision = agent.decoy_move(state, seat)
            decoy_submit(state, seat, decision.card_id)
        elif state.phase is Phase.AWAIT_VOTES:
            decision = agent.vote_move(state, seat)
            vote_submit(state, seat, decision.card_id)
        else:  # pragma: no cover
            raise WrongPhase(f"no agent move in phase {state.phase}")
        return decision

    def _settle_round(self) -> Outbound:
        """On a scored round: reveal the result to everyone, then advance."""
        state = self.state
        assert state is not None
        if state.phase is not Phase.ROUND_SCORED:
            return []
        assert state.round.score is not None
        result = {
            "round": state.round_index,
            "storyteller": state.storyteller,
            "phrase": list(state.round.phrase.tokens) if state.round.phrase else None,
            "owners": {c: o for o, c in sorted(state.round.submissions.items())},
            "votes": {str(v): c for v, c in sorted(state.round.votes.items())},
            "points": list(state.round.score.points),
            "n_v": state.round.score.n_v,
            "scores_after": [
                s + p for s, p in zip(state.scores, state.round.score.points)
            ],
        }
        self.round_results.append(result)
        out = [self._send(seat, "RoundResult", result) for seat in range(self.n_players)]
        advance_round(state)
        return out

    def _game_end_messages(self) -> Outbound:
        state = self.state
        assert state is not None
        out: Outbound = []
        for rec in self.explanations:
            payload = {
                "seat": rec.seat,
                "action": rec.action,
                "round": rec.round,
                "explanation": rec.explanation,
            }
            for seat in range(self.n_players):
                out.append(self._send(seat, "Explanation", payload))
        summary = {
            "scores": list(state.scores),
            "winners": list(state.winners or []),
            "rounds": state.round_index + 1,
        }
        for seat in range(self.n_players):
            out.append(self._send(seat, "GameEnd", summary))
        return out

    # -- outbound plumbing ----------------------------------------------------------

    def _send(self, seat: int, msg_type: str, payload: dict) -> tuple[int, dict]:
        env = envelope(msg_type, len(self.outboxes[seat]) + 1, payload)
        self.outboxes[seat].append(env)
        return seat, env

    def _error(self, seat: int, exc: DixitError) -> tuple[int, dict]:
        return self._send(seat, "Error", {"code": exc.code, "message": str(exc)})

    def _lobby_payload(self, seat: int) -> dict:
        return {
            "you": seat,
            "seats_filled": self.seats_filled(),
            "n_players": self.n_players,
            "started": self.started,
        }

    def _broadcast_lobby(self) -> Outbound:
        return [
            self._send(seat, "LobbyState", self._lobby_payload(seat))
            for seat in range(self.n_players)
            if self.seats[seat] is not None and self.seats[seat].kind == "human"
        ]

    def _broadcast_state(self) -> Outbound:
        if self.state is None:
            return []
        return [
            self._send(seat, "StateUpdate", project_state_for_player(self.state, seat))
            for seat in range(self.n_players)
        ]

    def _resync(self, seat: int) -> Outbound:
        if not self.started or self.state is None:
            return [self._send(seat, "LobbyState", self._lobby_payload(seat))]
        return [
            self._send(seat, "StateUpdate", project_state_for_player(self.state, seat))
        ]

    def token_for(self, seat: int) -> str | None:
        holder = self.seats[seat]
        return holder.token if holder is not None else None

    def buffered(self, seat: int, after_seq: int = 0) -> list[dict]:
        """Outbound envelopes for a seat with seq greater than after_seq."""
        return [env for env in self.outboxes[seat] if env["seq"] > after_seq]


def replay_inbound_log(
    log: list[dict],
    deck: list[Card],
    lexicon: CandidateLexicon,
    session_config: SessionConfig,
) -> "GameSession":
    """Re-drive a fresh session from a recorded inbound log.

    The log's create record carries the game config (seed included), so the
    replayed session deals the same hands and produces the identical
    RoundResult stream.
    """
    if not log or log[0].get("op") != "create":
        raise ProtocolViolation("inbound log does not begin with a create record")
    config = SessionConfig(
        game=GameConfig.from_dict(log[0]["config"]),
        agent_seat_limit=session_config.agent_seat_limit,
        move_timeout=session_config.move_timeout,
    )
    session = GameSession("replay", config, deck, lexicon)
    for rec in log[1:]:
        op = rec["op"]
        if op == "join":
            session.join_human(rec["name"])
        elif op == "agent":
            session.seat_agent(AgentSpec.from_dict(rec["spec"]))
        elif op == "start":
            session.start()
        elif op == "message":
            session.handle_message(rec["seat"], rec["message"])
        elif op == "fallback":
            session.apply_fallback(rec["seat"])
        else:
            raise ProtocolViolation(f"unknown inbound log op {op!r}")
    return session
